#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "adaflow/diagnostics.hpp"
#include "adaflow/scenarios.hpp"

namespace adaflow {

/// Order-preserving key = value list, the on-disk configuration and manifest
/// format. '#' starts a comment; blank lines are ignored.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(std::istream& in, const std::string& origin);
KeyValues load_key_values(const std::filesystem::path& path);
void write_key_values(std::ostream& out, const KeyValues& kv);

const std::string* find_key(const KeyValues& kv, const std::string& key);

/// 17 significant digits; round-trips doubles exactly.
std::string format_double(double x);
double parse_double(const std::string& s, const std::string& context);

std::string format_vector(const Vector& v);
Vector parse_vector(const std::string& s, const std::string& context);

const char* model_kind_name(ModelKind m);
LawKind parse_law(const std::string& s);
std::string format_laws(const std::vector<LawKind>& laws);
std::vector<LawKind> parse_laws(const std::string& s);

/// Materialize a fully-resolved scenario into config keys. mu and the
/// baseline constant stay "auto" when defaulted (the MRAC mu depends on the
/// per-draw plant, so a number here would break reproduction).
KeyValues config_to_key_values(const ScenarioConfig& cfg);

/// Build a scenario from config keys. Keys under tool. / result. are
/// ignored so a manifest re-runs as-is. Unknown scenario.* keys throw.
/// Feature step times and the command onset are snapped to the nearest
/// integration-step multiple so discontinuities land on grid nodes.
ScenarioConfig config_from_key_values(const KeyValues& kv, const std::string& origin);

/// Set one dotted config key on an already-built scenario (CLI overrides).
/// Throws BadOverrideKey for unknown keys.
void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Per-draw trajectory CSV. Column schema depends on model and law:
///   regression: t, e_y, theta_*, [vartheta_* | thetadot_*], phi_*,
///               [V, V_rate_bound,] regret
///   mrac:       t, theta_*, [vartheta_*,] phi_*, V, V_rate_bound, regret,
///               e_*, x_*, xhat_*, u, z_cmd
/// The Lyapunov columns exist for the first-order and higher-order laws
/// only. Values are written with 17 significant digits; rows containing
/// non-finite values are never produced (diverged runs truncate instead).
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  // column-major

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    const std::vector<double>* column(const std::string& name) const;
    /// name_1..name_k group; empty result when absent
    std::vector<const std::vector<double>*> column_group(const std::string& prefix) const;
};

/// Strict reader for the files this tool writes. Throws CorruptCsv.
CsvTable read_csv(const std::filesystem::path& path);

void write_band_csv(const std::filesystem::path& path, const BandSeries& band);

/// manifest.txt = resolved config + summary keys under result.*
void write_manifest(const std::filesystem::path& path, const ScenarioResult& result);

}  // namespace adaflow
