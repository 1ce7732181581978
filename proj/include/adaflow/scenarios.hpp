#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adaflow/diagnostics.hpp"
#include "adaflow/models.hpp"
#include "adaflow/signals.hpp"
#include "adaflow/tuners.hpp"

namespace adaflow {

enum class ModelKind { Regression, Mrac };

struct SimGrid {
    double step = 1e-3;
    double horizon = 0.0;
    std::size_t log_every = 0;  // 0: auto, at most max_logged_intervals intervals
    double divergence_threshold = 1e6;

    static constexpr std::size_t max_logged_intervals = 5000;
    std::size_t resolved_log_every() const;
};

/// One law, one draw: integrate the coupled tuner(+plant) system and attach
/// Lyapunov/regret diagnostics per logged sample.
Trajectory simulate_regression(const RegressionModel& model, LawKind law, TunerConfig tuner,
                               const SimGrid& grid);
Trajectory simulate_mrac(const PlantModel& model, LawKind law, TunerConfig tuner,
                         const SimGrid& grid);

struct MonteCarloSpec {
    std::size_t draws = 20;
    std::uint64_t seed = 1;
};

/// Declarative experiment. For regression scenarios one or more feature
/// profiles (variants) run under identical Monte-Carlo draws; the MRAC
/// scenario instead scales the plant gain per draw.
struct ScenarioConfig {
    std::string name;
    std::string description;
    std::string variant = "default";
    ModelKind model = ModelKind::Regression;
    std::vector<LawKind> laws;
    TunerConfig tuner;
    SimGrid grid;
    MonteCarloSpec mc;

    // Regression: theta_star = base + Z, Z ~ Unif([jitter_lo, jitter_hi]^N)
    // per component; draw 0 is the nominal Z = 0.
    FeatureSignal feature;
    Vector theta_star_base;
    double jitter_lo = -10.0, jitter_hi = 10.0;

    // MRAC: theta_star = nominal gain * W, W ~ Unif([gain_lo, gain_hi]);
    // draw 0 is the nominal W = 1. Non-Hurwitz draws are resampled.
    CommandSignal command = CommandSignal::constant_after(5.0, 1.0);
    double gain_lo = -0.5, gain_hi = 2.0;

    void validate() const;
};

/// The named experiment family: reg-two-step, reg-pe, reg-freq-sweep (five
/// feature-profile variants), f16-mrac. A sweep entry expands into one
/// ScenarioConfig per variant.
struct BuiltinScenario {
    std::string name;
    std::string description;
    std::vector<ScenarioConfig> variants;
};

std::vector<BuiltinScenario> builtin_scenarios();
const BuiltinScenario& find_builtin(const std::string& name);

struct BandSeries {
    std::vector<double> t;
    std::vector<double> lo, median, hi;  // pointwise 2.5% / 50% / 97.5%
    std::size_t included_draws = 0;      // diverged draws are excluded
};

struct DrawInfo {
    std::size_t index = 0;
    Vector theta_star;
    double gain_scale = 1.0;  // MRAC only
};

struct LawResult {
    LawKind law = LawKind::FirstOrder;
    std::vector<Trajectory> trajectories;  // one per draw
    BandSeries band;                       // of |e_y| or ||e||
    bool all_completed = true;
    std::size_t diverged_count = 0;
};

struct ScenarioResult {
    ScenarioConfig config;  // as run (defaults resolved)
    std::vector<DrawInfo> draws;
    std::vector<LawResult> laws;
    std::size_t rejected_draws = 0;  // MRAC non-Hurwitz resamples
};

/// Run every law over every draw. Draws are sampled up front (deterministic
/// in the seed) and integrate independently, in parallel when worthwhile.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Pointwise empirical quantile with linear interpolation between order
/// statistics (position q*(n-1)).
double quantile_interpolated(std::vector<double> values, double q);

BandSeries quantile_band(const std::vector<std::vector<double>>& per_draw_series,
                         const std::vector<double>& grid);

/// Error magnitude column of a trajectory: |e_y| or ||e||.
std::vector<double> error_magnitude_series(const Trajectory& traj);
std::vector<double> time_series(const Trajectory& traj);

/// Earliest logged time after which the error magnitude stays below tol;
/// nullopt if it never settles.
std::optional<double> settle_time(const Trajectory& traj, double tol = 1e-2);

/// Zero crossings of the derivative of error component `comp` after `onset`
/// (the oscillation metric; derivative computed from the error model, not
/// finite differences). MRAC trajectories only.
std::size_t oscillation_count(const Trajectory& traj, const PlantModel& model, std::size_t comp,
                              double onset);

}  // namespace adaflow
