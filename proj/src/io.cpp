#include "adaflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace adaflow {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

double snap_to_grid(double t, double step) {
    return static_cast<double>(std::llround(t / step)) * step;
}

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& origin) {
    KeyValues kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        kv.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return kv;
}

KeyValues load_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    return parse_key_values(in, path.string());
}

void write_key_values(std::ostream& out, const KeyValues& kv) {
    for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

const std::string* find_key(const KeyValues& kv, const std::string& key) {
    for (const auto& [k, v] : kv)
        if (k == key) return &v;
    return nullptr;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(context + ": not a number: '" + s + "'");
    }
}

std::string format_vector(const Vector& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

Vector parse_vector(const std::string& s, const std::string& context) {
    Vector v;
    for (const std::string& part : split(s, ','))
        v.push_back(parse_double(part, context));
    return v;
}

const char* model_kind_name(ModelKind m) {
    return m == ModelKind::Regression ? "regression" : "mrac";
}

LawKind parse_law(const std::string& s) {
    if (s == "first_order" || s == "fo") return LawKind::FirstOrder;
    if (s == "higher_order" || s == "ho") return LawKind::HigherOrder;
    if (s == "wibisono" || s == "wb") return LawKind::WibisonoBaseline;
    throw ConfigError("unknown law: '" + s + "'");
}

std::string format_laws(const std::vector<LawKind>& laws) {
    std::string out;
    for (std::size_t i = 0; i < laws.size(); ++i) {
        if (i) out += ",";
        out += law_name(laws[i]);
    }
    return out;
}

std::vector<LawKind> parse_laws(const std::string& s) {
    std::vector<LawKind> out;
    for (const std::string& part : split(s, ',')) out.push_back(parse_law(part));
    return out;
}

KeyValues config_to_key_values(const ScenarioConfig& cfg) {
    KeyValues kv;
    kv.emplace_back("scenario.name", cfg.name);
    kv.emplace_back("scenario.description", cfg.description);
    kv.emplace_back("scenario.variant", cfg.variant);
    kv.emplace_back("scenario.model", model_kind_name(cfg.model));
    kv.emplace_back("scenario.laws", format_laws(cfg.laws));

    switch (cfg.feature.kind) {
        case FeatureKind::PiecewiseConstant: {
            kv.emplace_back("feature.kind", "steps");
            kv.emplace_back("feature.initial", format_vector(cfg.feature.initial_value));
            std::string times, values;
            for (std::size_t k = 0; k < cfg.feature.step_times.size(); ++k) {
                if (k) {
                    times += ",";
                    values += ";";
                }
                times += format_double(cfg.feature.step_times[k]);
                values += format_vector(cfg.feature.step_values[k]);
            }
            kv.emplace_back("feature.step_times", times);
            kv.emplace_back("feature.step_values", values);
            break;
        }
        case FeatureKind::SinusoidBank:
            kv.emplace_back("feature.kind", "sinusoids");
            kv.emplace_back("feature.offsets", format_vector(cfg.feature.offsets));
            kv.emplace_back("feature.amplitudes", format_vector(cfg.feature.amplitudes));
            kv.emplace_back("feature.omegas", format_vector(cfg.feature.omegas));
            kv.emplace_back("feature.phases", format_vector(cfg.feature.phases));
            break;
        case FeatureKind::StateFeedback:
            kv.emplace_back("feature.kind", "state");
            kv.emplace_back("feature.dim", std::to_string(cfg.feature.dim));
            break;
    }

    if (cfg.model == ModelKind::Regression) {
        kv.emplace_back("mc.base", format_vector(cfg.theta_star_base));
        kv.emplace_back("mc.jitter_lo", format_double(cfg.jitter_lo));
        kv.emplace_back("mc.jitter_hi", format_double(cfg.jitter_hi));
    } else {
        kv.emplace_back("plant.name", "f16");
        kv.emplace_back("mc.gain_lo", format_double(cfg.gain_lo));
        kv.emplace_back("mc.gain_hi", format_double(cfg.gain_hi));
        kv.emplace_back("command.kind",
                        cfg.command.kind == CommandSignal::Kind::Zero ? "zero" : "constant_after");
        kv.emplace_back("command.onset", format_double(cfg.command.onset));
        kv.emplace_back("command.value", format_double(cfg.command.value));
    }
    kv.emplace_back("mc.draws", std::to_string(cfg.mc.draws));
    kv.emplace_back("mc.seed", std::to_string(cfg.mc.seed));

    kv.emplace_back("tuner.gamma", format_double(cfg.tuner.gamma));
    kv.emplace_back("tuner.beta", format_double(cfg.tuner.beta));
    kv.emplace_back("tuner.mu", cfg.tuner.mu ? format_double(*cfg.tuner.mu) : "auto");
    kv.emplace_back("tuner.wibisono_p", format_double(cfg.tuner.wibisono_p));
    kv.emplace_back("tuner.wibisono_c",
                    cfg.tuner.wibisono_c ? format_double(*cfg.tuner.wibisono_c) : "auto");
    kv.emplace_back("tuner.wibisono_t0", format_double(cfg.tuner.wibisono_t0));

    kv.emplace_back("sim.step", format_double(cfg.grid.step));
    kv.emplace_back("sim.horizon", format_double(cfg.grid.horizon));
    kv.emplace_back("sim.log_every", std::to_string(cfg.grid.resolved_log_every()));
    kv.emplace_back("sim.divergence_threshold", format_double(cfg.grid.divergence_threshold));
    return kv;
}

namespace {

struct KeyReader {
    const KeyValues& kv;
    const std::string& origin;

    const std::string* get(const std::string& key) const { return find_key(kv, key); }
    std::string require(const std::string& key) const {
        const std::string* v = get(key);
        if (!v) throw ConfigError(origin + ": missing key " + key);
        return *v;
    }
    double number(const std::string& key, double fallback) const {
        const std::string* v = get(key);
        return v ? parse_double(*v, origin + ": " + key) : fallback;
    }
    std::size_t count(const std::string& key, std::size_t fallback) const {
        const std::string* v = get(key);
        if (!v) return fallback;
        return static_cast<std::size_t>(parse_double(*v, origin + ": " + key));
    }
};

}  // namespace

ScenarioConfig config_from_key_values(const KeyValues& kv, const std::string& origin) {
    const KeyReader r{kv, origin};
    ScenarioConfig cfg;
    cfg.name = r.require("scenario.name");
    if (const std::string* v = r.get("scenario.description")) cfg.description = *v;
    if (const std::string* v = r.get("scenario.variant")) cfg.variant = *v;

    const std::string model = r.require("scenario.model");
    if (model == "regression") cfg.model = ModelKind::Regression;
    else if (model == "mrac") cfg.model = ModelKind::Mrac;
    else throw ConfigError(origin + ": unknown model kind '" + model + "'");

    cfg.laws = parse_laws(r.require("scenario.laws"));

    cfg.grid.step = r.number("sim.step", cfg.grid.step);
    cfg.grid.horizon = r.number("sim.horizon", cfg.grid.horizon);
    cfg.grid.log_every = r.count("sim.log_every", 0);
    cfg.grid.divergence_threshold =
        r.number("sim.divergence_threshold", cfg.grid.divergence_threshold);

    const std::string fkind = r.require("feature.kind");
    if (fkind == "steps") {
        Vector initial = parse_vector(r.require("feature.initial"), origin);
        // empty lists encode a constant-from-t0 profile
        std::vector<double> times;
        if (const std::string raw = r.require("feature.step_times"); !raw.empty())
            for (const std::string& part : split(raw, ','))
                times.push_back(snap_to_grid(parse_double(part, origin), cfg.grid.step));
        std::vector<Vector> values;
        if (const std::string raw = r.require("feature.step_values"); !raw.empty())
            for (const std::string& part : split(raw, ';'))
                values.push_back(parse_vector(part, origin));
        cfg.feature = FeatureSignal::steps(std::move(initial), std::move(times),
                                           std::move(values));
    } else if (fkind == "sinusoids") {
        cfg.feature = FeatureSignal::sinusoids(parse_vector(r.require("feature.offsets"), origin),
                                               parse_vector(r.require("feature.amplitudes"), origin),
                                               parse_vector(r.require("feature.omegas"), origin),
                                               parse_vector(r.require("feature.phases"), origin));
    } else if (fkind == "state") {
        cfg.feature = FeatureSignal::state_feedback(r.count("feature.dim", 3));
    } else {
        throw ConfigError(origin + ": unknown feature kind '" + fkind + "'");
    }

    if (cfg.model == ModelKind::Regression) {
        cfg.theta_star_base = parse_vector(r.require("mc.base"), origin);
        cfg.jitter_lo = r.number("mc.jitter_lo", cfg.jitter_lo);
        cfg.jitter_hi = r.number("mc.jitter_hi", cfg.jitter_hi);
    } else {
        cfg.theta_star_base = f16_nominal_gain();
        cfg.gain_lo = r.number("mc.gain_lo", cfg.gain_lo);
        cfg.gain_hi = r.number("mc.gain_hi", cfg.gain_hi);
        const std::string ckind = r.get("command.kind") ? *r.get("command.kind") : "constant_after";
        if (ckind == "zero") {
            cfg.command = CommandSignal::zero();
        } else {
            cfg.command = CommandSignal::constant_after(
                snap_to_grid(r.number("command.onset", 5.0), cfg.grid.step),
                r.number("command.value", 1.0));
        }
    }
    cfg.mc.draws = r.count("mc.draws", cfg.mc.draws);
    cfg.mc.seed = static_cast<std::uint64_t>(r.number("mc.seed", 1.0));

    cfg.tuner.gamma = r.number("tuner.gamma", cfg.tuner.gamma);
    cfg.tuner.beta = r.number("tuner.beta", cfg.tuner.beta);
    if (const std::string* v = r.get("tuner.mu"); v && *v != "auto")
        cfg.tuner.mu = parse_double(*v, origin);
    cfg.tuner.wibisono_p = r.number("tuner.wibisono_p", cfg.tuner.wibisono_p);
    if (const std::string* v = r.get("tuner.wibisono_c"); v && *v != "auto")
        cfg.tuner.wibisono_c = parse_double(*v, origin);
    cfg.tuner.wibisono_t0 = r.number("tuner.wibisono_t0", cfg.tuner.wibisono_t0);

    cfg.validate();
    return cfg;
}

void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    const std::string ctx = "override " + key;
    if (key == "mc.draws") cfg.mc.draws = static_cast<std::size_t>(parse_double(value, ctx));
    else if (key == "mc.seed") cfg.mc.seed = static_cast<std::uint64_t>(parse_double(value, ctx));
    else if (key == "tuner.gamma") cfg.tuner.gamma = parse_double(value, ctx);
    else if (key == "tuner.beta") cfg.tuner.beta = parse_double(value, ctx);
    else if (key == "tuner.mu")
        cfg.tuner.mu = value == "auto" ? std::nullopt : std::optional(parse_double(value, ctx));
    else if (key == "tuner.wibisono_p") cfg.tuner.wibisono_p = parse_double(value, ctx);
    else if (key == "tuner.wibisono_c")
        cfg.tuner.wibisono_c =
            value == "auto" ? std::nullopt : std::optional(parse_double(value, ctx));
    else if (key == "tuner.wibisono_t0") cfg.tuner.wibisono_t0 = parse_double(value, ctx);
    else if (key == "sim.step") cfg.grid.step = parse_double(value, ctx);
    else if (key == "sim.horizon") cfg.grid.horizon = parse_double(value, ctx);
    else if (key == "sim.log_every")
        cfg.grid.log_every = static_cast<std::size_t>(parse_double(value, ctx));
    else if (key == "sim.divergence_threshold")
        cfg.grid.divergence_threshold = parse_double(value, ctx);
    else if (key == "scenario.laws") cfg.laws = parse_laws(value);
    else throw BadOverrideKey("unknown override key: " + key);
}

namespace {

void add_group(std::vector<std::string>& header, const std::string& name, std::size_t n) {
    for (std::size_t i = 1; i <= n; ++i) header.push_back(name + "_" + std::to_string(i));
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw UnwritableOutput("cannot write " + path.string());

    const std::size_t n = traj.samples.empty() ? 0 : traj.samples.front().theta.size();
    const std::size_t nx = traj.samples.empty() ? 0 : traj.samples.front().x.size();

    std::vector<std::string> header{"t"};
    if (!traj.mrac) header.push_back("e_y");
    add_group(header, "theta", n);
    if (traj.law == LawKind::HigherOrder) add_group(header, "vartheta", n);
    if (traj.law == LawKind::WibisonoBaseline) add_group(header, "thetadot", n);
    add_group(header, "phi", n);
    if (traj.has_lyapunov) {
        header.push_back("V");
        header.push_back("V_rate_bound");
    }
    header.push_back("regret");
    if (traj.mrac) {
        add_group(header, "e", nx);
        add_group(header, "x", nx);
        add_group(header, "xhat", nx);
        header.push_back("u");
        header.push_back("z_cmd");
    }
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";

    auto emit = [&out](double v, bool first = false) {
        if (!first) out << ",";
        out << format_double(v);
    };
    for (const TrajectorySample& s : traj.samples) {
        emit(s.t, true);
        if (!traj.mrac) emit(s.e_y);
        for (double v : s.theta) emit(v);
        if (traj.law == LawKind::HigherOrder)
            for (double v : s.vartheta) emit(v);
        if (traj.law == LawKind::WibisonoBaseline)
            for (double v : s.theta_dot) emit(v);
        for (double v : s.phi) emit(v);
        if (traj.has_lyapunov) {
            emit(s.lyapunov);
            emit(s.rate_bound);
        }
        emit(s.regret);
        if (traj.mrac) {
            for (double v : s.e) emit(v);
            for (double v : s.x) emit(v);
            for (double v : s.xhat) emit(v);
            emit(s.u);
            emit(s.z_cmd);
        }
        out << "\n";
    }
}

const std::vector<double>* CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return &columns[i];
    return nullptr;
}

std::vector<const std::vector<double>*> CsvTable::column_group(const std::string& prefix) const {
    std::vector<const std::vector<double>*> out;
    for (std::size_t i = 1;; ++i) {
        const std::vector<double>* c = column(prefix + "_" + std::to_string(i));
        if (!c) break;
        out.push_back(c);
    }
    return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CorruptCsv("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw CorruptCsv(path.string() + ": empty file");
    CsvTable table;
    for (const std::string& h : split(line, ',')) table.header.push_back(h);
    if (table.header.empty() || table.header.front() != "t")
        throw CorruptCsv(path.string() + ": missing header row");
    table.columns.resize(table.header.size());

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::vector<std::string> parts = split(line, ',');
        if (parts.size() != table.header.size())
            throw CorruptCsv(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
        for (std::size_t i = 0; i < parts.size(); ++i) {
            try {
                table.columns[i].push_back(std::stod(parts[i]));
            } catch (const std::exception&) {
                throw CorruptCsv(path.string() + ":" + std::to_string(lineno) +
                                 ": bad number '" + parts[i] + "'");
            }
        }
    }
    return table;
}

void write_band_csv(const std::filesystem::path& path, const BandSeries& band) {
    std::ofstream out(path);
    if (!out) throw UnwritableOutput("cannot write " + path.string());
    out << "t,lo,median,hi\n";
    for (std::size_t k = 0; k < band.t.size(); ++k)
        out << format_double(band.t[k]) << "," << format_double(band.lo[k]) << ","
            << format_double(band.median[k]) << "," << format_double(band.hi[k]) << "\n";
}

void write_manifest(const std::filesystem::path& path, const ScenarioResult& result) {
    KeyValues kv;
    kv.emplace_back("tool.name", "adaflow");
    kv.emplace_back("tool.version", "0.1.0");
    const KeyValues cfg_kv = config_to_key_values(result.config);
    kv.insert(kv.end(), cfg_kv.begin(), cfg_kv.end());

    kv.emplace_back("result.rejected_draws", std::to_string(result.rejected_draws));
    char idx[16];
    for (const DrawInfo& d : result.draws) {
        std::snprintf(idx, sizeof idx, "%03zu", d.index);
        const std::string base = "result.draw_" + std::string(idx);
        kv.emplace_back(base + ".theta_star", format_vector(d.theta_star));
        if (result.config.model == ModelKind::Mrac)
            kv.emplace_back(base + ".gain_scale", format_double(d.gain_scale));
    }
    for (const LawResult& lr : result.laws) {
        const std::string lbase = std::string("result.") + law_name(lr.law);
        kv.emplace_back(lbase + ".all_completed", lr.all_completed ? "true" : "false");
        kv.emplace_back(lbase + ".diverged_count", std::to_string(lr.diverged_count));
        for (std::size_t i = 0; i < lr.trajectories.size(); ++i) {
            const Trajectory& t = lr.trajectories[i];
            std::snprintf(idx, sizeof idx, "%03zu", i);
            const std::string base = lbase + ".draw_" + std::string(idx);
            kv.emplace_back(base + ".status",
                            t.status == RunStatus::Completed ? "completed" : "diverged");
            if (t.diverged_at) kv.emplace_back(base + ".diverged_at", format_double(*t.diverged_at));
            if (t.has_lyapunov) kv.emplace_back(base + ".v0", format_double(t.v0));
            kv.emplace_back(base + ".final_regret",
                            format_double(t.samples.empty() ? 0.0 : t.samples.back().regret));
            const std::optional<double> settle = settle_time(t);
            kv.emplace_back(base + ".time_to_tol",
                            settle ? format_double(*settle) : std::string("never"));
            if (result.config.model == ModelKind::Mrac && t.status == RunStatus::Completed) {
                const PlantModel plant =
                    build_f16_plant(result.draws[i].gain_scale, result.config.command);
                // pitch-rate error derivative crossings after the command onset
                kv.emplace_back(base + ".oscillation_count",
                                std::to_string(oscillation_count(
                                    t, plant, 1, result.config.command.onset)));
            }
        }
    }

    std::ofstream out(path);
    if (!out) throw UnwritableOutput("cannot write " + path.string());
    write_key_values(out, kv);
}

}  // namespace adaflow
