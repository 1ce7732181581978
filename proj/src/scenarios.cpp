#include "adaflow/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>

#include "adaflow/rng.hpp"

namespace adaflow {

std::size_t SimGrid::resolved_log_every() const {
    if (log_every > 0) return log_every;
    const auto n_steps = static_cast<std::size_t>(std::llround(horizon / step));
    return std::max<std::size_t>(1, (n_steps + max_logged_intervals - 1) / max_logged_intervals);
}

void ScenarioConfig::validate() const {
    if (laws.empty()) throw std::invalid_argument("scenario: at least one law required");
    if (mc.draws < 1) throw std::invalid_argument("scenario: draws must be >= 1");
    tuner.validate();
    if (model == ModelKind::Mrac) {
        for (LawKind law : laws)
            if (law == LawKind::WibisonoBaseline)
                throw std::invalid_argument(
                    "scenario: the baseline law is defined for regression only");
    } else {
        if (feature.dim != theta_star_base.size())
            throw DimensionMismatch("scenario: feature dim != theta_star dim");
    }
}

namespace {

IntegrationConfig make_integration_config(const SimGrid& grid) {
    IntegrationConfig cfg;
    cfg.step = grid.step;
    cfg.horizon = grid.horizon;
    cfg.log_every = grid.resolved_log_every();
    cfg.divergence_threshold = grid.divergence_threshold;
    return cfg;
}

struct RegretAccumulator {
    bool first = true;
    double prev_t = 0.0, prev_sq = 0.0, total = 0.0;

    double push(double t, double err_sq) {
        if (!first) total += 0.5 * (t - prev_t) * (prev_sq + err_sq);
        first = false;
        prev_t = t;
        prev_sq = err_sq;
        return total;
    }
};

}  // namespace

Trajectory simulate_regression(const RegressionModel& model, LawKind law, TunerConfig tuner,
                               const SimGrid& grid) {
    tuner.law = law;
    tuner.validate();
    const std::size_t n = model.theta_star.size();

    Trajectory traj;
    traj.law = law;
    traj.mrac = false;
    traj.has_lyapunov = law != LawKind::WibisonoBaseline;

    const std::size_t state_dim = law == LawKind::FirstOrder ? n : 2 * n;

    RhsFn rhs = [&model, &tuner, law, n](double t, const Vector& y, Vector& dydt) {
        TunerState s;
        s.theta.assign(y.begin(), y.begin() + n);
        const Vector phi = eval_feature(model.feature, t);
        const double e_y = dot(s.theta, phi) - dot(model.theta_star, phi);
        TunerDerivative d;
        switch (law) {
            case LawKind::FirstOrder:
                d = first_order_regression_rhs(s, phi, e_y, tuner);
                std::copy(d.theta_dot.begin(), d.theta_dot.end(), dydt.begin());
                return;
            case LawKind::HigherOrder:
                s.vartheta.assign(y.begin() + n, y.end());
                d = higher_order_regression_rhs(s, phi, e_y, tuner);
                std::copy(d.theta_dot.begin(), d.theta_dot.end(), dydt.begin());
                std::copy(d.vartheta_dot.begin(), d.vartheta_dot.end(), dydt.begin() + n);
                return;
            case LawKind::WibisonoBaseline:
                s.theta_dot.assign(y.begin() + n, y.end());
                d = wibisono_baseline_rhs(s, phi, e_y, t + tuner.wibisono_t0, tuner);
                std::copy(d.theta_dot.begin(), d.theta_dot.end(), dydt.begin());
                std::copy(d.theta_ddot.begin(), d.theta_ddot.end(), dydt.begin() + n);
                return;
        }
    };

    RegretAccumulator regret;
    ObserverFn observer = [&](std::size_t, double t, const Vector& y) {
        TrajectorySample s;
        s.t = t;
        s.theta.assign(y.begin(), y.begin() + n);
        s.phi = eval_feature(model.feature, t);
        s.e_y = dot(s.theta - model.theta_star, s.phi);
        switch (law) {
            case LawKind::FirstOrder:
                s.lyapunov = first_order_regression_lyapunov(s.theta, model.theta_star,
                                                             tuner.gamma);
                s.rate_bound = -s.e_y * s.e_y;
                break;
            case LawKind::HigherOrder:
                s.vartheta.assign(y.begin() + n, y.end());
                s.lyapunov = lyapunov_regression(s.theta, s.vartheta, model.theta_star,
                                                 tuner.gamma);
                s.rate_bound = lyapunov_regression_rate_bound(s.theta, s.vartheta, s.phi, s.e_y,
                                                              tuner.gamma, tuner.beta);
                break;
            case LawKind::WibisonoBaseline:
                s.theta_dot.assign(y.begin() + n, y.end());
                break;
        }
        s.regret = regret.push(t, s.e_y * s.e_y);
        traj.samples.push_back(std::move(s));
    };

    IntegrationConfig icfg = make_integration_config(grid);
    // instability is declared on ||theta|| or |e_y|, not only on raw
    // state components
    icfg.divergence_magnitude = [&model, n](double t, const Vector& y) {
        Vector theta(y.begin(), y.begin() + n);
        const Vector phi = eval_feature(model.feature, t);
        const double e_y = dot(theta, phi) - dot(model.theta_star, phi);
        return std::max(norm2(theta), std::abs(e_y));
    };
    const IntegrationOutcome out = integrate(rhs, Vector(state_dim, 0.0), icfg, observer);
    traj.status = out.status;
    traj.diverged_at = out.diverged_at;
    if (traj.has_lyapunov && !traj.samples.empty()) traj.v0 = traj.samples.front().lyapunov;
    return traj;
}

Trajectory simulate_mrac(const PlantModel& model, LawKind law, TunerConfig tuner,
                         const SimGrid& grid) {
    if (law == LawKind::WibisonoBaseline)
        throw std::invalid_argument("simulate_mrac: baseline law is regression-only");
    tuner.law = law;
    tuner.validate();
    const std::size_t np = model.theta_star.size();  // parameter dim == plant dim here
    const std::size_t nx = model.a_m.rows();
    const Vector pb = model.pb();

    Trajectory traj;
    traj.law = law;
    traj.mrac = true;
    traj.has_lyapunov = true;

    const bool higher = law == LawKind::HigherOrder;
    const std::size_t tuner_dim = higher ? 2 * np : np;
    const std::size_t state_dim = tuner_dim + 2 * nx;

    // State layout: [theta, (vartheta), x, xhat]; phi = x.
    RhsFn rhs = [&model, &tuner, higher, np, nx, &pb](double t, const Vector& y, Vector& dydt) {
        TunerState s;
        s.theta.assign(y.begin(), y.begin() + np);
        const std::size_t xoff = higher ? 2 * np : np;
        SystemState sys;
        sys.x.assign(y.begin() + xoff, y.begin() + xoff + nx);
        sys.xhat.assign(y.begin() + xoff + nx, y.end());
        const Vector& phi = sys.x;
        const Vector e = sys.xhat - sys.x;
        const double u = -dot(s.theta, phi);

        TunerDerivative d;
        if (higher) {
            s.vartheta.assign(y.begin() + np, y.begin() + 2 * np);
            d = higher_order_mrac_rhs(s, phi, e, pb, tuner);
            std::copy(d.vartheta_dot.begin(), d.vartheta_dot.end(), dydt.begin() + np);
        } else {
            d = first_order_mrac_rhs(s, phi, e, pb, tuner);
        }
        std::copy(d.theta_dot.begin(), d.theta_dot.end(), dydt.begin());

        const SystemDerivative sd = plant_rhs(model, sys, s.theta, u, t, phi);
        std::copy(sd.x_dot.begin(), sd.x_dot.end(), dydt.begin() + xoff);
        std::copy(sd.xhat_dot.begin(), sd.xhat_dot.end(), dydt.begin() + xoff + nx);
    };

    RegretAccumulator regret;
    ObserverFn observer = [&](std::size_t, double t, const Vector& y) {
        TrajectorySample s;
        s.t = t;
        s.theta.assign(y.begin(), y.begin() + np);
        const std::size_t xoff = higher ? 2 * np : np;
        s.x.assign(y.begin() + xoff, y.begin() + xoff + nx);
        s.xhat.assign(y.begin() + xoff + nx, y.end());
        s.e = s.xhat - s.x;
        s.phi = s.x;
        s.u = -dot(s.theta, s.x);
        s.z_cmd = eval_command(model.command, t);
        if (higher) {
            s.vartheta.assign(y.begin() + np, y.begin() + 2 * np);
            s.lyapunov =
                lyapunov_regression(s.theta, s.vartheta, model.theta_star, tuner.gamma) +
                dot(s.e, mat_vec(model.p, s.e));
            s.rate_bound = lyapunov_mrac_rate_bound(s.theta, s.vartheta, s.phi, s.e, pb,
                                                    tuner.gamma, tuner.beta);
        } else {
            s.lyapunov =
                first_order_mrac_lyapunov(s.theta, model.theta_star, s.e, model.p, tuner.gamma);
            s.rate_bound = -dot(s.e, mat_vec(model.q, s.e));
        }
        s.regret = regret.push(t, dot(s.e, s.e));
        traj.samples.push_back(std::move(s));
    };

    const IntegrationOutcome out =
        integrate(rhs, Vector(state_dim, 0.0), make_integration_config(grid), observer);
    traj.status = out.status;
    traj.diverged_at = out.diverged_at;
    if (!traj.samples.empty()) traj.v0 = traj.samples.front().lyapunov;
    return traj;
}

namespace {

constexpr double kPi = std::numbers::pi;

FeatureSignal pe_sinusoids(double omega) {
    return FeatureSignal::sinusoids({1.0, 1.0, 1.0}, {0.0, 3.0, 3.0}, {0.0, omega, omega},
                                    {0.0, 0.0, kPi / 2.0});
}

ScenarioConfig regression_base(std::string name, std::string description) {
    ScenarioConfig cfg;
    cfg.name = std::move(name);
    cfg.description = std::move(description);
    cfg.model = ModelKind::Regression;
    cfg.laws = {LawKind::FirstOrder, LawKind::HigherOrder, LawKind::WibisonoBaseline};
    cfg.theta_star_base = {1.0, -2.0, 5.0};
    cfg.grid.horizon = 80.0;
    return cfg;
}

}  // namespace

std::vector<BuiltinScenario> builtin_scenarios() {
    std::vector<BuiltinScenario> list;

    {
        ScenarioConfig cfg = regression_base(
            "reg-two-step", "regression; feature steps to (1,1,1) at t=0.1, (2,-1,-2) at t=25");
        cfg.feature = FeatureSignal::steps(Vector(3, 0.0), {0.1, 25.0},
                                           {{1.0, 1.0, 1.0}, {2.0, -1.0, -2.0}});
        list.push_back({cfg.name, cfg.description, {cfg}});
    }
    {
        ScenarioConfig cfg = regression_base(
            "reg-pe", "regression; persistently exciting unit-frequency sinusoid features");
        cfg.feature = pe_sinusoids(1.0);
        list.push_back({cfg.name, cfg.description, {cfg}});
    }
    {
        BuiltinScenario sweep;
        sweep.name = "reg-freq-sweep";
        sweep.description = "regression; feature time-variation swept from a single step "
                            "through increasing sinusoid frequencies";
        struct Entry {
            const char* label;
            FeatureSignal feature;
        };
        const Entry entries[] = {
            {"step-only", FeatureSignal::steps(Vector(3, 0.0), {0.1}, {{1.0, 1.0, 1.0}})},
            {"omega-2pi-over-50", pe_sinusoids(2.0 * kPi / 50.0)},
            {"omega-1-over-3", pe_sinusoids(1.0 / 3.0)},
            {"omega-1", pe_sinusoids(1.0)},
            {"single-sinusoid",
             FeatureSignal::sinusoids({1.0, 1.0, 1.0}, {0.0, 3.0, 0.0}, {0.0, 1.0, 0.0},
                                      {0.0, 0.0, 0.0})},
        };
        for (const Entry& e : entries) {
            ScenarioConfig cfg = regression_base(sweep.name, sweep.description);
            cfg.variant = e.label;
            cfg.feature = e.feature;
            sweep.variants.push_back(std::move(cfg));
        }
        list.push_back(std::move(sweep));
    }
    {
        ScenarioConfig cfg;
        cfg.name = "f16-mrac";
        cfg.description = "adaptive control of linearized longitudinal aircraft dynamics with "
                          "integral pitch-rate command tracking";
        cfg.model = ModelKind::Mrac;
        cfg.laws = {LawKind::FirstOrder, LawKind::HigherOrder};
        cfg.feature = FeatureSignal::state_feedback(3);
        cfg.theta_star_base = f16_nominal_gain();
        cfg.command = CommandSignal::constant_after(5.0, 1.0);
        cfg.grid.horizon = 40.0;
        list.push_back({cfg.name, cfg.description, {cfg}});
    }
    return list;
}

const BuiltinScenario& find_builtin(const std::string& name) {
    static const std::vector<BuiltinScenario> all = builtin_scenarios();
    for (const BuiltinScenario& s : all)
        if (s.name == name) return s;
    throw UnknownScenario("unknown scenario: " + name);
}

double quantile_interpolated(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile of empty set");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

BandSeries quantile_band(const std::vector<std::vector<double>>& per_draw_series,
                         const std::vector<double>& grid) {
    BandSeries band;
    band.t = grid;
    band.included_draws = per_draw_series.size();
    if (per_draw_series.empty()) return band;
    for (const auto& s : per_draw_series)
        if (s.size() != grid.size())
            throw DimensionMismatch("quantile_band: series not on the shared grid");
    band.lo.reserve(grid.size());
    band.median.reserve(grid.size());
    band.hi.reserve(grid.size());
    std::vector<double> column(per_draw_series.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t d = 0; d < per_draw_series.size(); ++d) column[d] = per_draw_series[d][k];
        band.lo.push_back(quantile_interpolated(column, 0.025));
        band.median.push_back(quantile_interpolated(column, 0.5));
        band.hi.push_back(quantile_interpolated(column, 0.975));
    }
    return band;
}

std::vector<double> error_magnitude_series(const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) out.push_back(traj.mrac ? norm2(s.e) : std::abs(s.e_y));
    return out;
}

std::vector<double> time_series(const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) out.push_back(s.t);
    return out;
}

std::optional<double> settle_time(const Trajectory& traj, double tol) {
    const std::vector<double> err = error_magnitude_series(traj);
    std::size_t last_bad = err.size();  // sentinel: none bad
    for (std::size_t k = err.size(); k-- > 0;) {
        if (err[k] >= tol) {
            last_bad = k;
            break;
        }
    }
    if (last_bad == err.size()) return traj.samples.front().t;
    if (last_bad + 1 >= err.size()) return std::nullopt;
    return traj.samples[last_bad + 1].t;
}

std::size_t oscillation_count(const Trajectory& traj, const PlantModel& model, std::size_t comp,
                              double onset) {
    if (!traj.mrac) throw std::invalid_argument("oscillation_count: MRAC trajectories only");
    const Vector b = model.b_vec();
    std::vector<double> edot;
    for (const auto& s : traj.samples) {
        if (s.t < onset) continue;
        const Vector ae = mat_vec(model.a_m, s.e);
        const double mismatch = dot(s.theta - model.theta_star, s.phi);
        edot.push_back(ae[comp] + b[comp] * mismatch);
    }
    return zero_crossing_count(edot);
}

namespace {

struct SampledDraws {
    std::vector<DrawInfo> draws;
    std::vector<PlantModel> plants;  // MRAC only, one per draw
    std::size_t rejected = 0;
};

SampledDraws sample_draws(const ScenarioConfig& cfg) {
    SampledDraws out;
    SplitMix64 rng(cfg.mc.seed);
    for (std::size_t i = 0; i < cfg.mc.draws; ++i) {
        DrawInfo info;
        info.index = i;
        if (cfg.model == ModelKind::Regression) {
            info.theta_star = cfg.theta_star_base;
            if (i > 0)
                for (double& c : info.theta_star) c += rng.uniform(cfg.jitter_lo, cfg.jitter_hi);
        } else {
            // draw 0 nominal; rejected draws (non-Hurwitz closed loop) are
            // resampled and counted
            std::size_t attempts = 0;
            for (;;) {
                info.gain_scale = i == 0 ? 1.0 : rng.uniform(cfg.gain_lo, cfg.gain_hi);
                try {
                    out.plants.push_back(
                        build_f16_plant(info.gain_scale, cfg.command));
                    break;
                } catch (const NotHurwitz&) {
                    ++out.rejected;
                    if (++attempts > 10000)
                        throw ConfigError("gain-scale rejection sampling did not terminate");
                }
            }
            info.theta_star = out.plants.back().theta_star;
        }
        out.draws.push_back(std::move(info));
    }
    return out;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& raw_cfg) {
    raw_cfg.validate();
    ScenarioConfig cfg = raw_cfg;
    // discontinuity instants land on integration nodes, whatever the step
    for (double& st : cfg.feature.step_times)
        st = static_cast<double>(std::llround(st / cfg.grid.step)) * cfg.grid.step;
    if (cfg.command.kind == CommandSignal::Kind::ConstantAfter)
        cfg.command.onset =
            static_cast<double>(std::llround(cfg.command.onset / cfg.grid.step)) * cfg.grid.step;

    ScenarioResult result;
    result.config = cfg;

    SampledDraws sampled = sample_draws(cfg);
    result.draws = sampled.draws;
    result.rejected_draws = sampled.rejected;

    for (LawKind law : cfg.laws) {
        LawResult lr;
        lr.law = law;
        lr.trajectories.resize(cfg.mc.draws);

        auto run_draw = [&](std::size_t i) -> Trajectory {
            if (cfg.model == ModelKind::Regression) {
                RegressionModel model{result.draws[i].theta_star, cfg.feature};
                return simulate_regression(model, law, cfg.tuner, cfg.grid);
            }
            return simulate_mrac(sampled.plants[i], law, cfg.tuner, cfg.grid);
        };

        if (cfg.mc.draws > 1) {
            std::vector<std::future<Trajectory>> futures;
            futures.reserve(cfg.mc.draws);
            for (std::size_t i = 0; i < cfg.mc.draws; ++i)
                futures.push_back(std::async(std::launch::async, run_draw, i));
            for (std::size_t i = 0; i < cfg.mc.draws; ++i) lr.trajectories[i] = futures[i].get();
        } else {
            lr.trajectories[0] = run_draw(0);
        }

        std::vector<std::vector<double>> completed_series;
        std::vector<double> grid;
        for (const Trajectory& t : lr.trajectories) {
            if (t.status == RunStatus::Diverged) {
                lr.all_completed = false;
                ++lr.diverged_count;
                continue;
            }
            if (grid.empty()) grid = time_series(t);
            completed_series.push_back(error_magnitude_series(t));
        }
        if (!completed_series.empty()) lr.band = quantile_band(completed_series, grid);
        result.laws.push_back(std::move(lr));
    }
    return result;
}

}  // namespace adaflow
