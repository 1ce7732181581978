// Acceptance suite: runs every numbered criterion end to end and prints one
// pass/fail line each. Exit code is the number of failed criteria.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include "adaflow/cli.hpp"
#include "adaflow/diagnostics.hpp"
#include "adaflow/io.hpp"
#include "adaflow/models.hpp"
#include "adaflow/scenarios.hpp"
#include "adaflow/tuners.hpp"

using namespace adaflow;
namespace fs = std::filesystem;

namespace {

constexpr double kMonotoneSlackScale = 1e-6;  // slack = scale * (1 + V0)
constexpr double kRateBoundSlack = 1e-4;

ScenarioConfig builtin_variant(const std::string& name, const std::string& variant = "") {
    const BuiltinScenario& b = find_builtin(name);
    if (variant.empty()) return b.variants.front();
    for (const ScenarioConfig& v : b.variants)
        if (v.variant == variant) return v;
    throw UnknownScenario("no variant " + variant);
}

struct Fixtures {
    ScenarioResult regpe;  // FO + HO + WB, 20 draws, default grid
    ScenarioResult f16;    // FO + HO, 20 draws

    const LawResult& law(const ScenarioResult& res, LawKind kind) const {
        for (const LawResult& lr : res.laws)
            if (lr.law == kind) return lr;
        throw std::logic_error("law missing from fixture");
    }
};

Fixtures make_fixtures() {
    Fixtures f;
    ScenarioConfig regpe = builtin_variant("reg-pe");
    regpe.mc.draws = 20;
    f.regpe = run_scenario(regpe);

    ScenarioConfig f16 = builtin_variant("f16-mrac");
    f16.mc.draws = 20;
    f.f16 = run_scenario(f16);
    return f;
}

bool lyapunov_monotone(const Trajectory& t, double& worst_rise) {
    const double slack = kMonotoneSlackScale * (1.0 + t.v0);
    bool ok = true;
    for (std::size_t k = 1; k < t.samples.size(); ++k) {
        const double rise = t.samples[k].lyapunov - t.samples[k - 1].lyapunov;
        worst_rise = std::max(worst_rise, rise);
        if (rise > slack) ok = false;
    }
    return ok;
}

// max over interior samples of (central-difference dV/dt - stored bound)
double fd_rate_gap(const Trajectory& t) {
    double worst = -1e300;
    for (std::size_t k = 1; k + 1 < t.samples.size(); ++k) {
        const double fd = (t.samples[k + 1].lyapunov - t.samples[k - 1].lyapunov) /
                          (t.samples[k + 1].t - t.samples[k - 1].t);
        worst = std::max(worst, fd - t.samples[k].rate_bound);
    }
    return worst;
}

double filter_distance_l2_squared(const Trajectory& t) {
    double acc = 0.0;
    for (std::size_t k = 1; k < t.samples.size(); ++k) {
        const auto& a = t.samples[k - 1];
        const auto& b = t.samples[k];
        const Vector da = a.theta - a.vartheta;
        const Vector db = b.theta - b.vartheta;
        acc += 0.5 * (b.t - a.t) * (dot(da, da) + dot(db, db));
    }
    return acc;
}

double regret_at(const Trajectory& t, double when) {
    for (const auto& s : t.samples)
        if (s.t >= when - 1e-12) return s.regret;
    return t.samples.back().regret;
}

Trajectory fine_grid_run(const ScenarioConfig& scenario, LawKind law, double horizon) {
    SimGrid grid;
    grid.step = 1e-4;
    grid.horizon = horizon;
    grid.log_every = 1;
    if (scenario.model == ModelKind::Regression) {
        const RegressionModel model{scenario.theta_star_base, scenario.feature};
        return simulate_regression(model, law, scenario.tuner, grid);
    }
    return simulate_mrac(build_f16_plant(1.0, scenario.command), law, scenario.tuner, grid);
}

TrajectorySegment to_segment(const Trajectory& traj, const FeatureSignal& feature) {
    TrajectorySegment seg;
    for (const auto& s : traj.samples) {
        seg.t.push_back(s.t);
        seg.theta.push_back(s.theta);
        seg.phi.push_back(s.phi);
        seg.phi_dot.push_back(eval_feature_rate(feature, s.t));
        seg.err.push_back(s.e_y);
    }
    return seg;
}

double residual_at_step(const ScenarioConfig& regpe, double step, double horizon) {
    SimGrid grid;
    grid.step = step;
    grid.horizon = horizon;
    grid.log_every = 1;
    const RegressionModel model{regpe.theta_star_base, regpe.feature};
    const Trajectory traj = simulate_regression(model, LawKind::HigherOrder, regpe.tuner, grid);
    return second_order_form_check(regpe.tuner, to_segment(traj, regpe.feature));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::ostream&)> run;
};

}  // namespace

int main() {
    std::cout.setf(std::ios::fixed);
    std::cout.precision(6);

    const Fixtures fx = make_fixtures();
    const ScenarioConfig regpe_cfg = builtin_variant("reg-pe");

    std::vector<Criterion> criteria;

    criteria.push_back({1, "lyapunov-monotonicity", [&](std::ostream& out) {
        bool ok = true;
        double worst = -1e300;
        for (const ScenarioResult* res : {&fx.regpe, &fx.f16})
            for (const Trajectory& t : fx.law(*res, LawKind::HigherOrder).trajectories)
                ok = lyapunov_monotone(t, worst) && ok;
        out << "worst V rise " << worst;

        const Trajectory fd_reg = fine_grid_run(regpe_cfg, LawKind::HigherOrder, 10.0);
        const Trajectory fd_f16 =
            fine_grid_run(builtin_variant("f16-mrac"), LawKind::HigherOrder, 15.0);
        const double gap_reg = fd_rate_gap(fd_reg);
        const double gap_f16 = fd_rate_gap(fd_f16);
        out << "; FD gap reg " << gap_reg << ", mrac " << gap_f16;
        return ok && gap_reg <= kRateBoundSlack && gap_f16 <= kRateBoundSlack;
    }});

    criteria.push_back({2, "constant-regret", [&](std::ostream& out) {
        bool ok = true;
        for (const ScenarioResult* res : {&fx.regpe, &fx.f16}) {
            for (const Trajectory& t : fx.law(*res, LawKind::HigherOrder).trajectories) {
                if (t.samples.back().regret > t.v0) ok = false;
                for (std::size_t k = 1; k < t.samples.size(); ++k)
                    if (t.samples[k].regret < t.samples[k - 1].regret - 1e-15) ok = false;
            }
        }
        // near-constancy at doubled horizons
        ScenarioConfig reg2 = regpe_cfg;
        reg2.grid.horizon = 2.0 * regpe_cfg.grid.horizon;
        reg2.laws = {LawKind::HigherOrder};
        reg2.mc.draws = 1;
        const Trajectory tr = run_scenario(reg2).laws[0].trajectories[0];
        const double inc_reg = regret_at(tr, reg2.grid.horizon) -
                               regret_at(tr, regpe_cfg.grid.horizon);

        ScenarioConfig f162 = builtin_variant("f16-mrac");
        const double f16_T = f162.grid.horizon;
        f162.grid.horizon = 2.0 * f16_T;
        f162.laws = {LawKind::HigherOrder};
        f162.mc.draws = 1;
        const Trajectory tm = run_scenario(f162).laws[0].trajectories[0];
        const double inc_f16 = regret_at(tm, f162.grid.horizon) - regret_at(tm, f16_T);

        out << "regret(2T)-regret(T): reg " << inc_reg << " vs " << 0.05 * tr.v0 << ", mrac "
            << inc_f16 << " vs " << 0.05 * tm.v0;
        return ok && inc_reg <= 0.05 * tr.v0 && inc_f16 <= 0.05 * tm.v0;
    }});

    criteria.push_back({3, "l2-filter-bound", [&](std::ostream& out) {
        bool ok = true;
        double worst_ratio = 0.0;
        for (const ScenarioResult* res : {&fx.regpe, &fx.f16}) {
            const double gamma = res->config.tuner.gamma;
            const double beta = res->config.tuner.beta;
            for (const Trajectory& t : fx.law(*res, LawKind::HigherOrder).trajectories) {
                const double measured = filter_distance_l2_squared(t);
                const double bound = gamma * t.v0 / (2.0 * beta);
                worst_ratio = std::max(worst_ratio, measured / bound);
                if (measured > 1.01 * bound) ok = false;
            }
        }
        // beta scaling: the 1/beta envelope from the bound, one-sided
        std::vector<double> l2sq;
        for (double beta : {1.0, 10.0, 100.0}) {
            ScenarioConfig cfg = regpe_cfg;
            cfg.tuner.beta = beta;
            cfg.laws = {LawKind::HigherOrder};
            cfg.mc.draws = 1;
            l2sq.push_back(
                filter_distance_l2_squared(run_scenario(cfg).laws[0].trajectories[0]));
        }
        const bool scale10 = l2sq[1] * 10.0 <= 2.0 * l2sq[0];
        const bool scale100 = l2sq[2] * 100.0 <= 2.0 * l2sq[0];
        out << "worst measured/bound " << worst_ratio << "; L2^2*beta: " << l2sq[0] << ", "
            << l2sq[1] * 10.0 << ", " << l2sq[2] * 100.0;
        return ok && scale10 && scale100;
    }});

    criteria.push_back({4, "strong-friction-limit", [&](std::ostream& out) {
        ScenarioConfig cfg = builtin_variant("reg-two-step");
        cfg.mc.draws = 1;
        cfg.laws = {LawKind::FirstOrder};
        const Trajectory fo = run_scenario(cfg).laws[0].trajectories[0];

        std::vector<double> sups;
        for (double beta : {1.0, 10.0, 100.0, 1000.0}) {
            ScenarioConfig ho_cfg = cfg;
            ho_cfg.tuner.beta = beta;
            ho_cfg.laws = {LawKind::HigherOrder};
            const Trajectory ho = run_scenario(ho_cfg).laws[0].trajectories[0];
            double sup = 0.0;
            for (std::size_t k = 0; k < fo.samples.size(); ++k)
                sup = std::max(sup, norm2(ho.samples[k].theta - fo.samples[k].theta));
            sups.push_back(sup);
        }
        out << "sup distances";
        for (double s : sups) out << " " << s;
        const bool monotone = sups[0] > sups[1] && sups[1] > sups[2] && sups[2] > sups[3];
        return monotone && sups[3] <= 1e-2;
    }});

    criteria.push_back({5, "second-order-form", [&](std::ostream& out) {
        const double fine = residual_at_step(regpe_cfg, 1e-4, 2.0);
        const double r4 = residual_at_step(regpe_cfg, 4e-3, 2.0);
        const double r2 = residual_at_step(regpe_cfg, 2e-3, 2.0);
        const double ratio = r4 / r2;
        out << "residual(1e-4) " << fine << "; halving ratio " << ratio;

        // the dynamical-model pair: same identity with err = e.Pb and the
        // state as feature; segment sliced past the command onset so the
        // differencing never straddles the command step
        const ScenarioConfig f16_cfg = builtin_variant("f16-mrac");
        const PlantModel plant = build_f16_plant(1.0, f16_cfg.command);
        SimGrid grid;
        grid.step = 1e-4;
        grid.horizon = 8.0;
        grid.log_every = 1;
        const Trajectory traj =
            simulate_mrac(plant, LawKind::HigherOrder, f16_cfg.tuner, grid);
        const Vector pb = plant.pb();
        TrajectorySegment seg;
        for (const auto& s : traj.samples) {
            if (s.t < 5.0 + 2.0 * grid.step) continue;
            seg.t.push_back(s.t);
            seg.theta.push_back(s.theta);
            seg.phi.push_back(s.x);
            const SystemDerivative d =
                plant_rhs(plant, {s.x, s.xhat}, s.theta, s.u, s.t, s.x);
            seg.phi_dot.push_back(d.x_dot);
            seg.err.push_back(dot(s.e, pb));
        }
        const double mrac_residual = second_order_form_check(
            f16_cfg.tuner, seg, f16_cfg.tuner.resolved_mu_mrac(norm2(pb)));
        out << "; dynamical-model residual(1e-4) " << mrac_residual;
        return fine <= 1e-3 && ratio >= 3.0 && ratio <= 5.0 && mrac_residual <= 1e-3;
    }});

    criteria.push_back({6, "baseline-instability-vs-stability", [&](std::ostream& out) {
        const Trajectory& wb = fx.law(fx.regpe, LawKind::WibisonoBaseline).trajectories[0];
        const bool wb_diverged_by_50 =
            wb.status == RunStatus::Diverged && wb.diverged_at && *wb.diverged_at < 50.0;
        out << "baseline " << (wb.status == RunStatus::Diverged ? "diverged at t=" : "completed");
        if (wb.diverged_at) out << *wb.diverged_at;

        const Trajectory& ho = fx.law(fx.regpe, LawKind::HigherOrder).trajectories[0];
        const auto ts = time_series(ho);
        const auto err = error_magnitude_series(ho);
        const bool tail_ok = ho.status == RunStatus::Completed &&
                             asymptotic_decay_check(ts, err, 0.2, 1e-2);
        const double term_param_err =
            norm2(ho.samples.back().theta - fx.regpe.draws[0].theta_star);
        out << "; HO tail ok " << tail_ok << ", terminal param err " << term_param_err;

        ScenarioConfig slow = builtin_variant("reg-freq-sweep", "omega-2pi-over-50");
        slow.mc.draws = 1;
        const ScenarioResult sres = run_scenario(slow);
        bool all_complete = true;
        for (const LawResult& lr : sres.laws)
            if (lr.trajectories[0].status != RunStatus::Completed) all_complete = false;
        out << ", low-freq all complete " << all_complete;

        const bool flags_ok = !fx.law(fx.regpe, LawKind::WibisonoBaseline).all_completed &&
                              fx.law(fx.regpe, LawKind::HigherOrder).all_completed;
        return wb_diverged_by_50 && tail_ok && term_param_err <= 1e-2 && all_complete && flags_ok;
    }});

    criteria.push_back({7, "first-order-baselines", [&](std::ostream& out) {
        bool ok = true;
        double worst = -1e300;
        for (const ScenarioResult* res : {&fx.regpe, &fx.f16})
            for (const Trajectory& t : fx.law(*res, LawKind::FirstOrder).trajectories)
                ok = lyapunov_monotone(t, worst) && ok;
        out << "worst V rise " << worst;

        // constant-feature run against the closed-form matrix-exponential path
        const Vector star{1.0, -2.0, 5.0};
        const Vector phi{1.0, 1.0, 1.0};
        const RegressionModel model{star, FeatureSignal::steps(phi, {}, {})};
        SimGrid grid;
        grid.step = 1e-3;
        grid.horizon = 50.0;
        TunerConfig tuner;
        const Trajectory fo = simulate_regression(model, LawKind::FirstOrder, tuner, grid);
        const Matrix flow = (-tuner.gamma) * outer(phi, phi);
        double sup_err = 0.0;
        for (const auto& s : fo.samples) {
            const Vector exact =
                matrix_exponential_action(flow, s.t, Vector{-1.0, 2.0, -5.0});  // theta_err(0)
            sup_err = std::max(sup_err, norm2((s.theta - star) - exact));
        }
        out << "; sup error vs matrix-exponential oracle " << sup_err;
        return ok && sup_err <= 1e-6;
    }});

    criteria.push_back({8, "f16-tracking", [&](std::ostream& out) {
        const PlantModel nominal = build_f16_plant();
        const Trajectory& fo = fx.law(fx.f16, LawKind::FirstOrder).trajectories[0];
        const Trajectory& ho = fx.law(fx.f16, LawKind::HigherOrder).trajectories[0];
        const bool decay_fo =
            asymptotic_decay_check(time_series(fo), error_magnitude_series(fo), 0.2, 1e-2);
        const bool decay_ho =
            asymptotic_decay_check(time_series(ho), error_magnitude_series(ho), 0.2, 1e-2);
        const std::size_t osc_fo = oscillation_count(fo, nominal, 1, 5.0);
        const std::size_t osc_ho = oscillation_count(ho, nominal, 1, 5.0);
        out << "decay FO " << decay_fo << " HO " << decay_ho << "; oscillations FO " << osc_fo
            << " HO " << osc_ho;
        return decay_fo && decay_ho && osc_ho <= osc_fo;
    }});

    criteria.push_back({9, "integrator-self-validation", [&](std::ostream& out) {
        // Richardson order on the coupled higher-order PE system
        const RegressionModel model{regpe_cfg.theta_star_base, regpe_cfg.feature};
        TunerConfig tuner = regpe_cfg.tuner;
        RhsFn rhs = [&](double t, const Vector& y, Vector& dydt) {
            TunerState s;
            s.theta.assign(y.begin(), y.begin() + 3);
            s.vartheta.assign(y.begin() + 3, y.end());
            const Vector phi = eval_feature(model.feature, t);
            const double e_y = dot(s.theta - model.theta_star, phi);
            const TunerDerivative d = higher_order_regression_rhs(s, phi, e_y, tuner);
            std::copy(d.theta_dot.begin(), d.theta_dot.end(), dydt.begin());
            std::copy(d.vartheta_dot.begin(), d.vartheta_dot.end(), dydt.begin() + 3);
        };
        const double steps[] = {4e-3, 2e-3, 1e-3};
        const auto order = convergence_order_estimate(rhs, Vector(6, 0.0), 0.0, 10.0, steps);
        out << "order " << (order ? *order : 0.0);
        if (!order || *order < 3.5 || *order > 4.5) return false;

        // determinism: identical (config, seed) reruns are byte-identical
        const fs::path base = fs::temp_directory_path() / "adaflow_acceptance_det";
        fs::remove_all(base);
        std::ostringstream sink;
        for (const char* sub : {"a", "b"}) {
            RunOptions opts;
            opts.scenario = "reg-pe";
            opts.out_dir = base / sub;
            opts.overrides = {{"mc.draws", "2"}, {"mc.seed", "42"}, {"sim.horizon", "10"}};
            if (cmd_run(opts, sink) != 0) return false;
        }
        bool identical = true;
        for (const auto& entry : fs::recursive_directory_iterator(base / "a")) {
            if (!entry.is_regular_file()) continue;
            const fs::path rel = fs::relative(entry.path(), base / "a");
            if (slurp(entry.path()) != slurp(base / "b" / rel)) identical = false;
        }
        out << "; reruns byte-identical " << identical;
        return identical;
    }});

    criteria.push_back({10, "pe-metric", [&](std::ostream& out) {
        const double period = 2.0 * std::numbers::pi;
        const double pe_min =
            min_eigenvalue_symmetric(pe_gram(regpe_cfg.feature, 0.0, period, 1e-3));

        const ScenarioConfig two_step = builtin_variant("reg-two-step");
        const double const_min =
            min_eigenvalue_symmetric(pe_gram(two_step.feature, 30.0, period, 1e-3));
        out << "PE min eig " << pe_min << "; post-step constant-feature min eig " << const_min;
        return pe_min > 0.0 && std::abs(const_min) <= 1e-8;
    }});

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::ostringstream detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what();
        }
        if (!ok) ++failures;
        std::printf("[%s] %02d %s (%s)\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    detail.str().c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
    return failures;
}
