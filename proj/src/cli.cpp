#include "adaflow/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "adaflow/io.hpp"

namespace adaflow {

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> user_scenario_files() {
    std::vector<fs::path> out;
    const char* dir = std::getenv(kScenarioDirEnv);
    if (!dir || !*dir) return out;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".cfg")
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ScenarioConfig> resolve_scenario(const std::string& name_or_path) {
    for (const BuiltinScenario& b : builtin_scenarios())
        if (b.name == name_or_path) return b.variants;
    for (const fs::path& p : user_scenario_files())
        if (p.stem() == name_or_path)
            return {config_from_key_values(load_key_values(p), p.string())};
    if (fs::exists(name_or_path))
        return {config_from_key_values(load_key_values(name_or_path), name_or_path)};
    throw UnknownScenario("unknown scenario: " + name_or_path);
}

std::string draw_file_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "draw_%03zu.csv", i);
    return buf;
}

void write_variant_outputs(const fs::path& dir, const ScenarioResult& result, std::ostream& log) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UnwritableOutput("cannot create " + dir.string());

    for (const LawResult& lr : result.laws) {
        const fs::path law_dir = dir / law_name(lr.law);
        fs::create_directories(law_dir, ec);
        if (ec) throw UnwritableOutput("cannot create " + law_dir.string());
        for (std::size_t i = 0; i < lr.trajectories.size(); ++i)
            write_trajectory_csv(law_dir / draw_file_name(i), lr.trajectories[i]);
        if (lr.band.included_draws > 0) write_band_csv(law_dir / "band.csv", lr.band);
        log << "  " << law_name(lr.law) << ": " << lr.trajectories.size() << " draw(s), "
            << lr.diverged_count << " diverged\n";
    }
    write_manifest(dir / "manifest.txt", result);
}

}  // namespace

int cmd_list(std::ostream& out) {
    for (const BuiltinScenario& b : builtin_scenarios()) {
        out << b.name;
        if (b.variants.size() > 1) out << " (" << b.variants.size() << " variants)";
        out << " - " << b.description << "\n";
    }
    for (const fs::path& p : user_scenario_files())
        out << p.stem().string() << " - user scenario (" << p.string() << ")\n";
    return 0;
}

int cmd_run(const RunOptions& opts, std::ostream& log) {
    std::vector<ScenarioConfig> variants;
    try {
        variants = resolve_scenario(opts.scenario);
        for (ScenarioConfig& cfg : variants)
            for (const auto& [key, value] : opts.overrides) apply_override(cfg, key, value);
        for (ScenarioConfig& cfg : variants) cfg.validate();
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const bool multi = variants.size() > 1;
        for (const ScenarioConfig& cfg : variants) {
            const fs::path dir = multi ? opts.out_dir / cfg.variant : opts.out_dir;
            log << cfg.name << (multi ? " [" + cfg.variant + "]" : "") << " -> " << dir.string()
                << "\n";
            const ScenarioResult result = run_scenario(cfg);
            write_variant_outputs(dir, result, log);
            if (result.rejected_draws > 0)
                log << "  (" << result.rejected_draws << " unstable gain draws resampled)\n";
        }
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

namespace {

enum class CheckStatus { Pass, Fail, NotApplicable };

struct CheckRow {
    std::string name;
    CheckStatus status;
    std::string detail;
};

class Checker {
public:
    explicit Checker(std::vector<CheckRow>& rows) : rows_(rows) {}

    void record(const std::string& name, bool ok, const std::string& detail = "") {
        rows_.push_back({name, ok ? CheckStatus::Pass : CheckStatus::Fail, detail});
    }
    void na(const std::string& name, const std::string& why) {
        rows_.push_back({name, CheckStatus::NotApplicable, why});
    }

private:
    std::vector<CheckRow>& rows_;
};

struct LoadedRun {
    LawKind law;
    std::size_t draw;
    bool diverged;
    CsvTable csv;
};

void verify_run(const ScenarioConfig& cfg, const LoadedRun& run, Checker& check) {
    const std::string tag =
        std::string(law_name(run.law)) + "/" + draw_file_name(run.draw);
    const CsvTable& csv = run.csv;

    // structural integrity
    const std::vector<double>* t = csv.column("t");
    bool increasing = t && !t->empty();
    if (t)
        for (std::size_t k = 1; k < t->size(); ++k)
            if (!((*t)[k] > (*t)[k - 1])) increasing = false;
    bool finite = true;
    for (const auto& col : csv.columns)
        for (double x : col)
            if (!std::isfinite(x)) finite = false;
    check.record("csv-integrity " + tag, increasing && finite,
                 increasing ? (finite ? "" : "non-finite value") : "t not increasing");
    if (!t || t->empty()) return;

    const std::vector<double>* regret = csv.column("regret");
    if (regret) {
        bool nondec = true;
        for (std::size_t k = 1; k < regret->size(); ++k)
            if (regret->at(k) < regret->at(k - 1) - 1e-15) nondec = false;
        check.record("regret-nondecreasing " + tag, nondec);
    }

    const std::vector<double>* v_col = csv.column("V");
    const bool mu_auto = cfg.tuner.mu_is_default();

    if (run.law == LawKind::WibisonoBaseline || run.diverged) {
        check.na("lyapunov-monotone " + tag,
                 run.law == LawKind::WibisonoBaseline ? "no certificate for the baseline law"
                                                      : "diverged run");
    } else if (!v_col) {
        check.record("lyapunov-monotone " + tag, false, "V column missing");
    } else if (run.law == LawKind::HigherOrder && !mu_auto) {
        check.na("lyapunov-monotone " + tag, "mu overridden; certificate assumes the default");
    } else {
        const double v0 = v_col->front();
        const double slack = 1e-6 * (1.0 + v0);
        bool mono = true;
        double worst = 0.0;
        for (std::size_t k = 1; k < v_col->size(); ++k) {
            const double rise = v_col->at(k) - v_col->at(k - 1);
            worst = std::max(worst, rise);
            if (rise > slack) mono = false;
        }
        std::ostringstream detail;
        detail << "max rise " << worst << " vs slack " << slack;
        check.record("lyapunov-monotone " + tag, mono, detail.str());

        if (regret)
            check.record("regret-le-v0 " + tag, regret->back() <= v0,
                         "final " + format_double(regret->back()) + " vs V0 " + format_double(v0));
    }

    // L2 bound on the filter distance (higher-order law)
    if (run.law == LawKind::HigherOrder && !run.diverged && mu_auto && v_col) {
        const auto thetas = csv.column_group("theta");
        const auto varthetas = csv.column_group("vartheta");
        if (!thetas.empty() && thetas.size() == varthetas.size()) {
            double acc = 0.0;
            auto sq = [&](std::size_t k) {
                double s = 0.0;
                for (std::size_t i = 0; i < thetas.size(); ++i) {
                    const double d = thetas[i]->at(k) - varthetas[i]->at(k);
                    s += d * d;
                }
                return s;
            };
            double prev = sq(0);
            for (std::size_t k = 1; k < t->size(); ++k) {
                const double cur = sq(k);
                acc += 0.5 * (t->at(k) - t->at(k - 1)) * (prev + cur);
                prev = cur;
            }
            const double bound = cfg.tuner.gamma * v_col->front() / (2.0 * cfg.tuner.beta);
            check.record("l2-filter-bound " + tag, acc <= 1.01 * bound,
                         format_double(acc) + " vs " + format_double(bound));
        }
    }

    // Finite-difference rate-bound check; only meaningful on grids fine
    // enough that the differencing error is below the 1e-4 slack.
    if (v_col && csv.column("V_rate_bound") && !run.diverged &&
        (run.law == LawKind::FirstOrder || mu_auto)) {
        const double dt = t->at(1) - t->at(0);
        if (dt <= 2.5e-4) {
            const std::vector<double>& bound = *csv.column("V_rate_bound");
            bool ok = true;
            double worst = -1e300;
            for (std::size_t k = 1; k + 1 < t->size(); ++k) {
                const double fd = (v_col->at(k + 1) - v_col->at(k - 1)) / (t->at(k + 1) - t->at(k - 1));
                worst = std::max(worst, fd - bound[k]);
                if (fd > bound[k] + 1e-4) ok = false;
            }
            check.record("rate-bound-fd " + tag, ok, "max gap " + format_double(worst));
        } else {
            check.na("rate-bound-fd " + tag, "grid too coarse (dt > 2.5e-4)");
        }
    }

    // Two-ODE vs second-order ODE consistency, needs an analytic feature
    // rate and a fine grid.
    if (run.law == LawKind::HigherOrder && !run.diverged &&
        cfg.model == ModelKind::Regression &&
        cfg.feature.kind == FeatureKind::SinusoidBank) {
        const double dt = t->at(1) - t->at(0);
        if (dt <= 2.5e-4) {
            const auto thetas = csv.column_group("theta");
            const std::vector<double>* ey = csv.column("e_y");
            TrajectorySegment seg;
            seg.t = *t;
            for (std::size_t k = 0; k < t->size(); ++k) {
                Vector th(thetas.size());
                for (std::size_t i = 0; i < thetas.size(); ++i) th[i] = thetas[i]->at(k);
                seg.theta.push_back(std::move(th));
                seg.phi.push_back(eval_feature(cfg.feature, t->at(k)));
                seg.phi_dot.push_back(eval_feature_rate(cfg.feature, t->at(k)));
                seg.err.push_back(ey->at(k));
            }
            const double residual = second_order_form_check(cfg.tuner, seg);
            const double tol = 1e-3 * std::pow(dt / 1e-4, 2.0);
            check.record("second-order-residual " + tag, residual <= tol,
                         format_double(residual) + " vs " + format_double(tol));
        } else {
            check.na("second-order-residual " + tag, "grid too coarse (dt > 2.5e-4)");
        }
    }
}

void verify_variant(const fs::path& dir, Checker& check) {
    const ScenarioConfig cfg =
        config_from_key_values(load_key_values(dir / "manifest.txt"), (dir / "manifest.txt").string());

    std::vector<LoadedRun> runs;
    for (LawKind law : cfg.laws) {
        const fs::path law_dir = dir / law_name(law);
        for (std::size_t i = 0; i < cfg.mc.draws; ++i) {
            const fs::path file = law_dir / draw_file_name(i);
            if (!fs::exists(file)) {
                check.record("csv-present " + file.string(), false, "missing");
                continue;
            }
            LoadedRun run;
            run.law = law;
            run.draw = i;
            try {
                run.csv = read_csv(file);
            } catch (const CorruptCsv& e) {
                check.record("csv-integrity " + file.string(), false, e.what());
                continue;
            }
            const std::vector<double>* t = run.csv.column("t");
            const double end = t && !t->empty() ? t->back() : 0.0;
            run.diverged = end < cfg.grid.horizon - 0.5 * cfg.grid.step;
            runs.push_back(std::move(run));
        }

        const fs::path band = law_dir / "band.csv";
        if (fs::exists(band)) {
            try {
                const CsvTable b = read_csv(band);
                const auto *lo = b.column("lo"), *med = b.column("median"), *hi = b.column("hi");
                bool ordered = lo && med && hi;
                if (ordered)
                    for (std::size_t k = 0; k < lo->size(); ++k)
                        if (!(lo->at(k) <= med->at(k) && med->at(k) <= hi->at(k))) ordered = false;
                check.record(std::string("band-ordered ") + law_name(law), ordered);
            } catch (const CorruptCsv& e) {
                check.record(std::string("band-ordered ") + law_name(law), false, e.what());
            }
        }
    }

    for (const LoadedRun& run : runs) verify_run(cfg, run, check);

    // Strong-friction proximity: with beta at or beyond the sweep's last
    // point, the higher-order trajectory must ride the first-order one.
    const bool has_fo = std::find(cfg.laws.begin(), cfg.laws.end(), LawKind::FirstOrder) !=
                        cfg.laws.end();
    const bool has_ho = std::find(cfg.laws.begin(), cfg.laws.end(), LawKind::HigherOrder) !=
                        cfg.laws.end();
    if (has_fo && has_ho && cfg.tuner.beta >= 1000.0) {
        for (std::size_t i = 0; i < cfg.mc.draws; ++i) {
            const LoadedRun *fo = nullptr, *ho = nullptr;
            for (const LoadedRun& run : runs) {
                if (run.draw != i || run.diverged) continue;
                if (run.law == LawKind::FirstOrder) fo = &run;
                if (run.law == LawKind::HigherOrder) ho = &run;
            }
            if (!fo || !ho) continue;
            const auto th_fo = fo->csv.column_group("theta");
            const auto th_ho = ho->csv.column_group("theta");
            double sup = 0.0;
            const std::size_t rows = std::min(fo->csv.rows(), ho->csv.rows());
            for (std::size_t k = 0; k < rows; ++k) {
                double s = 0.0;
                for (std::size_t c = 0; c < th_fo.size(); ++c) {
                    const double d = th_ho[c]->at(k) - th_fo[c]->at(k);
                    s += d * d;
                }
                sup = std::max(sup, std::sqrt(s));
            }
            check.record("beta-limit " + draw_file_name(i), sup <= 1e-2,
                         "sup distance " + format_double(sup));
        }
    } else {
        check.na("beta-limit", "needs first_order + higher_order runs with beta >= 1000");
    }
}

}  // namespace

int cmd_verify(const fs::path& out_dir, std::ostream& log) {
    std::vector<fs::path> variant_dirs;
    if (fs::exists(out_dir / "manifest.txt")) {
        variant_dirs.push_back(out_dir);
    } else if (fs::is_directory(out_dir)) {
        for (const auto& entry : fs::directory_iterator(out_dir))
            if (entry.is_directory() && fs::exists(entry.path() / "manifest.txt"))
                variant_dirs.push_back(entry.path());
        std::sort(variant_dirs.begin(), variant_dirs.end());
    }
    if (variant_dirs.empty()) {
        log << "error: no manifest.txt under " << out_dir.string() << "\n";
        return 2;
    }

    std::vector<CheckRow> rows;
    Checker check(rows);
    for (const fs::path& dir : variant_dirs) {
        try {
            verify_variant(dir, check);
        } catch (const std::exception& e) {
            rows.push_back({"load " + dir.string(), CheckStatus::Fail, e.what()});
        }
    }

    std::size_t failed = 0, passed = 0, na = 0;
    for (const CheckRow& row : rows) {
        const char* label = row.status == CheckStatus::Pass
                                ? "[PASS]"
                                : row.status == CheckStatus::Fail ? "[FAIL]" : "[ NA ]";
        if (row.status == CheckStatus::Fail) ++failed;
        else if (row.status == CheckStatus::Pass) ++passed;
        else ++na;
        log << label << " " << row.name;
        if (!row.detail.empty()) log << " (" << row.detail << ")";
        log << "\n";
    }
    log << passed << " passed, " << failed << " failed, " << na << " not applicable\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace adaflow
