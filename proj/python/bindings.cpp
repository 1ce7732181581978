#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adaflow/diagnostics.hpp"
#include "adaflow/io.hpp"
#include "adaflow/linalg.hpp"
#include "adaflow/models.hpp"
#include "adaflow/scenarios.hpp"
#include "adaflow/signals.hpp"
#include "adaflow/tuners.hpp"

namespace py = pybind11;
using namespace adaflow;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix matrix_from_rows(const Rows& rows) {
    if (rows.empty()) return Matrix(0, 0);
    const std::size_t cols = rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw DimensionMismatch("ragged matrix rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Rows rows_from_matrix(const Matrix& m) {
    Rows rows(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

std::vector<double> sample_column(const Trajectory& t, double TrajectorySample::*field) {
    std::vector<double> out;
    out.reserve(t.samples.size());
    for (const auto& s : t.samples) out.push_back(s.*field);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "continuous-time adaptive learning: update laws, simulator, diagnostics";

    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
    py::register_exception<NotSymmetric>(m, "NotSymmetric", PyExc_ValueError);
    py::register_exception<NotHurwitz>(m, "NotHurwitz", PyExc_ValueError);
    py::register_exception<SingularSystem>(m, "SingularSystem", PyExc_ArithmeticError);
    py::register_exception<NoAnalyticRate>(m, "NoAnalyticRate", PyExc_ValueError);

    // linear algebra
    m.def(
        "solve_lyapunov",
        [](const Rows& a, const Rows& q) {
            return rows_from_matrix(solve_lyapunov(matrix_from_rows(a), matrix_from_rows(q)));
        },
        py::arg("a"), py::arg("q"),
        "Solve A^T P + P A = -Q for the symmetric positive definite P.");
    m.def(
        "is_positive_definite",
        [](const Rows& m_) { return is_positive_definite(matrix_from_rows(m_)); }, py::arg("m"));
    m.def(
        "min_eigenvalue_symmetric",
        [](const Rows& m_) { return min_eigenvalue_symmetric(matrix_from_rows(m_)); },
        py::arg("m"));
    m.def(
        "matrix_exponential_action",
        [](const Rows& a, double t, const Vector& v) {
            return matrix_exponential_action(matrix_from_rows(a), t, v);
        },
        py::arg("a"), py::arg("t"), py::arg("v"), "exp(A t) v");
    m.def(
        "is_hurwitz", [](const Rows& a) { return is_hurwitz(matrix_from_rows(a)); }, py::arg("a"));

    // feature signals
    py::class_<FeatureSignal>(m, "FeatureSignal")
        .def_static("steps", &FeatureSignal::steps, py::arg("initial"), py::arg("times"),
                    py::arg("values"))
        .def_static("sinusoids", &FeatureSignal::sinusoids, py::arg("offsets"),
                    py::arg("amplitudes"), py::arg("omegas"), py::arg("phases"))
        .def_static("state_feedback", &FeatureSignal::state_feedback, py::arg("dim"))
        .def_property_readonly("dim", [](const FeatureSignal& s) { return s.dim; })
        .def("eval", [](const FeatureSignal& s, double t) { return eval_feature(s, t); },
             py::arg("t"))
        .def("rate", [](const FeatureSignal& s, double t) { return eval_feature_rate(s, t); },
             py::arg("t"))
        .def(
            "pe_gram",
            [](const FeatureSignal& s, double t, double window, double quad_step) {
                return rows_from_matrix(pe_gram(s, t, window, quad_step));
            },
            py::arg("t"), py::arg("window"), py::arg("quad_step") = 1e-3);

    m.def("normalizing_signal", &normalizing_signal, py::arg("phi"), py::arg("mu"));
    m.def(
        "wibisono_candidate_lyapunov",
        [](const Vector& theta_err, const Vector& theta_dot, const Vector& phi,
           const Vector& phi_dot, double e_y, double gamma, double beta, double mu) {
            const CandidateLyapunov c = wibisono_candidate_lyapunov(theta_err, theta_dot, phi,
                                                                    phi_dot, e_y, gamma, beta, mu);
            return py::make_tuple(c.v, c.v_dot);
        },
        py::arg("theta_err"), py::arg("theta_dot"), py::arg("phi"), py::arg("phi_dot"),
        py::arg("e_y"), py::arg("gamma"), py::arg("beta"), py::arg("mu"),
        "Energy-style candidate certificate (V, dV/dt); the rate is sign-indeterminate "
        "under feature time variation.");

    // scenarios
    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readwrite("name", &ScenarioConfig::name)
        .def_readonly("variant", &ScenarioConfig::variant)
        .def_readonly("description", &ScenarioConfig::description)
        .def_property_readonly("model",
                               [](const ScenarioConfig& c) { return model_kind_name(c.model); })
        .def_property(
            "laws",
            [](const ScenarioConfig& c) {
                std::vector<std::string> out;
                for (LawKind l : c.laws) out.emplace_back(law_name(l));
                return out;
            },
            [](ScenarioConfig& c, const std::vector<std::string>& names) {
                c.laws.clear();
                for (const std::string& n : names) c.laws.push_back(parse_law(n));
            })
        .def_property(
            "draws", [](const ScenarioConfig& c) { return c.mc.draws; },
            [](ScenarioConfig& c, std::size_t d) { c.mc.draws = d; })
        .def_property(
            "seed", [](const ScenarioConfig& c) { return c.mc.seed; },
            [](ScenarioConfig& c, std::uint64_t s) { c.mc.seed = s; })
        .def_property(
            "step", [](const ScenarioConfig& c) { return c.grid.step; },
            [](ScenarioConfig& c, double v) { c.grid.step = v; })
        .def_property(
            "horizon", [](const ScenarioConfig& c) { return c.grid.horizon; },
            [](ScenarioConfig& c, double v) { c.grid.horizon = v; })
        .def_property(
            "gamma", [](const ScenarioConfig& c) { return c.tuner.gamma; },
            [](ScenarioConfig& c, double v) { c.tuner.gamma = v; })
        .def_property(
            "beta", [](const ScenarioConfig& c) { return c.tuner.beta; },
            [](ScenarioConfig& c, double v) { c.tuner.beta = v; })
        .def_property(
            "mu", [](const ScenarioConfig& c) { return c.tuner.mu; },
            [](ScenarioConfig& c, std::optional<double> v) { c.tuner.mu = v; });

    m.def("builtin_scenario_names", [] {
        std::vector<std::string> names;
        for (const BuiltinScenario& b : builtin_scenarios()) names.push_back(b.name);
        return names;
    });
    m.def(
        "builtin_scenario",
        [](const std::string& name, const std::string& variant) {
            const BuiltinScenario& b = find_builtin(name);
            if (variant.empty()) return b.variants.front();
            for (const ScenarioConfig& v : b.variants)
                if (v.variant == variant) return v;
            throw UnknownScenario("unknown variant '" + variant + "' of " + name);
        },
        py::arg("name"), py::arg("variant") = "");

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly(
            "status",
            [](const Trajectory& t) {
                return t.status == RunStatus::Completed ? "completed" : "diverged";
            })
        .def_property_readonly("law", [](const Trajectory& t) { return law_name(t.law); })
        .def_property_readonly("v0", [](const Trajectory& t) { return t.v0; })
        .def_property_readonly("diverged_at", [](const Trajectory& t) { return t.diverged_at; })
        .def("times", &time_series)
        .def("error_magnitude", &error_magnitude_series)
        .def("lyapunov_values",
             [](const Trajectory& t) { return sample_column(t, &TrajectorySample::lyapunov); })
        .def("regret_values",
             [](const Trajectory& t) { return sample_column(t, &TrajectorySample::regret); })
        .def("final_theta",
             [](const Trajectory& t) {
                 return t.samples.empty() ? Vector{} : t.samples.back().theta;
             })
        .def("__len__", [](const Trajectory& t) { return t.samples.size(); });

    py::class_<LawResult>(m, "LawResult")
        .def_property_readonly("law", [](const LawResult& r) { return law_name(r.law); })
        .def_readonly("trajectories", &LawResult::trajectories)
        .def_readonly("all_completed", &LawResult::all_completed)
        .def_readonly("diverged_count", &LawResult::diverged_count)
        .def_property_readonly("band", [](const LawResult& r) {
            py::dict d;
            d["t"] = r.band.t;
            d["lo"] = r.band.lo;
            d["median"] = r.band.median;
            d["hi"] = r.band.hi;
            return d;
        });

    py::class_<ScenarioResult>(m, "ScenarioResult")
        .def_readonly("laws", &ScenarioResult::laws)
        .def_readonly("rejected_draws", &ScenarioResult::rejected_draws)
        .def("law",
             [](const ScenarioResult& r, const std::string& name) -> const LawResult& {
                 for (const LawResult& lr : r.laws)
                     if (law_name(lr.law) == name) return lr;
                 throw py::key_error("no result for law " + name);
             },
             py::return_value_policy::reference_internal)
        .def_property_readonly("theta_stars", [](const ScenarioResult& r) {
            std::vector<Vector> out;
            for (const DrawInfo& d : r.draws) out.push_back(d.theta_star);
            return out;
        });

    m.def("run_scenario", &run_scenario, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
}
