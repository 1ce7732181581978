#include "adaflow/tuners.hpp"

#include <cmath>
#include <stdexcept>

namespace adaflow {

const char* law_name(LawKind law) {
    switch (law) {
        case LawKind::FirstOrder: return "first_order";
        case LawKind::HigherOrder: return "higher_order";
        case LawKind::WibisonoBaseline: return "wibisono";
    }
    return "unknown";
}

void TunerConfig::validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("TunerConfig: gamma must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("TunerConfig: beta must be > 0");
    if (mu && !(*mu > 0.0)) throw std::invalid_argument("TunerConfig: mu must be > 0");
    if (!(wibisono_p > 0.0)) throw std::invalid_argument("TunerConfig: p must be > 0");
    if (wibisono_c && !(*wibisono_c > 0.0))
        throw std::invalid_argument("TunerConfig: C must be > 0");
    if (!(wibisono_t0 > 0.0)) throw std::invalid_argument("TunerConfig: t0 shift must be > 0");
}

double normalizing_signal(const Vector& phi, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("normalizing_signal: mu must be > 0");
    return 1.0 + mu * dot(phi, phi);
}

TunerDerivative first_order_regression_rhs(const TunerState& s, const Vector& phi, double e_y,
                                           const TunerConfig& cfg) {
    if (s.theta.size() != phi.size())
        throw DimensionMismatch("first_order_regression_rhs: theta/phi dim mismatch");
    TunerDerivative d;
    d.theta_dot = (-cfg.gamma * e_y) * phi;
    return d;
}

TunerDerivative higher_order_regression_rhs(const TunerState& s, const Vector& phi, double e_y,
                                            const TunerConfig& cfg) {
    if (s.theta.size() != phi.size() || s.vartheta.size() != phi.size())
        throw DimensionMismatch("higher_order_regression_rhs: state/phi dim mismatch");
    const double n_t = normalizing_signal(phi, cfg.resolved_mu_regression());
    TunerDerivative d;
    d.vartheta_dot = (-cfg.gamma * e_y) * phi;
    d.theta_dot = (-cfg.beta * n_t) * (s.theta - s.vartheta);
    return d;
}

TunerDerivative first_order_mrac_rhs(const TunerState& s, const Vector& phi, const Vector& e,
                                     const Vector& pb, const TunerConfig& cfg) {
    if (s.theta.size() != phi.size())
        throw DimensionMismatch("first_order_mrac_rhs: theta/phi dim mismatch");
    if (e.size() != pb.size()) throw DimensionMismatch("first_order_mrac_rhs: e/Pb dim mismatch");
    TunerDerivative d;
    d.theta_dot = (-cfg.gamma * dot(e, pb)) * phi;
    return d;
}

TunerDerivative higher_order_mrac_rhs(const TunerState& s, const Vector& phi, const Vector& e,
                                      const Vector& pb, const TunerConfig& cfg) {
    if (s.theta.size() != phi.size() || s.vartheta.size() != phi.size())
        throw DimensionMismatch("higher_order_mrac_rhs: state/phi dim mismatch");
    if (e.size() != pb.size()) throw DimensionMismatch("higher_order_mrac_rhs: e/Pb dim mismatch");
    const double n_t = normalizing_signal(phi, cfg.resolved_mu_mrac(norm2(pb)));
    TunerDerivative d;
    d.vartheta_dot = (-cfg.gamma * dot(e, pb)) * phi;
    d.theta_dot = (-cfg.beta * n_t) * (s.theta - s.vartheta);
    return d;
}

TunerDerivative wibisono_baseline_rhs(const TunerState& s, const Vector& phi, double e_y,
                                      double t, const TunerConfig& cfg) {
    if (s.theta.size() != phi.size() || s.theta_dot.size() != phi.size())
        throw DimensionMismatch("wibisono_baseline_rhs: state/phi dim mismatch");
    if (!(t > 0.0)) throw std::invalid_argument("wibisono_baseline_rhs: t must be > 0");
    const double p = cfg.wibisono_p;
    const double c = cfg.resolved_wibisono_c();
    const double damping = (p + 1.0) / t;
    const double force = c * p * p * std::pow(t, p - 2.0);
    TunerDerivative d;
    d.theta_dot = s.theta_dot;
    d.theta_ddot = Vector(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i)
        d.theta_ddot[i] = -damping * s.theta_dot[i] - force * phi[i] * e_y;
    return d;
}

double second_order_form_check(const TunerConfig& cfg, const TrajectorySegment& seg,
                               std::optional<double> mu_override) {
    const std::size_t n = seg.t.size();
    if (n < 5) throw GridTooCoarse("second_order_form_check: need at least 5 samples");
    if (seg.theta.size() != n || seg.phi.size() != n || seg.phi_dot.size() != n ||
        seg.err.size() != n)
        throw DimensionMismatch("second_order_form_check: column lengths disagree");

    const double h = seg.t[1] - seg.t[0];
    for (std::size_t k = 1; k < n; ++k)
        if (std::abs(seg.t[k] - seg.t[k - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw std::invalid_argument("second_order_form_check: grid not uniform");

    const double mu = mu_override ? *mu_override : cfg.resolved_mu_regression();
    const std::size_t dim = seg.theta.front().size();

    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double n_t = normalizing_signal(seg.phi[k], mu);
        const double n_dot = 2.0 * mu * dot(seg.phi[k], seg.phi_dot[k]);
        const double damping = cfg.beta * n_t - n_dot / n_t;
        const double force = cfg.gamma * cfg.beta * n_t * seg.err[k];
        for (std::size_t i = 0; i < dim; ++i) {
            const double dd =
                (seg.theta[k + 1][i] - 2.0 * seg.theta[k][i] + seg.theta[k - 1][i]) / (h * h);
            const double d1 = (seg.theta[k + 1][i] - seg.theta[k - 1][i]) / (2.0 * h);
            worst = std::max(worst, std::abs(dd + damping * d1 + force * seg.phi[k][i]));
        }
    }
    return worst;
}

}  // namespace adaflow
