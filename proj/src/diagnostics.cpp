#include "adaflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adaflow {

double lyapunov_regression(const Vector& theta, const Vector& vartheta, const Vector& theta_star,
                           double gamma) {
    if (theta.size() != theta_star.size() || vartheta.size() != theta_star.size())
        throw DimensionMismatch("lyapunov_regression: dim mismatch");
    const Vector a = vartheta - theta_star;
    const Vector b = theta - vartheta;
    return (dot(a, a) + dot(b, b)) / gamma;
}

double lyapunov_regression_rate_bound(const Vector& theta, const Vector& vartheta,
                                      const Vector& phi, double e_y, double gamma, double beta) {
    const Vector d = theta - vartheta;
    const double dn = norm2(d);
    const double cross = std::abs(e_y) - 2.0 * dn * norm2(phi);
    return -(2.0 * beta / gamma) * dn * dn - e_y * e_y - cross * cross;
}

double lyapunov_mrac(const Vector& theta, const Vector& vartheta, const Vector& theta_star,
                     const Vector& e, const Matrix& p, double gamma) {
    if (e.size() != p.rows()) throw DimensionMismatch("lyapunov_mrac: e dim != P dim");
    if (!is_positive_definite(p)) throw NotPositiveDefinite("lyapunov_mrac: P not PD");
    return lyapunov_regression(theta, vartheta, theta_star, gamma) + dot(e, mat_vec(p, e));
}

double lyapunov_mrac_rate_bound(const Vector& theta, const Vector& vartheta, const Vector& phi,
                                const Vector& e, const Vector& pb, double gamma, double beta) {
    const Vector d = theta - vartheta;
    const double dn = norm2(d);
    const double en = norm2(e);
    const double cross = en - 2.0 * norm2(pb) * dn * norm2(phi);
    return -(2.0 * beta / gamma) * dn * dn - en * en - cross * cross;
}

double first_order_regression_lyapunov(const Vector& theta, const Vector& theta_star,
                                       double gamma) {
    const Vector err = theta - theta_star;
    return dot(err, err) / (2.0 * gamma);
}

double first_order_mrac_lyapunov(const Vector& theta, const Vector& theta_star, const Vector& e,
                                 const Matrix& p, double gamma) {
    const Vector err = theta - theta_star;
    return dot(e, mat_vec(p, e)) + dot(err, err) / gamma;
}

double continuous_regret(const Trajectory& traj) {
    double acc = 0.0;
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
        const auto& a = traj.samples[k - 1];
        const auto& b = traj.samples[k];
        const double fa = traj.mrac ? dot(a.e, a.e) : a.e_y * a.e_y;
        const double fb = traj.mrac ? dot(b.e, b.e) : b.e_y * b.e_y;
        acc += 0.5 * (b.t - a.t) * (fa + fb);
    }
    return acc;
}

CandidateLyapunov wibisono_candidate_lyapunov(const Vector& theta_err, const Vector& theta_dot,
                                              const Vector& phi, const Vector& phi_dot,
                                              double e_y, double gamma, double beta, double mu) {
    if (theta_err.size() != theta_dot.size() || phi.size() != theta_err.size() ||
        phi_dot.size() != phi.size())
        throw DimensionMismatch("wibisono_candidate_lyapunov: dim mismatch");
    const double n_t = normalizing_signal(phi, mu);
    Vector mixed(theta_err.size());
    for (std::size_t i = 0; i < mixed.size(); ++i)
        mixed[i] = theta_err[i] + theta_dot[i] / (beta * n_t);
    CandidateLyapunov c;
    c.v = 0.5 * dot(mixed, mixed) + (gamma / (beta * n_t)) * 0.5 * e_y * e_y;
    c.v_dot = -gamma * e_y * e_y * (1.0 + mu * dot(phi, phi_dot) / (beta * n_t * n_t)) +
              (gamma / (beta * n_t)) * e_y * dot(theta_err, phi_dot);
    return c;
}

double lp_norm(std::span<const double> t, std::span<const double> values, LpKind p) {
    if (t.size() != values.size()) throw DimensionMismatch("lp_norm: t/values length mismatch");
    if (p == LpKind::LInf) {
        double mx = 0.0;
        for (double v : values) mx = std::max(mx, std::abs(v));
        return mx;
    }
    double acc = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k)
        acc += 0.5 * (t[k] - t[k - 1]) *
               (values[k - 1] * values[k - 1] + values[k] * values[k]);
    return std::sqrt(acc);
}

bool asymptotic_decay_check(std::span<const double> t, std::span<const double> values,
                            double tail_fraction, double tol) {
    if (t.size() != values.size())
        throw DimensionMismatch("asymptotic_decay_check: t/values length mismatch");
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw std::invalid_argument("asymptotic_decay_check: tail_fraction in (0,1)");
    if (t.empty()) return true;
    const double start = t.back() - tail_fraction * (t.back() - t.front());
    for (std::size_t k = 0; k < t.size(); ++k)
        if (t[k] >= start && std::abs(values[k]) > tol) return false;
    return true;
}

std::size_t zero_crossing_count(std::span<const double> values, double deadband) {
    std::size_t count = 0;
    double prev = 0.0;
    for (double v : values) {
        if (std::abs(v) <= deadband) continue;
        if (prev != 0.0 && std::signbit(v) != std::signbit(prev)) ++count;
        prev = v;
    }
    return count;
}

}  // namespace adaflow
