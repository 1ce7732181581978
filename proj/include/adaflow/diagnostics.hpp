#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "adaflow/integrator.hpp"
#include "adaflow/linalg.hpp"
#include "adaflow/tuners.hpp"

namespace adaflow {

/// One logged point of a simulation run. Columns not meaningful for the
/// model/law combination stay empty (vectors) or NaN-free defaults; the
/// booleans on Trajectory say which ones are live.
struct TrajectorySample {
    double t = 0.0;
    Vector theta;
    Vector vartheta;   // higher-order law only
    Vector theta_dot;  // baseline law only
    double e_y = 0.0;  // regression output error
    Vector e;          // model tracking error (dynamical model)
    Vector x, xhat;
    double u = 0.0;
    double z_cmd = 0.0;
    Vector phi;
    double lyapunov = 0.0;
    double rate_bound = 0.0;
    double regret = 0.0;
};

struct Trajectory {
    RunStatus status = RunStatus::Completed;
    LawKind law = LawKind::FirstOrder;
    bool mrac = false;
    bool has_lyapunov = false;  // false for the baseline law (no certificate)
    double v0 = 0.0;            // Lyapunov value at t0 when has_lyapunov
    std::optional<double> diverged_at;
    std::vector<TrajectorySample> samples;
};

/// Lyapunov certificate for the higher-order regression law:
/// V = (1/gamma) ||vartheta - theta_star||^2 + (1/gamma) ||theta - vartheta||^2
double lyapunov_regression(const Vector& theta, const Vector& vartheta, const Vector& theta_star,
                           double gamma);

/// Upper bound on dV/dt under the default mu = 2 gamma / beta:
/// -(2 beta/gamma) ||theta-vartheta||^2 - e_y^2 - (|e_y| - 2||theta-vartheta|| ||phi||)^2
double lyapunov_regression_rate_bound(const Vector& theta, const Vector& vartheta,
                                      const Vector& phi, double e_y, double gamma, double beta);

/// V = (1/gamma)||vartheta-theta_star||^2 + (1/gamma)||theta-vartheta||^2 + e.Pe
double lyapunov_mrac(const Vector& theta, const Vector& vartheta, const Vector& theta_star,
                     const Vector& e, const Matrix& p, double gamma);

/// Bound under mu = 2 gamma ||Pb||^2 / beta and Q = 2I:
/// -(2 beta/gamma)||theta-vartheta||^2 - ||e||^2 - (||e|| - 2||Pb|| ||theta-vartheta|| ||phi||)^2
double lyapunov_mrac_rate_bound(const Vector& theta, const Vector& vartheta, const Vector& phi,
                                const Vector& e, const Vector& pb, double gamma, double beta);

/// First-order laws' Lyapunov values and exact rates.
double first_order_regression_lyapunov(const Vector& theta, const Vector& theta_star,
                                       double gamma);  // (1/2 gamma) theta_err.theta_err
double first_order_mrac_lyapunov(const Vector& theta, const Vector& theta_star, const Vector& e,
                                 const Matrix& p, double gamma);  // e.Pe + (1/gamma)err.err

/// Trapezoid integral of the squared error over the logged samples; equals
/// the final value of the per-sample regret column by construction.
double continuous_regret(const Trajectory& traj);

/// Energy-style candidate certificate (kinetic + potential, scaled by the
/// normalizing signal) and its closed-form rate along the normalized
/// second-order dynamics. The rate is sign-indeterminate under feature time
/// variation; it exists here to demonstrate exactly that.
struct CandidateLyapunov {
    double v = 0.0;
    double v_dot = 0.0;
};
CandidateLyapunov wibisono_candidate_lyapunov(const Vector& theta_err, const Vector& theta_dot,
                                              const Vector& phi, const Vector& phi_dot,
                                              double e_y, double gamma, double beta, double mu);

enum class LpKind { L2, LInf };

/// Trapezoid L2 norm or running max over a sampled signal.
double lp_norm(std::span<const double> t, std::span<const double> values, LpKind p);

/// max |signal| over the final tail_fraction of the time window <= tol.
bool asymptotic_decay_check(std::span<const double> t, std::span<const double> values,
                            double tail_fraction, double tol);

/// Sign changes of a sampled scalar, ignoring |v| < deadband; used for the
/// oscillation count of the pitch-rate error derivative.
std::size_t zero_crossing_count(std::span<const double> values, double deadband = 1e-9);

}  // namespace adaflow
