#pragma once

#include <optional>
#include <vector>

#include "adaflow/linalg.hpp"

namespace adaflow {

enum class LawKind { FirstOrder, HigherOrder, WibisonoBaseline };

const char* law_name(LawKind law);

/// Hyperparameters shared by all update laws. mu and wibisono_c left unset
/// resolve to the stability-proof defaults (mu = 2*gamma/beta for regression,
/// 2*gamma*||Pb||^2/beta for the dynamical model; C = gamma*beta/p^2).
struct TunerConfig {
    double gamma = 0.1;
    double beta = 1.0;
    std::optional<double> mu;
    LawKind law = LawKind::HigherOrder;

    double wibisono_p = 2.0;
    std::optional<double> wibisono_c;
    double wibisono_t0 = 1e-2;  // clock shift that dodges the 1/t singularity

    double resolved_mu_regression() const { return mu ? *mu : 2.0 * gamma / beta; }
    double resolved_mu_mrac(double pb_norm) const {
        return mu ? *mu : 2.0 * gamma * pb_norm * pb_norm / beta;
    }
    bool mu_is_default() const { return !mu.has_value(); }
    double resolved_wibisono_c() const {
        return wibisono_c ? *wibisono_c : gamma * beta / (wibisono_p * wibisono_p);
    }
    void validate() const;
};

/// Stacked learner state. vartheta is live only for the higher-order law,
/// theta_dot only for the second-order baseline; both are empty otherwise.
struct TunerState {
    Vector theta;
    Vector vartheta;
    Vector theta_dot;
};

struct TunerDerivative {
    Vector theta_dot;
    Vector vartheta_dot;
    Vector theta_ddot;
};

/// N_t = 1 + mu * phi.phi  (always >= 1)
double normalizing_signal(const Vector& phi, double mu);

/// theta' = -gamma * phi * e_y
TunerDerivative first_order_regression_rhs(const TunerState& s, const Vector& phi, double e_y,
                                           const TunerConfig& cfg);

/// vartheta' = -gamma * phi * e_y
/// theta'    = -beta * (theta - vartheta) * N_t
TunerDerivative higher_order_regression_rhs(const TunerState& s, const Vector& phi, double e_y,
                                            const TunerConfig& cfg);

/// theta' = -gamma * phi * (e . Pb)
TunerDerivative first_order_mrac_rhs(const TunerState& s, const Vector& phi, const Vector& e,
                                     const Vector& pb, const TunerConfig& cfg);

/// vartheta' = -gamma * phi * (e . Pb)
/// theta'    = -beta * (theta - vartheta) * N_t, with the MRAC default mu.
TunerDerivative higher_order_mrac_rhs(const TunerState& s, const Vector& phi, const Vector& e,
                                      const Vector& pb, const TunerConfig& cfg);

/// Accelerated-gradient baseline in first-order form:
/// theta'     = theta_dot
/// theta_dot' = -((p+1)/t) theta_dot - C p^2 t^(p-2) phi e_y
/// Requires t > 0; callers apply the wibisono_t0 clock shift.
TunerDerivative wibisono_baseline_rhs(const TunerState& s, const Vector& phi, double e_y,
                                      double t, const TunerConfig& cfg);

/// Uniformly sampled trajectory slice for the finite-difference consistency
/// check below. err is e_y for regression or e.Pb for the dynamical model.
struct TrajectorySegment {
    std::vector<double> t;
    std::vector<Vector> theta;
    std::vector<Vector> phi;
    std::vector<Vector> phi_dot;
    std::vector<double> err;
};

/// Residual of the equivalent second-order ODE
///   theta'' + [beta N_t - N_t'/N_t] theta' + gamma beta N_t phi err = 0
/// evaluated with central differences on the segment; returns the max
/// componentwise violation over interior points. Verifies that the two-ODE
/// implementation realizes the second-order dynamics; O(h^2) in the grid.
/// Throws GridTooCoarse below 5 samples.
double second_order_form_check(const TunerConfig& cfg, const TrajectorySegment& seg,
                               std::optional<double> mu_override = std::nullopt);

}  // namespace adaflow
