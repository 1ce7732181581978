#pragma once

#include "adaflow/linalg.hpp"
#include "adaflow/signals.hpp"

namespace adaflow {

/// Algebraic error model: scalar output y(t) = theta_star . phi(t), feature
/// known, parameter unknown.
struct RegressionModel {
    Vector theta_star;
    FeatureSignal feature;
};

/// e_y = (theta - theta_star) . phi(t)
double regression_output_error(const RegressionModel& m, const Vector& theta, double t);

/// Dynamical error model: plant and reference model sharing the Hurwitz
/// closed-loop matrix, with a matched parametric uncertainty on the input
/// path. P solves A_m^T P + P A_m = -Q.
struct PlantModel {
    Matrix a_m;
    Matrix b;    // n x 1
    Matrix b_z;  // n x 1
    Vector theta_star;
    Matrix q;
    Matrix p;
    CommandSignal command;

    Vector pb() const;  // P * b as a vector
    Vector b_vec() const;
    Vector b_z_vec() const;
};

struct SystemState {
    Vector x, xhat;
};

struct SystemDerivative {
    Vector x_dot, xhat_dot;
};

/// x'    = A_m x    + b (u + theta_star . phi) + b_z z_cmd(t)
/// xhat' = A_m xhat + b (u + theta      . phi) + b_z z_cmd(t)
///
/// With the adaptive input u = -theta . phi the estimator term cancels and
/// the tracking error obeys e' = A_m e + b (theta - theta_star) . phi.
SystemDerivative plant_rhs(const PlantModel& m, const SystemState& s, const Vector& theta,
                           double u, double t, const Vector& phi);

/// Linearized longitudinal short-period aircraft dynamics augmented with an
/// integrated pitch-rate tracking error, the worked MRAC plant of this
/// project. gain_scale multiplies the nominal feedback gain (the unknown
/// parameter); draws that destabilize A_m throw NotHurwitz.
PlantModel build_f16_plant(double gain_scale = 1.0,
                           CommandSignal command = CommandSignal::constant_after(5.0, 1.0),
                           double q_scale = 2.0);

/// Nominal F-16 state-feedback gain (LQR result, hard-coded).
Vector f16_nominal_gain();

}  // namespace adaflow
