#include "adaflow/models.hpp"

namespace adaflow {

double regression_output_error(const RegressionModel& m, const Vector& theta, double t) {
    if (theta.size() != m.theta_star.size())
        throw DimensionMismatch("regression_output_error: theta dim != theta_star dim");
    return dot(theta - m.theta_star, eval_feature(m.feature, t));
}

Vector PlantModel::pb() const { return mat_vec(p, b_vec()); }

Vector PlantModel::b_vec() const {
    Vector v(b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i) v[i] = b(i, 0);
    return v;
}

Vector PlantModel::b_z_vec() const {
    Vector v(b_z.rows());
    for (std::size_t i = 0; i < b_z.rows(); ++i) v[i] = b_z(i, 0);
    return v;
}

SystemDerivative plant_rhs(const PlantModel& m, const SystemState& s, const Vector& theta,
                           double u, double t, const Vector& phi) {
    const std::size_t n = m.a_m.rows();
    if (s.x.size() != n || s.xhat.size() != n)
        throw DimensionMismatch("plant_rhs: state dim != plant dim");
    if (theta.size() != m.theta_star.size() || phi.size() != theta.size())
        throw DimensionMismatch("plant_rhs: theta/phi dim mismatch");

    const double z = eval_command(m.command, t);
    const Vector b = m.b_vec();
    const Vector bz = m.b_z_vec();

    SystemDerivative d;
    d.x_dot = mat_vec(m.a_m, s.x);
    d.xhat_dot = mat_vec(m.a_m, s.xhat);
    const double plant_input = u + dot(m.theta_star, phi);
    const double est_input = u + dot(theta, phi);
    for (std::size_t i = 0; i < n; ++i) {
        d.x_dot[i] += b[i] * plant_input + bz[i] * z;
        d.xhat_dot[i] += b[i] * est_input + bz[i] * z;
    }
    return d;
}

Vector f16_nominal_gain() { return {0.1965, -0.3835, -1.0}; }

PlantModel build_f16_plant(double gain_scale, CommandSignal command, double q_scale) {
    // Short-period dynamics (angle of attack, pitch rate) plus the integral
    // of the pitch-rate tracking error as a third state.
    const Matrix a(3, 3,
                   {-0.6398, 0.9378, 0.0,
                    -1.5679, -0.8791, 0.0,
                    0.0, 1.0, 0.0});
    const Matrix b(3, 1, {-0.0777, -6.5121, 0.0});
    const Matrix b_z(3, 1, {0.0, 0.0, -1.0});

    PlantModel m;
    m.theta_star = gain_scale * f16_nominal_gain();
    m.b = b;
    m.b_z = b_z;

    // A_m = A - b theta_star^T
    Matrix a_m = a;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a_m(i, j) -= b(i, 0) * m.theta_star[j];
    if (!is_hurwitz(a_m))
        throw NotHurwitz("build_f16_plant: A_m unstable for gain scale " +
                         std::to_string(gain_scale));
    m.a_m = a_m;
    m.q = q_scale * Matrix::identity(3);
    m.p = solve_lyapunov(m.a_m, m.q);
    m.command = command;
    return m;
}

}  // namespace adaflow
