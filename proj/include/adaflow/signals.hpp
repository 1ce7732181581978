#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "adaflow/linalg.hpp"

namespace adaflow {

enum class FeatureKind { PiecewiseConstant, SinusoidBank, StateFeedback };

/// Time-varying feature profile. Immutable after construction; evaluation is
/// pure. The StateFeedback kind stands for "the feature is the plant state"
/// and can only be evaluated by the simulation loop, which has the state.
struct FeatureSignal {
    FeatureKind kind = FeatureKind::PiecewiseConstant;
    std::size_t dim = 0;

    // PiecewiseConstant: value is initial_value before the first step time,
    // then step_values[k] from step_times[k] (inclusive) onwards.
    Vector initial_value;
    std::vector<double> step_times;
    std::vector<Vector> step_values;

    // SinusoidBank: channel i evaluates offsets[i] + amplitudes[i] *
    // sin(omegas[i] * t + phases[i]).
    Vector offsets, amplitudes, omegas, phases;

    static FeatureSignal steps(Vector initial, std::vector<double> times,
                               std::vector<Vector> values);
    static FeatureSignal sinusoids(Vector offsets, Vector amplitudes, Vector omegas,
                                   Vector phases);
    static FeatureSignal state_feedback(std::size_t dim);

    bool has_analytic_rate() const { return kind != FeatureKind::StateFeedback; }
};

/// phi(t). Step profiles are closed on the left of the new segment: at
/// exactly a step time the new value applies.
Vector eval_feature(const FeatureSignal& sig, double t);

/// Exact phi'(t); zero for piecewise-constant profiles away from step
/// instants. Throws NoAnalyticRate for the state-feedback kind.
Vector eval_feature_rate(const FeatureSignal& sig, double t);

/// Windowed Gram matrix int_t^{t+T} phi phi^T dtau by composite trapezoid at
/// quad_step. Symmetric positive semidefinite by construction. Callers test
/// persistence of excitation via min_eigenvalue_symmetric on the result.
Matrix pe_gram(const FeatureSignal& sig, double t, double t_window, double quad_step);

/// Scalar reference command, zero or a constant from an onset time onwards.
struct CommandSignal {
    enum class Kind { Zero, ConstantAfter };
    Kind kind = Kind::Zero;
    double onset = 0.0;
    double value = 0.0;

    static CommandSignal zero() { return {}; }
    static CommandSignal constant_after(double onset, double value) {
        return {Kind::ConstantAfter, onset, value};
    }
};

double eval_command(const CommandSignal& cmd, double t);

}  // namespace adaflow
