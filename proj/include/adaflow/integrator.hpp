#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "adaflow/linalg.hpp"

namespace adaflow {

enum class RunStatus { Completed, Diverged };

/// Derivative evaluation over a flat state vector: rhs(t, y, dydt).
using RhsFn = std::function<void(double, const Vector&, Vector&)>;

/// Called at the initial state, every log_every-th accepted step, and at the
/// final accepted step: observer(step_index, t, y).
using ObserverFn = std::function<void(std::size_t, double, const Vector&)>;

struct IntegrationConfig {
    double t0 = 0.0;
    double step = 1e-3;
    double horizon = 0.0;       // > 0, integration runs over [t0, t0 + horizon]
    std::size_t log_every = 1;  // >= 1
    double divergence_threshold = 1e6;

    /// Optional extra magnitude tested against the threshold after every
    /// step (e.g. |e_y| or a state norm), on top of the per-component check.
    std::function<double(double, const Vector&)> divergence_magnitude;

    std::size_t total_steps() const;
    void validate() const;
};

struct IntegrationOutcome {
    RunStatus status = RunStatus::Completed;
    std::size_t steps_taken = 0;
    double end_time = 0.0;
    std::optional<double> diverged_at;
};

/// Classic fixed-step RK4. Time stamps are t0 + k*step from the integer step
/// count, never accumulated. Terminates early with Diverged when any state
/// component exceeds the threshold in magnitude or goes non-finite; throws
/// NonFiniteDerivative if the rhs produces NaN/Inf from a finite state.
IntegrationOutcome integrate(const RhsFn& rhs, Vector y0, const IntegrationConfig& cfg,
                             const ObserverFn& observer);

/// Richardson estimate of the method order from terminal states at step
/// sizes in geometric progression (>= 3 of them, largest first). Returns
/// nullopt when the terminal differences are at noise level (nothing to
/// estimate from, e.g. a constant trajectory).
std::optional<double> convergence_order_estimate(const RhsFn& rhs, const Vector& y0, double t0,
                                                 double horizon, std::span<const double> steps);

}  // namespace adaflow
