#pragma once

#include <stdexcept>
#include <string>

namespace adaflow {

/// Vector/matrix operands whose shapes do not agree.
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A matrix required to be symmetric is not, beyond tolerance.
struct NotSymmetric : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A matrix required to be Hurwitz has an eigenvalue with real part >= 0.
struct NotHurwitz : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The linear system behind a solver is numerically singular.
struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A matrix required to be positive definite is not.
struct NotPositiveDefinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The feature profile has no closed-form time derivative.
struct NoAnalyticRate : std::logic_error {
    using std::logic_error::logic_error;
};

/// A finite-difference check was handed fewer samples than it needs.
struct GridTooCoarse : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The ODE right-hand side produced NaN/Inf at a finite state.
struct NonFiniteDerivative : std::runtime_error {
    explicit NonFiniteDerivative(double at_time)
        : std::runtime_error("right-hand side returned a non-finite derivative at t = " +
                             std::to_string(at_time)),
          t(at_time) {}
    double t;
};

/// Base for user-facing configuration problems (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownScenario : ConfigError {
    using ConfigError::ConfigError;
};

struct BadOverrideKey : ConfigError {
    using ConfigError::ConfigError;
};

struct UnwritableOutput : ConfigError {
    using ConfigError::ConfigError;
};

struct MissingManifest : ConfigError {
    using ConfigError::ConfigError;
};

struct CorruptCsv : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace adaflow
