#include "adaflow/signals.hpp"

#include <cmath>
#include <stdexcept>

namespace adaflow {

FeatureSignal FeatureSignal::steps(Vector initial, std::vector<double> times,
                                   std::vector<Vector> values) {
    if (times.size() != values.size())
        throw DimensionMismatch("FeatureSignal::steps: times/values count mismatch");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw std::invalid_argument("FeatureSignal::steps: step times must increase");
    const std::size_t d = initial.size();
    for (const Vector& v : values)
        if (v.size() != d) throw DimensionMismatch("FeatureSignal::steps: value dim mismatch");
    FeatureSignal s;
    s.kind = FeatureKind::PiecewiseConstant;
    s.dim = d;
    s.initial_value = std::move(initial);
    s.step_times = std::move(times);
    s.step_values = std::move(values);
    return s;
}

FeatureSignal FeatureSignal::sinusoids(Vector offsets, Vector amplitudes, Vector omegas,
                                       Vector phases) {
    const std::size_t d = offsets.size();
    if (amplitudes.size() != d || omegas.size() != d || phases.size() != d)
        throw DimensionMismatch("FeatureSignal::sinusoids: channel parameter count mismatch");
    FeatureSignal s;
    s.kind = FeatureKind::SinusoidBank;
    s.dim = d;
    s.offsets = std::move(offsets);
    s.amplitudes = std::move(amplitudes);
    s.omegas = std::move(omegas);
    s.phases = std::move(phases);
    return s;
}

FeatureSignal FeatureSignal::state_feedback(std::size_t dim) {
    FeatureSignal s;
    s.kind = FeatureKind::StateFeedback;
    s.dim = dim;
    return s;
}

Vector eval_feature(const FeatureSignal& sig, double t) {
    switch (sig.kind) {
        case FeatureKind::PiecewiseConstant: {
            const Vector* current = &sig.initial_value;
            for (std::size_t k = 0; k < sig.step_times.size(); ++k) {
                if (t >= sig.step_times[k]) current = &sig.step_values[k];
                else break;
            }
            return *current;
        }
        case FeatureKind::SinusoidBank: {
            Vector v(sig.dim);
            for (std::size_t i = 0; i < sig.dim; ++i)
                v[i] = sig.offsets[i] +
                       sig.amplitudes[i] * std::sin(sig.omegas[i] * t + sig.phases[i]);
            return v;
        }
        case FeatureKind::StateFeedback:
            throw std::logic_error(
                "eval_feature: state-feedback features are evaluated from the plant state");
    }
    throw std::logic_error("eval_feature: unreachable");
}

Vector eval_feature_rate(const FeatureSignal& sig, double t) {
    switch (sig.kind) {
        case FeatureKind::PiecewiseConstant:
            return Vector(sig.dim, 0.0);
        case FeatureKind::SinusoidBank: {
            Vector v(sig.dim);
            for (std::size_t i = 0; i < sig.dim; ++i)
                v[i] = sig.amplitudes[i] * sig.omegas[i] *
                       std::cos(sig.omegas[i] * t + sig.phases[i]);
            return v;
        }
        case FeatureKind::StateFeedback:
            throw NoAnalyticRate("eval_feature_rate: state-feedback feature has no closed form");
    }
    throw std::logic_error("eval_feature_rate: unreachable");
}

Matrix pe_gram(const FeatureSignal& sig, double t, double t_window, double quad_step) {
    if (!(t_window > 0.0)) throw std::invalid_argument("pe_gram: window must be > 0");
    if (!(quad_step > 0.0)) throw std::invalid_argument("pe_gram: quad_step must be > 0");
    const auto m = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(t_window / quad_step)));
    const double h = t_window / static_cast<double>(m);

    Matrix gram(sig.dim, sig.dim);
    for (std::size_t k = 0; k <= m; ++k) {
        const double w = (k == 0 || k == m) ? 0.5 * h : h;
        const Vector phi = eval_feature(sig, t + static_cast<double>(k) * h);
        for (std::size_t i = 0; i < sig.dim; ++i)
            for (std::size_t j = 0; j < sig.dim; ++j) gram(i, j) += w * phi[i] * phi[j];
    }
    return gram;
}

double eval_command(const CommandSignal& cmd, double t) {
    if (cmd.kind == CommandSignal::Kind::Zero) return 0.0;
    return t >= cmd.onset ? cmd.value : 0.0;
}

}  // namespace adaflow
