#include "adaflow/integrator.hpp"

#include <cmath>
#include <stdexcept>

namespace adaflow {

std::size_t IntegrationConfig::total_steps() const {
    return static_cast<std::size_t>(std::llround(horizon / step));
}

void IntegrationConfig::validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("IntegrationConfig: step must be > 0");
    if (!(horizon >= step)) throw std::invalid_argument("IntegrationConfig: horizon < step");
    if (log_every < 1) throw std::invalid_argument("IntegrationConfig: log_every must be >= 1");
    if (!(divergence_threshold > 0.0))
        throw std::invalid_argument("IntegrationConfig: divergence threshold must be > 0");
}

namespace {

bool finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

bool within(const Vector& v, double bound) {
    for (double x : v)
        if (!(std::abs(x) <= bound)) return false;
    return true;
}

}  // namespace

IntegrationOutcome integrate(const RhsFn& rhs, Vector y, const IntegrationConfig& cfg,
                             const ObserverFn& observer) {
    cfg.validate();
    const std::size_t n_steps = cfg.total_steps();
    const double h = cfg.step;
    const std::size_t dim = y.size();

    Vector k1(dim), k2(dim), k3(dim), k4(dim), stage(dim);
    IntegrationOutcome out;

    if (observer) observer(0, cfg.t0, y);

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = cfg.t0 + static_cast<double>(k) * h;

        rhs(t, y, k1);
        for (std::size_t i = 0; i < dim; ++i) stage[i] = y[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, stage, k2);
        for (std::size_t i = 0; i < dim; ++i) stage[i] = y[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, stage, k3);
        for (std::size_t i = 0; i < dim; ++i) stage[i] = y[i] + h * k3[i];
        rhs(t + h, stage, k4);

        if (!finite(k1) || !finite(k2) || !finite(k3) || !finite(k4))
            throw NonFiniteDerivative(t);

        for (std::size_t i = 0; i < dim; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        const double t_next = cfg.t0 + static_cast<double>(k + 1) * h;
        out.steps_taken = k + 1;
        out.end_time = t_next;

        if (!finite(y)) {
            // overflowed within a single step; the offending sample is not
            // emitted, the previous one closes the trajectory
            out.status = RunStatus::Diverged;
            out.diverged_at = t_next;
            return out;
        }
        const bool over_threshold =
            !within(y, cfg.divergence_threshold) ||
            (cfg.divergence_magnitude &&
             !(std::abs(cfg.divergence_magnitude(t_next, y)) <= cfg.divergence_threshold));
        if (over_threshold) {
            out.status = RunStatus::Diverged;
            out.diverged_at = t_next;
            if (observer) observer(k + 1, t_next, y);
            return out;
        }
        if (observer && ((k + 1) % cfg.log_every == 0 || k + 1 == n_steps))
            observer(k + 1, t_next, y);
    }
    return out;
}

std::optional<double> convergence_order_estimate(const RhsFn& rhs, const Vector& y0, double t0,
                                                 double horizon, std::span<const double> steps) {
    if (steps.size() < 3)
        throw std::invalid_argument("convergence_order_estimate: need >= 3 step sizes");
    const double ratio = steps[0] / steps[1];
    for (std::size_t i = 1; i + 1 < steps.size(); ++i)
        if (std::abs(steps[i] / steps[i + 1] - ratio) > 1e-9 * ratio)
            throw std::invalid_argument("convergence_order_estimate: steps not geometric");

    std::vector<Vector> terminals;
    for (double h : steps) {
        IntegrationConfig cfg;
        cfg.t0 = t0;
        cfg.step = h;
        cfg.horizon = horizon;
        cfg.log_every = cfg.total_steps();  // only endpoints matter
        Vector last;
        integrate(rhs, y0, cfg, [&last](std::size_t, double, const Vector& y) { last = y; });
        terminals.push_back(std::move(last));
    }

    double scale = 1.0;
    for (const Vector& v : terminals)
        for (double x : v) scale = std::max(scale, std::abs(x));

    std::vector<double> orders;
    for (std::size_t i = 0; i + 2 < terminals.size(); ++i) {
        const double d1 = norm2(terminals[i] - terminals[i + 1]);
        const double d2 = norm2(terminals[i + 1] - terminals[i + 2]);
        if (d1 < 1e-14 * scale || d2 < 1e-14 * scale) continue;  // noise floor
        orders.push_back(std::log(d1 / d2) / std::log(ratio));
    }
    if (orders.empty()) return std::nullopt;
    double mean = 0.0;
    for (double o : orders) mean += o;
    return mean / static_cast<double>(orders.size());
}

}  // namespace adaflow
