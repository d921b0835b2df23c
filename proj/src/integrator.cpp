#include "ecoepi/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ecoepi/error.hpp"

namespace ecoepi {

void IntegrationConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0; };
    if (!positive(rel_tol) || !positive(abs_tol) || !positive(t_max) || !positive(initial_step) ||
        !positive(max_step)) {
        throw InvalidArgument("integration settings must be positive and finite");
    }
    if (rel_tol < 1e-14) throw InvalidArgument("rel_tol must be at least 1e-14");
}

std::string_view to_string(Termination t) noexcept {
    switch (t) {
    case Termination::reached_t_max: return "reached_t_max";
    case Termination::converged: return "converged";
    case Termination::step_failure: return "step_failure";
    }
    return "?";
}

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Difference between 5th and embedded 4th order weights.
constexpr double d1 = 71.0 / 57600, d3 = -71.0 / 16695, d4 = 71.0 / 1920, d5 = -17253.0 / 339200,
                 d6 = 22.0 / 525, d7 = -1.0 / 40;

constexpr double min_step = 1e-14;
constexpr double safety = 0.9;
constexpr double min_factor = 0.2;
constexpr double max_factor = 10.0;
constexpr double pi_alpha = 0.7 / 5;
constexpr double pi_beta = 0.4 / 5;

} // namespace

RunResult advance(const Parameters& p, const Vector4& x0, const IntegrationConfig& cfg, const StepObserver& observer) {
    cfg.validate();
    RunResult out;
    out.x = x0;
    double t = 0;
    double h = std::min(cfg.initial_step, cfg.max_step);
    double err_prev = 1e-4;
    bool last_rejected = false;

    Vector4 x = x0;
    Vector4 k1 = rhs(p, x);
    while (t < cfg.t_max) {
        if (h < min_step) {
            out.reason = Termination::step_failure;
            break;
        }
        const bool final_step = t + h >= cfg.t_max;
        const double step = final_step ? cfg.t_max - t : h;

        const Vector4 k2 = rhs(p, x + step * (a21 * k1));
        const Vector4 k3 = rhs(p, x + step * (a31 * k1 + a32 * k2));
        const Vector4 k4 = rhs(p, x + step * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vector4 k5 = rhs(p, x + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vector4 k6 = rhs(p, x + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Vector4 xn = x + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vector4 k7 = rhs(p, xn);
        const Vector4 delta = step * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

        double err = 0;
        for (int i = 0; i < 4; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x[i]), std::abs(xn[i]));
            err += (delta[i] / sc) * (delta[i] / sc);
        }
        err = std::sqrt(err / 4);
        const double raw_min = xn.minCoeff();
        const bool negative = raw_min < -cfg.abs_tol;

        if (!std::isfinite(err) || err > 1.0 || negative) {
            double factor = std::isfinite(err) && err > 1.0
                                ? std::max(min_factor, safety * std::pow(err, -1.0 / 5))
                                : 0.5;
            if (negative) factor = std::min(factor, 0.5);
            h = step * factor;
            last_rejected = true;
            ++out.rejected;
            continue;
        }

        out.min_raw_component = std::min(out.min_raw_component, raw_min);
        for (int i = 0; i < 4; ++i) {
            if (xn[i] < 0) xn[i] = 0;
        }
        t = final_step ? cfg.t_max : t + step;
        x = xn;
        k1 = (raw_min < 0) ? rhs(p, x) : k7;
        ++out.accepted;

        const double e = std::max(err, 1e-10);
        double factor = safety * std::pow(e, -pi_alpha) * std::pow(err_prev, pi_beta);
        factor = std::clamp(factor, min_factor, max_factor);
        if (last_rejected) factor = std::min(factor, 1.0);
        err_prev = e;
        last_rejected = false;
        h = std::min(step * factor, cfg.max_step);

        if (observer && !observer(t, x)) {
            out.reason = Termination::converged;
            break;
        }
    }
    out.t = t;
    out.x = x;
    return out;
}

Trajectory integrate(const Parameters& p, const State& x0, const IntegrationConfig& cfg) {
    if (!x0.nonnegative()) throw InvalidArgument("initial state must lie in the nonnegative orthant");
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(x0);
    const auto result = advance(p, x0.vec(), cfg, [&](double t, const Vector4& x) {
        traj.times.push_back(t);
        traj.states.push_back(State::from(x));
        return true;
    });
    traj.reason = result.reason;
    return traj;
}

std::optional<std::size_t> run_to_attractor(const Parameters& p, const State& x0, std::span<const Attractor> attractors,
                                            double match_radius, const IntegrationConfig& cfg) {
    if (attractors.empty()) throw InvalidArgument("run_to_attractor needs at least one attractor");
    if (!(match_radius > 0)) throw InvalidArgument("match radius must be positive");
    if (!x0.nonnegative()) throw InvalidArgument("initial state must lie in the nonnegative orthant");
    for (std::size_t i = 0; i < attractors.size(); ++i) {
        for (std::size_t j = i + 1; j < attractors.size(); ++j) {
            if ((attractors[i].point.vec() - attractors[j].point.vec()).norm() <= 2 * match_radius) {
                throw InvalidArgument("attractor balls of " + attractors[i].id + " and " + attractors[j].id +
                                      " overlap");
            }
        }
    }
    const Vector4 start = x0.vec();
    for (std::size_t i = 0; i < attractors.size(); ++i) {
        const Vector4 a = attractors[i].point.vec();
        if ((start - a).norm() <= 1e-12 * (1 + a.lpNorm<Eigen::Infinity>())) return i;
    }

    std::optional<std::size_t> inside;
    double entered = 0;
    std::optional<std::size_t> captured;
    const auto result = advance(p, start, cfg, [&](double t, const Vector4& x) {
        std::optional<std::size_t> now;
        for (std::size_t i = 0; i < attractors.size(); ++i) {
            if ((x - attractors[i].point.vec()).norm() <= match_radius) {
                now = i;
                break;
            }
        }
        if (now != inside) {
            inside = now;
            entered = t;
        }
        if (inside && t - entered >= attractor_dwell_time) {
            captured = inside;
            return false;
        }
        return true;
    });
    if (result.reason == Termination::step_failure) {
        throw NumericalError("step size underflow at t=" + std::to_string(result.t));
    }
    return captured;
}

} // namespace ecoepi
