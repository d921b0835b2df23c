#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecoepi/model.hpp"

namespace ecoepi {

struct IntegrationConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double t_max = 2000.0;
    double initial_step = 1e-3;
    double max_step = 1.0;

    /// Throws InvalidArgument unless all fields are positive and rel_tol >= 1e-14.
    void validate() const;

    friend bool operator==(const IntegrationConfig&, const IntegrationConfig&) = default;
};

enum class Termination { reached_t_max, converged, step_failure };

[[nodiscard]] std::string_view to_string(Termination t) noexcept;

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    Termination reason = Termination::reached_t_max;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] const State& final_state() const { return states.back(); }
};

/// Called after each accepted step; returning false stops the run with Termination::converged.
using StepObserver = std::function<bool(double t, const Vector4& x)>;

/// Outcome of a single Dormand-Prince run, without recording.
struct RunResult {
    double t = 0;
    Vector4 x = Vector4::Zero();
    Termination reason = Termination::reached_t_max;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    /// Most negative component seen in any accepted raw step, before clamping.
    double min_raw_component = 0;
};

/**
 * Dormand-Prince 5(4) with PI step-size control.
 *
 * Components in (-abs_tol, 0) after a step are clamped to zero; a step that
 * drives any component below -abs_tol is rejected and retried with a smaller
 * step. The step size falling below 1e-14 ends the run with step_failure.
 */
[[nodiscard]] RunResult advance(const Parameters& p, const Vector4& x0, const IntegrationConfig& cfg,
                                const StepObserver& observer = {});

/// Records every accepted step. Step failure is reported through Trajectory::reason.
[[nodiscard]] Trajectory integrate(const Parameters& p, const State& x0, const IntegrationConfig& cfg = {});

/// Attractor target for run_to_attractor.
struct Attractor {
    std::string id;
    State point;
};

/// Minimum time a trajectory has to stay inside an attractor's ball.
inline constexpr double attractor_dwell_time = 10.0;

/**
 * Index into `attractors` of the equilibrium that captures the orbit of x0,
 * or nullopt when t_max passes outside every ball. A run is captured once it
 * stays within match_radius (Euclidean) for attractor_dwell_time time units;
 * starting on an attractor returns it without integrating.
 *
 * Throws InvalidArgument when the balls overlap and NumericalError on step failure.
 */
[[nodiscard]] std::optional<std::size_t> run_to_attractor(const Parameters& p, const State& x0,
                                                          std::span<const Attractor> attractors, double match_radius,
                                                          const IntegrationConfig& cfg = {});

} // namespace ecoepi
