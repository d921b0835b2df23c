#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ecoepi/equilibria.hpp"
#include "ecoepi/integrator.hpp"
#include "ecoepi/surface.hpp"

namespace ecoepi {

/// 3-D affine slice of phase space: x = origin + u0 axes[0] + u1 axes[1] + u2 axes[2].
/// The default is the P-S-V subspace at W = 0.
struct AffineSlice {
    Vector4 origin = Vector4::Zero();
    std::array<Vector4, 3> axes{Vector4::Unit(0), Vector4::Unit(1), Vector4::Unit(2)};

    [[nodiscard]] State to_state(const Eigen::Vector3d& u) const;
    /// Invariant faces (P, V or W pinned to zero) that contain the whole slice.
    [[nodiscard]] unsigned invariant_faces() const;
};

struct Box3 {
    Eigen::Vector3d lo = Eigen::Vector3d::Zero();
    Eigen::Vector3d hi = Eigen::Vector3d::Ones();
};

struct BasinOptions {
    AffineSlice slice;
    IntegrationConfig integration;
    double match_radius = 0.05;
    double undecided_warning = 0.05; ///< fraction of undecided nodes that triggers a warning
};

/// Label of an undecided node.
inline constexpr int undecided = -1;

struct BasinGrid {
    Box3 region;
    std::array<int, 3> resolution{};
    std::vector<std::string> attractor_ids;
    std::vector<int> labels; ///< index i + n0 (j + n1 k); 0/1 name attractor_ids, -1 undecided
    std::size_t undecided_count = 0;
    std::vector<std::string> warnings;

    [[nodiscard]] Eigen::Vector3d node(std::size_t flat) const;
};

/// Attractor index reached from slice point u, or `undecided`.
[[nodiscard]] int classify_point(const Parameters& p, const Eigen::Vector3d& u, std::span<const Attractor> attractors,
                                 const BasinOptions& options);

/// Needs exactly two attractors, each stable within the slice's invariant faces (InvalidArgument otherwise).
[[nodiscard]] BasinGrid classify_grid(const Parameters& p, const Box3& region, std::array<int, 3> resolution,
                                      std::span<const Attractor> attractors, const BasinOptions& options = {});

struct Segment {
    Eigen::Vector3d from;
    Eigen::Vector3d to;
};

/// Grid lines parallel to `axis` spanning the box, one per node of the other two axes.
[[nodiscard]] std::vector<Segment> axis_segments(const Box3& region, int axis, std::array<int, 2> resolution);

struct SeparatrixPoint {
    Eigen::Vector3d point;     ///< bracket midpoint, slice coordinates
    Eigen::Vector3d bracket_from;
    Eigen::Vector3d bracket_to;
    int label_from = undecided;
    int label_to = undecided;
    std::size_t segment = 0;
};

struct SeparatrixSampling {
    std::vector<SeparatrixPoint> points;
    std::vector<std::pair<std::size_t, std::string>> skipped; ///< (segment, reason)
};

/// Per-segment bisection until the bracket is at most bisect_tol long in phase space.
[[nodiscard]] SeparatrixSampling separatrix_points(const Parameters& p, std::span<const Segment> segments,
                                                   std::span<const Attractor> attractors, double bisect_tol = 1e-4,
                                                   const BasinOptions& options = {});

struct ProbeReport {
    std::size_t tested = 0;
    std::size_t agreed = 0;
    int below_label = undecided; ///< attractor on the low side of the graph axis
    int above_label = undecided;
    [[nodiscard]] double fraction() const { return tested ? static_cast<double>(agreed) / tested : 0.0; }
};

/// Classifies `count` base points offset by -offset and +offset along the graph axis.
[[nodiscard]] ProbeReport probe_sides(const Parameters& p, const SeparatrixModel& model,
                                      const SeparatrixSampling& sampling, std::span<const Attractor> attractors,
                                      const BasinOptions& options, double offset = 0.05, std::size_t count = 100,
                                      std::uint64_t seed = 1);

struct SeparatrixOptions {
    BasinOptions basin;
    Box3 region;
    int graph_axis = 2;
    std::array<int, 2> segments{61, 61};
    double bisect_tol = 1e-4;
    KernelConfig kernel;
    double probe_offset = 0.05;
    std::size_t probes = 100;
    std::uint64_t seed = 1;
};

struct SeparatrixReconstruction {
    SeparatrixSampling sampling;
    SeparatrixModel model;
    ProbeReport probes;
};

/// Segments along the graph axis, bisection, surface fit and side probes.
[[nodiscard]] SeparatrixReconstruction reconstruct_separatrix(const Parameters& p,
                                                              std::span<const Attractor> attractors,
                                                              const SeparatrixOptions& options);

[[nodiscard]] Attractor to_attractor(const EquilibriumRecord& rec);

} // namespace ecoepi
