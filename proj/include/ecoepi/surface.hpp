#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace ecoepi {

enum class Kernel {
    thin_plate,  ///< r^2 log r
    cubic,       ///< r^3
    wendland_c2, ///< (1 - r/support)^4_+ (4 r/support + 1)
};

[[nodiscard]] std::string_view to_string(Kernel k) noexcept;
/// Throws InvalidArgument for unknown names.
[[nodiscard]] Kernel parse_kernel(std::string_view name);

struct KernelConfig {
    Kernel kind = Kernel::thin_plate;
    /// Support radius of wendland_c2, in units of the half-extent of the sites.
    double support = 1.0;
};

/// Radial-basis interpolant in the plane with a linear polynomial term.
class RbfInterpolant {
public:
    /// Needs at least 3 sites, not all collinear and pairwise distinct; throws DegenerateError otherwise.
    static RbfInterpolant fit(std::span<const Eigen::Vector2d> sites, std::span<const double> values,
                              const KernelConfig& kernel = {});

    [[nodiscard]] double operator()(const Eigen::Vector2d& x) const;
    /// Largest |s(x_i) - f_i| over the sites.
    [[nodiscard]] double max_residual() const noexcept { return residual_; }
    [[nodiscard]] std::size_t size() const noexcept { return sites_.size(); }
    [[nodiscard]] const KernelConfig& kernel() const noexcept { return kernel_; }
    [[nodiscard]] const Eigen::VectorXd& weights() const noexcept { return weights_; }
    [[nodiscard]] const Eigen::Vector3d& polynomial() const noexcept { return poly_; }

private:
    [[nodiscard]] double basis(double r) const;
    [[nodiscard]] Eigen::Vector2d normalize(const Eigen::Vector2d& x) const { return (x - center_) / scale_; }

    KernelConfig kernel_;
    std::vector<Eigen::Vector2d> sites_; // normalized
    Eigen::Vector2d center_ = Eigen::Vector2d::Zero();
    double scale_ = 1.0;
    Eigen::VectorXd weights_;
    Eigen::Vector3d poly_ = Eigen::Vector3d::Zero();
    double residual_ = 0.0;
};

/// A surface given as one coordinate (graph_axis) over the other two.
class SeparatrixModel {
public:
    /// Throws InvalidArgument for a graph_axis outside 0..2 or fewer than 3 points.
    SeparatrixModel(std::vector<Eigen::Vector3d> points, int graph_axis, const KernelConfig& kernel = {});

    [[nodiscard]] int graph_axis() const noexcept { return graph_axis_; }
    /// The two projection axes, in increasing order.
    [[nodiscard]] std::array<int, 2> domain_axes() const noexcept { return domain_; }
    [[nodiscard]] const std::vector<Eigen::Vector3d>& points() const noexcept { return points_; }
    [[nodiscard]] const RbfInterpolant& interpolant() const noexcept { return rbf_; }
    [[nodiscard]] double fit_residual() const noexcept { return rbf_.max_residual(); }

    [[nodiscard]] Eigen::Vector2d project(const Eigen::Vector3d& x) const { return {x[domain_[0]], x[domain_[1]]}; }
    /// Graph coordinate at the projection (u, v).
    [[nodiscard]] double height(const Eigen::Vector2d& uv) const { return rbf_(uv); }
    [[nodiscard]] Eigen::Vector3d lift(const Eigen::Vector2d& uv) const;
    /// Signed offset of x from the surface along the graph axis.
    [[nodiscard]] double offset(const Eigen::Vector3d& x) const { return x[graph_axis_] - height(project(x)); }

private:
    std::vector<Eigen::Vector3d> points_;
    int graph_axis_;
    std::array<int, 2> domain_;
    RbfInterpolant rbf_;
};

[[nodiscard]] SeparatrixModel fit_surface(std::vector<Eigen::Vector3d> points, int graph_axis,
                                          const KernelConfig& kernel = {});

} // namespace ecoepi
