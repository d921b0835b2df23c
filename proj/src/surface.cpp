#include "ecoepi/surface.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "ecoepi/error.hpp"

namespace ecoepi {

std::string_view to_string(Kernel k) noexcept {
    switch (k) {
    case Kernel::thin_plate: return "thin_plate";
    case Kernel::cubic: return "cubic";
    case Kernel::wendland_c2: return "wendland_c2";
    }
    return "?";
}

Kernel parse_kernel(std::string_view name) {
    for (auto k : {Kernel::thin_plate, Kernel::cubic, Kernel::wendland_c2}) {
        if (to_string(k) == name) return k;
    }
    throw InvalidArgument("unknown kernel '" + std::string(name) + "'");
}

double RbfInterpolant::basis(double r) const {
    switch (kernel_.kind) {
    case Kernel::thin_plate: return r > 0 ? r * r * std::log(r) : 0.0;
    case Kernel::cubic: return r * r * r;
    case Kernel::wendland_c2: {
        const double q = r / kernel_.support;
        if (q >= 1) return 0.0;
        const double t = 1 - q;
        return t * t * t * t * (4 * q + 1);
    }
    }
    return 0.0;
}

RbfInterpolant RbfInterpolant::fit(std::span<const Eigen::Vector2d> sites, std::span<const double> values,
                                   const KernelConfig& kernel) {
    if (sites.size() != values.size()) throw InvalidArgument("sites and values differ in length");
    if (sites.size() < 3) throw DegenerateError("fewer than 3 sites");
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (!sites[i].allFinite() || !std::isfinite(values[i])) throw InvalidArgument("non-finite site or value");
    }
    if (kernel.kind == Kernel::wendland_c2 && !(kernel.support > 0)) {
        throw InvalidArgument("wendland support must be positive");
    }
    RbfInterpolant out;
    out.kernel_ = kernel;

    Eigen::Vector2d lo = sites[0], hi = sites[0];
    for (const auto& x : sites) {
        lo = lo.cwiseMin(x);
        hi = hi.cwiseMax(x);
    }
    out.center_ = 0.5 * (lo + hi);
    out.scale_ = 0.5 * (hi - lo).maxCoeff();
    if (!(out.scale_ > 0)) throw DegenerateError("coincident sites");
    out.sites_.reserve(sites.size());
    for (const auto& x : sites) out.sites_.push_back(out.normalize(x));

    const auto n = static_cast<Eigen::Index>(sites.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if ((out.sites_[i] - out.sites_[j]).norm() <= 1e-12) throw DegenerateError("coincident sites");
        }
    }
    Eigen::MatrixXd poly(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) poly.row(i) << 1.0, out.sites_[i].x(), out.sites_[i].y();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(poly);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) throw DegenerateError("collinear sites");

    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n + 3, n + 3);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) system(i, j) = out.basis((out.sites_[i] - out.sites_[j]).norm());
    }
    system.block(0, n, n, 3) = poly;
    system.block(n, 0, 3, n) = poly.transpose();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 3);
    for (Eigen::Index i = 0; i < n; ++i) rhs[i] = values[i];

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    Eigen::VectorXd sol = lu.solve(rhs);
    // One refinement sweep recovers most of the digits lost to conditioning.
    sol += lu.solve(rhs - system * sol);
    if (!sol.allFinite()) throw DegenerateError("singular interpolation system");
    out.weights_ = sol.head(n);
    out.poly_ = sol.tail(3);

    double worst = 0;
    for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, std::abs(out(sites[i]) - values[i]));
    out.residual_ = worst;
    return out;
}

double RbfInterpolant::operator()(const Eigen::Vector2d& x) const {
    const Eigen::Vector2d y = normalize(x);
    double acc = poly_[0] + poly_[1] * y.x() + poly_[2] * y.y();
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        acc += weights_[static_cast<Eigen::Index>(i)] * basis((y - sites_[i]).norm());
    }
    return acc;
}

namespace {

std::array<int, 2> other_axes(int graph_axis) {
    switch (graph_axis) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    case 2: return {0, 1};
    default: throw InvalidArgument("graph axis must be 0, 1 or 2");
    }
}

RbfInterpolant fit_graph(const std::vector<Eigen::Vector3d>& points, int graph_axis, std::array<int, 2> domain,
                         const KernelConfig& kernel) {
    if (points.size() < 3) throw InvalidArgument("surface fit needs at least 3 points");
    std::vector<Eigen::Vector2d> sites;
    std::vector<double> values;
    sites.reserve(points.size());
    values.reserve(points.size());
    for (const auto& p : points) {
        sites.emplace_back(p[domain[0]], p[domain[1]]);
        values.push_back(p[graph_axis]);
    }
    return RbfInterpolant::fit(sites, values, kernel);
}

} // namespace

SeparatrixModel::SeparatrixModel(std::vector<Eigen::Vector3d> points, int graph_axis, const KernelConfig& kernel)
    : points_(std::move(points)), graph_axis_(graph_axis), domain_(other_axes(graph_axis)),
      rbf_(fit_graph(points_, graph_axis_, domain_, kernel)) {}

Eigen::Vector3d SeparatrixModel::lift(const Eigen::Vector2d& uv) const {
    Eigen::Vector3d x;
    x[domain_[0]] = uv[0];
    x[domain_[1]] = uv[1];
    x[graph_axis_] = height(uv);
    return x;
}

SeparatrixModel fit_surface(std::vector<Eigen::Vector3d> points, int graph_axis, const KernelConfig& kernel) {
    return SeparatrixModel(std::move(points), graph_axis, kernel);
}

} // namespace ecoepi
