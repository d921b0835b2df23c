#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ecoepi/error.hpp"
#include "ecoepi/surface.hpp"

using namespace ecoepi;

namespace {

std::vector<Eigen::Vector3d> graph_points(double (*g)(double, double), int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Eigen::Vector3d> pts;
    for (int i = 0; i < n; ++i) {
        const double x = u(rng), y = u(rng);
        pts.emplace_back(x, y, g(x, y));
    }
    return pts;
}

double plane(double x, double y) { return 0.3 + 0.5 * x - 0.2 * y; }
double bump(double x, double y) { return std::sin(2 * x) * std::cos(y); }

} // namespace

TEST_CASE("three points reproduce a constant surface") {
    const std::vector<Eigen::Vector3d> pts{{0, 0, 0.5}, {1, 0, 0.5}, {0, 1, 0.5}};
    const auto m = fit_surface(pts, 2);
    CHECK(m.height({0.3, 0.3}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.height({2, -1}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.offset({0.2, 0.2, 0.7}) == doctest::Approx(0.2));
}

TEST_CASE("linear surfaces are reproduced exactly by every kernel") {
    const auto pts = graph_points(plane, 30, 3);
    for (auto kind : {Kernel::thin_plate, Kernel::cubic, Kernel::wendland_c2}) {
        const auto m = fit_surface(pts, 2, KernelConfig{kind, 1.0});
        CHECK(m.fit_residual() <= 1e-9);
        CHECK(m.height({0.41, 0.77}) == doctest::Approx(plane(0.41, 0.77)).epsilon(1e-8));
    }
}

TEST_CASE("interpolation at the sites and accuracy between them") {
    const auto pts = graph_points(bump, 200, 5);
    for (auto kind : {Kernel::thin_plate, Kernel::cubic, Kernel::wendland_c2}) {
        const auto m = fit_surface(pts, 2, KernelConfig{kind, 1.0});
        CHECK(m.fit_residual() <= 1e-8);
        for (const auto& x : pts) CHECK(std::abs(m.offset(x)) <= 1e-8);
        CHECK(m.height({0.5, 0.5}) == doctest::Approx(bump(0.5, 0.5)).epsilon(1e-2));
    }
}

TEST_CASE("graph axis selects the projection") {
    std::vector<Eigen::Vector3d> pts;
    for (const auto& x : graph_points(plane, 20, 7)) pts.emplace_back(x[2], x[0], x[1]);
    const auto m = fit_surface(pts, 0);
    CHECK(m.domain_axes() == std::array<int, 2>{1, 2});
    const Eigen::Vector3d lifted = m.lift({0.25, 0.6});
    CHECK(lifted[0] == doctest::Approx(plane(0.25, 0.6)).epsilon(1e-8));
    CHECK(lifted[1] == 0.25);
    CHECK(lifted[2] == 0.6);
}

TEST_CASE("degenerate site sets are rejected") {
    const std::vector<Eigen::Vector3d> two{{0, 0, 0}, {1, 1, 1}};
    CHECK_THROWS_AS((void)fit_surface(two, 2), InvalidArgument);
    const std::vector<Eigen::Vector3d> collinear{{0, 0, 0}, {1, 1, 1}, {2, 2, 0}, {3, 3, 1}};
    CHECK_THROWS_AS((void)fit_surface(collinear, 2), DegenerateError);
    const std::vector<Eigen::Vector3d> repeated{{0, 0, 0}, {1, 0, 1}, {0, 1, 0}, {1, 0, 2}};
    CHECK_THROWS_AS((void)fit_surface(repeated, 2), DegenerateError);
    CHECK_THROWS_AS((void)fit_surface(graph_points(plane, 5, 1), 3), InvalidArgument);
    const std::vector<Eigen::Vector3d> bad{{0, 0, 0}, {1, 0, std::nan("")}, {0, 1, 0}};
    CHECK_THROWS_AS((void)fit_surface(bad, 2), InvalidArgument);
}

TEST_CASE("kernel names") {
    for (auto kind : {Kernel::thin_plate, Kernel::cubic, Kernel::wendland_c2}) {
        CHECK(parse_kernel(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS((void)parse_kernel("gaussian"), InvalidArgument);
}
