#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ecoepi/equilibria.hpp"
#include "ecoepi/error.hpp"
#include "ecoepi/integrator.hpp"
#include "support.hpp"

using namespace ecoepi;
using namespace testing;

namespace {

double max_diff(const State& a, const State& b) { return (a.vec() - b.vec()).lpNorm<Eigen::Infinity>(); }

std::vector<Attractor> fig_attractors(const Parameters& p, EquilibriumId first, EquilibriumId second) {
    return {{std::string(to_string(first)), compute_equilibrium(p, first).point},
            {std::string(to_string(second)), compute_equilibrium(p, second).point}};
}

} // namespace

TEST_CASE("fig1 initial condition settles on (0, 1, 0.7, 0)") {
    const auto traj = integrate(fig1(), State{0.0, 1.8, 0.1, 0.1});
    CHECK(traj.reason == Termination::reached_t_max);
    CHECK(traj.times.back() == 2000.0);
    CHECK(max_diff(traj.final_state(), State{0, 1, 0.7, 0}) <= 1e-3);
}

TEST_CASE("fig2 initial condition settles on (1.5, 0, 0, 0)") {
    const auto traj = integrate(fig1(), State{1.7, 0.8, 0.1, 0.1});
    CHECK(max_diff(traj.final_state(), State{1.5, 0, 0, 0}) <= 1e-3);
}

TEST_CASE("origin is a fixed trajectory") {
    const auto traj = integrate(fig1(), State{});
    for (const auto& x : traj.states) CHECK(x == State{});
}

TEST_CASE("logistic growth on the P axis matches the exact solution") {
    const Parameters& p = fig1();
    IntegrationConfig cfg;
    cfg.t_max = 20;
    const double P0 = 0.05;
    const auto traj = integrate(p, State{P0, 0, 0, 0}, cfg);
    double worst = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        const double exact = p.L / (1 + (p.L / P0 - 1) * std::exp(-p.s * t));
        worst = std::max(worst, std::abs(traj.states[i].P - exact));
        CHECK(traj.states[i].S == 0.0);
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("times increase and states stay nonnegative") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        const Parameters p = random_parameters(rng, 0.05, 2.0);
        const auto traj = integrate(p, State{u(rng), u(rng), u(rng), u(rng)}, IntegrationConfig{1e-8, 1e-10, 200});
        for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
        for (const auto& x : traj.states) CHECK(x.nonnegative());
    }
}

TEST_CASE("forward invariance before clamping") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int k = 0; k < 30; ++k) {
        const Parameters p = random_parameters(rng, 0.05, 2.0);
        IntegrationConfig cfg{1e-8, 1e-10, 300};
        const auto run = advance(p, Vector4(u(rng), u(rng), u(rng) * 1e-3, 0.0), cfg);
        CHECK(run.min_raw_component >= -cfg.abs_tol);
    }
}

TEST_CASE("halving rel_tol moves the fig1 endpoint by less than ten tolerances") {
    IntegrationConfig cfg;
    const State x0{0.0, 1.8, 0.1, 0.1};
    const State a = integrate(fig1(), x0, cfg).final_state();
    IntegrationConfig fine = cfg;
    fine.rel_tol /= 2;
    const State b = integrate(fig1(), x0, fine).final_state();
    CHECK(max_diff(a, b) < 10 * cfg.rel_tol);
}

TEST_CASE("trajectories stay below the boundedness certificate") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const Parameters p = random_parameters(rng, 0.05, 2.0);
        const State x0{2 * p.L * u(rng), 2 * p.K * u(rng), 2 * p.K * u(rng), 2 * p.K * u(rng)};
        const auto cert = certify_boundedness(p, x0, 0.0, 1e-6);
        IntegrationConfig cfg;
        const double transient = 5 / cert.epsilon;
        cfg.t_max = transient + 200;
        const auto traj = integrate(p, x0, cfg);
        REQUIRE(traj.reason == Termination::reached_t_max);
        double worst = -1e300;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            if (traj.times[i] >= transient) worst = std::max(worst, total_population(traj.states[i]) - cert.bound);
        }
        CHECK(worst <= 0.0);

        // limsup P <= L, limsup S <= K over the final 10% of samples
        const std::size_t tail = traj.size() - traj.size() / 10;
        for (std::size_t i = tail; i < traj.size(); ++i) {
            CHECK(traj.states[i].P <= p.L * (1 + 1e-3));
            CHECK(traj.states[i].S <= p.K * (1 + 1e-3));
        }
    }
}

TEST_CASE("run_to_attractor") {
    const Parameters& p = fig1();
    const auto at = fig_attractors(p, EquilibriumId::E1, EquilibriumId::E4);
    CHECK(run_to_attractor(p, State{0.0, 1.8, 0.1, 0.1}, at, 0.05) == std::optional<std::size_t>(1));
    CHECK(run_to_attractor(p, State{1.7, 0.8, 0.1, 0.1}, at, 0.05) == std::optional<std::size_t>(0));

    SUBCASE("starting on an attractor returns it without integrating") {
        IntegrationConfig tiny;
        tiny.t_max = 1e-9;
        CHECK(run_to_attractor(p, at[1].point, at, 0.05, tiny) == std::optional<std::size_t>(1));
    }
    SUBCASE("fig4 point near the P axis reaches E1") {
        const Parameters& q4 = fig4();
        const auto at4 = fig_attractors(q4, EquilibriumId::E1, EquilibriumId::E4);
        CHECK(run_to_attractor(q4, State{1.4, 0.1, 0.1, 0}, at4, 0.05) == std::optional<std::size_t>(0));
    }
    SUBCASE("undecided when the horizon is too short") {
        IntegrationConfig shortrun;
        shortrun.t_max = 5;
        CHECK_FALSE(run_to_attractor(p, State{0.0, 1.8, 0.1, 0.1}, at, 0.05, shortrun).has_value());
    }
    SUBCASE("overlapping balls are rejected") {
        CHECK_THROWS_AS((void)run_to_attractor(p, State{}, at, 2.0), InvalidArgument);
    }
    SUBCASE("empty attractor list") {
        CHECK_THROWS_AS((void)run_to_attractor(p, State{}, {}, 0.05), InvalidArgument);
    }
}

TEST_CASE("step size underflow is reported") {
    const State huge{1e300, 1e300, 1e300, 1e300};
    const auto traj = integrate(fig1(), huge);
    CHECK(traj.reason == Termination::step_failure);
    const std::vector<Attractor> at{{"E0", State{}}};
    CHECK_THROWS_AS((void)run_to_attractor(fig1(), huge, at, 0.05), NumericalError);
}

TEST_CASE("configuration validation") {
    CHECK_NOTHROW(IntegrationConfig{}.validate());
    CHECK_THROWS_AS(IntegrationConfig({0.0, 1e-10, 1, 1e-3, 1}).validate(), InvalidArgument);
    CHECK_THROWS_AS(IntegrationConfig({1e-15, 1e-10, 1, 1e-3, 1}).validate(), InvalidArgument);
    CHECK_THROWS_AS(IntegrationConfig({1e-8, 1e-10, -1, 1e-3, 1}).validate(), InvalidArgument);
    CHECK_THROWS_AS((void)integrate(fig1(), State{-1, 0, 0, 0}), InvalidArgument);
}
