#include "ecoepi/presets.hpp"

#include "ecoepi/error.hpp"

namespace ecoepi {

namespace {

Parameters bistable_set() {
    Parameters p;
    p.s = 0.4;
    p.L = 1.5;
    p.a = 0.3;
    p.b = 0.7;
    p.e = 0.2;
    p.f = 0.2;
    p.r = 0.7;
    p.K = 2;
    p.lambda = 0.7;
    p.psi = 0.2;
    p.mu = 0.5;
    p.phi = 0.7;
    p.nu = 0.9;
    p.beta = 0.2;
    return p;
}

// beta, phi, nu and f are not published for this set; they only act off the W = 0
// face, so the bistable_set() values are reused.
Parameters separatrix_set() {
    Parameters p = bistable_set();
    p.s = 0.3;
    p.L = 1.5;
    p.r = 0.7;
    p.K = 3;
    p.lambda = 0.6;
    p.psi = 0.8;
    p.mu = 0.3;
    p.a = 0.2;
    p.b = 0.5;
    p.e = 0.2;
    return p;
}

Parameters coexistence_set() {
    Parameters p;
    p.s = 0.4;
    p.L = 0.5;
    p.a = 0.3;
    p.r = 0.7;
    p.K = 1;
    p.b = 0.7;
    p.lambda = 0.7;
    p.beta = 0.2;
    p.psi = 0.2;
    p.phi = 0.7;
    p.mu = 0.5;
    p.nu = 0.9;
    p.e = 0.2;
    p.f = 0.2;
    return p;
}

Scenario make(std::string name, std::string description, const Parameters& p, State initial, EquilibriumId expected,
              std::optional<State> printed) {
    Scenario sc;
    sc.name = std::move(name);
    sc.description = std::move(description);
    sc.config.parameters = p.checked();
    sc.config.initial = initial;
    sc.expected = expected;
    sc.printed_endpoint = printed;
    return sc;
}

} // namespace

const std::vector<Scenario>& scenarios() {
    static const std::vector<Scenario> all{
        make("fig1", "strain-1 endemic equilibrium E4 without P", bistable_set(), {0.0, 1.8, 0.1, 0.1},
             EquilibriumId::E4, State{0, 1, 0.7, 0}),
        make("fig2", "disease-free equilibrium E1", bistable_set(), {1.7, 0.8, 0.1, 0.1}, EquilibriumId::E1,
             State{1.5, 0, 0, 0}),
        make("fig3", "coexistence of P with strain 1, E6", bistable_set(), {0.1, 1.8, 0.1, 0.1}, EquilibriumId::E6,
             State{0.2828, 1.0760, 0.2441, 0}),
        make("fig4", "separatrix between E1 and E4 in the W = 0 subspace", separatrix_set(), {1.4, 0.1, 0.1, 0.0},
             EquilibriumId::E1, std::nullopt),
        // No initial condition is published for this set.
        make("fig5", "disease-free coexistence E3", coexistence_set(), {0.1, 0.8, 0.1, 0.1}, EquilibriumId::E3,
             std::nullopt),
    };
    return all;
}

const Scenario& scenario(std::string_view name) {
    for (const auto& sc : scenarios()) {
        if (sc.name == name) return sc;
    }
    throw InvalidArgument("unknown figure '" + std::string(name) + "' (expected fig1..fig5)");
}

Box3 fig4_region() {
    Box3 box;
    box.lo = Eigen::Vector3d(0.0, 0.0, 0.0);
    box.hi = Eigen::Vector3d(2.0, 3.0, 2.5);
    return box;
}

} // namespace ecoepi
