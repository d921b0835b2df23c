#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecoepi/basin.hpp"
#include "ecoepi/config.hpp"
#include "ecoepi/equilibria.hpp"

namespace ecoepi {

/// Published parameter sets and initial conditions of the five reference figures.
struct Scenario {
    std::string name;
    std::string description;
    RunConfig config;
    EquilibriumId expected = EquilibriumId::E0;  ///< equilibrium the trajectory should settle on
    std::optional<State> printed_endpoint;       ///< endpoint as printed with the figure, when given
};

[[nodiscard]] const std::vector<Scenario>& scenarios();
/// Throws InvalidArgument for names other than fig1..fig5.
[[nodiscard]] const Scenario& scenario(std::string_view name);

/// Box (P, S, V) at W = 0 holding E1, E3 and E4 of the fig4 set with margin.
[[nodiscard]] Box3 fig4_region();

} // namespace ecoepi
