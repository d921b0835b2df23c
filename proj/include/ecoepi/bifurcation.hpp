#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ecoepi/equilibria.hpp"
#include "ecoepi/stability.hpp"

namespace ecoepi {

struct BranchRow {
    double value = 0;     ///< parameter value
    EquilibriumId id = EquilibriumId::E0;
    State point;
    bool defined = true;
    Feasibility feasibility = Feasibility::infeasible;
    StabilityClass cls = StabilityClass::marginal;
    double lead_re = 0;   ///< largest real part; NaN when undefined
};

struct SweepResult {
    std::string parameter;
    std::vector<double> grid;
    std::vector<BranchRow> rows; ///< grid-major, E0..E7 within each grid point
};

/// Catalog + classification at n evenly spaced values in [lo, hi].
/// Throws InvalidArgument for unknown keys, lo >= hi, n < 2 or values that invalidate the parameters.
[[nodiscard]] SweepResult sweep(const Parameters& p, const std::string& key, double lo, double hi, std::size_t n);

using EquilibriumPair = std::pair<EquilibriumId, EquilibriumId>;

/// Exchanges with a closed-form crossing margin.
[[nodiscard]] const std::vector<EquilibriumPair>& supported_transcritical_pairs();

/**
 * Eigenvalue of pair.first that vanishes at the exchange, as a closed form:
 * lambda K - psi - mu for (E2,E4), beta K - phi - nu for (E2,E5),
 * s - aA for (E4,E6), s - aB for (E5,E7), r - bL for (E1,E3), s - aK for (E2,E3).
 */
[[nodiscard]] double crossing_margin(const Parameters& p, const EquilibriumPair& pair);

struct TranscriticalPoint {
    std::string parameter;
    double critical = 0;
    EquilibriumPair pair;
    int crossing_index = 0;       ///< index into analytic_eigenvalues(pair.first)
    double coincidence_gap = 0;   ///< Euclidean distance between the two points
    double crossing_re_first = 0; ///< real part of the crossing eigenvalue of pair.first
    double crossing_re_second = 0;///< eigenvalue of pair.second closest to zero
};

/// Bisection on crossing_margin to a bracket of 1e-10, then validation of
/// coincidence (<= 1e-8) and a vanishing crossing eigenvalue (<= 1e-8).
/// Throws InvalidArgument (unsupported pair, no sign change) or NumericalError (validation).
[[nodiscard]] TranscriticalPoint find_transcritical(const Parameters& p, const std::string& key,
                                                    const EquilibriumPair& pair, double lo, double hi);

/// Bracket width targeted by find_transcritical.
inline constexpr double transcritical_bracket = 1e-10;

/**
 * Disease-free/endemic exchange of a one-strain subsystem located
 * independently: bisection on the leading numeric eigenvalue of the reduced
 * Jacobian at the disease-free point (K, 0).
 */
[[nodiscard]] double find_subsystem_transcritical(const Parameters& p, Subsystem kind, const std::string& key,
                                                  double lo, double hi);

/// Eigenvalue of `id` with the smallest |Re| (its crossing eigenvalue near an exchange).
[[nodiscard]] Complex eigenvalue_nearest_zero(const Parameters& p, EquilibriumId id);

} // namespace ecoepi
