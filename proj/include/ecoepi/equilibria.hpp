#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecoepi/model.hpp"

namespace ecoepi {

/// E0..E7 live in the full space; Q0..Q3 in the P-S competition subsystem;
/// SV_endemic is the endemic point of the one-strain (S, V) subsystem.
enum class EquilibriumId { E0, E1, E2, E3, E4, E5, E6, E7, Q0, Q1, Q2, Q3, SV_endemic };

inline constexpr std::array<EquilibriumId, 8> full_equilibria{EquilibriumId::E0, EquilibriumId::E1, EquilibriumId::E2,
                                                              EquilibriumId::E3, EquilibriumId::E4, EquilibriumId::E5,
                                                              EquilibriumId::E6, EquilibriumId::E7};

[[nodiscard]] std::string_view to_string(EquilibriumId id) noexcept;
/// Throws InvalidArgument for unknown names.
[[nodiscard]] EquilibriumId parse_equilibrium_id(std::string_view name);
/// 4 for E-points, 2 for subsystem points.
[[nodiscard]] int dimension(EquilibriumId id) noexcept;
/// Subsystem hosting a 2-D point; competition_PS for Q*, one_strain_SV for SV_endemic.
[[nodiscard]] Subsystem host_subsystem(EquilibriumId id);

/// Derived scalars; nullopt marks a vanishing denominator.
struct ThresholdSet {
    std::optional<double> A;      ///< (psi+mu)/lambda, also written A-tilde
    std::optional<double> B;      ///< (phi+nu)/beta, also written B-tilde
    double C = 0;                 ///< mu^2 + K lambda psi - psi^2
    double Dtilde = 0;            ///< nu^2 + K beta phi - phi^2
    double Delta3 = 0;            ///< discriminant of the E3 quadratic
    double Delta4 = 0;            ///< discriminant of the E4 quadratic
    double Delta5 = 0;            ///< discriminant of the E5 quadratic
    double E = 0, F = 0;
    std::optional<double> M, N, G;
    double Ehat = 0, Fhat = 0;
    std::optional<double> Mhat, Nhat, Ghat;

    /// (name, value) pairs in a fixed order, for reporting.
    [[nodiscard]] std::vector<std::pair<std::string, std::optional<double>>> entries() const;
};

[[nodiscard]] ThresholdSet thresholds(const Parameters& p);

/// Slack of one inequality: positive when it holds.
struct Margin {
    std::string name;
    double slack = 0;
    /// Margins sharing a group form one conjunction and groups are alternatives.
    /// Negative groups are informational and do not enter feasibility.
    int group = 0;
};

enum class Feasibility { feasible, marginal, infeasible };

[[nodiscard]] std::string_view to_string(Feasibility f) noexcept;

/// |slack| at or below this is treated as equality.
inline constexpr double threshold_tolerance = 1e-12;

struct EquilibriumRecord {
    EquilibriumId id = EquilibriumId::E0;
    State point;                ///< embedded in (P, S, V, W) for subsystem points
    bool defined = true;        ///< false when a denominator vanished; see notes
    Feasibility feasibility = Feasibility::infeasible;
    std::vector<Margin> margins;
    std::vector<std::string> notes;

    [[nodiscard]] bool feasible() const noexcept { return defined && feasibility == Feasibility::feasible; }
    [[nodiscard]] bool marginal() const noexcept { return defined && feasibility == Feasibility::marginal; }
    /// Coordinates in the host space: 4 values for E-points, 2 for subsystem points.
    [[nodiscard]] std::vector<double> coordinates() const;
};

/// Closed-form coordinates and feasibility. Throws DegenerateError naming the vanishing expression.
[[nodiscard]] EquilibriumRecord compute_equilibrium(const Parameters& p, EquilibriumId id);

/// The eight E-records; degenerate points are kept with defined = false.
[[nodiscard]] std::vector<EquilibriumRecord> catalog(const Parameters& p);

/// Feasible if some group has every slack above threshold_tolerance; marginal if the
/// best group only reaches equality within the tolerance.
[[nodiscard]] Feasibility evaluate_feasibility(const std::vector<Margin>& margins);

} // namespace ecoepi
