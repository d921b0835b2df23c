#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ecoepi/equilibria.hpp"
#include "ecoepi/model.hpp"

namespace ecoepi {

using Complex = std::complex<double>;

enum class StabilityClass { stable_node, stable_focus, saddle, unstable, marginal };
enum class Method { analytic, numeric, both };

[[nodiscard]] std::string_view to_string(StabilityClass c) noexcept;
[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] inline bool is_stable(StabilityClass c) noexcept {
    return c == StabilityClass::stable_node || c == StabilityClass::stable_focus;
}

/// |Re| at or below this counts as zero.
inline constexpr double marginal_band = 1e-10;

struct Eigenpairs {
    std::vector<Complex> values;   ///< sorted by real part, descending
    Eigen::MatrixXcd vectors;      ///< column i belongs to values[i]
};

/// Throws NumericalError on non-finite input or solver failure.
[[nodiscard]] Eigenpairs numeric_eigenpairs(const Eigen::MatrixXd& m);
[[nodiscard]] std::vector<Complex> numeric_eigenvalues(const Eigen::MatrixXd& m);

/**
 * Closed-form eigenvalues for E0..E5, Q0..Q3 and SV_endemic, in the order
 * the formulas list them (not sorted). E3/E4/E5/Q3/SV_endemic pairs come
 * from a quadratic and are complex when its discriminant is negative.
 *
 * Throws InvalidArgument for E6/E7 and DegenerateError when the point is undefined.
 */
[[nodiscard]] std::vector<Complex> analytic_eigenvalues(const Parameters& p, EquilibriumId id);

/// Jacobian of the host space (4x4, or the 2x2 reduced one for subsystem points).
[[nodiscard]] Eigen::MatrixXd host_jacobian(const Parameters& p, const EquilibriumRecord& rec);

[[nodiscard]] StabilityClass classify_eigenvalues(const std::vector<Complex>& values);

/// Invariant coordinate faces: a set bit pins that coordinate to zero.
enum FaceMask : unsigned { face_none = 0, face_P = 1u << 0, face_V = 1u << 2, face_W = 1u << 3 };

/// Eigenvalues of the Jacobian restricted to the given invariant faces (rows/columns removed).
[[nodiscard]] std::vector<Complex> face_eigenvalues(const Matrix4& jac, unsigned mask);

struct FaceVerdict {
    std::string face; ///< e.g. "P=0"
    unsigned mask = 0;
    std::vector<Complex> eigenvalues;
    StabilityClass cls = StabilityClass::marginal;
};

struct StabilityVerdict {
    EquilibriumRecord record;
    std::vector<Complex> eigenvalues; ///< sorted by real part, descending
    StabilityClass cls = StabilityClass::marginal;
    Method method = Method::analytic;
    std::vector<Margin> conditions;   ///< inequalities from the closed-form analysis, with slack
    std::vector<FaceVerdict> faces;   ///< one per invariant face containing the point
    std::vector<std::string> diagnostics;

    [[nodiscard]] double leading_real() const { return eigenvalues.front().real(); }
};

/// Throws DegenerateError for undefined points.
[[nodiscard]] StabilityVerdict classify(const Parameters& p, EquilibriumId id);
[[nodiscard]] StabilityVerdict classify(const Parameters& p, const EquilibriumRecord& rec);

/// Class of an E-point for perturbations inside the invariant faces in `mask`.
[[nodiscard]] StabilityClass classify_in_face(const Parameters& p, EquilibriumId id, unsigned mask);

} // namespace ecoepi
