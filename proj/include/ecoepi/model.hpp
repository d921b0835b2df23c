#pragma once

#include <array>
#include <span>
#include <string_view>

#include <Eigen/Core>

namespace ecoepi {

/**
 * Rates and capacities of the two-strain competition model.
 *
 * P competes with the susceptible class S of the second population; V and W
 * are S individuals carrying strain 1 or strain 2. Every field is
 * nonnegative; s, r, L and K must be strictly positive.
 */
struct Parameters {
    double s = 0;      ///< growth rate of P
    double L = 0;      ///< carrying capacity of P
    double a = 0;      ///< damage by S on P
    double r = 0;      ///< growth rate of S
    double K = 0;      ///< carrying capacity of S
    double b = 0;      ///< damage by P on S
    double lambda = 0; ///< strain-1 contact rate
    double beta = 0;   ///< strain-2 contact rate
    double psi = 0;    ///< strain-1 recovery rate
    double phi = 0;    ///< strain-2 recovery rate
    double mu = 0;     ///< natural + strain-1 mortality
    double nu = 0;     ///< natural + strain-2 mortality
    double e = 0;      ///< damage by P on V
    double f = 0;      ///< damage by P on W

    /// Canonical key order, also used by config files and sweeps.
    static constexpr std::array<std::string_view, 14> keys{
        "s", "L", "a", "r", "K", "b", "lambda", "beta", "psi", "phi", "mu", "nu", "e", "f"};

    /// Throws InvalidArgument on negative/non-finite values or zero s, r, L, K.
    void validate() const;
    /// Copy of *this after validate().
    [[nodiscard]] Parameters checked() const;

    [[nodiscard]] static bool is_key(std::string_view key) noexcept;
    /// Throws InvalidArgument for unknown keys.
    [[nodiscard]] double get(std::string_view key) const;
    void set(std::string_view key, double value);
    /// Copy with one field replaced and the result validated.
    [[nodiscard]] Parameters with(std::string_view key, double value) const;

    friend bool operator==(const Parameters&, const Parameters&) = default;
};

/// One point of phase space: (P, S, V, W).
struct State {
    double P = 0;
    double S = 0;
    double V = 0;
    double W = 0;

    static constexpr int dim = 4;

    [[nodiscard]] static State from(const Eigen::Vector4d& x) { return {x[0], x[1], x[2], x[3]}; }
    [[nodiscard]] Eigen::Vector4d vec() const { return {P, S, V, W}; }
    [[nodiscard]] double operator[](int i) const;
    [[nodiscard]] bool nonnegative() const noexcept { return P >= 0 && S >= 0 && V >= 0 && W >= 0; }

    friend bool operator==(const State&, const State&) = default;
};

using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

[[nodiscard]] Vector4 rhs(const Parameters& p, const Vector4& x);
[[nodiscard]] inline Vector4 rhs(const Parameters& p, const State& x) { return rhs(p, x.vec()); }

/// Analytic Jacobian of rhs. Entry (1,1) is the true derivative r(1-S/K) - rS/K - lambda V - beta W - b P.
[[nodiscard]] Matrix4 jacobian(const Parameters& p, const Vector4& x);
[[nodiscard]] inline Matrix4 jacobian(const Parameters& p, const State& x) { return jacobian(p, x.vec()); }

[[nodiscard]] inline double total_population(const State& x) noexcept { return x.P + x.S + x.V + x.W; }
[[nodiscard]] inline double total_population(const Vector4& x) noexcept { return x.sum(); }

/// Two-dimensional invariant subsystems.
enum class Subsystem {
    competition_PS, ///< V = W = 0, coordinates (P, S)
    one_strain_SV,  ///< P = W = 0, coordinates (S, V)
    one_strain_SW,  ///< P = V = 0, coordinates (S, W)
};

[[nodiscard]] std::string_view to_string(Subsystem s) noexcept;

/// Vector field of a subsystem; agrees exactly with rhs on the matching face.
class ReducedModel {
public:
    ReducedModel(const Parameters& p, Subsystem kind);

    [[nodiscard]] Subsystem kind() const noexcept { return kind_; }
    /// Indices into (P, S, V, W) of the two retained coordinates.
    [[nodiscard]] std::array<int, 2> coordinates() const noexcept;

    [[nodiscard]] Eigen::Vector2d field(const Eigen::Vector2d& y) const;
    [[nodiscard]] Eigen::Matrix2d jacobian(const Eigen::Vector2d& y) const;

    [[nodiscard]] State embed(const Eigen::Vector2d& y) const;
    [[nodiscard]] Eigen::Vector2d project(const State& x) const;

private:
    Parameters p_;
    Subsystem kind_;
};

[[nodiscard]] ReducedModel reduce(const Parameters& p, Subsystem kind);

/**
 * Constants of the ultimate-boundedness argument for Phi = P + S + V + W:
 * dPhi/dt + eps Phi <= C with 0 < eps < min(mu, nu) and C = sL + eps L + rK + eps K,
 * hence Phi(t) <= max(Phi(0), C/eps).
 */
struct BoundednessCertificate {
    double epsilon = 0;
    double C = 0;
    double bound = 0;
};

/// epsilon <= 0 selects min(mu, nu)/2. Throws InvalidArgument when min(mu, nu) == 0
/// or epsilon is outside (0, min(mu, nu)).
[[nodiscard]] BoundednessCertificate certify_boundedness(const Parameters& p, const State& x0,
                                                         double epsilon = 0.0, double slack = 0.0);

} // namespace ecoepi
