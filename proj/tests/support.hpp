#pragma once

#include <algorithm>
#include <complex>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "ecoepi/model.hpp"
#include "ecoepi/presets.hpp"

namespace testing {

using Q = boost::multiprecision::cpp_rational;

// Exact value of a plain decimal literal such as "0.7" or "-12.25".
inline Q q(const std::string& dec) {
    const bool neg = !dec.empty() && dec[0] == '-';
    const std::string body = neg ? dec.substr(1) : dec;
    const auto dot = body.find('.');
    Q v;
    if (dot == std::string::npos) {
        v = Q(boost::multiprecision::cpp_int(body));
    } else {
        const std::string frac = body.substr(dot + 1);
        boost::multiprecision::cpp_int den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        std::string digits = body.substr(0, dot) + frac;
        // a leading zero would select octal parsing
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
        v = Q(boost::multiprecision::cpp_int(digits), den);
    }
    return neg ? -v : v;
}

inline double d(const Q& x) { return static_cast<double>(x); }

/// Parameters in exact arithmetic, constructed from decimal strings.
struct ExactParams {
    Q s, L, a, r, K, b, lambda, beta, psi, phi, mu, nu, e, f;

    [[nodiscard]] ecoepi::Parameters to_double() const {
        return {d(s), d(L), d(a), d(r), d(K), d(b), d(lambda), d(beta), d(psi), d(phi), d(mu), d(nu), d(e), d(f)};
    }
};

inline ExactParams fig1_exact() {
    return {q("0.4"), q("1.5"), q("0.3"), q("0.7"), q("2"),   q("0.7"), q("0.7"),
            q("0.2"), q("0.2"), q("0.7"), q("0.5"), q("0.9"), q("0.2"), q("0.2")};
}

inline ExactParams fig4_exact() {
    // beta, phi, nu, f follow the fig1 set; they do not act on the W = 0 face.
    return {q("0.3"), q("1.5"), q("0.2"), q("0.7"), q("3"),   q("0.5"), q("0.6"),
            q("0.2"), q("0.8"), q("0.7"), q("0.3"), q("0.9"), q("0.2"), q("0.2")};
}

inline ExactParams fig5_exact() {
    ExactParams p = fig1_exact();
    p.s = q("0.4");
    p.L = q("0.5");
    p.a = q("0.3");
    p.r = q("0.7");
    p.K = q("1");
    p.b = q("0.7");
    return p;
}

/// Right-hand side evaluated term by term in exact arithmetic.
inline std::array<Q, 4> exact_rhs(const ExactParams& p, const std::array<Q, 4>& x) {
    const Q &P = x[0], &S = x[1], &V = x[2], &W = x[3];
    return {p.s * P * (1 - P / p.L) - p.a * P * S,
            p.r * S * (1 - S / p.K) - p.b * P * S - p.lambda * V * S - p.beta * W * S + p.psi * V + p.phi * W,
            p.lambda * V * S - p.psi * V - p.mu * V - p.e * P * V,
            p.beta * W * S - p.phi * W - p.nu * W - p.f * P * W};
}

/// Uniform draws in (lo, hi] for every parameter.
inline ecoepi::Parameters random_parameters(std::mt19937_64& rng, double lo = 0.0, double hi = 2.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto draw = [&] { return hi - (hi - lo) * u(rng); };
    ecoepi::Parameters p;
    for (auto key : ecoepi::Parameters::keys) p.set(key, draw());
    return p;
}

inline ecoepi::Matrix4 fd_jacobian(const ecoepi::Parameters& p, const ecoepi::Vector4& x, double h = 1e-6) {
    ecoepi::Matrix4 j;
    for (int c = 0; c < 4; ++c) {
        ecoepi::Vector4 xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        j.col(c) = (ecoepi::rhs(p, xp) - ecoepi::rhs(p, xm)) / (2 * h);
    }
    return j;
}

/// Newton iteration on rhs = 0 with the finite-difference Jacobian; returns true on convergence.
inline bool newton_root(const ecoepi::Parameters& p, ecoepi::Vector4& x, int iterations = 60) {
    for (int k = 0; k < iterations; ++k) {
        const ecoepi::Vector4 f = ecoepi::rhs(p, x);
        if (!f.allFinite() || x.norm() > 1e8) return false;
        if (f.lpNorm<Eigen::Infinity>() < 1e-13) return true;
        const ecoepi::Matrix4 j = fd_jacobian(p, x, 1e-7 * std::max(1.0, x.norm()));
        Eigen::FullPivLU<ecoepi::Matrix4> lu(j);
        if (!lu.isInvertible()) return false;
        x -= lu.solve(f);
    }
    return ecoepi::rhs(p, x).lpNorm<Eigen::Infinity>() < 1e-11;
}

/// Largest relative error |a - b| / max(1, |b|) over the best pairing of two small multisets.
inline double multiset_error(std::vector<std::complex<double>> a, const std::vector<std::complex<double>>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<std::size_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            worst = std::max(worst, std::abs(a[perm[i]] - b[i]) / std::max(1.0, std::abs(b[i])));
        }
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// |det(M - z I)| scaled by the matching polynomial magnitude, via complex LU (independent of the eigensolver).
inline double characteristic_residual(const Eigen::MatrixXd& m, std::complex<double> z) {
    const auto n = m.rows();
    Eigen::MatrixXcd shifted = m.cast<std::complex<double>>();
    shifted.diagonal().array() -= z;
    const double scale = std::pow(std::max(1.0, m.norm() + std::abs(z)), static_cast<double>(n));
    return std::abs(shifted.determinant()) / scale;
}

inline const ecoepi::Parameters& fig1() { return ecoepi::scenario("fig1").config.parameters; }
inline const ecoepi::Parameters& fig4() { return ecoepi::scenario("fig4").config.parameters; }
inline const ecoepi::Parameters& fig5() { return ecoepi::scenario("fig5").config.parameters; }

} // namespace testing
