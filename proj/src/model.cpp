#include "ecoepi/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecoepi/error.hpp"

namespace ecoepi {

namespace {

double Parameters::*member_for(std::string_view key) noexcept {
    static constexpr std::array<double Parameters::*, 14> members{
        &Parameters::s,    &Parameters::L,   &Parameters::a,   &Parameters::r,  &Parameters::K,
        &Parameters::b,    &Parameters::lambda, &Parameters::beta, &Parameters::psi, &Parameters::phi,
        &Parameters::mu,   &Parameters::nu,  &Parameters::e,   &Parameters::f};
    for (std::size_t i = 0; i < Parameters::keys.size(); ++i) {
        if (Parameters::keys[i] == key) return members[i];
    }
    return nullptr;
}

} // namespace

void Parameters::validate() const {
    for (auto key : keys) {
        const double v = get(key);
        if (!std::isfinite(v)) throw InvalidArgument("parameter " + std::string(key) + " is not finite");
        if (v < 0) throw InvalidArgument("parameter " + std::string(key) + " must be nonnegative");
    }
    for (auto key : {"s", "r", "L", "K"}) {
        if (get(key) == 0.0) throw InvalidArgument(std::string("parameter ") + key + " must be positive");
    }
}

Parameters Parameters::checked() const {
    validate();
    return *this;
}

bool Parameters::is_key(std::string_view key) noexcept { return member_for(key) != nullptr; }

double Parameters::get(std::string_view key) const {
    auto m = member_for(key);
    if (!m) throw InvalidArgument("unknown parameter key '" + std::string(key) + "'");
    return this->*m;
}

void Parameters::set(std::string_view key, double value) {
    auto m = member_for(key);
    if (!m) throw InvalidArgument("unknown parameter key '" + std::string(key) + "'");
    this->*m = value;
}

Parameters Parameters::with(std::string_view key, double value) const {
    Parameters out = *this;
    out.set(key, value);
    out.validate();
    return out;
}

double State::operator[](int i) const {
    switch (i) {
    case 0: return P;
    case 1: return S;
    case 2: return V;
    case 3: return W;
    default: throw InvalidArgument("state index out of range");
    }
}

Vector4 rhs(const Parameters& p, const Vector4& x) {
    const double P = x[0], S = x[1], V = x[2], W = x[3];
    Vector4 dx;
    dx[0] = p.s * (1 - P / p.L) * P - p.a * P * S;
    dx[1] = p.r * (1 - S / p.K) * S - p.b * P * S - p.lambda * V * S - p.beta * W * S + p.psi * V + p.phi * W;
    dx[2] = p.lambda * V * S - p.psi * V - p.mu * V - p.e * P * V;
    dx[3] = p.beta * W * S - p.phi * W - p.nu * W - p.f * P * W;
    return dx;
}

Matrix4 jacobian(const Parameters& p, const Vector4& x) {
    const double P = x[0], S = x[1], V = x[2], W = x[3];
    Matrix4 J;
    J << -p.s * P / p.L + p.s * (1 - P / p.L) - p.a * S, -p.a * P, 0, 0,
        -p.b * S, -p.r * S / p.K + p.r * (1 - S / p.K) - p.lambda * V - p.beta * W - p.b * P,
        -p.lambda * S + p.psi, -p.beta * S + p.phi,
        -p.e * V, p.lambda * V, p.lambda * S - p.mu - p.psi - p.e * P, 0,
        -p.f * W, p.beta * W, 0, p.beta * S - p.nu - p.phi - p.f * P;
    return J;
}

std::string_view to_string(Subsystem s) noexcept {
    switch (s) {
    case Subsystem::competition_PS: return "competition_PS";
    case Subsystem::one_strain_SV: return "one_strain_SV";
    case Subsystem::one_strain_SW: return "one_strain_SW";
    }
    return "?";
}

ReducedModel::ReducedModel(const Parameters& p, Subsystem kind) : p_(p), kind_(kind) {}

ReducedModel reduce(const Parameters& p, Subsystem kind) { return ReducedModel(p, kind); }

std::array<int, 2> ReducedModel::coordinates() const noexcept {
    switch (kind_) {
    case Subsystem::competition_PS: return {0, 1};
    case Subsystem::one_strain_SV: return {1, 2};
    case Subsystem::one_strain_SW: return {1, 3};
    }
    return {0, 1};
}

// Term order mirrors rhs() so that the restriction is bit-identical.
Eigen::Vector2d ReducedModel::field(const Eigen::Vector2d& y) const {
    const auto& p = p_;
    switch (kind_) {
    case Subsystem::competition_PS: {
        const double P = y[0], S = y[1];
        return {p.s * (1 - P / p.L) * P - p.a * P * S, p.r * (1 - S / p.K) * S - p.b * P * S};
    }
    case Subsystem::one_strain_SV: {
        const double S = y[0], V = y[1];
        return {p.r * (1 - S / p.K) * S - p.lambda * V * S + p.psi * V, p.lambda * V * S - p.psi * V - p.mu * V};
    }
    case Subsystem::one_strain_SW: {
        const double S = y[0], W = y[1];
        return {p.r * (1 - S / p.K) * S - p.beta * W * S + p.phi * W, p.beta * W * S - p.phi * W - p.nu * W};
    }
    }
    return Eigen::Vector2d::Zero();
}

Eigen::Matrix2d ReducedModel::jacobian(const Eigen::Vector2d& y) const {
    const auto& p = p_;
    Eigen::Matrix2d J;
    switch (kind_) {
    case Subsystem::competition_PS: {
        const double P = y[0], S = y[1];
        J << -p.s * P / p.L + p.s * (1 - P / p.L) - p.a * S, -p.a * P,
            -p.b * S, -p.r * S / p.K + p.r * (1 - S / p.K) - p.b * P;
        break;
    }
    case Subsystem::one_strain_SV: {
        const double S = y[0], V = y[1];
        J << -p.r * S / p.K + p.r * (1 - S / p.K) - p.lambda * V, -p.lambda * S + p.psi,
            p.lambda * V, p.lambda * S - p.mu - p.psi;
        break;
    }
    case Subsystem::one_strain_SW: {
        const double S = y[0], W = y[1];
        J << -p.r * S / p.K + p.r * (1 - S / p.K) - p.beta * W, -p.beta * S + p.phi,
            p.beta * W, p.beta * S - p.nu - p.phi;
        break;
    }
    }
    return J;
}

State ReducedModel::embed(const Eigen::Vector2d& y) const {
    Vector4 x = Vector4::Zero();
    auto idx = coordinates();
    x[idx[0]] = y[0];
    x[idx[1]] = y[1];
    return State::from(x);
}

Eigen::Vector2d ReducedModel::project(const State& x) const {
    auto idx = coordinates();
    return {x[idx[0]], x[idx[1]]};
}

BoundednessCertificate certify_boundedness(const Parameters& p, const State& x0, double epsilon, double slack) {
    const double eps0 = std::min(p.mu, p.nu);
    if (eps0 <= 0) throw InvalidArgument("boundedness needs min(mu, nu) > 0");
    if (epsilon <= 0) epsilon = eps0 / 2;
    if (epsilon >= eps0) throw InvalidArgument("epsilon must lie in (0, min(mu, nu))");
    BoundednessCertificate c;
    c.epsilon = epsilon;
    c.C = p.s * p.L + epsilon * p.L + p.r * p.K + epsilon * p.K;
    c.bound = std::max(total_population(x0), c.C / epsilon) + slack;
    return c;
}

} // namespace ecoepi
