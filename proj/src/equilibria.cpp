#include "ecoepi/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ecoepi/error.hpp"

namespace ecoepi {

namespace {

constexpr std::array<std::string_view, 13> id_names{"E0", "E1", "E2", "E3", "E4", "E5", "E6",
                                                    "E7", "Q0", "Q1", "Q2", "Q3", "SV_endemic"};

bool vanishes(double x) { return std::abs(x) <= threshold_tolerance; }

std::optional<double> ratio(double num, double den) {
    if (den == 0.0) return std::nullopt;
    return num / den;
}

void require(double denominator, const char* expression) {
    if (vanishes(denominator)) throw DegenerateError(expression);
}

// Denominator of P3 and S3.
double e3_denominator(const Parameters& p) { return -p.r * p.s + p.b * p.L * p.K * p.a; }

std::vector<Margin> e3_margins(const Parameters& p) {
    return {
        {"E3_feas1: aK>s", p.a * p.K - p.s, 1},
        {"E3_feas1: bL>r", p.b * p.L - p.r, 1},
        {"E3_feas2: aK<s", p.s - p.a * p.K, 2},
        {"E3_feas2: bL<r", p.r - p.b * p.L, 2},
    };
}

} // namespace

std::string_view to_string(EquilibriumId id) noexcept { return id_names[static_cast<std::size_t>(id)]; }

EquilibriumId parse_equilibrium_id(std::string_view name) {
    for (std::size_t i = 0; i < id_names.size(); ++i) {
        if (id_names[i] == name) return static_cast<EquilibriumId>(i);
    }
    throw InvalidArgument("unknown equilibrium id '" + std::string(name) + "'");
}

int dimension(EquilibriumId id) noexcept { return static_cast<int>(id) <= static_cast<int>(EquilibriumId::E7) ? 4 : 2; }

Subsystem host_subsystem(EquilibriumId id) {
    switch (id) {
    case EquilibriumId::Q0:
    case EquilibriumId::Q1:
    case EquilibriumId::Q2:
    case EquilibriumId::Q3: return Subsystem::competition_PS;
    case EquilibriumId::SV_endemic: return Subsystem::one_strain_SV;
    default: throw InvalidArgument(std::string(to_string(id)) + " is not a subsystem equilibrium");
    }
}

std::string_view to_string(Feasibility f) noexcept {
    switch (f) {
    case Feasibility::feasible: return "feasible";
    case Feasibility::marginal: return "marginal";
    case Feasibility::infeasible: return "infeasible";
    }
    return "?";
}

std::vector<std::pair<std::string, std::optional<double>>> ThresholdSet::entries() const {
    return {{"A", A},         {"B", B},         {"C", C},           {"Dtilde", Dtilde}, {"Delta3", Delta3},
            {"Delta4", Delta4}, {"Delta5", Delta5}, {"E", E},       {"F", F},           {"M", M},
            {"N", N},         {"G", G},         {"Ehat", Ehat},     {"Fhat", Fhat},     {"Mhat", Mhat},
            {"Nhat", Nhat},   {"Ghat", Ghat}};
}

ThresholdSet thresholds(const Parameters& p) {
    const double s = p.s, L = p.L, a = p.a, r = p.r, K = p.K, b = p.b;
    const double lam = p.lambda, bet = p.beta, psi = p.psi, phi = p.phi, mu = p.mu, nu = p.nu, e = p.e, f = p.f;
    ThresholdSet t;
    t.A = ratio(psi + mu, lam);
    t.B = ratio(phi + nu, bet);
    t.C = mu * mu + K * lam * psi - psi * psi;
    t.Dtilde = nu * nu + K * bet * phi - phi * phi;

    const double rs = r * s, bL = b * L, aK = a * K;
    t.Delta3 = rs * (rs * (bL + aK) * (bL + aK) - 2 * rs * (r - s) * (bL - aK) + rs * (r - s) * (r - s) -
                     4 * b * L * K * a * (s * L * b + r * a * K - b * L * a * K));

    auto quadratic_discriminant = [r, K](double rate, double rec, double mort) {
        const double r2 = r * r, m2 = mort * mort, m3 = m2 * mort, m4 = m2 * m2;
        const double q2 = rec * rec, q3 = q2 * rec, q4 = q2 * q2;
        return r2 * m4 + 2 * r2 * m2 * K * rate * rec - 2 * r2 * m2 * q2 + r2 * K * K * rate * rate * q2 -
               2 * r2 * K * rate * q3 + r2 * q4 - 4 * K * K * m3 * r * rate * rate -
               4 * K * K * m2 * r * rate * rate * rec + 4 * K * m2 * r * rate * q2 + 4 * K * m4 * r * rate +
               8 * K * m3 * r * rate * rec;
    };
    t.Delta4 = quadratic_discriminant(lam, psi, mu);
    t.Delta5 = quadratic_discriminant(bet, phi, nu);

    t.E = r * L * K * e * a - e * L * r * s - L * K * b * lam * s + b * L * K * a * psi + b * L * K * a * mu -
          r * s * psi + r * K * lam * s - r * s * mu;
    t.F = s * lam * e * L + s * lam * mu - psi * e * L * a;
    t.M = ratio(s * (e * L * r + b * L * K * lam + r * psi - r * K * lam + r * mu), L * K * (e * r + b * psi + b * mu));
    t.N = ratio(s * lam * (e * L + mu), e * L * psi);
    t.G = ratio(lam * s, mu + psi);

    t.Ehat = r * L * K * f * a - f * L * r * s - b * L * K * bet * s + b * L * K * a * phi + b * L * K * a * nu -
             r * s * phi + r * K * bet * s - r * s * nu;
    t.Fhat = s * bet * f * L + s * bet * nu - phi * f * L * a;
    t.Mhat = ratio(s * (f * L * r + b * L * K * bet + r * phi - r * K * bet + r * nu),
                   L * K * (f * r + b * phi + b * nu));
    t.Nhat = ratio(s * bet * (f * L + nu), f * L * phi);
    t.Ghat = ratio(bet * s, nu + phi);
    return t;
}

Feasibility evaluate_feasibility(const std::vector<Margin>& margins) {
    std::map<int, Feasibility> groups;
    for (const auto& m : margins) {
        if (m.group < 0) continue;
        auto [it, inserted] = groups.try_emplace(m.group, Feasibility::feasible);
        Feasibility here = Feasibility::feasible;
        if (!(m.slack > threshold_tolerance)) {
            here = m.slack >= -threshold_tolerance ? Feasibility::marginal : Feasibility::infeasible;
        }
        it->second = std::max(it->second, here);
    }
    if (groups.empty()) return Feasibility::feasible;
    Feasibility best = Feasibility::infeasible;
    for (const auto& [g, status] : groups) best = std::min(best, status);
    return best;
}

std::vector<double> EquilibriumRecord::coordinates() const {
    if (dimension(id) == 4) return {point.P, point.S, point.V, point.W};
    const auto y = ReducedModel(Parameters{}, host_subsystem(id)).project(point);
    return {y[0], y[1]};
}

EquilibriumRecord compute_equilibrium(const Parameters& p, EquilibriumId id) {
    const double s = p.s, L = p.L, a = p.a, r = p.r, K = p.K, b = p.b;
    const double lam = p.lambda, bet = p.beta, psi = p.psi, phi = p.phi, mu = p.mu, nu = p.nu, e = p.e, f = p.f;
    EquilibriumRecord rec;
    rec.id = id;

    switch (id) {
    case EquilibriumId::E0:
    case EquilibriumId::Q0: break;
    case EquilibriumId::E1:
    case EquilibriumId::Q1:
        rec.point.P = L;
        rec.margins = {{"L>0", L, 0}};
        break;
    case EquilibriumId::E2:
    case EquilibriumId::Q2:
        rec.point.S = K;
        rec.margins = {{"K>0", K, 0}};
        break;
    case EquilibriumId::E3:
    case EquilibriumId::Q3: {
        const double den = e3_denominator(p);
        require(den, "-rs+bLKa");
        rec.point.P = L * r * (-s + a * K) / den;
        rec.point.S = K * s * (-r + b * L) / den;
        rec.margins = e3_margins(p);
        break;
    }
    case EquilibriumId::E4:
    case EquilibriumId::SV_endemic: {
        require(lam, "lambda");
        require(K * lam * lam * mu, "K*lambda^2*mu");
        const double A = (psi + mu) / lam;
        rec.point.S = A;
        rec.point.V = r * (mu + psi) * (K * lam - mu - psi) / (K * lam * lam * mu);
        rec.margins = {{"E4_feas: K>=A", K - A, 0}};
        break;
    }
    case EquilibriumId::E5: {
        require(bet, "beta");
        require(K * bet * bet * nu, "K*beta^2*nu");
        const double B = (phi + nu) / bet;
        rec.point.S = B;
        rec.point.W = r * (phi + nu) * (K * bet - phi - nu) / (K * bet * bet * nu);
        rec.margins = {{"E5_feas: K>Btilde", K - B, 0}};
        break;
    }
    case EquilibriumId::E6: {
        const double den = lam * s + e * L * a;
        require(den, "lambda*s+eLa");
        const auto t = thresholds(p);
        require(t.F, "F");
        rec.point.P = -L * (-lam * s + a * mu + a * psi) / den;
        rec.point.S = s * (mu + psi + e * L) / den;
        rec.point.V = s * (mu + psi + e * L) * t.E / (K * den * t.F);
        require(mu + psi, "mu+psi");
        const double G = *t.G;
        if (t.M) {
            rec.margins.push_back({"E6_feas: a>M", a - *t.M, 0});
        } else {
            rec.margins.push_back({"V6_pos: E*F>0", t.E * t.F, 0});
            rec.notes.push_back("M undefined (LK(er+b psi+b mu)=0); V6 sign checked through E*F");
        }
        rec.margins.push_back({"E6_feas: a<G", G - a, 0});
        rec.margins.push_back({"P6_pos: a<lambda s/(mu+psi)", G - a, 0});
        if (t.N) rec.margins.push_back({"a<N", *t.N - a, -1});
        break;
    }
    case EquilibriumId::E7: {
        const double den = bet * s + f * L * a;
        require(den, "beta*s+fLa");
        const auto t = thresholds(p);
        require(t.Fhat, "Fhat");
        rec.point.P = -L * (-bet * s + a * nu + a * phi) / den;
        rec.point.S = s * (nu + phi + f * L) / den;
        rec.point.W = s * (nu + phi + f * L) * t.Ehat / (K * den * t.Fhat);
        require(nu + phi, "nu+phi");
        const double Ghat = *t.Ghat;
        if (t.Mhat) {
            rec.margins.push_back({"E7_feas: a>Mhat", a - *t.Mhat, 0});
        } else {
            rec.margins.push_back({"W7_pos: Ehat*Fhat>0", t.Ehat * t.Fhat, 0});
            rec.notes.push_back("Mhat undefined (LK(fr+b phi+b nu)=0); W7 sign checked through Ehat*Fhat");
        }
        rec.margins.push_back({"E7_feas: a<Ghat", Ghat - a, 0});
        rec.margins.push_back({"P7_pos: a<beta s/(nu+phi)", Ghat - a, 0});
        if (t.Nhat) rec.margins.push_back({"a<Nhat", *t.Nhat - a, -1});
        break;
    }
    }
    rec.feasibility = evaluate_feasibility(rec.margins);
    return rec;
}

std::vector<EquilibriumRecord> catalog(const Parameters& p) {
    std::vector<EquilibriumRecord> out;
    out.reserve(full_equilibria.size());
    for (auto id : full_equilibria) {
        try {
            out.push_back(compute_equilibrium(p, id));
        } catch (const DegenerateError& err) {
            EquilibriumRecord rec;
            rec.id = id;
            rec.defined = false;
            rec.point = State{std::nan(""), std::nan(""), std::nan(""), std::nan("")};
            rec.notes.push_back(err.what());
            out.push_back(std::move(rec));
        }
    }
    return out;
}

} // namespace ecoepi
