#include "ecoepi/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "ecoepi/error.hpp"

namespace ecoepi {

namespace {

double quotient(double num, double den) {
    if (den == 0.0) return num == 0.0 ? std::nan("") : std::copysign(std::numeric_limits<double>::infinity(), num);
    return num / den;
}

void sort_descending(std::vector<Complex>& v) {
    std::stable_sort(v.begin(), v.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
}

// Roots of the 2x2 block written as (num ± sqrt(disc)) / den.
std::pair<Complex, Complex> quadratic_pair(double num, double disc, double den) {
    const Complex root = std::sqrt(Complex(disc, 0.0));
    return {(num + root) / den, (num - root) / den};
}

// Smallest over assignments of the largest relative mismatch.
double multiset_distance(std::vector<Complex> a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::sort(a.begin(), a.end(), [](auto x, auto y) { return std::pair(x.real(), x.imag()) < std::pair(y.real(), y.imag()); });
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
        }
        best = std::min(best, worst);
    } while (std::next_permutation(a.begin(), a.end(), [](auto x, auto y) {
        return std::pair(x.real(), x.imag()) < std::pair(y.real(), y.imag());
    }));
    return best;
}

constexpr double cross_check_tolerance = 1e-7;

} // namespace

std::string_view to_string(StabilityClass c) noexcept {
    switch (c) {
    case StabilityClass::stable_node: return "stable_node";
    case StabilityClass::stable_focus: return "stable_focus";
    case StabilityClass::saddle: return "saddle";
    case StabilityClass::unstable: return "unstable";
    case StabilityClass::marginal: return "marginal";
    }
    return "?";
}

std::string_view to_string(Method m) noexcept {
    switch (m) {
    case Method::analytic: return "analytic";
    case Method::numeric: return "numeric";
    case Method::both: return "both";
    }
    return "?";
}

Eigenpairs numeric_eigenpairs(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw InvalidArgument("eigenvalues need a nonempty square matrix");
    if (!m.allFinite()) throw NumericalError("matrix has non-finite entries");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, true);
    if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue iteration did not converge");
    const Eigen::VectorXcd values = solver.eigenvalues();
    const Eigen::MatrixXcd vectors = solver.eigenvectors();
    std::vector<int> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        if (values[i].real() != values[j].real()) return values[i].real() > values[j].real();
        return values[i].imag() > values[j].imag();
    });
    Eigenpairs out;
    out.vectors.resize(m.rows(), m.cols());
    for (std::size_t k = 0; k < order.size(); ++k) {
        out.values.push_back(values[order[k]]);
        out.vectors.col(static_cast<Eigen::Index>(k)) = vectors.col(order[k]);
    }
    return out;
}

std::vector<Complex> numeric_eigenvalues(const Eigen::MatrixXd& m) { return numeric_eigenpairs(m).values; }

std::vector<Complex> analytic_eigenvalues(const Parameters& p, EquilibriumId id) {
    const double s = p.s, L = p.L, a = p.a, r = p.r, K = p.K, b = p.b;
    const double lam = p.lambda, bet = p.beta, psi = p.psi, phi = p.phi, mu = p.mu, nu = p.nu, e = p.e, f = p.f;
    using Id = EquilibriumId;

    auto e3_pair = [&]() {
        const double den = b * L * K * a - r * s;
        if (std::abs(den) <= threshold_tolerance) throw DegenerateError("-rs+bLKa");
        const auto t = thresholds(p);
        return quadratic_pair(r * s * (-b * L - a * K + r + s), t.Delta3, 2 * den);
    };
    auto e4_pair = [&]() {
        if (std::abs(K * lam * mu) <= threshold_tolerance) throw DegenerateError("K*lambda*mu");
        const auto t = thresholds(p);
        return quadratic_pair(-r * t.C, t.Delta4, 2 * K * lam * mu);
    };

    switch (id) {
    case Id::E0: return {s, r, -(psi + mu), -(phi + nu)};
    case Id::E1: return {-s, -mu - psi - e * L, -nu - phi - f * L, r - b * L};
    case Id::E2: return {-r, s - a * K, lam * K - psi - mu, bet * K - phi - nu};
    case Id::E3: {
        auto [l1, l2] = e3_pair();
        const double den = b * L * K * a - r * s;
        const double l3 = (f * L * r * (s - a * K) - bet * K * s * (r - b * L)) / den - (nu + phi);
        const double l4 = (e * L * r * (s - a * K) - lam * K * s * (r - b * L)) / den - (mu + psi);
        return {l1, l2, l3, l4};
    }
    case Id::E4: {
        auto [l1, l2] = e4_pair();
        const double A = (psi + mu) / lam;
        return {l1, l2, bet * A - nu - phi, s - a * A};
    }
    case Id::E5: {
        if (std::abs(K * bet * nu) <= threshold_tolerance) throw DegenerateError("K*beta*nu");
        const auto t = thresholds(p);
        auto [l1, l2] = quadratic_pair(-r * t.Dtilde, t.Delta5, 2 * K * bet * nu);
        const double B = (phi + nu) / bet;
        return {l1, l2, lam * B - (mu + psi), s - a * B};
    }
    case Id::Q0: return {s, r};
    case Id::Q1: return {-s, r - b * L};
    case Id::Q2: return {-r, s - a * K};
    case Id::Q3: {
        auto [l1, l2] = e3_pair();
        return {l1, l2};
    }
    case Id::SV_endemic: {
        auto [l1, l2] = e4_pair();
        return {l1, l2};
    }
    case Id::E6:
    case Id::E7: break;
    }
    throw InvalidArgument(std::string("no closed-form eigenvalues for ") + std::string(to_string(id)) +
                          "; use numeric_eigenvalues on its Jacobian");
}

Eigen::MatrixXd host_jacobian(const Parameters& p, const EquilibriumRecord& rec) {
    if (dimension(rec.id) == 4) return jacobian(p, rec.point);
    const ReducedModel reduced(p, host_subsystem(rec.id));
    return reduced.jacobian(reduced.project(rec.point));
}

StabilityClass classify_eigenvalues(const std::vector<Complex>& values) {
    bool any_pos = false, any_neg = false, oscillatory = false;
    for (const auto& v : values) {
        if (std::abs(v.real()) <= marginal_band) return StabilityClass::marginal;
        (v.real() > 0 ? any_pos : any_neg) = true;
        if (std::abs(v.imag()) > marginal_band) oscillatory = true;
    }
    if (!any_pos) return oscillatory ? StabilityClass::stable_focus : StabilityClass::stable_node;
    return any_neg ? StabilityClass::saddle : StabilityClass::unstable;
}

std::vector<Complex> face_eigenvalues(const Matrix4& jac, unsigned mask) {
    std::vector<int> keep;
    for (int i = 0; i < 4; ++i) {
        if (!(mask & (1u << i))) keep.push_back(i);
    }
    if (keep.empty()) return {};
    Eigen::MatrixXd sub(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        for (std::size_t j = 0; j < keep.size(); ++j) sub(i, j) = jac(keep[i], keep[j]);
    }
    return numeric_eigenvalues(sub);
}

namespace {

std::vector<Margin> stability_conditions(const Parameters& p, const EquilibriumRecord& rec) {
    const double s = p.s, L = p.L, a = p.a, r = p.r, K = p.K, b = p.b;
    const double lam = p.lambda, bet = p.beta, psi = p.psi, phi = p.phi, mu = p.mu, nu = p.nu, e = p.e, f = p.f;
    const auto t = thresholds(p);
    const double A = quotient(psi + mu, lam), B = quotient(phi + nu, bet);
    std::vector<Margin> c;
    using Id = EquilibriumId;
    switch (rec.id) {
    case Id::E0:
    case Id::Q0: break;
    case Id::E1:
    case Id::Q1: c.push_back({"E1_stab: L>r/b", L - quotient(r, b)}); break;
    case Id::E2:
        c.push_back({"E2_stab: K>s/a", K - quotient(s, a)});
        c.push_back({"E2_stab: K<(psi+mu)/lambda", A - K});
        c.push_back({"E2_stab: K<(phi+nu)/beta", B - K});
        break;
    case Id::Q2: c.push_back({"Q2_stab: K>s/a", K - quotient(s, a)}); break;
    case Id::E3:
    case Id::Q3: {
        c = rec.margins;
        c.push_back({"RH: rs>abKL", r * s - a * b * K * L});
        c.push_back({"delta_pos: Delta>=0", t.Delta3});
        if (rec.id == Id::E3) {
            const double w = quotient(L * K * a * (nu * b + phi * b + f * r),
                                      f * L * r - bet * K * r + bet * L * K * b + nu * r + phi * r);
            const double v = quotient(L * K * a * (mu * b + psi * b + e * r),
                                      e * L * r - lam * K * r + lam * L * K * b + mu * r + psi * r);
            c.push_back({"stab_E3: s>max{...}", s - std::max(w, v)});
        }
        break;
    }
    case Id::E4:
    case Id::SV_endemic: {
        c = rec.margins;
        c.push_back({"C>0", t.C});
        c.push_back({"Delta>=0", t.Delta4});
        if (t.Delta4 >= 0) c.push_back({"E4_stab_n: sqrt(Delta)<rC", r * t.C - std::sqrt(t.Delta4)});
        c.push_back({"E4 focus: r(mu^2+K lambda psi^2-psi^2)>0", r * (mu * mu + K * lam * psi * psi - psi * psi)});
        if (rec.id == Id::E4) {
            c.push_back({"E4_stab: s/a<A", A - quotient(s, a)});
            c.push_back({"E4_stab: A<B", B - A});
        }
        break;
    }
    case Id::E5:
        c = rec.margins;
        c.push_back({"Dtilde>0", t.Dtilde});
        c.push_back({"Delta5>=0", t.Delta5});
        if (t.Delta5 >= 0) c.push_back({"E5_stab_n: sqrt(Delta5)<r Dtilde", r * t.Dtilde - std::sqrt(t.Delta5)});
        c.push_back({"E5 focus: r(nu^2+K beta phi^2-phi^2)>0", r * (nu * nu + K * bet * phi * phi - phi * phi)});
        c.push_back({"E5_stab: s/a<Btilde", B - quotient(s, a)});
        c.push_back({"E5_stab: Btilde<Atilde", A - B});
        break;
    case Id::E6:
    case Id::E7: c = rec.margins; break;
    }
    return c;
}

bool slack_holds(const std::vector<Margin>& c, std::string_view name) {
    for (const auto& m : c) {
        if (m.name == name) return m.slack > 0;
    }
    return true;
}

// Stability predicted by the closed-form inequality chains for E4 and E5.
std::optional<bool> chain_prediction(const StabilityVerdict& v) {
    const auto& c = v.conditions;
    if (v.record.id == EquilibriumId::E4) {
        return slack_holds(c, "E4_stab: s/a<A") && slack_holds(c, "E4_stab: A<B") &&
               slack_holds(c, "E4_stab_n: sqrt(Delta)<rC");
    }
    if (v.record.id == EquilibriumId::E5) {
        return slack_holds(c, "E5_stab: s/a<Btilde") && slack_holds(c, "E5_stab: Btilde<Atilde") &&
               slack_holds(c, "E5_stab_n: sqrt(Delta5)<r Dtilde");
    }
    return std::nullopt;
}

bool has_closed_form(EquilibriumId id) { return id != EquilibriumId::E6 && id != EquilibriumId::E7; }

} // namespace

StabilityVerdict classify(const Parameters& p, EquilibriumId id) { return classify(p, compute_equilibrium(p, id)); }

StabilityVerdict classify(const Parameters& p, const EquilibriumRecord& rec) {
    if (!rec.defined) {
        throw DegenerateError(rec.notes.empty() ? std::string(to_string(rec.id)) : rec.notes.front());
    }
    StabilityVerdict v;
    v.record = rec;
    const auto numeric = numeric_eigenvalues(host_jacobian(p, rec));
    if (has_closed_form(rec.id)) {
        v.eigenvalues = analytic_eigenvalues(p, rec.id);
        sort_descending(v.eigenvalues);
        v.method = Method::both;
        const double gap = multiset_distance(v.eigenvalues, numeric);
        if (!(gap <= cross_check_tolerance)) {
            v.diagnostics.push_back("closed-form and numeric eigenvalues differ by " + std::to_string(gap));
        }
    } else {
        v.eigenvalues = numeric;
        v.method = Method::numeric;
    }
    v.cls = classify_eigenvalues(v.eigenvalues);
    v.conditions = stability_conditions(p, rec);

    if (dimension(rec.id) == 4) {
        const Matrix4 J = jacobian(p, rec.point);
        const std::array<std::pair<unsigned, const char*>, 3> faces{
            {{face_P, "P=0"}, {face_V, "V=0"}, {face_W, "W=0"}}};
        for (auto [mask, name] : faces) {
            const int idx = mask == face_P ? 0 : (mask == face_V ? 2 : 3);
            if (rec.point[idx] != 0.0) continue;
            FaceVerdict fv{name, mask, face_eigenvalues(J, mask), StabilityClass::marginal};
            fv.cls = classify_eigenvalues(fv.eigenvalues);
            v.faces.push_back(std::move(fv));
        }
    }
    if (!rec.feasible()) v.diagnostics.push_back(std::string("point is ") + std::string(to_string(rec.feasibility)));
    if (rec.feasible()) {
        if (auto predicted = chain_prediction(v); predicted && *predicted != is_stable(v.cls) &&
                                                  v.cls != StabilityClass::marginal) {
            v.diagnostics.push_back(std::string("inequality chain predicts ") + (*predicted ? "stable" : "unstable") +
                                    " but eigenvalues give " + std::string(to_string(v.cls)));
        }
    }
    return v;
}

StabilityClass classify_in_face(const Parameters& p, EquilibriumId id, unsigned mask) {
    const auto rec = compute_equilibrium(p, id);
    if (dimension(id) != 4) throw InvalidArgument("face restriction applies to E-points only");
    for (int i : {0, 2, 3}) {
        if ((mask & (1u << i)) && rec.point[i] != 0.0) {
            throw InvalidArgument(std::string(to_string(id)) + " does not lie on the requested face");
        }
    }
    return classify_eigenvalues(face_eigenvalues(jacobian(p, rec.point), mask));
}

} // namespace ecoepi
