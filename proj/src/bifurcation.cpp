#include "ecoepi/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "ecoepi/error.hpp"
#include "parallel.hpp"

namespace ecoepi {

namespace {

using Id = EquilibriumId;

int crossing_index(const EquilibriumPair& pair) {
    if (pair == EquilibriumPair{Id::E2, Id::E4}) return 2;
    if (pair == EquilibriumPair{Id::E2, Id::E5}) return 3;
    if (pair == EquilibriumPair{Id::E4, Id::E6}) return 3;
    if (pair == EquilibriumPair{Id::E5, Id::E7}) return 3;
    if (pair == EquilibriumPair{Id::E1, Id::E3}) return 3;
    if (pair == EquilibriumPair{Id::E2, Id::E3}) return 1;
    throw InvalidArgument("unsupported transcritical pair (" + std::string(to_string(pair.first)) + ", " +
                          std::string(to_string(pair.second)) + ")");
}

constexpr double validation_tolerance = 1e-8;
constexpr int max_bisections = 400;

template <class F>
double bisect(F&& g, double lo, double hi, double width) {
    double glo = g(lo);
    const double ghi = g(hi);
    if (std::abs(glo) <= threshold_tolerance) return lo;
    if (std::abs(ghi) <= threshold_tolerance) return hi;
    if ((glo > 0) == (ghi > 0)) throw InvalidArgument("crossing margin does not change sign on the interval");
    for (int i = 0; i < max_bisections && hi - lo > width; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm > 0) == (glo > 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void check_range(const std::string& key, double lo, double hi) {
    if (!Parameters::is_key(key)) throw InvalidArgument("unknown parameter key '" + key + "'");
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw InvalidArgument("range needs lo < hi");
}

} // namespace

SweepResult sweep(const Parameters& p, const std::string& key, double lo, double hi, std::size_t n) {
    check_range(key, lo, hi);
    if (n < 2) throw InvalidArgument("sweep needs at least 2 grid points");
    SweepResult out;
    out.parameter = key;
    out.grid.resize(n);
    std::vector<Parameters> points(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.grid[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        points[i] = p.with(key, out.grid[i]);
    }
    out.rows.resize(n * full_equilibria.size());
    detail::parallel_for(n, [&](std::size_t i) {
        const auto records = catalog(points[i]);
        for (std::size_t k = 0; k < records.size(); ++k) {
            BranchRow& row = out.rows[i * full_equilibria.size() + k];
            const auto& rec = records[k];
            row.value = out.grid[i];
            row.id = rec.id;
            row.point = rec.point;
            row.defined = rec.defined;
            row.feasibility = rec.feasibility;
            if (rec.defined) {
                const auto v = classify(points[i], rec);
                row.cls = v.cls;
                row.lead_re = v.leading_real();
            } else {
                row.lead_re = std::nan("");
            }
        }
    });
    return out;
}

const std::vector<EquilibriumPair>& supported_transcritical_pairs() {
    static const std::vector<EquilibriumPair> pairs{{Id::E2, Id::E4}, {Id::E2, Id::E5}, {Id::E4, Id::E6},
                                                    {Id::E5, Id::E7}, {Id::E1, Id::E3}, {Id::E2, Id::E3}};
    return pairs;
}

double crossing_margin(const Parameters& p, const EquilibriumPair& pair) {
    crossing_index(pair); // rejects unsupported pairs
    if (pair == EquilibriumPair{Id::E2, Id::E4}) return p.lambda * p.K - p.psi - p.mu;
    if (pair == EquilibriumPair{Id::E2, Id::E5}) return p.beta * p.K - p.phi - p.nu;
    if (pair == EquilibriumPair{Id::E4, Id::E6}) {
        if (p.lambda == 0) throw DegenerateError("lambda");
        return p.s - p.a * (p.psi + p.mu) / p.lambda;
    }
    if (pair == EquilibriumPair{Id::E5, Id::E7}) {
        if (p.beta == 0) throw DegenerateError("beta");
        return p.s - p.a * (p.phi + p.nu) / p.beta;
    }
    if (pair == EquilibriumPair{Id::E1, Id::E3}) return p.r - p.b * p.L;
    return p.s - p.a * p.K;
}

Complex eigenvalue_nearest_zero(const Parameters& p, EquilibriumId id) {
    const auto v = classify(p, id);
    return *std::min_element(v.eigenvalues.begin(), v.eigenvalues.end(),
                             [](const Complex& x, const Complex& y) { return std::abs(x.real()) < std::abs(y.real()); });
}

TranscriticalPoint find_transcritical(const Parameters& p, const std::string& key, const EquilibriumPair& pair,
                                      double lo, double hi) {
    check_range(key, lo, hi);
    const int idx = crossing_index(pair);
    const double critical = bisect([&](double v) { return crossing_margin(p.with(key, v), pair); }, lo, hi,
                                   transcritical_bracket);
    const Parameters q = p.with(key, critical);

    TranscriticalPoint tp;
    tp.parameter = key;
    tp.critical = critical;
    tp.pair = pair;
    tp.crossing_index = idx;
    const auto first = compute_equilibrium(q, pair.first);
    const auto second = compute_equilibrium(q, pair.second);
    tp.coincidence_gap = (first.point.vec() - second.point.vec()).norm();
    tp.crossing_re_first = analytic_eigenvalues(q, pair.first)[static_cast<std::size_t>(idx)].real();
    tp.crossing_re_second = eigenvalue_nearest_zero(q, pair.second).real();
    if (!(tp.coincidence_gap <= validation_tolerance)) {
        throw NumericalError("branches do not coincide at the located point (gap " +
                             std::to_string(tp.coincidence_gap) + ")");
    }
    if (!(std::abs(tp.crossing_re_first) <= validation_tolerance &&
          std::abs(tp.crossing_re_second) <= validation_tolerance)) {
        throw NumericalError("crossing eigenvalue does not vanish at the located point");
    }
    return tp;
}

double find_subsystem_transcritical(const Parameters& p, Subsystem kind, const std::string& key, double lo,
                                    double hi) {
    check_range(key, lo, hi);
    if (kind == Subsystem::competition_PS) throw InvalidArgument("subsystem exchange needs a one-strain subsystem");
    auto leading = [&](double v) {
        const Parameters q = p.with(key, v);
        const ReducedModel reduced(q, kind);
        const Eigen::Matrix2d J = reduced.jacobian(Eigen::Vector2d(q.K, 0.0));
        const Eigen::Vector2cd ev = Eigen::EigenSolver<Eigen::Matrix2d>(J, false).eigenvalues();
        return std::max(ev[0].real(), ev[1].real());
    };
    return bisect(leading, lo, hi, transcritical_bracket);
}

} // namespace ecoepi
