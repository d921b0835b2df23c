#include "ecoepi/basin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ecoepi/error.hpp"
#include "ecoepi/stability.hpp"
#include "parallel.hpp"

namespace ecoepi {

State AffineSlice::to_state(const Eigen::Vector3d& u) const {
    return State::from(origin + u[0] * axes[0] + u[1] * axes[1] + u[2] * axes[2]);
}

unsigned AffineSlice::invariant_faces() const {
    unsigned mask = 0;
    for (int i : {0, 2, 3}) {
        if (origin[i] == 0 && axes[0][i] == 0 && axes[1][i] == 0 && axes[2][i] == 0) mask |= 1u << i;
    }
    return mask;
}

Eigen::Vector3d BasinGrid::node(std::size_t flat) const {
    const std::size_t n0 = static_cast<std::size_t>(resolution[0]), n1 = static_cast<std::size_t>(resolution[1]);
    const std::array<std::size_t, 3> idx{flat % n0, (flat / n0) % n1, flat / (n0 * n1)};
    Eigen::Vector3d u;
    for (int a = 0; a < 3; ++a) {
        const double n = resolution[a];
        u[a] = n == 1 ? region.lo[a] : region.lo[a] + (region.hi[a] - region.lo[a]) * idx[a] / (n - 1);
    }
    return u;
}

Attractor to_attractor(const EquilibriumRecord& rec) { return {std::string(to_string(rec.id)), rec.point}; }

int classify_point(const Parameters& p, const Eigen::Vector3d& u, std::span<const Attractor> attractors,
                   const BasinOptions& options) {
    State x = options.slice.to_state(u);
    // Round-off from the affine map must not leave the orthant.
    if (x.P < 0 && x.P > -1e-14) x.P = 0;
    if (x.S < 0 && x.S > -1e-14) x.S = 0;
    if (x.V < 0 && x.V > -1e-14) x.V = 0;
    if (x.W < 0 && x.W > -1e-14) x.W = 0;
    const auto hit = run_to_attractor(p, x, attractors, options.match_radius, options.integration);
    return hit ? static_cast<int>(*hit) : undecided;
}

namespace {

void check_box(const Box3& region, const AffineSlice& slice) {
    for (int a = 0; a < 3; ++a) {
        if (!(region.lo[a] <= region.hi[a])) throw InvalidArgument("region needs lo <= hi on every axis");
    }
    for (int corner = 0; corner < 8; ++corner) {
        Eigen::Vector3d u;
        for (int a = 0; a < 3; ++a) u[a] = (corner >> a) & 1 ? region.hi[a] : region.lo[a];
        if (!slice.to_state(u).nonnegative()) throw InvalidArgument("region leaves the nonnegative orthant");
    }
}

void check_attractors(const Parameters& p, std::span<const Attractor> attractors, const AffineSlice& slice) {
    if (attractors.size() != 2) throw InvalidArgument("basin classification needs exactly two attractors");
    const unsigned faces = slice.invariant_faces();
    for (const auto& a : attractors) {
        unsigned mask = 0;
        for (int i : {0, 2, 3}) {
            if ((faces & (1u << i)) && a.point[i] == 0.0) mask |= 1u << i;
        }
        const auto cls = classify_eigenvalues(face_eigenvalues(jacobian(p, a.point), mask));
        if (!is_stable(cls)) {
            throw InvalidArgument("attractor " + a.id + " is " + std::string(to_string(cls)) + " within the slice");
        }
    }
}

} // namespace

BasinGrid classify_grid(const Parameters& p, const Box3& region, std::array<int, 3> resolution,
                        std::span<const Attractor> attractors, const BasinOptions& options) {
    for (int n : resolution) {
        if (n < 1) throw InvalidArgument("resolution must be positive on every axis");
    }
    check_box(region, options.slice);
    check_attractors(p, attractors, options.slice);
    BasinGrid grid;
    grid.region = region;
    grid.resolution = resolution;
    for (const auto& a : attractors) grid.attractor_ids.push_back(a.id);
    const std::size_t total = static_cast<std::size_t>(resolution[0]) * resolution[1] * resolution[2];
    grid.labels.assign(total, undecided);
    detail::parallel_for(total, [&](std::size_t i) {
        grid.labels[i] = classify_point(p, grid.node(i), attractors, options);
    });
    grid.undecided_count = static_cast<std::size_t>(std::count(grid.labels.begin(), grid.labels.end(), undecided));
    const double fraction = static_cast<double>(grid.undecided_count) / static_cast<double>(total);
    if (fraction > options.undecided_warning) {
        grid.warnings.push_back(std::to_string(grid.undecided_count) + " of " + std::to_string(total) +
                                " nodes undecided");
    }
    return grid;
}

std::vector<Segment> axis_segments(const Box3& region, int axis, std::array<int, 2> resolution) {
    if (axis < 0 || axis > 2) throw InvalidArgument("segment axis must be 0, 1 or 2");
    if (resolution[0] < 1 || resolution[1] < 1) throw InvalidArgument("segment resolution must be positive");
    const int a0 = axis == 0 ? 1 : 0;
    const int a1 = axis == 2 ? 1 : 2;
    auto coord = [&](int ax, int i, int n) {
        return n == 1 ? region.lo[ax] : region.lo[ax] + (region.hi[ax] - region.lo[ax]) * i / (n - 1.0);
    };
    std::vector<Segment> out;
    out.reserve(static_cast<std::size_t>(resolution[0]) * resolution[1]);
    for (int j = 0; j < resolution[1]; ++j) {
        for (int i = 0; i < resolution[0]; ++i) {
            Segment seg;
            seg.from[a0] = seg.to[a0] = coord(a0, i, resolution[0]);
            seg.from[a1] = seg.to[a1] = coord(a1, j, resolution[1]);
            seg.from[axis] = region.lo[axis];
            seg.to[axis] = region.hi[axis];
            out.push_back(seg);
        }
    }
    return out;
}

SeparatrixSampling separatrix_points(const Parameters& p, std::span<const Segment> segments,
                                     std::span<const Attractor> attractors, double bisect_tol,
                                     const BasinOptions& options) {
    if (!(bisect_tol > 0)) throw InvalidArgument("bisection tolerance must be positive");
    check_attractors(p, attractors, options.slice);
    struct Outcome {
        std::optional<SeparatrixPoint> point;
        std::string reason;
    };
    std::vector<Outcome> outcomes(segments.size());
    const auto& slice = options.slice;
    auto phase_distance = [&](const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
        return (slice.to_state(u).vec() - slice.to_state(v).vec()).norm();
    };

    detail::parallel_for(segments.size(), [&](std::size_t k) {
        Eigen::Vector3d lo = segments[k].from, hi = segments[k].to;
        const int la = classify_point(p, lo, attractors, options);
        const int lb = classify_point(p, hi, attractors, options);
        if (la == undecided || lb == undecided) {
            outcomes[k].reason = "undecided endpoint";
            return;
        }
        if (la == lb) {
            outcomes[k].reason = "endpoints share label " + attractors[static_cast<std::size_t>(la)].id;
            return;
        }
        while (phase_distance(lo, hi) > bisect_tol) {
            const Eigen::Vector3d mid = 0.5 * (lo + hi);
            const int lm = classify_point(p, mid, attractors, options);
            if (lm == la) {
                lo = mid;
            } else if (lm == lb) {
                hi = mid;
            } else {
                outcomes[k].reason = "undecided point during bisection";
                return;
            }
        }
        outcomes[k].point = SeparatrixPoint{0.5 * (lo + hi), lo, hi, la, lb, k};
    });

    SeparatrixSampling out;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (outcomes[k].point) {
            out.points.push_back(*outcomes[k].point);
        } else {
            out.skipped.emplace_back(k, outcomes[k].reason);
        }
    }
    return out;
}

ProbeReport probe_sides(const Parameters& p, const SeparatrixModel& model, const SeparatrixSampling& sampling,
                        std::span<const Attractor> attractors, const BasinOptions& options, double offset,
                        std::size_t count, std::uint64_t seed) {
    if (sampling.points.size() < 2) throw InvalidArgument("probing needs at least two separatrix points");
    const int axis = model.graph_axis();

    // Side labels by majority vote over the brackets.
    int votes_below[2] = {0, 0};
    for (const auto& sp : sampling.points) {
        const bool from_is_low = sp.bracket_from[axis] <= sp.bracket_to[axis];
        const int low = from_is_low ? sp.label_from : sp.label_to;
        if (low == 0 || low == 1) ++votes_below[low];
    }
    ProbeReport report;
    report.below_label = votes_below[0] >= votes_below[1] ? 0 : 1;
    report.above_label = 1 - report.below_label;

    std::vector<Eigen::Vector2d> proj;
    proj.reserve(sampling.points.size());
    for (const auto& sp : sampling.points) proj.push_back(model.project(sp.point));
    std::vector<std::size_t> nearest(proj.size());
    for (std::size_t i = 0; i < proj.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < proj.size(); ++j) {
            const double d = (proj[i] - proj[j]).squaredNorm();
            if (j != i && d < best) {
                best = d;
                nearest[i] = j;
            }
        }
    }

    // Base points on the surface between neighbouring samples, far enough from
    // the lower edge of the slice that the low probe stays in the orthant.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, proj.size() - 1);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    std::vector<Eigen::Vector3d> probes;
    const std::size_t max_draws = 1000 * count;
    for (std::size_t draw = 0; probes.size() < 2 * count && draw < max_draws; ++draw) {
        const std::size_t i = pick(rng);
        const double t = frac(rng);
        const Eigen::Vector2d uv = proj[i] + t * (proj[nearest[i]] - proj[i]);
        const Eigen::Vector3d base = model.lift(uv);
        Eigen::Vector3d low = base, high = base;
        low[axis] -= offset;
        high[axis] += offset;
        if (!options.slice.to_state(low).nonnegative() || !options.slice.to_state(high).nonnegative()) continue;
        probes.push_back(low);
        probes.push_back(high);
    }
    std::vector<int> labels(probes.size(), undecided);
    detail::parallel_for(probes.size(), [&](std::size_t k) {
        labels[k] = classify_point(p, probes[k], attractors, options);
    });
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const int expected = k % 2 == 0 ? report.below_label : report.above_label;
        ++report.tested;
        if (labels[k] == expected) ++report.agreed;
    }
    return report;
}

SeparatrixReconstruction reconstruct_separatrix(const Parameters& p, std::span<const Attractor> attractors,
                                                const SeparatrixOptions& options) {
    const auto segments = axis_segments(options.region, options.graph_axis, options.segments);
    auto sampling = separatrix_points(p, segments, attractors, options.bisect_tol, options.basin);
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(sampling.points.size());
    for (const auto& sp : sampling.points) pts.push_back(sp.point);
    SeparatrixModel model = fit_surface(std::move(pts), options.graph_axis, options.kernel);
    const auto probes = probe_sides(p, model, sampling, attractors, options.basin, options.probe_offset,
                                    options.probes, options.seed);
    return {std::move(sampling), std::move(model), probes};
}

} // namespace ecoepi
