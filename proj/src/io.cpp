#include "ecoepi/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "ecoepi/error.hpp"

namespace ecoepi {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json margins_json(const std::vector<Margin>& margins) {
    Json out = Json::object();
    for (const auto& m : margins) out[m.name] = number(m.slack);
    return out;
}

Json eigen_json(const std::vector<Complex>& values) {
    Json out = Json::array();
    for (const auto& v : values) out.push_back(Json::array({number(v.real()), number(v.imag())}));
    return out;
}

} // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,P,S,V,W\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& x = traj.states[i];
        out << format_double(traj.times[i]) << ',' << format_double(x.P) << ',' << format_double(x.S) << ','
            << format_double(x.V) << ',' << format_double(x.W) << '\n';
    }
}

Json to_json(const EquilibriumRecord& rec) {
    Json j;
    j["id"] = std::string(to_string(rec.id));
    Json coords = Json::array();
    for (double c : rec.coordinates()) coords.push_back(number(c));
    j["coords"] = coords;
    j["defined"] = rec.defined;
    j["feasible"] = rec.feasible();
    j["marginal"] = rec.marginal();
    j["margins"] = margins_json(rec.margins);
    j["notes"] = rec.notes;
    return j;
}

Json to_json(const StabilityVerdict& v) {
    Json j = to_json(v.record);
    j["eigenvalues"] = eigen_json(v.eigenvalues);
    j["class"] = std::string(to_string(v.cls));
    j["method"] = std::string(to_string(v.method));
    j["condition_report"] = margins_json(v.conditions);
    Json faces = Json::object();
    for (const auto& f : v.faces) {
        faces[f.face] = Json{{"class", std::string(to_string(f.cls))}, {"eigenvalues", eigen_json(f.eigenvalues)}};
    }
    j["faces"] = faces;
    j["diagnostics"] = v.diagnostics;
    return j;
}

Json to_json(const ThresholdSet& t) {
    Json j;
    for (const auto& [name, value] : t.entries()) j[name] = value ? number(*value) : Json(nullptr);
    return j;
}

void write_jsonl(std::ostream& out, const std::vector<Json>& lines) {
    for (const auto& line : lines) out << line.dump() << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "param_value,id,P,S,V,W,feasible,class,lead_re\n";
    for (const auto& row : result.rows) {
        out << format_double(row.value) << ',' << to_string(row.id) << ',' << format_double(row.point.P) << ','
            << format_double(row.point.S) << ',' << format_double(row.point.V) << ',' << format_double(row.point.W)
            << ',';
        if (!row.defined) {
            out << "undefined,undefined,nan\n";
            continue;
        }
        out << (row.feasibility == Feasibility::feasible ? "true"
                                                         : row.feasibility == Feasibility::marginal ? "marginal"
                                                                                                    : "false")
            << ',' << to_string(row.cls) << ',' << format_double(row.lead_re) << '\n';
    }
}

void write_basin_csv(std::ostream& out, const BasinGrid& grid, const AxisNames& axes) {
    out << axes[0] << ',' << axes[1] << ',' << axes[2] << ",label\n";
    for (std::size_t i = 0; i < grid.labels.size(); ++i) {
        const auto u = grid.node(i);
        const int label = grid.labels[i];
        out << format_double(u[0]) << ',' << format_double(u[1]) << ',' << format_double(u[2]) << ','
            << (label == undecided ? std::string("undecided") : grid.attractor_ids[static_cast<std::size_t>(label)])
            << '\n';
    }
}

void write_separatrix_csv(std::ostream& out, const SeparatrixSampling& sampling, std::span<const Attractor> attractors,
                          const AxisNames& axes) {
    out << axes[0] << ',' << axes[1] << ',' << axes[2] << ",label\n";
    for (const auto& sp : sampling.points) {
        out << format_double(sp.point[0]) << ',' << format_double(sp.point[1]) << ',' << format_double(sp.point[2])
            << ',' << attractors[static_cast<std::size_t>(sp.label_from)].id << '/'
            << attractors[static_cast<std::size_t>(sp.label_to)].id << '\n';
    }
}

std::vector<Eigen::Vector3d> surface_lattice(const SeparatrixModel& model, int n) {
    if (n < 2) throw InvalidArgument("lattice needs at least 2 nodes per axis");
    Eigen::Vector2d lo = model.project(model.points().front()), hi = lo;
    for (const auto& x : model.points()) {
        lo = lo.cwiseMin(model.project(x));
        hi = hi.cwiseMax(model.project(x));
    }
    std::vector<Eigen::Vector3d> out;
    out.reserve(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Eigen::Vector2d uv(lo[0] + (hi[0] - lo[0]) * i / (n - 1.0), lo[1] + (hi[1] - lo[1]) * j / (n - 1.0));
            out.push_back(model.lift(uv));
        }
    }
    return out;
}

void write_surface_obj(std::ostream& out, const SeparatrixModel& model, int n) {
    const auto verts = surface_lattice(model, n);
    out << "# separatrix surface, " << n << "x" << n << " lattice\n";
    for (const auto& v : verts) {
        out << "v " << format_double(v[0]) << ' ' << format_double(v[1]) << ' ' << format_double(v[2]) << '\n';
    }
    for (int j = 0; j + 1 < n; ++j) {
        for (int i = 0; i + 1 < n; ++i) {
            const int a = j * n + i + 1, b = a + 1, c = a + n, d = c + 1;
            out << "f " << a << ' ' << b << ' ' << d << '\n';
            out << "f " << a << ' ' << d << ' ' << c << '\n';
        }
    }
}

void write_lattice_csv(std::ostream& out, const SeparatrixModel& model, int n, const AxisNames& axes) {
    out << axes[0] << ',' << axes[1] << ',' << axes[2] << '\n';
    for (const auto& v : surface_lattice(model, n)) {
        out << format_double(v[0]) << ',' << format_double(v[1]) << ',' << format_double(v[2]) << '\n';
    }
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    body(out);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

} // namespace ecoepi
