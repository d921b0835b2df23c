#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ecoepi/basin.hpp"
#include "ecoepi/bifurcation.hpp"
#include "ecoepi/equilibria.hpp"
#include "ecoepi/integrator.hpp"
#include "ecoepi/stability.hpp"

namespace ecoepi {

using Json = nlohmann::ordered_json;

/// Shortest decimal that parses back to the same double; "nan"/"inf" for non-finite values.
[[nodiscard]] std::string format_double(double v);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

[[nodiscard]] Json to_json(const EquilibriumRecord& rec);
[[nodiscard]] Json to_json(const StabilityVerdict& verdict);
[[nodiscard]] Json to_json(const ThresholdSet& t);
/// One JSON document per line.
void write_jsonl(std::ostream& out, const std::vector<Json>& lines);

/// Columns param_value,id,P,S,V,W,feasible,class,lead_re.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

using AxisNames = std::array<std::string, 3>;
inline const AxisNames default_axis_names{"P", "S", "V"};

/// Columns <axes>,label; labels are attractor ids or "undecided".
void write_basin_csv(std::ostream& out, const BasinGrid& grid, const AxisNames& axes = default_axis_names);
/// Columns <axes>,label with label "<from>/<to>".
void write_separatrix_csv(std::ostream& out, const SeparatrixSampling& sampling, std::span<const Attractor> attractors,
                          const AxisNames& axes = default_axis_names);

/// Regular n x n lattice over the bounding box of the model's projected points.
[[nodiscard]] std::vector<Eigen::Vector3d> surface_lattice(const SeparatrixModel& model, int n);
/// Lattice vertices plus two triangles per cell, 1-based indices.
void write_surface_obj(std::ostream& out, const SeparatrixModel& model, int n);
void write_lattice_csv(std::ostream& out, const SeparatrixModel& model, int n, const AxisNames& axes = default_axis_names);

/// Opens `path` for writing and runs `body`; throws IoError on any failure.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

} // namespace ecoepi
