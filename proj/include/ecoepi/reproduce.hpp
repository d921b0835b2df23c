#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ecoepi/basin.hpp"
#include "ecoepi/presets.hpp"

namespace ecoepi {

struct ReproductionCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ReproductionReport {
    std::string figure;
    std::vector<std::filesystem::path> files;
    std::vector<ReproductionCheck> checks;
    std::string summary;
    std::optional<State> final_state;      ///< trajectory figures
    std::optional<State> closed_form;      ///< expected equilibrium from the closed forms
    std::optional<double> saddle_offset;   ///< fig4: surface height minus E3's graph coordinate
    std::optional<double> probe_fraction;  ///< fig4: side-consistency rate
    std::optional<std::size_t> boundary_points;
    std::optional<double> fit_residual;
    std::optional<double> decided_fraction;

    [[nodiscard]] bool passed() const;
};

struct ReproduceOptions {
    IntegrationConfig integration;
    std::array<int, 3> basin_resolution{21, 21, 21};
    std::array<int, 2> separatrix_segments{61, 61};
    int mesh_resolution = 41;
};

[[nodiscard]] SeparatrixOptions fig4_separatrix_options(const ReproduceOptions& options = {});

/// Runs the figure's pipeline and writes its files plus <figure>_summary.txt into out_dir
/// (created if missing). Throws IoError on disk failures.
[[nodiscard]] ReproductionReport reproduce(const std::string& figure, const std::filesystem::path& out_dir,
                                           const ReproduceOptions& options = {});

} // namespace ecoepi
