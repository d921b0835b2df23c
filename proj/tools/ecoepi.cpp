#include <array>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ecoepi/ecoepi.h"

namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success, 2 bad config or arguments, 3 I/O, 4 numerical failure.
int exit_code(ecoepi_status st) {
    switch (st) {
    case ECOEPI_OK: return 0;
    case ECOEPI_INVALID_ARGUMENT:
    case ECOEPI_CONFIG_ERROR: return 2;
    case ECOEPI_IO_ERROR: return 3;
    case ECOEPI_NUMERICAL_ERROR:
    case ECOEPI_DEGENERATE: return 4;
    case ECOEPI_INTERNAL_ERROR: break;
    }
    return 6;
}

struct Failure {
    ecoepi_status status;
};

void check(ecoepi_status st) {
    if (st != ECOEPI_OK) throw Failure{st};
}

template <class T, void (*Free)(T*)>
struct Handle {
    T* ptr = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(ptr); }
    T** out() { return &ptr; }
    T* get() const { return ptr; }
};

using Model = Handle<ecoepi_model, ecoepi_model_free>;

struct Globals {
    std::string config;
    std::string preset;
    std::string out;
    double tol = 0;
    bool dump = false;
};

struct SliceArgs {
    std::vector<std::string> attractors{"E1", "E4"};
    std::vector<double> box;
};

void load_model(const Globals& g, Model& m) {
    if (!g.config.empty() && !g.preset.empty()) {
        std::cerr << "error: --config and --preset are mutually exclusive\n";
        throw Failure{ECOEPI_CONFIG_ERROR};
    }
    if (!g.config.empty()) {
        check(ecoepi_model_load(g.config.c_str(), m.out()));
    } else if (!g.preset.empty()) {
        check(ecoepi_model_preset(g.preset.c_str(), m.out()));
    } else {
        std::cerr << "error: a run needs --config PATH or --preset NAME\n";
        throw Failure{ECOEPI_CONFIG_ERROR};
    }
    if (g.tol > 0) check(ecoepi_model_set_tolerance(m.get(), g.tol));
}

std::string dump(const ecoepi_model* m) {
    size_t needed = 0;
    check(ecoepi_model_dump(m, nullptr, 0, &needed));
    std::string text(needed, '\0');
    check(ecoepi_model_dump(m, text.data(), text.size(), &needed));
    text.pop_back();
    return text;
}

// Output file inside --out, or empty when writing to stdout.
std::string output_path(const Globals& g, const std::string& name) {
    if (g.out.empty()) return {};
    std::error_code ec;
    fs::create_directories(g.out, ec);
    if (ec) {
        std::cerr << "error: cannot create " << g.out << "\n";
        throw Failure{ECOEPI_IO_ERROR};
    }
    return (fs::path(g.out) / name).string();
}

std::string directory(const Globals& g) { return g.out.empty() ? std::string(".") : g.out; }

// Runs a writer into a file in --out, or onto standard output.
template <class Write>
void emit(const Globals& g, const std::string& name, Write&& write) {
    const std::string path = output_path(g, name);
    std::fflush(stdout);
    check(write(path.empty() ? "/dev/stdout" : path.c_str()));
}

std::optional<ecoepi_region> region_of(const SliceArgs& a) {
    if (a.box.empty()) return std::nullopt;
    ecoepi_region r{};
    for (int i = 0; i < 3; ++i) {
        r.lo[i] = a.box[static_cast<size_t>(i)];
        r.hi[i] = a.box[static_cast<size_t>(i) + 3];
    }
    return r;
}

void add_slice_options(CLI::App* cmd, SliceArgs& a) {
    cmd->add_option("--attractors", a.attractors, "Two stable equilibria, e.g. E1 E4")->expected(2);
    cmd->add_option("--box", a.box, "P_lo S_lo V_lo P_hi S_hi V_hi (W = 0 slice)")->expected(6);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-strain ecoepidemic competition model: simulation, equilibria, stability, bifurcations, basins"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(ecoepi_version()));

    Globals g;
    app.add_option("--config", g.config, "Run file (INI)");
    app.add_option("--preset", g.preset, "Built-in figure set: fig1..fig5");
    app.add_option("--out", g.out, "Output directory (stdout for single-file commands when omitted)");
    app.add_option("--tol", g.tol, "Relative tolerance; absolute tolerance is tol/100")->check(CLI::PositiveNumber);
    app.add_flag("--dump-config", g.dump, "Print the effective run file and exit");

    auto* simulate = app.add_subcommand("simulate", "Integrate from the initial state; CSV t,P,S,V,W");
    auto* equilibria = app.add_subcommand("equilibria", "Equilibrium catalog with feasibility margins (JSON lines)");
    auto* stability = app.add_subcommand("stability", "Catalog plus eigenvalues and stability verdicts (JSON lines)");

    auto* sweep = app.add_subcommand("sweep", "Equilibrium branches over a parameter range (CSV)");
    std::string sweep_key;
    double sweep_lo = 0, sweep_hi = 0;
    size_t sweep_n = 0;
    sweep->add_option("key", sweep_key, "Parameter name")->required();
    sweep->add_option("lo", sweep_lo)->required();
    sweep->add_option("hi", sweep_hi)->required();
    sweep->add_option("n", sweep_n, "Number of grid values")->required();

    auto* transcritical = app.add_subcommand("transcritical", "Locate an exchange of stability between two branches");
    std::string tc_key, tc_first, tc_second;
    double tc_lo = 0, tc_hi = 0;
    transcritical->add_option("key", tc_key)->required();
    transcritical->add_option("first", tc_first, "e.g. E2")->required();
    transcritical->add_option("second", tc_second, "e.g. E4")->required();
    transcritical->add_option("lo", tc_lo)->required();
    transcritical->add_option("hi", tc_hi)->required();

    auto* basin = app.add_subcommand("basin", "Label a grid of initial states by attractor (CSV P,S,V,label)");
    SliceArgs basin_args;
    int resolution = 21;
    add_slice_options(basin, basin_args);
    basin->add_option("--resolution", resolution, "Nodes per axis")->check(CLI::Range(2, 1000));

    auto* separatrix = app.add_subcommand("separatrix", "Sample and fit the surface between two basins");
    SliceArgs sep_args;
    std::vector<int> segments{61, 61};
    std::string kernel = "thin_plate";
    int mesh = 41;
    add_slice_options(separatrix, sep_args);
    separatrix->add_option("--segments", segments, "Segment lattice over (P, S)")->expected(2);
    separatrix->add_option("--kernel", kernel, "thin_plate, cubic or wendland_c2");
    separatrix->add_option("--mesh", mesh, "Lattice nodes per axis for OBJ/CSV export")->check(CLI::Range(2, 1000));

    auto* reproduce = app.add_subcommand("reproduce", "Regenerate a figure's data and summary into --out");
    std::string figure;
    reproduce->add_option("figure", figure, "fig1..fig5")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (g.dump) {
            Model m;
            load_model(g, m);
            std::cout << dump(m.get());
            return 0;
        }
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return 2;
        }

        if (reproduce->parsed()) {
            Handle<ecoepi_reproduction, ecoepi_reproduction_free> rep;
            check(ecoepi_reproduce(figure.c_str(), directory(g).c_str(), g.tol, rep.out()));
            std::cout << ecoepi_reproduction_summary(rep.get());
            return 0;
        }

        Model m;
        load_model(g, m);

        if (simulate->parsed()) {
            Handle<ecoepi_trajectory, ecoepi_trajectory_free> traj;
            check(ecoepi_simulate(m.get(), traj.out()));
            emit(g, "trajectory.csv", [&](const char* p) { return ecoepi_trajectory_write_csv(traj.get(), p); });
        } else if (equilibria->parsed() || stability->parsed()) {
            const bool with = stability->parsed();
            Handle<ecoepi_report, ecoepi_report_free> rep;
            check(ecoepi_analyze(m.get(), with ? 1 : 0, rep.out()));
            const std::string path = output_path(g, with ? "stability.jsonl" : "equilibria.jsonl");
            if (path.empty()) {
                std::cout << ecoepi_report_jsonl(rep.get());
            } else {
                check(ecoepi_report_write(rep.get(), path.c_str()));
            }
        } else if (sweep->parsed()) {
            Handle<ecoepi_sweep, ecoepi_sweep_free> sw;
            check(ecoepi_sweep_run(m.get(), sweep_key.c_str(), sweep_lo, sweep_hi, sweep_n, sw.out()));
            emit(g, "sweep.csv", [&](const char* p) { return ecoepi_sweep_write_csv(sw.get(), p); });
        } else if (transcritical->parsed()) {
            ecoepi_transcritical_point tp{};
            check(ecoepi_transcritical(m.get(), tc_key.c_str(), tc_first.c_str(), tc_second.c_str(), tc_lo, tc_hi,
                                       &tp));
            std::printf("{\"parameter\":\"%s\",\"pair\":[\"%s\",\"%s\"],\"critical\":%.17g,"
                        "\"coincidence_gap\":%.17g,\"crossing_re\":[%.17g,%.17g],\"crossing_index\":%d}\n",
                        tc_key.c_str(), tc_first.c_str(), tc_second.c_str(), tp.critical, tp.coincidence_gap,
                        tp.crossing_re_first, tp.crossing_re_second, tp.crossing_index);
        } else if (basin->parsed()) {
            const auto region = region_of(basin_args);
            const int res[3] = {resolution, resolution, resolution};
            Handle<ecoepi_basin, ecoepi_basin_free> grid;
            check(ecoepi_basin_run(m.get(), basin_args.attractors[0].c_str(), basin_args.attractors[1].c_str(),
                                   region ? &*region : nullptr, res, grid.out()));
            const std::string path = (fs::path(directory(g)) / "basin.csv").string();
            fs::create_directories(directory(g));
            check(ecoepi_basin_write_csv(grid.get(), path.c_str()));
            const size_t n = ecoepi_basin_size(grid.get());
            const size_t u = ecoepi_basin_undecided(grid.get());
            std::printf("%zu nodes, %zu undecided, decided fraction %.4f -> %s\n", n, u,
                        1.0 - static_cast<double>(u) / static_cast<double>(n), path.c_str());
        } else if (separatrix->parsed()) {
            const auto region = region_of(sep_args);
            Handle<ecoepi_separatrix, ecoepi_separatrix_free> sep;
            check(ecoepi_separatrix_run(m.get(), sep_args.attractors[0].c_str(), sep_args.attractors[1].c_str(),
                                        region ? &*region : nullptr, segments.data(), kernel.c_str(), sep.out()));
            const fs::path dir = directory(g);
            fs::create_directories(dir);
            check(ecoepi_separatrix_write_points(sep.get(), (dir / "separatrix_points.csv").string().c_str()));
            check(ecoepi_separatrix_write_obj(sep.get(), (dir / "surface.obj").string().c_str(), mesh));
            check(ecoepi_separatrix_write_lattice(sep.get(), (dir / "surface_lattice.csv").string().c_str(), mesh));
            ecoepi_separatrix_info info{};
            check(ecoepi_separatrix_get_info(sep.get(), &info));
            const double frac = info.probes_tested
                                    ? static_cast<double>(info.probes_agreed) / static_cast<double>(info.probes_tested)
                                    : 0.0;
            std::printf("%zu boundary points (%zu segments skipped), fit residual %.3g, side probes %zu/%zu = %.4f\n",
                        info.points, info.skipped, info.fit_residual, info.probes_agreed, info.probes_tested, frac);
        }
        return 0;
    } catch (const Failure& f) {
        const char* msg = ecoepi_last_error();
        if (msg && *msg) std::cerr << "error: " << msg << "\n";
        return exit_code(f.status);
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
