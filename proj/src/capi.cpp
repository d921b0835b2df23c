#include "ecoepi/ecoepi.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ecoepi/bifurcation.hpp"
#include "ecoepi/config.hpp"
#include "ecoepi/error.hpp"
#include "ecoepi/io.hpp"
#include "ecoepi/presets.hpp"
#include "ecoepi/reproduce.hpp"
#include "ecoepi/stability.hpp"

using namespace ecoepi;

struct ecoepi_model {
    RunConfig config;
};

struct ecoepi_trajectory {
    Trajectory traj;
};

struct ecoepi_report {
    std::vector<ecoepi_equilibrium> entries;
    std::string jsonl;
};

struct ecoepi_sweep {
    SweepResult result;
};

struct ecoepi_basin {
    BasinGrid grid;
};

struct ecoepi_separatrix {
    std::vector<Attractor> attractors;
    SeparatrixReconstruction rec;
};

struct ecoepi_reproduction {
    ReproductionReport report;
};

namespace {

thread_local std::string last_error;

template <class F>
ecoepi_status guarded(F&& body) noexcept {
    try {
        body();
        last_error.clear();
        return ECOEPI_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return static_cast<ecoepi_status>(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return ECOEPI_INTERNAL_ERROR;
    } catch (const std::exception& e) {
        last_error = e.what();
        return ECOEPI_INTERNAL_ERROR;
    } catch (...) {
        last_error = "unknown error";
        return ECOEPI_INTERNAL_ERROR;
    }
}

void require(const void* ptr, const char* what) {
    if (!ptr) throw InvalidArgument(std::string("null ") + what);
}

std::string string_arg(const char* s, const char* what) {
    require(s, what);
    return s;
}

double* integration_field(IntegrationConfig& c, std::string_view key) {
    if (key == "rel_tol") return &c.rel_tol;
    if (key == "abs_tol") return &c.abs_tol;
    if (key == "t_max") return &c.t_max;
    if (key == "initial_step") return &c.initial_step;
    if (key == "max_step") return &c.max_step;
    return nullptr;
}

double* initial_field(State& x, std::string_view key) {
    if (key == "P0") return &x.P;
    if (key == "S0") return &x.S;
    if (key == "V0") return &x.V;
    if (key == "W0") return &x.W;
    return nullptr;
}

ecoepi_feasibility to_c(Feasibility f) { return static_cast<ecoepi_feasibility>(f); }
ecoepi_stability to_c(StabilityClass c) { return static_cast<ecoepi_stability>(c); }

ecoepi_equilibrium entry_of(EquilibriumId id, const State& x, bool defined, Feasibility f) {
    ecoepi_equilibrium e{};
    const auto name = to_string(id);
    std::memcpy(e.id, name.data(), std::min(name.size(), sizeof e.id - 1));
    e.point[0] = x.P;
    e.point[1] = x.S;
    e.point[2] = x.V;
    e.point[3] = x.W;
    e.defined = defined;
    e.feasibility = to_c(f);
    e.stability = ECOEPI_MARGINAL_STABILITY;
    e.leading_real = std::numeric_limits<double>::quiet_NaN();
    return e;
}

std::vector<Attractor> attractor_pair(const Parameters& p, const char* first, const char* second) {
    std::vector<Attractor> out;
    for (const char* name : {first, second}) {
        const auto rec = compute_equilibrium(p, parse_equilibrium_id(string_arg(name, "attractor id")));
        if (!rec.feasible()) throw InvalidArgument(std::string(name) + " is not feasible");
        out.push_back(to_attractor(rec));
    }
    return out;
}

Box3 to_box(const ecoepi_region* region) {
    if (!region) return fig4_region();
    return {{region->lo[0], region->lo[1], region->lo[2]}, {region->hi[0], region->hi[1], region->hi[2]}};
}

BasinOptions basin_options(const RunConfig& cfg) {
    BasinOptions o;
    o.integration = cfg.integration;
    return o;
}

} // namespace

extern "C" {

const char* ecoepi_version(void) { return "1.0.0"; }

const char* ecoepi_last_error(void) { return last_error.c_str(); }

ecoepi_status ecoepi_model_load(const char* path, ecoepi_model** out) {
    return guarded([&] {
        require(out, "output");
        *out = new ecoepi_model{load_config(string_arg(path, "path"))};
    });
}

ecoepi_status ecoepi_model_parse(const char* text, ecoepi_model** out) {
    return guarded([&] {
        require(out, "output");
        *out = new ecoepi_model{parse_config(string_arg(text, "text"))};
    });
}

ecoepi_status ecoepi_model_preset(const char* name, ecoepi_model** out) {
    return guarded([&] {
        require(out, "output");
        *out = new ecoepi_model{scenario(string_arg(name, "preset name")).config};
    });
}

ecoepi_status ecoepi_model_clone(const ecoepi_model* model, ecoepi_model** out) {
    return guarded([&] {
        require(model, "model");
        require(out, "output");
        *out = new ecoepi_model{*model};
    });
}

void ecoepi_model_free(ecoepi_model* model) { delete model; }

ecoepi_status ecoepi_model_get(const ecoepi_model* model, const char* key, double* value) {
    return guarded([&] {
        require(model, "model");
        require(value, "output");
        const std::string k = string_arg(key, "key");
        auto cfg = model->config;
        if (double* f = integration_field(cfg.integration, k)) {
            *value = *f;
        } else if (double* x = initial_field(cfg.initial, k)) {
            *value = *x;
        } else {
            *value = cfg.parameters.get(k);
        }
    });
}

ecoepi_status ecoepi_model_set(ecoepi_model* model, const char* key, double value) {
    return guarded([&] {
        require(model, "model");
        const std::string k = string_arg(key, "key");
        RunConfig cfg = model->config;
        if (double* f = integration_field(cfg.integration, k)) {
            *f = value;
            cfg.integration.validate();
        } else if (double* x = initial_field(cfg.initial, k)) {
            if (!(value >= 0) || !std::isfinite(value)) throw InvalidArgument(k + " must be finite and nonnegative");
            *x = value;
        } else {
            cfg.parameters = cfg.parameters.with(k, value);
        }
        model->config = cfg;
    });
}

ecoepi_status ecoepi_model_set_tolerance(ecoepi_model* model, double tol) {
    return guarded([&] {
        require(model, "model");
        IntegrationConfig c = model->config.integration;
        c.rel_tol = tol;
        c.abs_tol = tol / 100;
        c.validate();
        model->config.integration = c;
    });
}

ecoepi_status ecoepi_model_dump(const ecoepi_model* model, char* buffer, size_t capacity, size_t* needed) {
    return guarded([&] {
        require(model, "model");
        const std::string text = dump_config(model->config);
        if (needed) *needed = text.size() + 1;
        if (buffer && capacity > 0) {
            const size_t n = std::min(capacity - 1, text.size());
            std::memcpy(buffer, text.data(), n);
            buffer[n] = '\0';
        }
    });
}

ecoepi_status ecoepi_model_rhs(const ecoepi_model* model, const double x[4], double dx[4]) {
    return guarded([&] {
        require(model, "model");
        require(x, "state");
        require(dx, "output");
        const Vector4 f = rhs(model->config.parameters, Vector4(x[0], x[1], x[2], x[3]));
        for (int i = 0; i < 4; ++i) dx[i] = f[i];
    });
}

ecoepi_status ecoepi_model_jacobian(const ecoepi_model* model, const double x[4], double jac[16]) {
    return guarded([&] {
        require(model, "model");
        require(x, "state");
        require(jac, "output");
        const Matrix4 j = jacobian(model->config.parameters, Vector4(x[0], x[1], x[2], x[3]));
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) jac[4 * r + c] = j(r, c);
    });
}

ecoepi_status ecoepi_simulate(const ecoepi_model* model, ecoepi_trajectory** out) {
    return guarded([&] {
        require(model, "model");
        require(out, "output");
        const auto& cfg = model->config;
        auto traj = integrate(cfg.parameters, cfg.initial, cfg.integration);
        if (traj.reason == Termination::step_failure) {
            throw NumericalError("step size underflow at t = " + format_double(traj.times.back()));
        }
        *out = new ecoepi_trajectory{std::move(traj)};
    });
}

size_t ecoepi_trajectory_size(const ecoepi_trajectory* traj) { return traj ? traj->traj.size() : 0; }

ecoepi_status ecoepi_trajectory_sample(const ecoepi_trajectory* traj, size_t index, double* t, double x[4]) {
    return guarded([&] {
        require(traj, "trajectory");
        if (index >= traj->traj.size()) throw InvalidArgument("sample index out of range");
        if (t) *t = traj->traj.times[index];
        if (x) {
            const State& s = traj->traj.states[index];
            x[0] = s.P;
            x[1] = s.S;
            x[2] = s.V;
            x[3] = s.W;
        }
    });
}

ecoepi_termination ecoepi_trajectory_reason(const ecoepi_trajectory* traj) {
    return traj ? static_cast<ecoepi_termination>(traj->traj.reason) : ECOEPI_STEP_FAILURE;
}

ecoepi_status ecoepi_trajectory_write_csv(const ecoepi_trajectory* traj, const char* path) {
    return guarded([&] {
        require(traj, "trajectory");
        write_file(string_arg(path, "path"), [&](std::ostream& o) { write_trajectory_csv(o, traj->traj); });
    });
}

void ecoepi_trajectory_free(ecoepi_trajectory* traj) { delete traj; }

ecoepi_status ecoepi_analyze(const ecoepi_model* model, int with_stability, ecoepi_report** out) {
    return guarded([&] {
        require(model, "model");
        require(out, "output");
        const Parameters& p = model->config.parameters;
        auto rep = std::make_unique<ecoepi_report>();
        std::vector<Json> lines;
        for (const auto& rec : catalog(p)) {
            auto e = entry_of(rec.id, rec.point, rec.defined, rec.feasibility);
            if (with_stability && rec.defined) {
                const auto verdict = classify(p, rec);
                e.has_stability = 1;
                e.stability = to_c(verdict.cls);
                e.leading_real = verdict.leading_real();
                lines.push_back(to_json(verdict));
            } else {
                lines.push_back(to_json(rec));
            }
            rep->entries.push_back(e);
        }
        std::ostringstream s;
        write_jsonl(s, lines);
        rep->jsonl = s.str();
        *out = rep.release();
    });
}

size_t ecoepi_report_size(const ecoepi_report* report) { return report ? report->entries.size() : 0; }

ecoepi_status ecoepi_report_entry(const ecoepi_report* report, size_t index, ecoepi_equilibrium* out) {
    return guarded([&] {
        require(report, "report");
        require(out, "output");
        if (index >= report->entries.size()) throw InvalidArgument("report index out of range");
        *out = report->entries[index];
    });
}

const char* ecoepi_report_jsonl(const ecoepi_report* report) { return report ? report->jsonl.c_str() : ""; }

ecoepi_status ecoepi_report_write(const ecoepi_report* report, const char* path) {
    return guarded([&] {
        require(report, "report");
        write_file(string_arg(path, "path"), [&](std::ostream& o) { o << report->jsonl; });
    });
}

void ecoepi_report_free(ecoepi_report* report) { delete report; }

ecoepi_status ecoepi_sweep_run(const ecoepi_model* model, const char* key, double lo, double hi, size_t n,
                               ecoepi_sweep** out) {
    return guarded([&] {
        require(model, "model");
        require(out, "output");
        *out = new ecoepi_sweep{sweep(model->config.parameters, string_arg(key, "key"), lo, hi, n)};
    });
}

size_t ecoepi_sweep_size(const ecoepi_sweep* sweep) { return sweep ? sweep->result.rows.size() : 0; }

ecoepi_status ecoepi_sweep_row(const ecoepi_sweep* sweep, size_t index, double* value, ecoepi_equilibrium* out) {
    return guarded([&] {
        require(sweep, "sweep");
        if (index >= sweep->result.rows.size()) throw InvalidArgument("sweep row out of range");
        const BranchRow& row = sweep->result.rows[index];
        if (value) *value = row.value;
        if (out) {
            *out = entry_of(row.id, row.point, row.defined, row.feasibility);
            if (row.defined) {
                out->has_stability = 1;
                out->stability = to_c(row.cls);
                out->leading_real = row.lead_re;
            }
        }
    });
}

ecoepi_status ecoepi_sweep_write_csv(const ecoepi_sweep* sweep, const char* path) {
    return guarded([&] {
        require(sweep, "sweep");
        write_file(string_arg(path, "path"), [&](std::ostream& o) { write_sweep_csv(o, sweep->result); });
    });
}

void ecoepi_sweep_free(ecoepi_sweep* sweep) { delete sweep; }

ecoepi_status ecoepi_transcritical(const ecoepi_model* model, const char* key, const char* first, const char* second,
                                   double lo, double hi, ecoepi_transcritical_point* out) {
    return guarded([&] {
        require(model, "model");
        require(out, "output");
        const EquilibriumPair pair{parse_equilibrium_id(string_arg(first, "first id")),
                                   parse_equilibrium_id(string_arg(second, "second id"))};
        const auto tp = find_transcritical(model->config.parameters, string_arg(key, "key"), pair, lo, hi);
        *out = {tp.critical, tp.coincidence_gap, tp.crossing_re_first, tp.crossing_re_second, tp.crossing_index};
    });
}

ecoepi_region ecoepi_default_region(void) {
    const Box3 b = fig4_region();
    return {{b.lo[0], b.lo[1], b.lo[2]}, {b.hi[0], b.hi[1], b.hi[2]}};
}

ecoepi_status ecoepi_basin_run(const ecoepi_model* model, const char* first, const char* second,
                               const ecoepi_region* region, const int resolution[3], ecoepi_basin** out) {
    return guarded([&] {
        require(model, "model");
        require(resolution, "resolution");
        require(out, "output");
        const Parameters& p = model->config.parameters;
        const auto attractors = attractor_pair(p, first, second);
        auto grid = classify_grid(p, to_box(region), {resolution[0], resolution[1], resolution[2]}, attractors,
                                  basin_options(model->config));
        *out = new ecoepi_basin{std::move(grid)};
    });
}

size_t ecoepi_basin_size(const ecoepi_basin* basin) { return basin ? basin->grid.labels.size() : 0; }

int ecoepi_basin_label(const ecoepi_basin* basin, size_t index) {
    if (!basin || index >= basin->grid.labels.size()) return undecided;
    return basin->grid.labels[index];
}

size_t ecoepi_basin_undecided(const ecoepi_basin* basin) { return basin ? basin->grid.undecided_count : 0; }

ecoepi_status ecoepi_basin_write_csv(const ecoepi_basin* basin, const char* path) {
    return guarded([&] {
        require(basin, "basin");
        write_file(string_arg(path, "path"), [&](std::ostream& o) { write_basin_csv(o, basin->grid); });
    });
}

void ecoepi_basin_free(ecoepi_basin* basin) { delete basin; }

ecoepi_status ecoepi_separatrix_run(const ecoepi_model* model, const char* first, const char* second,
                                    const ecoepi_region* region, const int segments[2], const char* kernel,
                                    ecoepi_separatrix** out) {
    return guarded([&] {
        require(model, "model");
        require(out, "output");
        const Parameters& p = model->config.parameters;
        SeparatrixOptions o;
        o.basin = basin_options(model->config);
        o.region = to_box(region);
        if (segments) o.segments = {segments[0], segments[1]};
        if (kernel) o.kernel.kind = parse_kernel(kernel);
        auto attractors = attractor_pair(p, first, second);
        auto rec = reconstruct_separatrix(p, attractors, o);
        *out = new ecoepi_separatrix{std::move(attractors), std::move(rec)};
    });
}

ecoepi_status ecoepi_separatrix_get_info(const ecoepi_separatrix* sep, ecoepi_separatrix_info* out) {
    return guarded([&] {
        require(sep, "separatrix");
        require(out, "output");
        const auto& r = sep->rec;
        *out = {r.sampling.points.size(), r.sampling.skipped.size(), r.model.fit_residual(),
                r.probes.tested,          r.probes.agreed,           r.probes.below_label,
                r.probes.above_label};
    });
}

ecoepi_status ecoepi_separatrix_height(const ecoepi_separatrix* sep, double p, double s, double* v) {
    return guarded([&] {
        require(sep, "separatrix");
        require(v, "output");
        *v = sep->rec.model.height({p, s});
    });
}

ecoepi_status ecoepi_separatrix_write_points(const ecoepi_separatrix* sep, const char* path) {
    return guarded([&] {
        require(sep, "separatrix");
        write_file(string_arg(path, "path"),
                   [&](std::ostream& o) { write_separatrix_csv(o, sep->rec.sampling, sep->attractors); });
    });
}

ecoepi_status ecoepi_separatrix_write_obj(const ecoepi_separatrix* sep, const char* path, int n) {
    return guarded([&] {
        require(sep, "separatrix");
        write_file(string_arg(path, "path"), [&](std::ostream& o) { write_surface_obj(o, sep->rec.model, n); });
    });
}

ecoepi_status ecoepi_separatrix_write_lattice(const ecoepi_separatrix* sep, const char* path, int n) {
    return guarded([&] {
        require(sep, "separatrix");
        write_file(string_arg(path, "path"), [&](std::ostream& o) { write_lattice_csv(o, sep->rec.model, n); });
    });
}

void ecoepi_separatrix_free(ecoepi_separatrix* sep) { delete sep; }

ecoepi_status ecoepi_reproduce(const char* figure, const char* out_dir, double tol, ecoepi_reproduction** out) {
    return guarded([&] {
        require(out, "output");
        ReproduceOptions o;
        if (tol > 0) {
            o.integration.rel_tol = tol;
            o.integration.abs_tol = tol / 100;
            o.integration.validate();
        }
        *out = new ecoepi_reproduction{reproduce(string_arg(figure, "figure"), string_arg(out_dir, "directory"), o)};
    });
}

const char* ecoepi_reproduction_summary(const ecoepi_reproduction* rep) {
    return rep ? rep->report.summary.c_str() : "";
}

int ecoepi_reproduction_passed(const ecoepi_reproduction* rep) { return rep && rep->report.passed() ? 1 : 0; }

void ecoepi_reproduction_free(ecoepi_reproduction* rep) { delete rep; }

} // extern "C"
