#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ecoepi/ecoepi.h"

namespace {

std::filesystem::path scratch() {
    const auto dir = std::filesystem::temp_directory_path() / "ecoepi_test_capi";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ecoepi_model* preset(const char* name) {
    ecoepi_model* m = nullptr;
    REQUIRE(ecoepi_model_preset(name, &m) == ECOEPI_OK);
    REQUIRE(m != nullptr);
    return m;
}

} // namespace

TEST_CASE("version and error text") {
    CHECK(std::strlen(ecoepi_version()) > 0);
    ecoepi_model* m = nullptr;
    CHECK(ecoepi_model_preset("fig9", &m) == ECOEPI_INVALID_ARGUMENT);
    CHECK(m == nullptr);
    CHECK(std::string(ecoepi_last_error()).find("fig9") != std::string::npos);
    CHECK(ecoepi_model_preset(nullptr, &m) == ECOEPI_INVALID_ARGUMENT);
    CHECK(ecoepi_model_preset("fig1", nullptr) == ECOEPI_INVALID_ARGUMENT);
}

TEST_CASE("model handles") {
    ecoepi_model* m = preset("fig1");
    double v = 0;
    CHECK(ecoepi_model_get(m, "lambda", &v) == ECOEPI_OK);
    CHECK(v == 0.7);
    CHECK(ecoepi_model_get(m, "S0", &v) == ECOEPI_OK);
    CHECK(v == 1.8);
    CHECK(ecoepi_model_get(m, "zeta", &v) == ECOEPI_INVALID_ARGUMENT);
    CHECK(ecoepi_model_set(m, "K", -1) == ECOEPI_INVALID_ARGUMENT);
    CHECK(ecoepi_model_get(m, "K", &v) == ECOEPI_OK);
    CHECK(v == 2.0);

    ecoepi_model* c = nullptr;
    REQUIRE(ecoepi_model_clone(m, &c) == ECOEPI_OK);
    CHECK(ecoepi_model_set(c, "K", 3) == ECOEPI_OK);
    CHECK(ecoepi_model_get(m, "K", &v) == ECOEPI_OK);
    CHECK(v == 2.0);

    size_t needed = 0;
    CHECK(ecoepi_model_dump(m, nullptr, 0, &needed) == ECOEPI_OK);
    CHECK(needed > 100);
    std::vector<char> buf(needed);
    size_t again = 0;
    CHECK(ecoepi_model_dump(m, buf.data(), 4, &again) == ECOEPI_OK);
    CHECK(again == needed);
    CHECK(std::strlen(buf.data()) == 3);
    CHECK(ecoepi_model_dump(m, buf.data(), buf.size(), &needed) == ECOEPI_OK);
    ecoepi_model* parsed = nullptr;
    REQUIRE(ecoepi_model_parse(buf.data(), &parsed) == ECOEPI_OK);
    CHECK(ecoepi_model_get(parsed, "nu", &v) == ECOEPI_OK);
    CHECK(v == 0.9);

    const double x[4] = {0, 1, 0.7, 0};
    double dx[4], jac[16];
    CHECK(ecoepi_model_rhs(m, x, dx) == ECOEPI_OK);
    for (double d : dx) CHECK(std::abs(d) < 1e-15);
    CHECK(ecoepi_model_jacobian(m, x, jac) == ECOEPI_OK);
    CHECK(jac[0] == doctest::Approx(0.4 - 0.3)); // s - aS at P = 0
    CHECK(jac[1 * 4 + 2] == doctest::Approx(-0.7 * 1 + 0.2));

    ecoepi_model_free(parsed);
    ecoepi_model_free(c);
    ecoepi_model_free(m);
    ecoepi_model_free(nullptr);
}

TEST_CASE("configuration and file errors") {
    ecoepi_model* m = nullptr;
    CHECK(ecoepi_model_parse("[parameters]\ns = x\n", &m) == ECOEPI_CONFIG_ERROR);
    CHECK(std::string(ecoepi_last_error()).find("line 2") != std::string::npos);
    CHECK(ecoepi_model_load((scratch() / "missing.ini").c_str(), &m) == ECOEPI_IO_ERROR);
    CHECK(m == nullptr);
}

TEST_CASE("simulate") {
    ecoepi_model* m = preset("fig1");
    ecoepi_trajectory* t = nullptr;
    REQUIRE(ecoepi_simulate(m, &t) == ECOEPI_OK);
    const size_t n = ecoepi_trajectory_size(t);
    REQUIRE(n > 10);
    double time = 0, x[4];
    CHECK(ecoepi_trajectory_sample(t, n - 1, &time, x) == ECOEPI_OK);
    CHECK(time == 2000.0);
    CHECK(std::abs(x[1] - 1.0) <= 1e-3);
    CHECK(std::abs(x[2] - 0.7) <= 1e-3);
    CHECK(ecoepi_trajectory_sample(t, n, &time, x) == ECOEPI_INVALID_ARGUMENT);
    CHECK(ecoepi_trajectory_reason(t) == ECOEPI_REACHED_T_MAX);
    const auto path = scratch() / "traj.csv";
    CHECK(ecoepi_trajectory_write_csv(t, path.c_str()) == ECOEPI_OK);
    CHECK(slurp(path).rfind("t,P,S,V,W\n", 0) == 0);
    CHECK(ecoepi_trajectory_write_csv(t, (scratch() / "no/dir/x.csv").c_str()) == ECOEPI_IO_ERROR);
    ecoepi_trajectory_free(t);

    CHECK(ecoepi_model_set(m, "P0", 1e300) == ECOEPI_OK);
    CHECK(ecoepi_model_set(m, "S0", 1e300) == ECOEPI_OK);
    CHECK(ecoepi_simulate(m, &t) == ECOEPI_NUMERICAL_ERROR);
    ecoepi_model_free(m);
}

TEST_CASE("equilibrium report") {
    ecoepi_model* m = preset("fig1");
    ecoepi_report* r = nullptr;
    REQUIRE(ecoepi_analyze(m, 1, &r) == ECOEPI_OK);
    REQUIRE(ecoepi_report_size(r) == 8);
    ecoepi_equilibrium e{};
    CHECK(ecoepi_report_entry(r, 4, &e) == ECOEPI_OK);
    CHECK(std::string(e.id) == "E4");
    CHECK(e.defined == 1);
    CHECK(e.feasibility == ECOEPI_FEASIBLE);
    CHECK(e.has_stability == 1);
    CHECK(e.stability == ECOEPI_SADDLE);
    CHECK(e.leading_real == doctest::Approx(0.1));
    CHECK(ecoepi_report_entry(r, 1, &e) == ECOEPI_OK);
    CHECK(e.stability == ECOEPI_STABLE_NODE);
    CHECK(ecoepi_report_entry(r, 8, &e) == ECOEPI_INVALID_ARGUMENT);
    const std::string text = ecoepi_report_jsonl(r);
    CHECK(std::count(text.begin(), text.end(), '\n') == 8);
    CHECK(text.find("\"class\"") != std::string::npos);
    ecoepi_report_free(r);

    REQUIRE(ecoepi_analyze(m, 0, &r) == ECOEPI_OK);
    CHECK(ecoepi_report_entry(r, 0, &e) == ECOEPI_OK);
    CHECK(e.has_stability == 0);
    ecoepi_report_free(r);
    ecoepi_model_free(m);
}

TEST_CASE("sweep and transcritical") {
    ecoepi_model* m = preset("fig1");
    ecoepi_sweep* s = nullptr;
    REQUIRE(ecoepi_sweep_run(m, "K", 0.5, 3.0, 26, &s) == ECOEPI_OK);
    CHECK(ecoepi_sweep_size(s) == 208);
    double value = 0;
    ecoepi_equilibrium e{};
    CHECK(ecoepi_sweep_row(s, 207, &value, &e) == ECOEPI_OK);
    CHECK(value == 3.0);
    CHECK(std::string(e.id) == "E7");
    ecoepi_sweep_free(s);
    CHECK(ecoepi_sweep_run(m, "K", 3.0, 0.5, 26, &s) == ECOEPI_INVALID_ARGUMENT);

    ecoepi_transcritical_point t{};
    REQUIRE(ecoepi_transcritical(m, "K", "E2", "E4", 0.5, 3.0, &t) == ECOEPI_OK);
    CHECK(std::abs(t.critical - 1.0) <= 1e-10);
    CHECK(t.coincidence_gap <= 1e-6);
    CHECK(ecoepi_transcritical(m, "K", "E2", "E4", 2.0, 3.0, &t) == ECOEPI_INVALID_ARGUMENT);
    CHECK(ecoepi_transcritical(m, "K", "E2", "X9", 0.5, 3.0, &t) == ECOEPI_INVALID_ARGUMENT);
    ecoepi_model_free(m);
}

TEST_CASE("basin and separatrix") {
    ecoepi_model* m = preset("fig4");
    const ecoepi_region box = ecoepi_default_region();
    CHECK(box.hi[1] == 3.0);
    const int res[3] = {5, 5, 5};
    ecoepi_basin* b = nullptr;
    REQUIRE(ecoepi_basin_run(m, "E1", "E4", nullptr, res, &b) == ECOEPI_OK);
    CHECK(ecoepi_basin_size(b) == 125);
    CHECK(ecoepi_basin_label(b, 124) == 1);
    CHECK(ecoepi_basin_label(b, 0) == -1);
    CHECK(ecoepi_basin_undecided(b) > 0);
    ecoepi_basin_free(b);
    CHECK(ecoepi_basin_run(m, "E1", "E3", &box, res, &b) == ECOEPI_INVALID_ARGUMENT);

    const int segs[2] = {21, 21};
    ecoepi_separatrix* sep = nullptr;
    REQUIRE(ecoepi_separatrix_run(m, "E1", "E4", &box, segs, "cubic", &sep) == ECOEPI_OK);
    ecoepi_separatrix_info info{};
    CHECK(ecoepi_separatrix_get_info(sep, &info) == ECOEPI_OK);
    CHECK(info.points > 10);
    CHECK(info.fit_residual <= 1e-8);
    CHECK(info.below_label == 0);
    CHECK(info.above_label == 1);
    double v = -1;
    CHECK(ecoepi_separatrix_height(sep, 1.3125, 0.1875, &v) == ECOEPI_OK);
    CHECK(std::abs(v) <= 1e-2);
    const auto obj = scratch() / "s.obj";
    CHECK(ecoepi_separatrix_write_obj(sep, obj.c_str(), 5) == ECOEPI_OK);
    CHECK(slurp(obj).find("\nf ") != std::string::npos);
    CHECK(ecoepi_separatrix_write_lattice(sep, (scratch() / "l.csv").c_str(), 1) == ECOEPI_INVALID_ARGUMENT);
    ecoepi_separatrix_free(sep);
    CHECK(ecoepi_separatrix_run(m, "E1", "E4", &box, segs, "gauss", &sep) == ECOEPI_INVALID_ARGUMENT);
    ecoepi_model_free(m);
}

TEST_CASE("reproduction") {
    ecoepi_reproduction* rep = nullptr;
    const auto dir = scratch() / "fig2";
    REQUIRE(ecoepi_reproduce("fig2", dir.c_str(), 0, &rep) == ECOEPI_OK);
    CHECK(ecoepi_reproduction_passed(rep) == 1);
    CHECK(std::string(ecoepi_reproduction_summary(rep)).find("[ok]") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "fig2_trajectory.csv"));
    ecoepi_reproduction_free(rep);
    CHECK(ecoepi_reproduce("fig7", dir.c_str(), 0, &rep) == ECOEPI_INVALID_ARGUMENT);
}
