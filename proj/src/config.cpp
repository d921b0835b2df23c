#include "ecoepi/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ecoepi/error.hpp"

namespace ecoepi {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, int line) {
    double value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ConfigError("invalid number '" + std::string(text) + "'", line);
    }
    return value;
}

std::string format(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double* initial_slot(State& x, std::string_view key) {
    if (key == "P0") return &x.P;
    if (key == "S0") return &x.S;
    if (key == "V0") return &x.V;
    if (key == "W0") return &x.W;
    return nullptr;
}

double* integration_slot(IntegrationConfig& c, std::string_view key) {
    if (key == "rel_tol") return &c.rel_tol;
    if (key == "abs_tol") return &c.abs_tol;
    if (key == "t_max") return &c.t_max;
    if (key == "initial_step") return &c.initial_step;
    if (key == "max_step") return &c.max_step;
    return nullptr;
}

} // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::string section;
    std::set<std::string> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "parameters" && section != "initial" && section != "integration") {
                throw ConfigError("unknown section [" + section + "]", line_no);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const double value = parse_number(trim(line.substr(eq + 1)), line_no);
        if (section.empty()) throw ConfigError("key '" + key + "' outside of a section", line_no);
        if (!seen.insert(section + "." + key).second) throw ConfigError("duplicate key '" + key + "'", line_no);

        if (section == "parameters") {
            if (!Parameters::is_key(key)) throw ConfigError("unknown parameter '" + key + "'", line_no);
            if (value < 0) throw ConfigError("parameter '" + key + "' must be nonnegative", line_no);
            cfg.parameters.set(key, value);
        } else if (section == "initial") {
            double* slot = initial_slot(cfg.initial, key);
            if (!slot) throw ConfigError("unknown initial value '" + key + "'", line_no);
            if (value < 0) throw ConfigError("initial value '" + key + "' must be nonnegative", line_no);
            *slot = value;
        } else {
            double* slot = integration_slot(cfg.integration, key);
            if (!slot) throw ConfigError("unknown integration setting '" + key + "'", line_no);
            *slot = value;
        }
    }
    for (auto key : Parameters::keys) {
        if (!seen.count("parameters." + std::string(key))) {
            throw ConfigError("missing parameter '" + std::string(key) + "'");
        }
    }
    try {
        cfg.parameters.validate();
        cfg.integration.validate();
    } catch (const InvalidArgument& err) {
        throw ConfigError(err.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[parameters]\n";
    for (auto key : Parameters::keys) out << key << " = " << format(cfg.parameters.get(key)) << '\n';
    out << "\n[initial]\n";
    out << "P0 = " << format(cfg.initial.P) << '\n';
    out << "S0 = " << format(cfg.initial.S) << '\n';
    out << "V0 = " << format(cfg.initial.V) << '\n';
    out << "W0 = " << format(cfg.initial.W) << '\n';
    const auto& i = cfg.integration;
    out << "\n[integration]\n";
    out << "rel_tol = " << format(i.rel_tol) << '\n';
    out << "abs_tol = " << format(i.abs_tol) << '\n';
    out << "t_max = " << format(i.t_max) << '\n';
    out << "initial_step = " << format(i.initial_step) << '\n';
    out << "max_step = " << format(i.max_step) << '\n';
    return out.str();
}

} // namespace ecoepi
