#include "mcflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace mcflow {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    auto end = s.find_last_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    return s.substr(begin, end - begin + 1);
}

} // namespace

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& name) {
    ConfigFile cfg;
    cfg.path_ = name;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(name + ":" + std::to_string(line_no) +
                                  ": malformed section header '" + raw + "'");
            continue; // sections organize the file; keys stay flat
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + raw + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(name + ":" + std::to_string(line_no) + ": empty key");
        if (cfg.values_.count(key))
            throw ConfigError(name + ":" + std::to_string(line_no) + ": duplicate key '" +
                              key + "' (first set on line " +
                              std::to_string(cfg.lines_[key]) + ")");
        cfg.values_[key] = value;
        cfg.lines_[key] = line_no;
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

int ConfigFile::line_of(const std::string& key) const {
    const auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
}

void ConfigFile::fail(const std::string& key, const std::string& what) const {
    const int line = line_of(key);
    std::string where = path_;
    if (line > 0)
        where += ":" + std::to_string(line);
    throw ConfigError(where + ": key '" + key + "': " + what);
}

std::string ConfigFile::require(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError(path_ + ": missing required key '" + key + "'");
    return it->second;
}

std::string ConfigFile::get_or(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigFile::parse_double(const std::string& key, const std::string& text) const {
    // Angle shorthands used by the experiment configs.
    if (text == "pi")
        return std::numbers::pi;
    if (text == "pi/e")
        return std::numbers::pi / std::numbers::e;
    if (text == "pi/2")
        return std::numbers::pi / 2.0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        fail(key, "not a number: '" + text + "'");
    return v;
}

double ConfigFile::require_double(const std::string& key) const {
    return parse_double(key, require(key));
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    if (!has(key))
        return fallback;
    return parse_double(key, values_.at(key));
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
    if (!has(key))
        return fallback;
    const double v = parse_double(key, values_.at(key));
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        fail(key, "expected an integer");
    return i;
}

long ConfigFile::get_long(const std::string& key, long fallback) const {
    return static_cast<long>(get_int(key, static_cast<int>(fallback)));
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
    if (!has(key))
        return fallback;
    std::string v = values_.at(key);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "on" || v == "1")
        return true;
    if (v == "false" || v == "no" || v == "off" || v == "0")
        return false;
    fail(key, "expected a boolean, got '" + values_.at(key) + "'");
}

std::vector<double> ConfigFile::get_double_list(const std::string& key) const {
    std::vector<double> out;
    if (!has(key))
        return out;
    std::istringstream in(values_.at(key));
    std::string tok;
    while (in >> tok) {
        if (!tok.empty() && tok.back() == ',')
            tok.pop_back();
        if (tok.empty())
            continue;
        out.push_back(parse_double(key, tok));
    }
    return out;
}

std::vector<int> ConfigFile::get_int_list(const std::string& key) const {
    std::vector<int> out;
    for (const double v : get_double_list(key)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            fail(key, "expected integers");
        out.push_back(i);
    }
    return out;
}

namespace {

const std::set<std::string> kKnownKeys = {
    "name",      "curve",     "radius",    "rotation",       "t0",
    "scale",     "amplitude", "frequency", "ellipse_a",      "ellipse_b",
    "ambient_dim", "elements", "dof",      "degree",         "bdf_order",
    "tau",       "T",         "method",    "idempotency",    "idempotency_tol",
    "exact",     "output",    "stride",    "snapshot_stride", "e_levels",
    "tau_levels",
};

} // namespace

RunConfig run_config_from(const ConfigFile& file) {
    for (const auto& [key, value] : file.entries())
        if (!kKnownKeys.count(key))
            throw ConfigError(file.path() + ":" + std::to_string(file.line_of(key)) +
                              ": unknown key '" + key + "'");

    RunConfig cfg;
    cfg.curve = file.require("curve");
    const std::set<std::string> curves = {"circle", "angenent", "trefoil", "sinusoid",
                                          "ellipse"};
    if (!curves.count(cfg.curve))
        throw ConfigError(file.path() + ": key 'curve': unknown curve '" + cfg.curve +
                          "' (expected circle|angenent|trefoil|sinusoid|ellipse)");

    cfg.name = file.get_or("name", std::filesystem::path(file.path()).stem().string());
    cfg.radius = file.get_double("radius", cfg.radius);
    cfg.rotation = file.get_double("rotation", cfg.rotation);
    cfg.t0 = file.get_double("t0", cfg.t0);
    cfg.scale = file.get_double("scale", cfg.scale);
    cfg.amplitude = file.get_double("amplitude", cfg.amplitude);
    cfg.frequency = file.get_int("frequency", cfg.frequency);
    cfg.ellipse_a = file.get_double("ellipse_a", cfg.ellipse_a);
    cfg.ellipse_b = file.get_double("ellipse_b", cfg.ellipse_b);

    cfg.ambient_dim = file.get_int("ambient_dim", cfg.ambient_dim);
    cfg.degree = file.get_int("degree", cfg.degree);
    cfg.bdf_order = file.get_int("bdf_order", cfg.bdf_order);
    cfg.tau = file.get_double("tau", cfg.tau);
    cfg.T = file.get_double("T", cfg.T);

    if (file.has("elements") && file.has("dof"))
        throw ConfigError(file.path() + ": give either 'elements' or 'dof', not both");
    if (file.has("dof")) {
        const int dof = file.get_int("dof", 0);
        if (dof % cfg.degree != 0)
            throw ConfigError(file.path() + ": key 'dof': " + std::to_string(dof) +
                              " is not divisible by degree " + std::to_string(cfg.degree));
        cfg.n_elements = dof / cfg.degree;
    } else {
        cfg.n_elements = file.get_int("elements", cfg.n_elements);
    }

    const std::string method = file.get_or("method", "coupled");
    if (method == "coupled")
        cfg.method = Method::coupled;
    else if (method == "dziuk")
        cfg.method = Method::dziuk;
    else if (method == "both")
        cfg.method = Method::both;
    else
        throw ConfigError(file.path() + ": key 'method': unknown method '" + method +
                          "' (expected coupled|dziuk|both)");

    cfg.idempotency = file.get_bool("idempotency", cfg.idempotency);
    cfg.idempotency_tol = file.get_double("idempotency_tol", cfg.idempotency_tol);
    cfg.register_exact = file.get_bool("exact", cfg.register_exact);
    cfg.output_dir = file.get_or("output", cfg.name);
    cfg.record_stride = file.get_long("stride", cfg.record_stride);
    cfg.snapshot_stride = file.get_long("snapshot_stride", cfg.snapshot_stride);
    cfg.e_levels = file.get_int_list("e_levels");
    cfg.tau_levels = file.get_double_list("tau_levels");

    // Hard invariants.
    if (cfg.degree < 1 || cfg.degree > 4)
        throw ConfigError(file.path() + ": key 'degree': must be in 1..4");
    if (cfg.bdf_order < 1 || cfg.bdf_order > 5)
        throw ConfigError(file.path() + ": key 'bdf_order': must be in 1..5");
    if (cfg.tau <= 0.0)
        throw ConfigError(file.path() + ": key 'tau': must be positive");
    if (cfg.T <= 0.0)
        throw ConfigError(file.path() + ": key 'T': must be positive");
    if (cfg.n_elements < 3 && cfg.e_levels.empty())
        throw ConfigError(file.path() + ": need 'elements' or 'dof' (>= 3 elements)");
    if (cfg.record_stride < 1)
        throw ConfigError(file.path() + ": key 'stride': must be >= 1");

    // Outside the proven convergence regime: warn, do not reject.
    if (cfg.degree < 2)
        cfg.warnings.push_back("degree k = " + std::to_string(cfg.degree) +
                               " is below the proven regime k >= 2");
    if (cfg.bdf_order < 2)
        cfg.warnings.push_back("bdf_order q = " + std::to_string(cfg.bdf_order) +
                               " is below the proven regime 2 <= q <= 5");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from(ConfigFile::parse_file(path));
}

} // namespace mcflow
