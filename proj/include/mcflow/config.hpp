#pragma once

#include "mcflow/errors.hpp"

#include <map>
#include <string>
#include <vector>

namespace mcflow {

/// Flat key-value config text. `[section]` headers group keys visually but
/// keys are globally unique; `#` starts a comment. Unknown keys are rejected
/// by the typed loaders so typos surface early.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text, const std::string& name);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::string& path() const { return path_; }

    std::string require(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    double require_double(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<int> get_int_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return values_; }
    /// 1-based source line of a key, 0 if absent.
    int line_of(const std::string& key) const;

private:
    double parse_double(const std::string& key, const std::string& text) const;
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;

    std::string path_;
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
};

enum class Method { coupled, dziuk, both };

/// One experiment: curve + discretization + time stepping + outputs. Level
/// lists drive convergence studies.
struct RunConfig {
    std::string name = "run";
    std::string curve;

    // Curve parameters (only those for the named curve are consulted).
    double radius = 1.0;
    double rotation = 0.0;
    double t0 = -2.0;       // Angenent oval initial time
    double scale = 1.0;     // trefoil
    double amplitude = 0.5; // sinusoid
    int frequency = 4;      // sinusoid
    double ellipse_a = 2.0;
    double ellipse_b = 1.0;

    int ambient_dim = 3;
    int n_elements = 0; // E; configs may give dof = E * degree instead
    int degree = 2;     // k
    int bdf_order = 2;  // q
    double tau = 1e-3;
    double T = 0.4;

    Method method = Method::coupled;
    bool idempotency = false;
    double idempotency_tol = 1e-2;
    bool register_exact = false;

    std::string output_dir;
    long record_stride = 1;
    long snapshot_stride = 0;

    std::vector<int> e_levels;
    std::vector<double> tau_levels;

    /// Non-fatal notes collected while loading (e.g. parameters outside the
    /// proven k >= 2, 2 <= q <= 5 regime).
    std::vector<std::string> warnings;
};

RunConfig load_run_config(const std::string& path);
RunConfig run_config_from(const ConfigFile& file);

} // namespace mcflow
