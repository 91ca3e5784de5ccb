#include "mcflow/driver.hpp"

#include "mcflow/analysis.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mcflow {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_cell(double v) { return std::isnan(v) ? std::string() : fmt17(v); }

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write output file '" + path.string() + "'");
    out << content;
}

ExitCode exit_for(StopReason stop) {
    switch (stop) {
    case StopReason::completed:
        return ExitCode::ok;
    case StopReason::solver_failure:
        return ExitCode::solver;
    case StopReason::singularity:
        return ExitCode::singularity;
    }
    return ExitCode::ok;
}

} // namespace

ParametrizedCurve make_curve(const RunConfig& cfg) {
    if (cfg.curve == "circle")
        return circle_curve(cfg.radius, cfg.rotation, cfg.ambient_dim);
    if (cfg.curve == "ellipse")
        return ellipse_curve(cfg.ellipse_a, cfg.ellipse_b, cfg.ambient_dim);
    if (cfg.curve == "angenent") {
        if (cfg.ambient_dim != 3)
            throw ConfigError("angenent curve is planar in R^3; set ambient_dim = 3");
        return angenent_curve(cfg.t0);
    }
    if (cfg.curve == "trefoil") {
        if (cfg.ambient_dim != 3)
            throw ConfigError("trefoil curve needs ambient_dim = 3");
        return trefoil_curve(cfg.scale);
    }
    if (cfg.curve == "sinusoid") {
        if (cfg.ambient_dim != 3)
            throw ConfigError("sinusoid curve needs ambient_dim = 3");
        return sinusoid_curve(cfg.amplitude, cfg.frequency);
    }
    throw ConfigError("unknown curve '" + cfg.curve + "'");
}

std::optional<ExactSolution> make_exact(const RunConfig& cfg) {
    if (!cfg.register_exact)
        return std::nullopt;
    if (cfg.curve == "circle")
        return circle_exact(cfg.radius, cfg.rotation, cfg.ambient_dim);
    if (cfg.curve == "angenent")
        return angenent_oval(cfg.t0);
    throw ConfigError("key 'exact': curve '" + cfg.curve + "' has no exact solution");
}

Problem make_problem(const RunConfig& cfg, int n_elements) {
    const ParametrizedCurve curve = make_curve(cfg);
    auto [mesh, x_mesh] =
        cfg.curve == "circle"
            ? build_circle_mesh(n_elements, cfg.degree, cfg.radius, cfg.rotation,
                                cfg.ambient_dim)
            : build_parametric_mesh(n_elements, cfg.degree, cfg.ambient_dim, curve);
    auto [x0, u0] = initial_data(curve, mesh);
    return {std::move(mesh), std::move(x0), std::move(u0)};
}

Problem make_problem(const RunConfig& cfg) { return make_problem(cfg, cfg.n_elements); }

std::filesystem::path output_root() {
    if (const char* env = std::getenv("MCFLOW_OUTPUT_ROOT"); env != nullptr && *env != '\0')
        return env;
    return "out";
}

std::filesystem::path output_dir_for(const RunConfig& cfg) {
    return output_root() / cfg.output_dir;
}

std::string flow_records_csv(const FlowResult& result, bool with_errors,
                             const std::string& method_label) {
    std::string csv;
    if (!method_label.empty())
        csv += "method,";
    csv += "step,t,length,min_sqrt_g";
    if (with_errors)
        csv += ",err_x_H1,err_v_H1,err_pi_H1,err_H_H1";
    csv += "\n";
    for (const auto& rec : result.records) {
        if (!method_label.empty())
            csv += method_label + ",";
        csv += std::to_string(rec.step) + "," + fmt17(rec.t) + "," + fmt17(rec.length) +
               "," + fmt17(rec.min_sqrt_g);
        if (with_errors) {
            if (rec.errors.has_value())
                csv += "," + fmt_cell(rec.errors->x.h1) + "," + fmt_cell(rec.errors->v.h1) +
                       "," + fmt_cell(rec.errors->proj.h1) + "," +
                       fmt_cell(rec.errors->curv.h1);
            else
                csv += ",,,,";
        }
        csv += "\n";
    }
    return csv;
}

std::string snapshots_csv(const CurveMesh& mesh, const FlowResult& result) {
    std::string csv = snapshot_csv_header(mesh.ambient_dim);
    for (const auto& [t, x] : result.snapshots)
        append_snapshot_csv(csv, t, mesh, x);
    return csv;
}

std::array<double, 4> linf_h1_errors(const FlowResult& result) {
    std::array<double, 4> errs{0.0, 0.0, 0.0, 0.0};
    for (const auto& rec : result.records) {
        if (!rec.errors.has_value())
            continue;
        errs[0] = std::max(errs[0], rec.errors->x.h1);
        errs[1] = std::max(errs[1], rec.errors->v.h1);
        errs[2] = std::max(errs[2], rec.errors->proj.h1);
        errs[3] = std::max(errs[3], rec.errors->curv.h1);
    }
    return errs;
}

namespace {

RunOptions run_options_for(const RunConfig& cfg, const ExactSolution* exact) {
    RunOptions opts;
    opts.step.idempotency_correction = cfg.idempotency;
    opts.step.idempotency_tol = cfg.idempotency_tol;
    opts.record_stride = cfg.record_stride;
    opts.snapshot_stride = cfg.snapshot_stride;
    opts.exact = exact;
    return opts;
}

} // namespace

DriverResult cmd_run(const RunConfig& cfg) {
    for (const auto& w : cfg.warnings)
        std::cerr << "warning: " << w << "\n";

    const Problem prob = make_problem(cfg);
    const std::optional<ExactSolution> exact = make_exact(cfg);
    const ExactSolution* exact_ptr = exact.has_value() ? &*exact : nullptr;
    const bool with_errors = exact_ptr != nullptr && exact_ptr->material;
    const BDFScheme scheme = bdf_coefficients(cfg.bdf_order);
    const RunOptions opts = run_options_for(cfg, exact_ptr);

    const auto dir = output_dir_for(cfg);
    std::filesystem::create_directories(dir);

    DriverResult res;
    std::optional<FlowResult> coupled, dziuk;
    if (cfg.method == Method::coupled || cfg.method == Method::both) {
        coupled = run_flow(prob.mesh, prob.x0, prob.u0, scheme, cfg.tau, cfg.T, opts);
        write_file(dir / "flow_coupled.csv", flow_records_csv(*coupled, with_errors));
        if (cfg.snapshot_stride > 0)
            write_file(dir / "snapshots_coupled.csv", snapshots_csv(prob.mesh, *coupled));
    }
    if (cfg.method == Method::dziuk || cfg.method == Method::both) {
        dziuk = run_dziuk(prob.mesh, prob.x0, scheme, cfg.tau, cfg.T, opts);
        write_file(dir / "flow_dziuk.csv", flow_records_csv(*dziuk, with_errors));
        if (cfg.snapshot_stride > 0)
            write_file(dir / "snapshots_dziuk.csv", snapshots_csv(prob.mesh, *dziuk));
    }
    if (cfg.method == Method::both) {
        std::string paired = flow_records_csv(*coupled, with_errors, "coupled");
        std::string dz = flow_records_csv(*dziuk, with_errors, "dziuk");
        // Drop the second header before concatenating.
        paired += dz.substr(dz.find('\n') + 1);
        write_file(dir / "compare.csv", paired);
    }

    for (const auto& r : {&coupled, &dziuk}) {
        if (!r->has_value())
            continue;
        const ExitCode code = exit_for((*r)->stop);
        if (code != ExitCode::ok &&
            (res.code == ExitCode::ok || code == ExitCode::solver)) {
            res.code = code;
            res.message = (*r)->stop_message;
        }
    }
    return res;
}

DriverResult cmd_compare(const RunConfig& cfg) {
    RunConfig both = cfg;
    both.method = Method::both;
    return cmd_run(both);
}

namespace {

struct StudyRow {
    double parameter = 0.0;
    std::array<double, 4> errors{};
    bool ok = false;
    std::string note;
};

std::string study_csv(const std::vector<StudyRow>& rows) {
    // Orders between consecutive successful levels, per quantity.
    std::string csv = "level,h_or_tau,err_x,err_v,err_pi,err_H,order_x,order_v,order_pi,"
                      "order_H\n";
    const StudyRow* prev = nullptr;
    int level = 0;
    for (const auto& row : rows) {
        csv += std::to_string(level++) + "," + fmt17(row.parameter);
        if (!row.ok) {
            csv += ",,,,,,,,\n";
            continue;
        }
        for (const double e : row.errors)
            csv += "," + fmt17(e);
        for (int qnt = 0; qnt < 4; ++qnt) {
            if (prev == nullptr || prev->errors[qnt] <= 0.0 || row.errors[qnt] <= 0.0)
                csv += ",";
            else
                csv += "," + fmt17(std::log(prev->errors[qnt] / row.errors[qnt]) /
                                   std::log(prev->parameter / row.parameter));
        }
        csv += "\n";
        prev = &row;
    }
    return csv;
}

std::string study_text(const std::string& title, const std::string& param_name,
                       const std::vector<StudyRow>& rows) {
    std::ostringstream out;
    out << title << "\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%-12s %-11s %-11s %-11s %-11s %-7s %-7s %-7s %-7s\n",
                  param_name.c_str(), "err_x", "err_v", "err_pi", "err_H", "eoc_x",
                  "eoc_v", "eoc_pi", "eoc_H");
    out << line;
    const StudyRow* prev = nullptr;
    for (const auto& row : rows) {
        if (!row.ok) {
            std::snprintf(line, sizeof(line), "%-12.5g level failed: %s\n", row.parameter,
                          row.note.c_str());
            out << line;
            continue;
        }
        std::array<double, 4> orders{};
        orders.fill(std::numeric_limits<double>::quiet_NaN());
        if (prev != nullptr)
            for (int qnt = 0; qnt < 4; ++qnt)
                orders[qnt] = std::log(prev->errors[qnt] / row.errors[qnt]) /
                              std::log(prev->parameter / row.parameter);
        std::snprintf(line, sizeof(line),
                      "%-12.5g %-11.4e %-11.4e %-11.4e %-11.4e %-7.3f %-7.3f %-7.3f %-7.3f\n",
                      row.parameter, row.errors[0], row.errors[1], row.errors[2],
                      row.errors[3], orders[0], orders[1], orders[2], orders[3]);
        out << line;
        prev = &row;
    }
    return out.str();
}

} // namespace

DriverResult cmd_converge(const RunConfig& cfg) {
    for (const auto& w : cfg.warnings)
        std::cerr << "warning: " << w << "\n";

    const bool spatial = cfg.e_levels.size() >= 2;
    const bool temporal = cfg.tau_levels.size() >= 2;
    if (!spatial && !temporal)
        throw ConfigError("convergence study needs at least 2 levels in 'e_levels' or "
                          "'tau_levels'");

    RunConfig run_cfg = cfg;
    run_cfg.register_exact = true;
    const std::optional<ExactSolution> exact = make_exact(run_cfg);
    if (!exact->material)
        throw ConfigError("convergence study needs a material exact solution "
                          "(curve = circle)");
    const BDFScheme scheme = bdf_coefficients(cfg.bdf_order);

    const auto dir = output_dir_for(cfg);
    std::filesystem::create_directories(dir);

    auto run_level = [&](int n_elements, double tau) -> StudyRow {
        StudyRow row;
        try {
            const Problem prob = make_problem(run_cfg, n_elements);
            RunOptions opts = run_options_for(run_cfg, &*exact);
            opts.record_stride = 1; // L-infinity in time needs every step
            opts.snapshot_stride = 0;
            const FlowResult flow =
                run_flow(prob.mesh, prob.x0, prob.u0, scheme, tau, cfg.T, opts);
            if (flow.stop != StopReason::completed) {
                row.note = flow.stop_message;
                return row;
            }
            row.errors = linf_h1_errors(flow);
            row.ok = true;
        } catch (const std::exception& e) {
            row.note = e.what();
        }
        return row;
    };

    DriverResult res;
    std::string all_text;
    // Cross-product: a spatial table per tau level (or the single configured
    // tau), plus a temporal table per fixed mesh when tau_levels are given.
    if (spatial) {
        const std::vector<double> taus =
            temporal ? cfg.tau_levels : std::vector<double>{cfg.tau};
        for (const double tau : taus) {
            std::vector<StudyRow> rows;
            for (const int E : cfg.e_levels) {
                StudyRow row = run_level(E, tau);
                // Parameter h: initial mesh size (length / element count).
                try {
                    const Problem prob = make_problem(run_cfg, E);
                    row.parameter = discrete_length(prob.mesh, prob.x0) / E;
                } catch (const std::exception& e) {
                    row.ok = false;
                    row.note = e.what();
                }
                rows.push_back(std::move(row));
            }
            std::string tag = "eoc_space";
            if (taus.size() > 1)
                tag += "_tau" + fmt17(tau);
            write_file(dir / (tag + ".csv"), study_csv(rows));
            const std::string text =
                study_text("spatial study (tau = " + fmt17(tau) + ")", "h", rows);
            write_file(dir / (tag + ".txt"), text);
            all_text += text + "\n";
            for (const auto& row : rows)
                if (!row.ok)
                    res.code = ExitCode::solver;
        }
    }
    if (temporal && !spatial) {
        std::vector<StudyRow> rows;
        for (const double tau : cfg.tau_levels) {
            StudyRow row = run_level(cfg.n_elements, tau);
            row.parameter = tau;
            rows.push_back(std::move(row));
        }
        write_file(dir / "eoc_time.csv", study_csv(rows));
        const std::string text = study_text(
            "temporal study (E = " + std::to_string(cfg.n_elements) + ")", "tau", rows);
        write_file(dir / "eoc_time.txt", text);
        all_text += text + "\n";
        for (const auto& row : rows)
            if (!row.ok)
                res.code = ExitCode::solver;
    }

    std::cout << all_text;
    if (res.code != ExitCode::ok)
        res.message = "one or more convergence levels failed (partial tables written)";
    return res;
}

DriverResult cmd_verify() {
    const VerifyReport report = run_verification();
    std::cout << format_report(report);
    DriverResult res;
    if (!report.all_pass()) {
        res.code = ExitCode::verify;
        res.message = "verification failures present";
    }
    return res;
}

} // namespace mcflow
