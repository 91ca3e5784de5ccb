// CLI for mean curvature flow of closed curves in R^n: the coupled
// projection/curvature ESFEM-BDF solver, a curve-shortening baseline, and
// verification/convergence harnesses. One experiment per config file.

#include "mcflow/driver.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int run_command(const std::function<mcflow::DriverResult()>& command) {
    try {
        const mcflow::DriverResult res = command();
        if (!res.message.empty())
            std::cerr << res.message << "\n";
        return static_cast<int>(res.code);
    } catch (const mcflow::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return static_cast<int>(mcflow::ExitCode::config);
    } catch (const mcflow::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return static_cast<int>(mcflow::ExitCode::solver);
    } catch (const mcflow::DegenerateElementError& e) {
        std::cerr << "singularity stop: " << e.what() << "\n";
        return static_cast<int>(mcflow::ExitCode::singularity);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mcf: mean curvature flow of closed curves in arbitrary codimension"};
    app.require_subcommand(1);

    std::string run_cfg, converge_cfg, compare_cfg;
    auto* run =
        app.add_subcommand("run", "run one flow experiment and write CSV outputs");
    run->add_option("config", run_cfg, "experiment config file")->required();

    auto* converge = app.add_subcommand(
        "converge", "run a mesh/step refinement study and emit EOC tables");
    converge->add_option("config", converge_cfg, "experiment config file")->required();

    auto* compare = app.add_subcommand(
        "compare", "run the coupled method and the curve-shortening baseline side by side");
    compare->add_option("config", compare_cfg, "experiment config file")->required();

    app.add_subcommand("verify", "run the built-in oracle suites and report pass/fail");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(mcflow::ExitCode::config);
    }

    if (run->parsed())
        return run_command([&] { return mcflow::cmd_run(mcflow::load_run_config(run_cfg)); });
    if (converge->parsed())
        return run_command(
            [&] { return mcflow::cmd_converge(mcflow::load_run_config(converge_cfg)); });
    if (compare->parsed())
        return run_command(
            [&] { return mcflow::cmd_compare(mcflow::load_run_config(compare_cfg)); });
    return run_command([&] { return mcflow::cmd_verify(); });
}
