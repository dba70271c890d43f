#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli/experiment.hpp"

namespace {

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("kaczmarz");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);

    const char* env = std::getenv("KACZMARZ_LOG");
    const std::string level = env ? env : "error";
    if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else {
        spdlog::set_level(spdlog::level::err);
    }
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();

    kaczmarz::cli::RunConfig config;
    std::string output;
    std::string csv_trace;
    std::uint64_t seed = 0;

    CLI::App app{"Kaczmarz projections with cyclic, maximal-residual and random row control"};
    app.add_option("--input", config.input, "System file (MatrixMarket or CSV)")->required();
    app.add_option("--control", config.control, "Row control")
        ->check(CLI::IsMember({"cyclic", "maxres", "random"}))
        ->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "Seed for --control random");
    app.add_option("--max-iters", config.max_iters, "Iteration budget")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--tol", config.tol, "Stop when the max residual is <= tol")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--x0", config.x0, "Initial iterate: zero or a vector file")->capture_default_str();
    app.add_option("--reference", config.reference,
                   "Distance reference: none, oracle (minimal-norm solution) or a vector file")
        ->capture_default_str();
    app.add_option("--emit", config.emit, "Comma list of trace,histogram,tau,report")
        ->delimiter(',')
        ->check(CLI::IsMember({"trace", "histogram", "tau", "report"}))
        ->capture_default_str();
    app.add_option("--output", output, "JSON output path (default: stdout)");
    app.add_option("--csv-trace", csv_trace, "Also write a per-iteration CSV trace");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (seed_opt->count() > 0) {
        config.seed = seed;
    }
    if (!output.empty()) {
        config.output = output;
    }
    if (!csv_trace.empty()) {
        config.csv_trace = csv_trace;
    }
    return kaczmarz::cli::run_experiment(config, std::cout, std::cerr);
}
