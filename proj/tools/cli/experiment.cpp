#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "kaczmarz/assumption_c.hpp"
#include "kaczmarz/control_analysis.hpp"
#include "kaczmarz/error.hpp"
#include "system_io.hpp"

namespace kaczmarz::cli {

namespace {

using nlohmann::json;

constexpr int kExitConverged = 0;
constexpr int kExitError = 1;
constexpr int kExitBudget = 2;

bool emits(const RunConfig& config, std::string_view what) {
    return std::find(config.emit.begin(), config.emit.end(), what) != config.emit.end();
}

json one_based(const std::vector<std::size_t>& indices) {
    json out = json::array();
    for (std::size_t i : indices) {
        out.push_back(i + 1);
    }
    return out;
}

json config_echo(const RunConfig& config) {
    json c;
    c["input"] = config.input.string();
    c["control"] = config.control;
    c["seed"] = config.seed ? json(*config.seed) : json(nullptr);
    c["max_iters"] = config.max_iters;
    c["tol"] = config.tol;
    c["x0"] = config.x0;
    c["reference"] = config.reference;
    c["emit"] = config.emit;
    return c;
}

json report_json(const AssumptionCReport& report) {
    json records = json::array();
    for (const auto& r : report.records) {
        json rec;
        rec["index"] = r.index + 1;
        rec["decidable"] = r.decidable;
        rec["distance"] = r.decidable ? json(r.distance) : json(nullptr);
        rec["holds_direct"] = r.decidable ? json(r.holds_direct) : json(nullptr);
        rec["borderline"] = r.borderline;
        rec["qr_condition_residual"] =
            r.qr_condition_residual ? json(*r.qr_condition_residual) : json(nullptr);
        rec["holds_qr"] = r.holds_qr ? json(*r.holds_qr) : json(nullptr);
        rec["agree"] = r.agree ? json(*r.agree) : json(nullptr);
        records.push_back(std::move(rec));
    }
    json out;
    out["eq_tol"] = report.eq_tol;
    out["system_rank_ok"] = report.system_rank_ok;
    out["holds"] = report.holds();
    out["violated"] = one_based(report.violated_indices());
    out["records"] = std::move(records);
    return out;
}

std::string csv_for(const IterationTrace& trace) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "iteration,selected_index,residual_max_abs,distance_to_reference\n";
    for (std::size_t k = 0; k < trace.iterations_run; ++k) {
        os << k << ',' << trace.selected_indices[k] + 1 << ',' << trace.residual_max_abs[k] << ',';
        if (trace.distance_to_reference) {
            os << (*trace.distance_to_reference)[k];
        }
        os << '\n';
    }
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot write " + path.string());
    }
    f << text;
    if (!f) {
        throw Error("write failed for " + path.string());
    }
}

}  // namespace

void validate(const RunConfig& config) {
    if (config.control != "cyclic" && config.control != "maxres" && config.control != "random") {
        throw InvalidArgument("unknown control '" + config.control + "'");
    }
    if ((config.control == "random") != config.seed.has_value()) {
        throw InvalidArgument("--seed is required with --control random and only then");
    }
    if (config.max_iters < 1) {
        throw InvalidArgument("--max-iters must be at least 1");
    }
    if (!(config.tol >= 0.0)) {
        throw InvalidArgument("--tol must be non-negative");
    }
    for (const auto& e : config.emit) {
        if (e != "trace" && e != "histogram" && e != "tau" && e != "report") {
            throw InvalidArgument("unknown --emit item '" + e + "'");
        }
    }
}

ControlStrategy make_strategy(const RunConfig& config) {
    if (config.control == "cyclic") {
        return Cyclic{};
    }
    if (config.control == "random") {
        return RandomControl{config.seed.value_or(0)};
    }
    return MaxResidual{};
}

ExperimentOutput execute(const RunConfig& config, const std::string& timestamp) {
    validate(config);
    const LinearSystem system = load_system(config.input);
    spdlog::info("loaded {}x{} system from {}", system.rows(), system.cols(),
                 config.input.string());

    Vector x0(system.cols(), 0.0);
    if (config.x0 != "zero") {
        x0 = load_vector(config.x0);
    }

    RunOptions options;
    options.max_iters = config.max_iters;
    options.residual_tol = config.tol;
    if (config.reference == "oracle") {
        options.reference = min_norm_solution(system);
    } else if (config.reference != "none") {
        options.reference = load_vector(config.reference);
    }

    const IterationTrace trace = run_kaczmarz(system, make_strategy(config), x0, options);
    spdlog::info("{} after {} iterations, max residual {:.3e}", to_string(trace.stop_reason),
                 trace.iterations_run, trace.final_residual_max_abs);
    if (trace.x0_outside_hypothesis) {
        spdlog::warn("nonzero x0: index recurrence is only guaranteed from x0 = 0");
    }

    json doc;
    doc["schema_version"] = 1;
    doc["generated_at"] = timestamp;
    doc["config"] = config_echo(config);
    doc["system"] = {{"rows", system.rows()},
                     {"cols", system.cols()},
                     {"frobenius_sq", system.frobenius_sq()}};
    doc["result"] = {{"stop_reason", std::string(to_string(trace.stop_reason))},
                     {"iterations_run", trace.iterations_run},
                     {"final_residual_max_abs", trace.final_residual_max_abs},
                     {"final_iterate", trace.final_iterate},
                     {"x0_outside_hypothesis", trace.x0_outside_hypothesis}};

    if (emits(config, "trace")) {
        json t;
        t["selected_indices"] = one_based(trace.selected_indices);
        t["residual_max_abs"] = trace.residual_max_abs;
        t["distance_to_reference"] = trace.distance_to_reference
                                         ? json(*trace.distance_to_reference)
                                         : json(nullptr);
        doc["trace"] = std::move(t);
    }

    const IndexSequence seq(trace.selected_indices, system.rows());
    if (emits(config, "histogram")) {
        const RecurrenceReport rec = recurrence_report(seq);
        json last = json::array();
        for (const auto& p : rec.last_position) {
            last.push_back(p ? json(*p) : json(nullptr));
        }
        doc["histogram"] = {{"counts", rec.counts},
                            {"last_iteration", std::move(last)},
                            {"missing", one_based(rec.missing)}};
    }
    if (emits(config, "tau")) {
        const TauPartition part = extract_tau_partition(seq);
        doc["tau"] = {{"taus", part.taus},
                      {"complete_windows", part.complete_windows()},
                      {"complete_prefix_len", part.complete_prefix_len},
                      {"tail_missing", one_based(part.tail_missing)}};
    }
    if (emits(config, "report")) {
        doc["assumption_c"] = report_json(cross_validate(system));
    }

    ExperimentOutput out;
    out.document = std::move(doc);
    out.stop_reason = trace.stop_reason;
    if (config.csv_trace) {
        out.csv_trace = csv_for(trace);
    }
    return out;
}

int run_experiment(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const ExperimentOutput result = execute(config, iso8601_now());
        const std::string text = result.document.dump(2) + "\n";
        if (config.output) {
            write_file(*config.output, text);
        } else {
            out << text;
        }
        if (config.csv_trace) {
            write_file(*config.csv_trace, result.csv_trace);
        }
        return result.stop_reason == StopReason::Converged ? kExitConverged : kExitBudget;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

std::string iso8601_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

}  // namespace kaczmarz::cli
