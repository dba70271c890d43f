#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli/experiment.hpp"
#include "kaczmarz/error.hpp"
#include "temp_dir.hpp"

using namespace kaczmarz;
using kaczmarz::cli::RunConfig;

namespace {

const char* kViolation = "2,3\n1,0,0\n0,1,0\n1,0\n";
const char* kIdentity = "2,2\n1,0\n0,1\n1,1\n";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Experiment, IdentityMaxResidual) {
    TempDir dir;
    RunConfig c;
    c.input = dir.write("id.csv", kIdentity);
    c.reference = "oracle";
    const auto out = cli::execute(c, "T");
    EXPECT_EQ(out.stop_reason, StopReason::Converged);
    const auto& doc = out.document;
    EXPECT_EQ(doc["result"]["iterations_run"], 2);
    EXPECT_EQ(doc["trace"]["selected_indices"], nlohmann::json({1, 2}));
    EXPECT_EQ(doc["trace"]["distance_to_reference"].size(), 3u);
    EXPECT_FALSE(doc.contains("histogram"));
}

TEST(Experiment, ViolationReport) {
    TempDir dir;
    RunConfig c;
    c.input = dir.write("v.csv", kViolation);
    c.emit = {"report", "tau", "histogram"};
    const auto doc = cli::execute(c, "T").document;
    const auto& rec = doc["assumption_c"]["records"][1];
    EXPECT_EQ(rec["index"], 2);
    EXPECT_EQ(rec["holds_direct"], false);
    EXPECT_EQ(rec["holds_qr"], false);
    EXPECT_EQ(rec["agree"], true);
    EXPECT_EQ(doc["assumption_c"]["violated"], nlohmann::json({2}));
    EXPECT_EQ(doc["tau"]["tail_missing"], nlohmann::json({2}));
    EXPECT_EQ(doc["histogram"]["missing"], nlohmann::json({2}));
    EXPECT_FALSE(doc.contains("trace"));
}

TEST(Experiment, OutputIsStableApartFromTimestamp) {
    TempDir dir;
    RunConfig c;
    c.input = dir.write("v.csv", kViolation);
    c.control = "random";
    c.seed = 9;
    c.emit = {"trace", "report", "tau", "histogram"};
    const auto a = cli::execute(c, "A").document;
    const auto b = cli::execute(c, "A").document;
    EXPECT_EQ(a.dump(), b.dump());
}

TEST(Experiment, ConfigValidation) {
    RunConfig c;
    c.control = "random";
    EXPECT_THROW(cli::validate(c), InvalidArgument);
    c.seed = 1;
    EXPECT_NO_THROW(cli::validate(c));
    c.control = "cyclic";
    EXPECT_THROW(cli::validate(c), InvalidArgument);
    c.seed.reset();
    c.emit = {"bogus"};
    EXPECT_THROW(cli::validate(c), InvalidArgument);
    c.emit = {"trace"};
    c.max_iters = 0;
    EXPECT_THROW(cli::validate(c), InvalidArgument);
}

TEST(RunExperiment, ExitCodesAndFiles) {
    TempDir dir;
    RunConfig c;
    c.input = dir.write("id.csv", kIdentity);
    c.output = dir.path() / "out.json";
    c.csv_trace = dir.path() / "trace.csv";
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(cli::run_experiment(c, out, err), 0);
    EXPECT_TRUE(out.str().empty());
    const auto doc = nlohmann::json::parse(slurp(*c.output));
    EXPECT_EQ(doc["result"]["stop_reason"], "converged");
    EXPECT_EQ(slurp(*c.csv_trace),
              "iteration,selected_index,residual_max_abs,distance_to_reference\n0,1,1,\n1,2,1,\n");

    c.control = "cyclic";
    c.max_iters = 1;
    c.output.reset();
    c.csv_trace.reset();
    EXPECT_EQ(cli::run_experiment(c, out, err), 2);
    EXPECT_FALSE(out.str().empty());

    c.input = dir.write("bad.csv", "2,2\n1,0\nfoo,1\n1,1\n");
    std::ostringstream err2;
    EXPECT_EQ(cli::run_experiment(c, out, err2), 1);
    EXPECT_NE(err2.str().find("parse error"), std::string::npos);
}

TEST(RunExperiment, NonzeroStartIsRecorded) {
    TempDir dir;
    RunConfig c;
    c.input = dir.write("id.csv", kIdentity);
    c.x0 = dir.write("x0.txt", "0.5 0\n").string();
    const auto doc = cli::execute(c, "T").document;
    EXPECT_EQ(doc["result"]["x0_outside_hypothesis"], true);
}
