// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bifuq_app/commands.hpp"
#include "bifuq_app/config.hpp"
#include "bifuq_app/csv.hpp"

using namespace bifuq;
using namespace bifuq::app;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("bifuq_test_config_" + name);
    fs::remove_all(p);
    return p;
}

std::size_t line_count(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

json small_homogeneous() {
    return json::parse(R"({
      "domain": {"m": 20},
      "field": {"kind": "homogeneous", "marginals": [{"dist": "uniform", "lo": -1, "hi": 1}]},
      "continuation": {"ds": 0.1, "S": 1.0},
      "branches": [1, 2],
      "samples": 200, "branch_samples": 5
    })");
}

}  // namespace

TEST(Config, DefaultsAreValid) {
    const RunConfig c = parse_config(json::object());
    EXPECT_NO_THROW(validate(c));
    EXPECT_EQ(c.domain.m, 100);
    EXPECT_EQ(c.w, 3);
    EXPECT_EQ(c.samples, 10000u);
    EXPECT_EQ(c.continuation.n_steps, 100);
    EXPECT_EQ(c.converge.w_ref, 12);
}

TEST(Config, RoundTripThroughJson) {
    const RunConfig c = parse_config(small_homogeneous());
    const RunConfig d = parse_config(to_json(c));
    EXPECT_EQ(to_json(c).dump(), to_json(d).dump());
}

TEST(Config, UnknownKeysRejected) {
    EXPECT_THROW(parse_config(json::parse(R"({"bogus": 1})")), ConfigError);
    EXPECT_THROW(parse_config(json::parse(R"({"domain": {"n": 3}})")), ConfigError);
    EXPECT_THROW(parse_config(json::parse(R"({"continuation": {"dt": 0.1}})")), ConfigError);
    EXPECT_THROW(parse_config(json::parse(
                     R"({"field": {"kind": "homogeneous", "marginals": [{"dist": "uniform", "lo": -1, "hi": 1, "x": 0}]}})")),
                 ConfigError);
}

TEST(Config, TypeAndValueErrors) {
    EXPECT_THROW(parse_config(json::parse(R"({"samples": "many"})")), ConfigError);
    EXPECT_THROW(parse_config(json::parse(R"({"field": {"kind": "cubic", "marginals": []}})")), ConfigError);
    EXPECT_THROW(parse_config(json::parse(R"({"continuation": {"ds": 0.3, "S": 1.0}})")), ConfigError);
    EXPECT_THROW(parse_config(json::parse(R"({"density": {"kind": "spline"}})")), ConfigError);
}

TEST(Config, ValidationRules) {
    auto bad = [](const char* patch) {
        json j = small_homogeneous();
        j.merge_patch(json::parse(patch));
        return parse_config(j);
    };
    EXPECT_THROW(validate(bad(R"({"branches": []})")), ConfigError);
    EXPECT_THROW(validate(bad(R"({"branches": [21]})")), ConfigError);
    EXPECT_THROW(validate(bad(R"({"branches": [0]})")), ConfigError);
    EXPECT_THROW(validate(bad(R"({"domain": {"m": 0}})")), ConfigError);
    EXPECT_THROW(validate(bad(R"({"domain": {"a": 2, "b": 1}})")), ConfigError);
    EXPECT_THROW(validate(bad(R"({"field": {"kind": "cosine", "marginals": [{"dist": "uniform", "lo": -1, "hi": 1}]}})")),
                 ConfigError);
    EXPECT_THROW(validate(bad(R"({"field": {"kind": "cosine", "marginals": [
        {"dist": "truncated_gaussian", "mean": 0, "sd": 1, "lo": -1, "hi": 1},
        {"dist": "uniform", "lo": -1, "hi": 1}]}})")),
                 ConfigError);
    EXPECT_THROW(validate(bad(R"({"continuation": {"xi": 1.5}})")), ConfigError);
    EXPECT_THROW(validate(bad(R"({"threads": 0})")), ConfigError);
    EXPECT_NO_THROW(validate(bad(R"({"field": {"kind": "homogeneous", "marginals": [
        {"dist": "truncated_gaussian", "mean": 0, "sd": 1, "lo": -2, "hi": 2}]}})")));
}

TEST(Config, ConvergeValidation) {
    json j = small_homogeneous();
    j["samples"] = 1000;
    j["converge"] = json::parse(R"({"w_list": [1, 2], "w_ref": 4, "s_probe": 0.5})");
    EXPECT_NO_THROW(validate_converge(parse_config(j)));
    j["converge"]["s_probe"] = 0.55;
    EXPECT_THROW(validate_converge(parse_config(j)), ConfigError);
    EXPECT_NO_THROW(validate(parse_config(j)));  // only converge cares about the probe
    j["converge"]["s_probe"] = 0.5;
    j["converge"]["w_list"] = json::array({5});
    EXPECT_THROW(validate_converge(parse_config(j)), ConfigError);
    j["converge"]["w_list"] = json::array();
    EXPECT_THROW(validate_converge(parse_config(j)), ConfigError);
    j["converge"]["w_list"] = json::array({1});
    j["samples"] = 999;
    EXPECT_THROW(validate_converge(parse_config(j)), ConfigError);
}

TEST(Config, LoadFileErrors) {
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
    const fs::path p = scratch("bad.json");
    std::ofstream(p) << "{ not json";
    EXPECT_THROW(load_config(p), ConfigError);
}

TEST(ExitCodes, Mapping) {
    EXPECT_EQ(exit_code_for(ConfigError("x")), 2);
    EXPECT_EQ(exit_code_for(NumericalFailure("eigen", "x")), 3);
    EXPECT_EQ(exit_code_for(ContractViolation("uq", "x")), 3);
}

TEST(Csv, FormatAndColumnCheck) {
    EXPECT_EQ(format_real(0.1), "0.10000000000000001");
    EXPECT_EQ(format_real(1.0), "1");
    EXPECT_EQ(format_real(std::numeric_limits<double>::infinity()), "inf");
    const fs::path p = scratch("t.csv");
    {
        CsvWriter w(p, {"a", "b"});
        w.add(1).add(0.5).end_row();
        w.add(2);
        EXPECT_THROW(w.end_row(), ContractViolation);
    }
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str().substr(0, 12), "a,b\n1,0.5\n");
}

TEST(Commands, EmptyBranchListWritesNothing) {
    json j = small_homogeneous();
    j["branches"] = json::array();
    const fs::path out = scratch("empty");
    j["output_dir"] = out.string();
    std::ostringstream log;
    EXPECT_THROW(cmd_bifpoints(parse_config(j), log), ConfigError);
    EXPECT_FALSE(fs::exists(out));
}

TEST(Commands, HomogeneousBifpointsAndBranch) {
    json j = small_homogeneous();
    const fs::path out = scratch("homog");
    j["output_dir"] = out.string();
    std::ostringstream log;
    const RunConfig c = parse_config(j);
    cmd_bifpoints(c, log);
    EXPECT_NE(log.str().find("1 eigenvalue problem"), std::string::npos);
    EXPECT_EQ(line_count(out / "bifpoints.csv"), 3u);
    EXPECT_EQ(line_count(out / "bifpoints_samples.csv"), 201u);
    std::ostringstream blog;
    cmd_branch(c, blog);
    EXPECT_NE(blog.str().find("branch 1: 1 continuation"), std::string::npos);
    EXPECT_EQ(line_count(out / "branch_1_mean.csv"), 12u);
    EXPECT_EQ(line_count(out / "branch_2_samples.csv"), 1u + 5u * 11u);
    EXPECT_TRUE(fs::exists(out / "branch_solutions.csv"));
}

TEST(Commands, ZeroArclengthGivesSingleRows) {
    json j = small_homogeneous();
    j["continuation"] = json::parse(R"({"ds": 0.1, "S": 0.0})");
    j["branches"] = json::array({1});
    j["branch_samples"] = 1;
    const fs::path out = scratch("s0");
    j["output_dir"] = out.string();
    std::ostringstream log;
    cmd_branch(parse_config(j), log);
    EXPECT_EQ(line_count(out / "branch_1_mean.csv"), 2u);
    EXPECT_EQ(line_count(out / "branch_1_samples.csv"), 2u);
}

TEST(Commands, HeterogeneousLogsCollocationCounts) {
    json j = json::parse(R"({
      "domain": {"m": 30}, "continuation": {"ds": 0.1, "S": 0.5},
      "branches": [1], "samples": 500, "branch_samples": 3
    })");
    const fs::path out = scratch("het");
    j["output_dir"] = out.string();
    const RunConfig c = parse_config(j);
    std::ostringstream log;
    cmd_bifpoints(c, log);
    EXPECT_NE(log.str().find("25 collocation solves"), std::string::npos);
    EXPECT_TRUE(fs::exists(out / "bifpoints_surrogate.json"));
    std::ostringstream blog;
    cmd_branch(c, blog);
    EXPECT_NE(blog.str().find("25 continuations"), std::string::npos);
}

TEST(Commands, ConvergeSingleRow) {
    json j = json::parse(R"({
      "domain": {"m": 30}, "continuation": {"ds": 0.1, "S": 0.5}, "branches": [1],
      "samples": 1000, "converge": {"w_list": [3], "w_ref": 4, "s_probe": 0.5}
    })");
    const fs::path out = scratch("conv");
    j["output_dir"] = out.string();
    std::ostringstream log;
    cmd_converge(parse_config(j), log);
    EXPECT_EQ(line_count(out / "converge.csv"), 2u);
    std::ifstream in(out / "converge.csv");
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "w,lambda_cardinality,rms_p_star,rms_r_at_s,rms_u_at_s");
    EXPECT_EQ(row.substr(0, 5), "3,25,");
}
