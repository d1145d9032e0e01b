#include "lwbvp/errors.hpp"
#include "lwbvp/run.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

using namespace lwbvp;

namespace {

Json example1_document() {
    return Json::parse(R"({
      "problem": {"T": 1, "eta": "1/3", "alpha": 3, "beta": "1/2",
                  "f": {"kind": "autonomous-rational-sigmoid", "params": [40], "monotone_in_u": true}},
      "thresholds": {"a": "1/120", "b": 2, "c": 124},
      "mode": "certify"
    })");
}

RunOptions in_memory() {
    RunOptions o;
    o.timing = false;
    o.write_files = false;
    return o;
}

RunConfig with_mode(Mode m) {
    RunConfig c = parse_run_config(example1_document());
    c.mode = m;
    return c;
}

}  // namespace

TEST(RunConfig, RoundTripsThroughJson) {
    RunConfig c = parse_run_config(example1_document());
    c.grid_n = 513;
    c.axes = {SweepAxis::parse("beta:0.1:0.9:5")};
    c.u_max = 300.0;
    EXPECT_TRUE(parse_run_config(to_json(c)) == c);
    const RunConfig d = load_run_config(LWBVP_CONFIG_DIR "/example2.json");
    EXPECT_TRUE(parse_run_config(Json::parse(to_json(d).dump())) == d);
}

TEST(RunConfig, DefaultsAndExactness) {
    const RunConfig c = parse_run_config(example1_document());
    EXPECT_EQ(c.grid_n, 2049u);
    EXPECT_EQ(c.mode, Mode::certify);
    ASSERT_TRUE(c.thresholds.has_value());
    EXPECT_TRUE(c.problem.eta.is_exact());
    EXPECT_DOUBLE_EQ(c.hypothesis_u_max(), 248.0);
}

TEST(RunConfig, SchemaViolationsAreConfigErrors) {
    auto broken = [](const char* pointer, Json value) {
        Json d = example1_document();
        d[Json::json_pointer(pointer)] = std::move(value);
        return d;
    };
    EXPECT_THROW(parse_run_config(broken("/solver/grid_n", 2048)), ConfigError);
    EXPECT_THROW(parse_run_config(broken("/solver/grid_n", 33)), ConfigError);
    EXPECT_THROW(parse_run_config(broken("/mode", "fit")), ConfigError);
    EXPECT_THROW(parse_run_config(broken("/thresholds/a", -1)), ConfigError);
    EXPECT_THROW(parse_run_config(broken("/problem/f/kind", "spline")), ConfigError);
    EXPECT_THROW(parse_run_config(broken("/problem/eta", "one third")), ConfigError);
    Json d = example1_document();
    d["problem"].erase("T");
    EXPECT_THROW(parse_run_config(d), ConfigError);
    EXPECT_THROW(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST(SweepAxis, ParsesAndRejects) {
    const SweepAxis a = SweepAxis::parse("beta:0.1:0.9:5");
    EXPECT_EQ(a.name, "beta");
    const auto v = a.values();
    ASSERT_EQ(v.size(), 5u);
    EXPECT_DOUBLE_EQ(v.front(), 0.1);
    EXPECT_DOUBLE_EQ(v.back(), 0.9);
    EXPECT_NEAR(v[2], 0.5, 1e-15);
    EXPECT_TRUE(SweepAxis::parse(a.to_string()) == a);
    EXPECT_THROW(SweepAxis::parse("gamma:0:1:3"), ConfigError);
    EXPECT_THROW(SweepAxis::parse("beta:0:1"), ConfigError);
    EXPECT_THROW(SweepAxis::parse("beta:0:1:0"), ConfigError);
    EXPECT_THROW(SweepAxis::parse("beta:0:1:1"), ConfigError);
    EXPECT_THROW(SweepAxis::parse("beta:x:1:3"), ConfigError);
}

TEST(Run, ConstantsModeStopsAfterConstants) {
    const RunOutcome r = run(with_mode(Mode::constants), in_memory());
    EXPECT_EQ(r.exit_code, kExitOk);
    EXPECT_EQ(r.report["constants"]["lambda"]["exact"], "5/6");
    EXPECT_EQ(r.report["constants"]["delta"]["exact"], "4/45");
    EXPECT_FALSE(r.report.contains("certificate"));
    EXPECT_FALSE(r.report.contains("timing_ms"));
    EXPECT_TRUE(r.files.empty());
}

TEST(Run, CertifyModeExitCodes) {
    RunConfig c = with_mode(Mode::certify);
    RunOutcome r = run(c, in_memory());
    EXPECT_EQ(r.exit_code, kExitOk);
    EXPECT_TRUE(r.report["certificate"]["verdict"].get<bool>());

    c.thresholds->c = Number(Rational(100));  // D3 fails
    r = run(c, in_memory());
    EXPECT_EQ(r.exit_code, kExitCertification);
    EXPECT_FALSE(r.report["certificate"]["D3"]["holds"].get<bool>());

    c = with_mode(Mode::certify);
    c.problem.alpha = Number(Rational(20));
    r = run(c, in_memory());
    EXPECT_EQ(r.exit_code, kExitHypothesis);
    EXPECT_FALSE(r.report["hypothesis"]["ok"].get<bool>());
}

TEST(Run, ReportIsDeterministicWithoutTiming) {
    RunConfig c = with_mode(Mode::solve);
    c.grid_n = 513;
    const std::string first = render_report(run(c, in_memory()).report);
    const std::string second = render_report(run(c, in_memory()).report);
    EXPECT_EQ(first, second);
    EXPECT_EQ(first.back(), '\n');
}

TEST(Run, EchoedConfigReparses) {
    const RunConfig c = with_mode(Mode::constants);
    const RunOutcome r = run(c, in_memory());
    EXPECT_TRUE(parse_run_config(r.report["config"]) == c);
}

TEST(Sweep, LambdaDecreasesAlongBeta) {
    RunConfig c = with_mode(Mode::sweep);
    c.axes = {SweepAxis::parse("beta:0.1:1:10")};
    const auto rows = sweep(c);
    ASSERT_EQ(rows.size(), 10u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].lambda, rows[i - 1].lambda);
    // beta bound for Example 1 is (2 - 1/3) / (1/3 - 2/3 + 2) = 1, strict
    for (const auto& r : rows) EXPECT_EQ(r.verdict == "H2-fail", r.beta >= 1.0) << r.beta;
}

TEST(Sweep, SinglePointMatchesConstants) {
    RunConfig c = with_mode(Mode::sweep);
    c.axes = {SweepAxis::parse("beta:0.5:0.5:1")};
    const auto rows = sweep(c);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0].lambda, 5.0 / 6.0, 1e-15);
    EXPECT_NEAR(*rows[0].gamma, 0.25, 1e-15);
    EXPECT_NEAR(*rows[0].m, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(*rows[0].delta, 4.0 / 45.0, 1e-15);
    EXPECT_EQ(rows[0].verdict, "true");
}

TEST(Sweep, AlphaAtItsBoundFailsH2) {
    RunConfig c = with_mode(Mode::sweep);
    c.axes = {SweepAxis::parse("alpha:18:18:1")};
    const auto rows = sweep(c);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].verdict, "H2-fail");
    EXPECT_FALSE(rows[0].gamma.has_value());
}

TEST(Sweep, CsvLayout) {
    RunConfig c = with_mode(Mode::sweep);
    c.axes = {SweepAxis::parse("beta:0.5:0.7:2"), SweepAxis::parse("eta:0.25:0.9:2")};
    const auto rows = sweep(c);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_DOUBLE_EQ(rows[1].eta, 0.9);  // last axis varies fastest; alpha = 3 exceeds 2/0.81
    const std::string csv = sweep_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha,beta,eta,lambda,gamma,m,delta,verdict");
    EXPECT_EQ(csv.back(), '\n');
    EXPECT_NE(csv.find("3,0.5,0.25,"), std::string::npos);
    EXPECT_NE(csv.find(",,,H2-fail"), std::string::npos);
}
