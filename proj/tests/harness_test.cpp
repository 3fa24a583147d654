#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace wlansim;

namespace {

const char* kMinimal = R"({
  "aps": [{"id": "ap1", "position": [0, 0]}],
  "stations": []
})";

TEST(ParseScenario, MinimalAppliesDefaults) {
  auto sc = parse_scenario(kMinimal);
  EXPECT_EQ(sc.aps.size(), 1u);
  EXPECT_TRUE(sc.stations.empty());
  EXPECT_EQ(sc.policy, PolicyKind::StrongestSnr);
  EXPECT_DOUBLE_EQ(sc.policy_params.beta, 0.2);
  EXPECT_DOUBLE_EQ(sc.policy_params.assoc_threshold_db, 4.0);
  EXPECT_DOUBLE_EQ(sc.sim.duration_s, 60.0);
  EXPECT_EQ(sc.sim.queue_capacity, 500);
  EXPECT_EQ(sc.sim.retry_limit, 4);
  EXPECT_DOUBLE_EQ(sc.sim.per_packet_overhead_s, 0.0008);
  EXPECT_EQ(sc.rate_table.tiers.size(), 4u);  // default is the 4-tier table
}

TEST(ParseScenario, UnknownFieldIsNamedInError) {
  const char* text = R"({
    "aps": [{"id": "ap1", "position": [0, 0], "chanel": 3}],
    "stations": []
  })";
  try {
    parse_scenario(text);
    FAIL() << "expected ScenarioError";
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("chanel"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("aps[0]"), std::string::npos);
  }
}

TEST(ParseScenario, ReferencesMustResolve) {
  const char* bad_override = R"({
    "aps": [{"id": "ap1", "position": [0, 0]}],
    "stations": [{"id": "s1", "position": [1, 0]}],
    "snr_overrides": [{"ap": "ap9", "station": "s1", "snr_db": 30}]
  })";
  EXPECT_THROW(parse_scenario(bad_override), ScenarioError);
  const char* bad_assoc = R"({
    "aps": [{"id": "ap1", "position": [0, 0]}],
    "stations": [{"id": "s1", "position": [1, 0]}],
    "associations": {"ghost": "ap1"}
  })";
  EXPECT_THROW(parse_scenario(bad_assoc), ScenarioError);
}

TEST(ParseScenario, DuplicateIdsRejected) {
  const char* dup = R"({
    "aps": [{"id": "ap1", "position": [0, 0]}, {"id": "ap1", "position": [9, 0]}],
    "stations": []
  })";
  EXPECT_THROW(parse_scenario(dup), ScenarioError);
}

TEST(ParseScenario, SyntaxErrorAndBadTypes) {
  EXPECT_THROW(parse_scenario("{nope"), ScenarioError);
  EXPECT_THROW(parse_scenario("[1, 2]"), ScenarioError);
  const char* bad_policy = R"({
    "aps": [{"id": "ap1", "position": [0, 0]}],
    "stations": [],
    "policy": {"kind": "round-robin"}
  })";
  EXPECT_THROW(parse_scenario(bad_policy), ScenarioError);
  const char* bad_beta = R"({
    "aps": [{"id": "ap1", "position": [0, 0]}],
    "stations": [],
    "policy": {"beta": 0}
  })";
  EXPECT_THROW(parse_scenario(bad_beta), ScenarioError);
}

TEST(ParseScenario, ShippedScenariosLoad) {
  auto exp1 = load_scenario_file(wlansim::test::scenario_path("exp1.json"));
  EXPECT_EQ(exp1.name, "exp1");
  EXPECT_EQ(exp1.aps.size(), 1u);
  EXPECT_EQ(exp1.stations.size(), 3u);
  auto exp2 = load_scenario_file(wlansim::test::scenario_path("exp2.json"));
  EXPECT_EQ(exp2.policy, PolicyKind::Lba);
  EXPECT_EQ(exp2.rate_table.tiers.size(), 6u);
  auto cells = load_scenario_file(wlansim::test::scenario_path("two_cells.json"));
  EXPECT_EQ(cells.policy, PolicyKind::SnrAwareLba);
  EXPECT_TRUE(cells.policy_params.guard_enabled);
}

TEST(ParseScenario, EmitRoundTrip) {
  for (const char* file : {"exp1.json", "exp2.json", "two_cells.json"}) {
    auto sc = load_scenario_file(wlansim::test::scenario_path(file));
    auto again = parse_scenario(emit_scenario(sc));
    EXPECT_EQ(emit_scenario(again), emit_scenario(sc)) << file;
  }
}

TEST(EmitCsv, HeaderAndFormatting) {
  EXPECT_EQ(emit_csv({}), std::string(kCsvHeader) + "\n");
  CsvRow row;
  row.scenario = "a,b\"c";
  row.policy = "lba";
  row.seed = 3;
  row.snr_db = 50.0;
  row.offered_kbps = 598.0;
  row.station = "video";
  row.qos.throughput_kbps = 123.456789;
  row.qos.loss_ratio = 0.125;
  row.handoffs = 2;
  const std::string out = emit_csv({row});
  const std::string line = out.substr(out.find('\n') + 1);
  EXPECT_EQ(line,
            "\"a,b\"\"c\",lba,3,50,598,video,123.457,0,0,0,0,0,0.125,0,2\n");
}

TEST(EmitCsv, SixSignificantDigits) {
  CsvRow row;
  row.qos.delay_mean_ms = 333.33333333;
  row.qos.psnr_db = 1234567.0;
  const std::string out = emit_csv({row});
  EXPECT_NE(out.find("333.333"), std::string::npos);
  EXPECT_NE(out.find("1.23457e+06"), std::string::npos);
}

TEST(BuildInitialState, ExplicitThenStrongest) {
  auto sc = wlansim::test::ScenarioBuilder()
                .ap("ap1").ap("ap2")
                .station("s1", 100).station("s2", 100)
                .snr("ap1", "s1", 30.0).snr("ap2", "s1", 60.0)
                .snr("ap1", "s2", 30.0).snr("ap2", "s2", 60.0)
                .build();
  sc.initial_associations["s1"] = "ap1";
  auto state = build_initial_state(sc);
  EXPECT_EQ(state.association.at("s1"), "ap1");  // explicit wins over SNR
  EXPECT_EQ(state.association.at("s2"), "ap2");
}

TEST(RunSingle, OneRowPerSinkSorted) {
  auto sc = load_scenario_file(wlansim::test::scenario_path("exp1.json"));
  sc.sim.duration_s = 2.0;
  auto rows = run_single(sc, 9);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].station, "bg1");
  EXPECT_EQ(rows[1].station, "bg2");
  EXPECT_EQ(rows[2].station, "video");
  for (const auto& r : rows) {
    EXPECT_EQ(r.seed, 9);
    EXPECT_EQ(r.policy, "strongest-snr");
    EXPECT_GE(r.qos.loss_ratio, 0.0);
    EXPECT_LE(r.qos.loss_ratio, 1.0);
    EXPECT_LE(r.qos.throughput_kbps, r.offered_kbps * 1.001);
  }
  EXPECT_DOUBLE_EQ(rows[2].snr_db, 50.0);
}

ExperimentSpec exp1_spec(double duration_s) {
  ExperimentSpec spec;
  spec.scenario = load_scenario_file(wlansim::test::scenario_path("exp1.json"));
  spec.scenario.sim.duration_s = duration_s;
  spec.snr_axis = {30.0, 50.0};
  spec.load_axis = {480.0, 12237.0};
  spec.seeds = {1};
  spec.workers = 2;
  return spec;
}

TEST(RunExp1, CartesianRowsPlusMedians) {
  auto rows = run_exp1(exp1_spec(2.0));
  ASSERT_EQ(rows.size(), 8u);  // 4 cells x (1 seed + 1 median)
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    EXPECT_EQ(rows[i].seed, 1);
    EXPECT_EQ(rows[i + 1].seed, -1);
    EXPECT_EQ(rows[i].scenario, rows[i + 1].scenario);
    EXPECT_EQ(rows[i].station, "video");
    EXPECT_EQ(rows[i].policy, "fixed");
    EXPECT_DOUBLE_EQ(rows[i].qos.throughput_kbps, rows[i + 1].qos.throughput_kbps);
    EXPECT_GE(rows[i].qos.loss_ratio, 0.0);
    EXPECT_LE(rows[i].qos.loss_ratio, 1.0);
    EXPECT_LE(rows[i].qos.throughput_kbps, rows[i].offered_kbps * 1.001);
  }
  EXPECT_EQ(rows[0].scenario, "exp1[snr=30,load=480]");
  EXPECT_EQ(rows[6].scenario, "exp1[snr=50,load=12237]");
}

TEST(RunExp1, WorkerCountDoesNotChangeBytes) {
  auto spec = exp1_spec(1.0);
  spec.seeds = {1, 2};
  spec.workers = 1;
  const std::string serial = emit_csv(run_exp1(spec));
  spec.workers = 8;
  const std::string parallel = emit_csv(run_exp1(spec));
  EXPECT_EQ(serial, parallel);
}

TEST(RunExp1, RequiresVideoAndAxes) {
  auto spec = exp1_spec(1.0);
  spec.snr_axis.clear();
  EXPECT_THROW(run_exp1(spec), ScenarioError);
  spec = exp1_spec(1.0);
  spec.scenario.stations.erase(spec.scenario.stations.begin() + 2);  // drop video
  EXPECT_THROW(run_exp1(spec), ScenarioError);
}

ExperimentSpec exp2_spec(double duration_s) {
  ExperimentSpec spec;
  spec.scenario = load_scenario_file(wlansim::test::scenario_path("exp2.json"));
  spec.scenario.sim.duration_s = duration_s;
  spec.snr_axis = {80.0};
  spec.seeds = {1};
  spec.comparison = ComparisonMode::BalancedVsUnbalanced;
  spec.workers = 2;
  return spec;
}

TEST(RunExp2, ThreePoliciesPerPoint) {
  auto rows = run_exp2(exp2_spec(2.0));
  ASSERT_EQ(rows.size(), 6u);  // 1 snr x 3 policies x (1 seed + 1 median)
  EXPECT_EQ(rows[0].policy, "unbalanced");
  EXPECT_EQ(rows[2].policy, "lba");
  EXPECT_EQ(rows[4].policy, "snr-lba");
  EXPECT_EQ(rows[0].handoffs, 0);
  EXPECT_GE(rows[2].handoffs, 1);  // LBA moves the video sink off ap1
  EXPECT_EQ(rows[1].seed, -1);
  EXPECT_EQ(rows[0].scenario, "exp2[snr=80]");
  for (const auto& r : rows) EXPECT_EQ(r.station, "video");
}

TEST(RunExp2, RejectsBalancedBaseline) {
  auto spec = exp2_spec(1.0);
  for (auto& s : spec.scenario.stations) {
    s.offered_kbps = 100.0;
    if (auto* cbr = std::get_if<CbrProfile>(&s.traffic)) cbr->rate_kbps = 100.0;
  }
  spec.scenario.initial_associations = {
      {"video", "ap1"}, {"bg1", "ap2"}, {"bg2", "ap2"}, {"bg3", "ap1"}};
  EXPECT_THROW(run_exp2(spec), ScenarioError);
}

TEST(Median, OddEvenAndRowAssembly) {
  CsvRow a, b, c;
  a.qos.throughput_kbps = 10.0;
  b.qos.throughput_kbps = 30.0;
  c.qos.throughput_kbps = 20.0;
  a.handoffs = 0;
  b.handoffs = 2;
  c.handoffs = 1;
  auto m3 = detail::median_row({a, b, c});
  EXPECT_EQ(m3.seed, -1);
  EXPECT_DOUBLE_EQ(m3.qos.throughput_kbps, 20.0);
  EXPECT_EQ(m3.handoffs, 1);
  auto m2 = detail::median_row({a, b});
  EXPECT_DOUBLE_EQ(m2.qos.throughput_kbps, 20.0);
  EXPECT_EQ(m2.handoffs, 1);
}

}  // namespace
