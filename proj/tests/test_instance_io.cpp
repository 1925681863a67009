#include <gtest/gtest.h>

#include <random>

#include "fairuc/instance_io.hpp"
#include "oracles.hpp"

namespace fairuc {
namespace {

const char* kMinimal = R"({
  "horizon": 2,
  "generators": [{"marginal_cost": 12, "p_max": 40}],
  "pvs": [{"expected_output": [5, 10]}],
  "loads": [{"expected_load": 20}]
})";

TEST(InstanceIo, DefaultsFillOmittedFields) {
  const SystemInstance in = parse_instance_text(kMinimal);
  ASSERT_EQ(in.horizon, 2);
  const GeneratorSpec& g = in.generators[0];
  EXPECT_EQ(g.name, "G1");
  EXPECT_EQ(g.marginal_cost, (std::vector<double>{12, 12}));
  EXPECT_EQ(g.ramp_up, (std::vector<double>{40, 40}));
  EXPECT_EQ(g.no_load_cost, (std::vector<double>{0, 0}));
  EXPECT_EQ(g.p_min, 0.0);
  EXPECT_EQ(g.initial_on, 0);
  EXPECT_EQ(in.pvs[0].name, "PV1");
  EXPECT_DOUBLE_EQ(in.pvs[0].deviation[1], 0.2 * 10);
  EXPECT_DOUBLE_EQ(in.pvs[0].curtail_cost[0], 11.0 * 5);
  EXPECT_EQ(in.loads[0].name, "D1");
  EXPECT_DOUBLE_EQ(in.loads[0].deviation[0], 0.2 * 20);
  EXPECT_EQ(in.system_reserve, (std::vector<double>{0, 0}));
  EXPECT_EQ(in.budgets.pv_budget, (std::vector<double>{0, 0}));
}

TEST(InstanceIo, DefaultsBlockOverridesCoefficients) {
  std::string text = kMinimal;
  text.insert(text.rfind('}'), R"(, "defaults": {"uncertainty_coeff": 0.5, "curtail_tariff": 2})");
  const SystemInstance in = parse_instance_text(text);
  EXPECT_DOUBLE_EQ(in.pvs[0].deviation[0], 2.5);
  EXPECT_DOUBLE_EQ(in.pvs[0].curtail_cost[1], 20.0);
}

TEST(InstanceIo, SyntaxErrorCarriesPosition) {
  try {
    parse_instance_text("{\n  \"horizon\": 2,\n  \"generators\": [,]\n}");
    FAIL();
  } catch (const InstanceError& e) {
    EXPECT_EQ(e.kind(), InstanceError::Kind::Syntax);
    EXPECT_EQ(e.line(), 3);
    EXPECT_GT(e.column(), 1);
  }
}

TEST(InstanceIo, SchemaErrorsNameTheField) {
  auto kind_of = [](const std::string& text) {
    try {
      parse_instance_text(text);
    } catch (const InstanceError& e) {
      return std::make_pair(e.kind(), std::string(e.what()));
    }
    return std::make_pair(InstanceError::Kind::Io, std::string("no error"));
  };
  auto [k1, m1] = kind_of(R"({"horizon": 2, "generators": [{"p_max": 40}]})");
  EXPECT_EQ(k1, InstanceError::Kind::Schema);
  EXPECT_NE(m1.find("marginal_cost"), std::string::npos);
  auto [k2, m2] = kind_of(
      R"({"horizon": 2, "generators": [{"marginal_cost": [1, 2, 3], "p_max": 40}]})");
  EXPECT_EQ(k2, InstanceError::Kind::Validation);
  EXPECT_NE(m2.find("marginal_cost"), std::string::npos);
  auto [k3, m3] = kind_of(
      R"({"horizon": 2, "generators": [{"marginal_cost": 1, "p_max": 40, "p_min": 50}],)"
      R"( "pvs": [{"expected_output": 1}], "loads": [{"expected_load": 1}]})");
  EXPECT_EQ(k3, InstanceError::Kind::Validation);
  EXPECT_NE(m3.find("p_min"), std::string::npos);
  EXPECT_NO_THROW(parse_instance_text(
      R"({"horizon": 2, "generators": [{"marginal_cost": 1, "p_max": 40, "p_min": 50}]})", false));
}

TEST(InstanceIo, MissingFileIsIoError) {
  try {
    parse_instance("/nonexistent/instance.json");
    FAIL();
  } catch (const InstanceError& e) {
    EXPECT_EQ(e.kind(), InstanceError::Kind::Io);
  }
}

TEST(InstanceIo, SerializeRoundTrips) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemInstance in = testing::random_small_instance(rng);
    const SystemInstance back = parse_instance_text(serialize_instance(in));
    EXPECT_EQ(serialize_instance(back), serialize_instance(in));
    EXPECT_EQ(back.generators[1].marginal_cost, in.generators[1].marginal_cost);
    EXPECT_EQ(back.pvs[0].curtail_cost, in.pvs[0].curtail_cost);
    EXPECT_EQ(back.budgets.demand_budget, in.budgets.demand_budget);
  }
}

TEST(InstanceIo, PlanAndRealizationRoundTrip) {
  std::mt19937_64 rng(83);
  const SystemInstance in = testing::random_small_instance(rng);
  CommitmentPlan p = empty_plan(in);
  p.on[0] = {1, 1, 0, 1};
  p.curtail[1][2] = 1;
  const CommitmentPlan back = parse_plan_text(serialize_plan(p));
  EXPECT_EQ(back.on, p.on);
  EXPECT_EQ(back.curtail, p.curtail);
  EXPECT_EQ(back.start, p.start);
  const CommitmentPlan nested = parse_plan_text("{\"commitment\": " + serialize_plan(p) + "}");
  EXPECT_EQ(nested.on, p.on);

  UncertaintyRealization r = zero_realization(in);
  r.pv_dev[0][3] = 1;
  r.demand_dev[1][0] = 1;
  const UncertaintyRealization rb = parse_realization_text(serialize_realization(r));
  EXPECT_EQ(rb.pv_dev, r.pv_dev);
  EXPECT_EQ(rb.demand_dev, r.demand_dev);
  EXPECT_THROW(parse_plan_text(R"({"on": [[2]]})"), InstanceError);
}

TEST(InstanceIo, BundledFixturesParse) {
  for (const char* name : {"asymmetric_3pv.json", "three_unit_24h.json"}) {
    const SystemInstance in = parse_instance(std::string(FAIRUC_DATA_DIR) + "/" + name);
    EXPECT_TRUE(validate_instance(in).ok()) << name;
  }
  EXPECT_THROW(parse_instance(std::string(FAIRUC_DATA_DIR) + "/bad_instance.json"),
               InstanceError);
}

}  // namespace
}  // namespace fairuc
