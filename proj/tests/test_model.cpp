#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "fairuc/model.hpp"
#include "oracles.hpp"

namespace fairuc {
namespace {

using testing::series;

SystemInstance baseline() {
  std::mt19937_64 rng(5);
  return testing::random_small_instance(rng, 3);
}

bool mentions(const ValidationReport& r, const std::string& path) {
  for (const auto& i : r.issues) {
    if (i.path.find(path) != std::string::npos) return true;
  }
  return false;
}

TEST(Validate, BaselinePasses) {
  const ValidationReport r = validate_instance(baseline());
  EXPECT_TRUE(r.ok()) << r.to_string();
}

TEST(Validate, EachMutationIsReported) {
  struct Mutation {
    std::string path;
    std::function<void(SystemInstance&)> apply;
  };
  const std::vector<Mutation> mutations = {
      {"generators[1].p_min", [](auto& in) { in.generators[1].p_min = in.generators[1].p_max + 1; }},
      {"generators[0].ramp_up", [](auto& in) { in.generators[0].ramp_up[2] = -1; }},
      {"generators[0].ramp_down", [](auto& in) { in.generators[0].ramp_down.pop_back(); }},
      {"generators[0].min_up", [](auto& in) { in.generators[0].min_up = -1; }},
      {"generators[1].min_down", [](auto& in) { in.generators[1].min_down = -2; }},
      {"generators[0].initial_output",
       [](auto& in) { in.generators[0].initial_output = in.generators[0].p_max + 1; }},
      {"generators[0].initial_output",
       [](auto& in) {
         in.generators[0].initial_on = 0;
         in.generators[0].initial_output = 1.0;
       }},
      {"generators[0].initial_on", [](auto& in) { in.generators[0].initial_on = 2; }},
      {"pvs[0].deviation", [](auto& in) { in.pvs[0].deviation[1] = in.pvs[0].expected_output[1] + 1; }},
      {"pvs[1].expected_output", [](auto& in) { in.pvs[1].expected_output[0] = -1; }},
      {"pvs[1].curtail_cost", [](auto& in) { in.pvs[1].curtail_cost[0] = -1; }},
      {"loads[0].deviation", [](auto& in) { in.loads[0].deviation[0] = in.loads[0].expected_load[0] + 1; }},
      {"loads[1].expected_load", [](auto& in) { in.loads[1].expected_load.push_back(3); }},
      {"system_reserve", [](auto& in) { in.system_reserve[0] = -1; }},
      {"budgets.delta", [](auto& in) { in.budgets.demand_budget[0] = 3; }},
      {"budgets.gamma", [](auto& in) { in.budgets.pv_budget[2] = -0.5; }},
      {"generators", [](auto& in) { in.generators.clear(); }},
      {"pvs", [](auto& in) { in.pvs.clear(); }},
      {"loads", [](auto& in) { in.loads.clear(); }},
      {"horizon", [](auto& in) { in.horizon = 0; }},
  };
  for (const Mutation& m : mutations) {
    SystemInstance in = baseline();
    m.apply(in);
    const ValidationReport r = validate_instance(in);
    EXPECT_FALSE(r.ok()) << m.path;
    EXPECT_TRUE(mentions(r, m.path)) << m.path << " not in\n" << r.to_string();
  }
}

TEST(Validate, UnitCountsOptionalForBuilders) {
  SystemInstance in = baseline();
  in.pvs.clear();
  in.budgets.pv_budget = series(0, in.horizon);
  EXPECT_FALSE(validate_instance(in).ok());
  EXPECT_TRUE(validate_instance(in, false).ok());
  EXPECT_NO_THROW(require_valid(in));
}

TEST(ApplyUncertainty, Arithmetic) {
  SystemInstance in = baseline();
  in.horizon = 1;
  in.loads = {LoadSpec{"d", {10}, {2}}};
  in.pvs = {PVSpec{"pv", {5}, {1}, {0}}};
  UncertaintyRealization real{{{1.0}}, {{1.0}}};
  RealizedScenario s = apply_uncertainty(in, real, {{0}});
  EXPECT_DOUBLE_EQ(s.demand[0][0], 12.0);
  EXPECT_DOUBLE_EQ(s.pv[0][0], 4.0);
  s = apply_uncertainty(in, real, {{1}});
  EXPECT_DOUBLE_EQ(s.pv[0][0], 0.0);
  s = apply_uncertainty(in, zero_realization(in), no_curtailment(in));
  EXPECT_DOUBLE_EQ(s.demand[0][0], 10.0);
  EXPECT_DOUBLE_EQ(s.pv[0][0], 5.0);
}

TEST(ApplyUncertainty, ShapeMismatchThrows) {
  const SystemInstance in = baseline();
  UncertaintyRealization real = zero_realization(in);
  real.pv_dev.pop_back();
  EXPECT_THROW(apply_uncertainty(in, real, no_curtailment(in)), std::invalid_argument);
  EXPECT_THROW(apply_uncertainty(in, zero_realization(in), BinaryGrid{}), std::invalid_argument);
}

TEST(ApplyUncertainty, MonotoneAndBounded) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const SystemInstance in = baseline();
  for (int trial = 0; trial < 200; ++trial) {
    UncertaintyRealization a = zero_realization(in);
    BinaryGrid r = no_curtailment(in);
    for (auto& row : a.demand_dev) for (double& v : row) v = u(rng);
    for (auto& row : a.pv_dev) for (double& v : row) v = u(rng);
    for (auto& row : r) for (int& v : row) v = u(rng) < 0.3;
    UncertaintyRealization b = a;
    for (auto& row : b.demand_dev) for (double& v : row) v = std::min(1.0, v + u(rng) * 0.5);
    for (auto& row : b.pv_dev) for (double& v : row) v = std::min(1.0, v + u(rng) * 0.5);
    const RealizedScenario sa = apply_uncertainty(in, a, r), sb = apply_uncertainty(in, b, r);
    for (int t = 0; t < in.horizon; ++t) {
      for (int j = 0; j < in.num_loads(); ++j) EXPECT_GE(sb.demand[j][t], sa.demand[j][t]);
      for (int l = 0; l < in.num_pvs(); ++l) {
        EXPECT_LE(sb.pv[l][t], sa.pv[l][t]);
        EXPECT_GE(sb.pv[l][t], 0.0);
        EXPECT_LE(sa.pv[l][t], in.pvs[l].expected_output[t]);
      }
    }
  }
}

TEST(CheckRealization, BudgetsAndRange) {
  SystemInstance in = baseline();
  in.budgets.demand_budget = series(1, in.horizon);
  UncertaintyRealization real = zero_realization(in);
  EXPECT_TRUE(check_realization(in, real).ok());
  real.demand_dev[0][1] = 1;
  real.demand_dev[1][1] = 1;
  const ValidationReport r = check_realization(in, real);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.to_string().find("exceeds budget"), std::string::npos);
  real = zero_realization(in);
  real.pv_dev[0][0] = 1.5;
  EXPECT_FALSE(check_realization(in, real).ok());
}

TEST(CheckCommitment, StartStopAndWindows) {
  SystemInstance in = baseline();
  in.horizon = 4;
  in.generators.resize(1);
  GeneratorSpec& g = in.generators[0];
  for (auto* s : {&g.no_load_cost, &g.startup_cost, &g.shutdown_cost, &g.marginal_cost,
                  &g.ramp_up, &g.ramp_down, &g.reserve_cap}) {
    s->resize(4, s->front());
  }
  g.initial_on = 0;
  g.initial_output = 0;
  g.min_up = 2;
  g.min_down = 2;
  in.pvs.clear();
  in.loads.clear();
  in.system_reserve = series(0, 4);
  in.budgets = {series(0, 4), series(0, 4)};

  CommitmentPlan p = empty_plan(in);
  EXPECT_TRUE(check_commitment(in, p).ok());
  p.on = {{1, 1, 0, 0}};
  p.start = {{1, 0, 0, 0}};
  p.stop = {{0, 0, 1, 0}};
  EXPECT_TRUE(check_commitment(in, p).ok()) << check_commitment(in, p).to_string();
  p.start = {{0, 0, 0, 0}};  // switched on without a start flag
  EXPECT_FALSE(check_commitment(in, p).ok());
  p.on = {{1, 0, 1, 1}};  // up for one slot only
  p.start = {{1, 0, 1, 0}};
  p.stop = {{0, 1, 0, 0}};
  EXPECT_FALSE(check_commitment(in, p).ok());
}

}  // namespace
}  // namespace fairuc
