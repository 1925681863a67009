#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fairuc/benders.hpp"
#include "fairuc/deterministic_uc.hpp"
#include "oracles.hpp"

namespace fairuc {
namespace {

using testing::series;

SolverConfig tight() {
  SolverConfig c;
  c.mip_gap = 1e-9;
  return c;
}

BendersConfig exact(double chi) {
  BendersConfig c;
  c.chi = chi;
  c.epsilon = 1e-9;
  c.max_iterations = 500;
  c.solver = tight();
  return c;
}

// One unit plus one PV over two slots; the unit is free to stay off.
SystemInstance toy(double curtail_cost) {
  SystemInstance in;
  in.horizon = 2;
  GeneratorSpec g;
  g.name = "G";
  g.no_load_cost = series(3, 2);
  g.startup_cost = series(4, 2);
  g.shutdown_cost = series(0, 2);
  g.marginal_cost = series(10, 2);
  g.ramp_up = series(50, 2);
  g.ramp_down = series(50, 2);
  g.reserve_cap = series(0, 2);
  g.p_max = 50;
  in.generators = {g};
  in.pvs = {PVSpec{"pv", {6, 6}, {0, 0}, series(curtail_cost, 2)}};
  in.loads = {LoadSpec{"d", {0, 0}, {0, 0}}};
  in.system_reserve = series(0, 2);
  in.budgets = {series(0, 2), series(0, 2)};
  return in;
}

TEST(Master, NoCutsGivesCheapestCommitment) {
  SystemInstance in = toy(1.0);
  const MasterModel mm = build_master(in, {});
  const MilpSolution s = solve(mm.model, tight());
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.value(mm.w), 0.0, 1e-12);
  EXPECT_NEAR(s.objective, 0.0, 1e-9);
}

TEST(Master, ConstantCutLiftsW) {
  SystemInstance in = toy(1.0);
  Cut c;
  c.constant = 5.0;
  c.coef_on = Grid(1, std::vector<double>(2, 0.0));
  c.coef_curtail = Grid(1, std::vector<double>(2, 0.0));
  const MasterModel mm = build_master(in, {c});
  const MilpSolution s = solve(mm.model, tight());
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.value(mm.w), 5.0, 1e-9);
}

TEST(Master, CurtailmentTradeMatchesEnumeration) {
  // Cut: w >= 20 − 7·r1 − 2·r2; curtailment costs 4 per slot, so curtailing
  // slot 1 pays and slot 2 does not.
  SystemInstance in = toy(4.0);
  Cut c;
  c.constant = 20.0;
  c.coef_on = Grid(1, std::vector<double>(2, 0.0));
  c.coef_curtail = {{-7.0, -2.0}};
  const MasterModel mm = build_master(in, {c});
  const MilpSolution s = solve(mm.model, tight());
  double best = kInf;
  for (int r1 = 0; r1 <= 1; ++r1) {
    for (int r2 = 0; r2 <= 1; ++r2) {
      best = std::min(best, 4.0 * (r1 + r2) + std::max(0.0, 20.0 - 7.0 * r1 - 2.0 * r2));
    }
  }
  EXPECT_NEAR(s.objective, best, 1e-9);
  EXPECT_NEAR(s.value(mm.curtail[0][0]), 1.0, 1e-9);
  EXPECT_NEAR(s.value(mm.curtail[0][1]), 0.0, 1e-9);
}

TEST(Cuts, TightAtGeneratingPlanAndValidElsewhere) {
  std::mt19937_64 rng(53);
  int replays = 0;
  for (int trial = 0; trial < 3; ++trial) {
    const SystemInstance in = testing::random_small_instance(rng);
    std::vector<CommitmentPlan> plans;
    for (const CommitmentPlan& p : testing::enumerate_plans(in)) {
      if (dispatch_feasibility(in, p).feasible) plans.push_back(p);
    }
    std::shuffle(plans.begin(), plans.end(), rng);
    plans.resize(std::min<size_t>(plans.size(), 6));
    for (double chi : {0.0, 100.0}) {
      for (size_t k = 0; k < 2 && k < plans.size(); ++k) {
        const RecourseSolution rec = solve_recourse(in, plans[k], chi, {}, tight());
        const Cut cut = make_cut(in, plans[k], rec, chi);
        EXPECT_NEAR(cut.rhs(plans[k]), rec.value, 1e-6 * std::max(1.0, std::abs(rec.value)));
        for (const CommitmentPlan& other : plans) {
          const double r = solve_recourse(in, other, chi, {}, tight()).value;
          EXPECT_LE(cut.rhs(other), r + 1e-6 * std::max(1.0, std::abs(r)));
          ++replays;
        }
      }
    }
  }
  EXPECT_GE(replays, 30);
}

TEST(Cuts, FeasibilityCutSeparatesRampInfeasiblePlan) {
  // A unit that is on at 40 MW with ramp-down 10 cannot switch off in slot 1.
  SystemInstance in = toy(1.0);
  in.generators[0].initial_on = 1;
  in.generators[0].initial_output = 40;
  in.generators[0].ramp_down = series(10, 2);
  in.loads[0].expected_load = {35, 35};
  CommitmentPlan off = empty_plan(in);
  off.stop[0][0] = 1;
  const FeasibilityCertificate cert = dispatch_feasibility(in, off);
  ASSERT_FALSE(cert.feasible);
  EXPECT_GT(cert.evaluate(off.on), 0.0);
  CommitmentPlan on = empty_plan(in);
  on.on = {{1, 1}};
  on.stop = {{0, 0}};
  ASSERT_TRUE(dispatch_feasibility(in, on).feasible);
  EXPECT_LE(cert.evaluate(on.on), 1e-9);
}

TEST(Robust, CollapsesToDeterministicWithoutUncertainty) {
  std::mt19937_64 rng(59);
  int checked = 0;
  for (int trial = 0; trial < 6; ++trial) {
    SystemInstance in = testing::random_small_instance(rng);
    in.budgets = {series(0, in.horizon), series(0, in.horizon)};
    UcSolution det;
    try {
      det = solve_deterministic(in, zero_realization(in), 0.0, tight());
    } catch (const InfeasibleProblem&) {
      continue;
    }
    const RobustResult r = solve_robust(in, exact(0.0));
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, det.total_cost, 1e-6);
    ++checked;
  }
  EXPECT_GE(checked, 3);
}

TEST(Robust, MatchesDoubleEnumeration) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 2; ++trial) {
    const SystemInstance in = testing::random_small_instance(rng);
    for (double chi : {0.0, 100.0}) {
      const RobustResult r = solve_robust(in, exact(chi));
      const auto oracle = testing::robust_oracle(in, chi, r.theta_m);
      EXPECT_NEAR(r.value, oracle.value, 1e-5 * std::max(1.0, std::abs(oracle.value)));
      EXPECT_TRUE(check_commitment(in, r.commitment).ok());
    }
  }
}

TEST(Robust, TraceInvariantsAtDefaults) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 4; ++trial) {
    const SystemInstance in = testing::random_small_instance(rng);
    const RobustResult r = solve_robust(in, BendersConfig{});
    const auto& rows = r.trace.rows;
    ASSERT_FALSE(rows.empty());
    for (size_t k = 1; k < rows.size(); ++k) {
      EXPECT_GE(rows[k].lower, rows[k - 1].lower);
      EXPECT_LE(rows[k].best_upper, rows[k - 1].best_upper);
    }
    EXPECT_LE(rows.back().lower, r.value + 1e-9);
    if (r.converged) EXPECT_LT(rows.back().gap, 1e-3);
    EXPECT_EQ(r.value, rows.back().best_upper);

    // The final dispatch realizes the worst case within the robust value.
    const double first = first_stage_cost(in, r.commitment);
    EXPECT_LE(r.dispatch.cost, r.value - first + 1e-6 * std::max(1.0, r.value));
  }
}

TEST(Robust, TraceCsvLayout) {
  std::mt19937_64 rng(71);
  const RobustResult r = solve_robust(testing::random_small_instance(rng), BendersConfig{});
  std::ostringstream out;
  r.trace.write_csv(out);
  const std::string csv = out.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "iteration,lower,upper,best_upper,gap,cuts,kind,seconds,master_seconds,"
            "subproblem_seconds");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(r.trace.rows.size()) + 1);
}

TEST(Robust, RejectsBadConfig) {
  std::mt19937_64 rng(73);
  const SystemInstance in = testing::random_small_instance(rng);
  BendersConfig c;
  c.epsilon = 0;
  EXPECT_THROW(solve_robust(in, c), std::invalid_argument);
  c = {};
  c.max_iterations = 0;
  EXPECT_THROW(solve_robust(in, c), std::invalid_argument);
  c = {};
  c.chi = -1;
  EXPECT_THROW(solve_robust(in, c), std::invalid_argument);
}

TEST(FinalDispatch, TracksDemandAndIdlesWhenEmpty) {
  SystemInstance in = toy(1.0);
  in.pvs[0].expected_output = {0, 0};
  in.loads[0].expected_load = {12, 30};
  CommitmentPlan on = empty_plan(in);
  on.on = {{1, 1}};
  on.start = {{1, 0}};
  on.stop = {{0, 0}};
  DispatchPlan d = final_dispatch(in, on, zero_realization(in));
  EXPECT_NEAR(d.production[0][0], 12, 1e-9);
  EXPECT_NEAR(d.production[0][1], 30, 1e-9);
  EXPECT_NEAR(d.cost, 420, 1e-9);

  in.loads[0].expected_load = {0, 0};
  d = final_dispatch(in, empty_plan(in), zero_realization(in));
  for (int t = 0; t < 2; ++t) {
    EXPECT_EQ(d.production[0][t], 0.0);
    EXPECT_EQ(d.reserve[0][t], 0.0);
  }
}

}  // namespace
}  // namespace fairuc
