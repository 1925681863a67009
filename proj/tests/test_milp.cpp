#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fairuc/milp.hpp"
#include "random_models.hpp"

namespace fairuc {
namespace {

TEST(Milp, SingleBoundActive) {
  MilpModel m;
  int x = m.add_variable("x", 3.0, kInf);
  m.set_objective({{x, 1.0}}, ObjSense::Minimize);
  MilpSolution s = solve(m);
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.objective, 3.0, 1e-12);
  EXPECT_NEAR(s.value(x), 3.0, 1e-12);
}

TEST(Milp, RowBoundActive) {
  MilpModel m;
  int x = m.add_variable("x", 0.0, kInf);
  m.add_row("lb", {{x, 1.0}}, RowSense::GreaterEqual, 3.0);
  m.set_objective({{x, 1.0}}, ObjSense::Minimize);
  MilpSolution s = solve(m);
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.value(x), 3.0, 1e-9);
}

TEST(Milp, TwoBinariesPacking) {
  MilpModel m;
  int x = m.add_binary("x");
  int y = m.add_binary("y");
  m.add_row("pack", {{x, 1.0}, {y, 1.0}}, RowSense::LessEqual, 1.0);
  m.set_objective({{x, -1.0}, {y, -1.0}}, ObjSense::Minimize);
  MilpSolution s = solve(m);
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.objective, -1.0, 1e-9);
  // Enumerate the four points directly.
  double best = kInf;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      if (a + b <= 1) best = std::min(best, -1.0 * a - b);
  EXPECT_NEAR(s.objective, best, 1e-12);
}

TEST(Milp, EmptyFeasibleSet) {
  MilpModel m;
  int x = m.add_variable("x", -kInf, kInf);
  m.add_row("up", {{x, 1.0}}, RowSense::LessEqual, 0.0);
  m.add_row("down", {{x, 1.0}}, RowSense::GreaterEqual, 1.0);
  m.set_objective({{x, 1.0}}, ObjSense::Minimize);
  EXPECT_EQ(solve(m).status, SolveStatus::Infeasible);
}

TEST(Milp, UnboundedReported) {
  MilpModel m;
  int x = m.add_variable("x", 0.0, kInf);
  m.set_objective({{x, 1.0}}, ObjSense::Maximize);
  EXPECT_EQ(solve(m).status, SolveStatus::Unbounded);
}

TEST(Milp, MalformedModelThrows) {
  MilpModel m;
  m.add_variable("x", 0.0, 1.0);
  m.add_row("bad", {{5, 1.0}}, RowSense::LessEqual, 1.0);
  EXPECT_THROW(solve(m), ModelError);
  MilpModel b;
  b.add_variable("y", 0.0, 2.0, VarType::Binary);
  EXPECT_THROW(solve(b), ModelError);
}

TEST(Milp, CheckFeasibleReportsMagnitude) {
  MilpModel m;
  int x = m.add_variable("x", 0.0, kInf);
  m.add_row("ge3", {{x, 1.0}}, RowSense::GreaterEqual, 3.0);
  auto v = check_feasible(m, {2.9}, 1e-6);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::Row);
  EXPECT_NEAR(v[0].magnitude, 0.1, 1e-12);
  EXPECT_THROW(check_feasible(m, {}, 1e-6), std::invalid_argument);
}

TEST(Milp, CheckFeasibleIntegrality) {
  MilpModel m;
  m.add_binary("b");
  auto v = check_feasible(m, {0.5});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::Integrality);
}

TEST(Milp, ExternalBackendSeam) {
  struct Fixed : MilpBackend {
    MilpSolution solve(const MilpModel& m, const SolverConfig&) const override {
      MilpSolution s;
      s.status = SolveStatus::Optimal;
      s.values.assign(m.num_variables(), 7.0);
      return s;
    }
    std::string name() const override { return "fixed"; }
  };
  MilpModel m;
  m.add_variable("x", 0.0, 10.0);
  SolverConfig c;
  c.backend = Backend::External;
  EXPECT_THROW(solve(m, c), ModelError);
  c.external = std::make_shared<Fixed>();
  EXPECT_EQ(solve(m, c).value(0), 7.0);
}

TEST(Milp, WriteLpKeepsNames) {
  MilpModel m;
  int x = m.add_binary("on(1,2)");
  int p = m.add_variable("p[1]", 0.0, 5.0);
  m.add_row("cap", {{p, 1.0}, {x, -5.0}}, RowSense::LessEqual, 0.0);
  m.set_objective({{p, 2.0}}, ObjSense::Minimize);
  std::ostringstream out;
  write_lp(m, out);
  const std::string s = out.str();
  EXPECT_NE(s.find(" cap: 1 p_1_ - 5 on(1,2) <= 0"), std::string::npos) << s;
  EXPECT_NE(s.find("Binaries\n on(1,2)"), std::string::npos);
}

TEST(MilpProperty, BranchAndBoundMatchesEnumeration) {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 40; ++trial) {
    MilpModel m = testing::random_milp(rng, 2 + trial % 9);
    auto [feasible, best] = testing::enumerate_binaries(m);
    SolverConfig c;
    c.mip_gap = 1e-9;
    MilpSolution s = solve(m, c);
    if (!feasible) {
      EXPECT_EQ(s.status, SolveStatus::Infeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(s.status, SolveStatus::Optimal) << "trial " << trial;
    EXPECT_NEAR(s.objective, best, 1e-6 * (1.0 + std::abs(best)))
        << "trial " << trial;
    EXPECT_TRUE(check_feasible(m, s.values).empty()) << "trial " << trial;
  }
}

TEST(MilpProperty, LpMatchesExplicitDual) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    MilpModel p = testing::random_lp(rng);
    MilpModel d = testing::explicit_dual(p);
    MilpSolution sp = solve(p), sd = solve(d);
    ASSERT_EQ(sp.status, SolveStatus::Optimal) << "trial " << trial;
    ASSERT_EQ(sd.status, SolveStatus::Optimal) << "trial " << trial;
    const double sign = p.sense() == ObjSense::Maximize ? -1.0 : 1.0;
    EXPECT_NEAR(sp.objective, sign * sd.objective, 1e-6) << "trial " << trial;
    EXPECT_TRUE(check_feasible(p, sp.values).empty());
  }
}

TEST(MilpProperty, TwoVariableLpMatchesVertexEnumeration) {
  // Independent oracle: optimum of a 2-D LP sits at an intersection of two
  // active constraints (rows or bounds).
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    MilpModel m;
    m.add_variable("x", -4.0, 4.0);
    m.add_variable("y", -4.0, 4.0);
    std::vector<std::array<double, 3>> lines = {
        {1, 0, -4}, {1, 0, 4}, {0, 1, -4}, {0, 1, 4}};
    std::vector<std::array<double, 3>> le;  // a x + b y <= c
    for (int i = 0; i < 4; ++i) {
      double a = u(rng), b = u(rng), c = std::abs(u(rng)) + 0.5;
      m.add_row("r", {{0, a}, {1, b}}, RowSense::LessEqual, c);
      lines.push_back({a, b, c});
      le.push_back({a, b, c});
    }
    double cx = u(rng), cy = u(rng);
    m.set_objective({{0, cx}, {1, cy}}, ObjSense::Minimize);
    double best = kInf;
    for (size_t i = 0; i < lines.size(); ++i) {
      for (size_t k = i + 1; k < lines.size(); ++k) {
        const auto& L1 = lines[i];
        const auto& L2 = lines[k];
        double det = L1[0] * L2[1] - L1[1] * L2[0];
        if (std::abs(det) < 1e-12) continue;
        double x = (L1[2] * L2[1] - L1[1] * L2[2]) / det;
        double y = (L1[0] * L2[2] - L1[2] * L2[0]) / det;
        bool ok = std::abs(x) <= 4 + 1e-9 && std::abs(y) <= 4 + 1e-9;
        for (auto& r : le) ok = ok && r[0] * x + r[1] * y <= r[2] + 1e-9;
        if (ok) best = std::min(best, cx * x + cy * y);
      }
    }
    MilpSolution s = solve(m);
    ASSERT_EQ(s.status, SolveStatus::Optimal);
    EXPECT_NEAR(s.objective, best, 1e-7) << "trial " << trial;
  }
}

}  // namespace
}  // namespace fairuc
