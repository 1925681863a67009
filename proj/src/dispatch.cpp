#include "fairuc/dispatch.hpp"

#include <cmath>

#include "fairuc/deterministic_uc.hpp"
#include "uc_rows.hpp"

namespace fairuc {

using detail::add_dispatch;
using detail::fixed_refs;
using detail::DispatchOptions;
using detail::label;

namespace {

int first_elastic_slot(const SystemInstance& in, const CommitmentPlan& plan,
                       const UncertaintyRealization& real,
                       const SolverConfig& config) {
  MilpModel m;
  DispatchOptions opt;
  opt.price_production = false;
  opt.soft_balance = true;
  opt.elastic = true;
  auto b = add_dispatch(m, in, fixed_refs(plan.on), fixed_refs(plan.curtail),
                        detail::demand_totals(in, real),
                        detail::pv_available(in, real), opt);
  std::vector<Term> obj;
  for (auto [var, t] : b.elastic) obj.push_back({var, 1.0});
  m.set_objective(obj, ObjSense::Minimize);
  MilpSolution s = solve(m, config);
  if (!s.optimal()) return 0;
  int first = -1;
  for (auto [var, t] : b.elastic) {
    if (s.value(var) > 1e-7 && (first < 0 || t < first)) first = t;
  }
  return first + 1;
}

}  // namespace

DispatchPlan second_stage(const SystemInstance& in, const CommitmentPlan& plan,
                          const UncertaintyRealization& real,
                          const SecondStageOptions& options,
                          const SolverConfig& config) {
  require_valid(in);
  require_plan_shape(in, plan);
  if (!(options.value_of_lost_load > 0.0)) {
    throw std::invalid_argument("value of lost load must be positive");
  }
  ValidationReport rr = check_realization(in, real);
  for (const ValidationIssue& i : rr.issues) {
    if (i.message != "exceeds budget") {
      throw std::invalid_argument("realization: " + i.path + ": " + i.message);
    }
  }
  MilpModel m;
  DispatchOptions opt;
  opt.soft_balance = true;
  opt.balance_penalty = options.value_of_lost_load;
  auto b = add_dispatch(m, in, fixed_refs(plan.on), fixed_refs(plan.curtail),
                        detail::demand_totals(in, real),
                        detail::pv_available(in, real), opt);
  MilpSolution s = solve(m, config);
  if (s.status == SolveStatus::Infeasible) {
    const int slot = first_elastic_slot(in, plan, real, config);
    throw InfeasibleProblem(
        "no dispatch meets ramp, capacity and reserve limits" +
            (slot > 0 ? " at slot " + std::to_string(slot) : std::string()),
        slot);
  }
  if (!s.optimal()) {
    throw std::runtime_error(std::string("dispatch LP ended with status ") +
                             to_string(s.status));
  }
  DispatchPlan d;
  d.production.assign(in.num_generators(), std::vector<double>(in.horizon));
  d.reserve = d.production;
  for (int i = 0; i < in.num_generators(); ++i) {
    for (int t = 0; t < in.horizon; ++t) {
      d.production[i][t] = s.value(b.p[i][t]);
      d.reserve[i][t] = s.value(b.q[i][t]);
    }
  }
  for (int t = 0; t < in.horizon; ++t) {
    d.unserved.push_back(s.value(b.unserved[t]));
    d.spilled.push_back(s.value(b.spilled[t]));
  }
  d.cost = s.objective;
  return d;
}

double FeasibilityCertificate::evaluate(const BinaryGrid& on) const {
  double v = constant;
  for (size_t i = 0; i < coef_on.size(); ++i) {
    for (size_t t = 0; t < coef_on[i].size(); ++t) v += coef_on[i][t] * on[i][t];
  }
  return v;
}

FeasibilityCertificate dispatch_feasibility(const SystemInstance& in,
                                            const CommitmentPlan& plan,
                                            const SolverConfig& config) {
  // Normalized Farkas system of the non-balance rows: dual multipliers in
  // [0,1], homogeneous dual-feasibility rows, maximize the right-hand side.
  require_plan_shape(in, plan);
  const int T = in.horizon, G = in.num_generators();
  MilpModel m;
  IdGrid b1(G, std::vector<int>(T)), b2 = b1, k1 = b1, k2 = b1, l1 = b1,
                                      l2 = b1, om = b1;
  std::vector<int> io(T);
  for (int i = 0; i < G; ++i) {
    for (int t = 0; t < T; ++t) {
      b1[i][t] = m.add_variable(label("b1", i, t), 0.0, 1.0);
      b2[i][t] = m.add_variable(label("b2", i, t), 0.0, 1.0);
      k1[i][t] = m.add_variable(label("k1", i, t), 0.0, 1.0);
      k2[i][t] = m.add_variable(label("k2", i, t), 0.0, 1.0);
      l1[i][t] = m.add_variable(label("l1", i, t), 0.0, 1.0);
      l2[i][t] = m.add_variable(label("l2", i, t), 0.0, 1.0);
      om[i][t] = m.add_variable(label("om", i, t), 0.0, 1.0);
    }
  }
  for (int t = 0; t < T; ++t) io[t] = m.add_variable("io(" + std::to_string(t + 1) + ")", 0.0, 1.0);

  for (int i = 0; i < G; ++i) {
    for (int t = 0; t < T; ++t) {
      std::vector<Term> prow = {{b1[i][t], -1.0}, {b2[i][t], 1.0},
                                {k1[i][t], -1.0}, {k2[i][t], 1.0},
                                {l1[i][t], -1.0}, {l2[i][t], 1.0}};
      if (t + 1 < T) {
        prow.push_back({b1[i][t + 1], 1.0});
        prow.push_back({b2[i][t + 1], -1.0});
      }
      m.add_row(label("pcol", i, t), prow, RowSense::LessEqual, 0.0);
      m.add_row(label("qcol", i, t),
                {{k1[i][t], -1.0}, {k2[i][t], 1.0}, {io[t], 1.0}, {om[i][t], -1.0}},
                RowSense::LessEqual, 0.0);
    }
  }
  FeasibilityCertificate cert;
  cert.coef_on.assign(G, std::vector<double>(T, 0.0));
  std::vector<Term> obj;
  for (int i = 0; i < G; ++i) {
    const GeneratorSpec& g = in.generators[i];
    for (int t = 0; t < T; ++t) {
      const double x = plan.on[i][t];
      obj.push_back({b1[i][t], -(g.ramp_up[t] + (t == 0 ? g.initial_output : 0.0))});
      obj.push_back({b2[i][t], -(g.ramp_down[t] - (t == 0 ? g.initial_output : 0.0))});
      obj.push_back({k1[i][t], -g.p_max});
      obj.push_back({k2[i][t], g.p_min * x});
      obj.push_back({l1[i][t], -g.p_max * x});
      obj.push_back({l2[i][t], g.p_min * x});
      obj.push_back({om[i][t], -g.reserve_cap[t]});
    }
  }
  for (int t = 0; t < T; ++t) obj.push_back({io[t], in.system_reserve[t]});
  m.set_objective(obj, ObjSense::Maximize);
  MilpSolution s = solve(m, config);
  if (!s.optimal()) {
    throw std::runtime_error(std::string("feasibility LP ended with status ") +
                             to_string(s.status));
  }
  double scale = 1.0;
  for (const Term& t : obj) scale = std::max(scale, std::abs(t.coef));
  if (s.objective <= 1e-9 * scale) return cert;

  cert.feasible = false;
  for (int i = 0; i < G; ++i) {
    const GeneratorSpec& g = in.generators[i];
    for (int t = 0; t < T; ++t) {
      cert.constant += -(g.ramp_up[t] + (t == 0 ? g.initial_output : 0.0)) * s.value(b1[i][t]) -
                       (g.ramp_down[t] - (t == 0 ? g.initial_output : 0.0)) * s.value(b2[i][t]) -
                       g.p_max * s.value(k1[i][t]) - g.reserve_cap[t] * s.value(om[i][t]);
      cert.coef_on[i][t] = g.p_min * s.value(k2[i][t]) - g.p_max * s.value(l1[i][t]) +
                           g.p_min * s.value(l2[i][t]);
    }
  }
  for (int t = 0; t < T; ++t) cert.constant += in.system_reserve[t] * s.value(io[t]);
  return cert;
}

}  // namespace fairuc
