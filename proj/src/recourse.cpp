#include "fairuc/recourse.hpp"

#include <algorithm>
#include <cmath>

#include "fairuc/dispatch.hpp"
#include "fairuc/fairness.hpp"
#include "uc_rows.hpp"

namespace fairuc {

using detail::label;

double default_theta(const SystemInstance& in) {
  return std::max(1.0, 10.0 * in.max_marginal_cost());
}

double resolve_theta(const SystemInstance& in, const BigMConfig& bigm) {
  const double theta = bigm.theta_m > 0.0 ? bigm.theta_m : default_theta(in);
  if (!std::isfinite(theta) || theta < in.max_marginal_cost()) {
    throw std::invalid_argument(
        "theta_m must be at least the largest marginal cost (" +
        std::to_string(in.max_marginal_cost()) + ")");
  }
  return theta;
}

std::vector<double> delivered_energy(const SystemInstance& in,
                                     const BinaryGrid& curtail,
                                     const UncertaintyRealization& real) {
  return total_power(apply_uncertainty(in, real, curtail).pv);
}

namespace {

IdGrid grid_vars(MilpModel& m, const char* base, int rows, int T, double hi,
                 VarType type = VarType::Continuous) {
  IdGrid g(rows, std::vector<int>(T));
  for (int a = 0; a < rows; ++a) {
    for (int t = 0; t < T; ++t) g[a][t] = m.add_variable(label(base, a, t), 0.0, hi, type);
  }
  return g;
}

// m = dual·indicator for binary indicator and dual in [0, θ].
void envelope(MilpModel& m, int prod, int dual, int ind, double theta,
              const std::string& name) {
  m.add_row(name + "_ind", {{prod, 1.0}, {ind, -theta}}, RowSense::LessEqual, 0.0);
  m.add_row(name + "_dual", {{prod, 1.0}, {dual, -1.0}}, RowSense::LessEqual, 0.0);
  m.add_row(name + "_low", {{prod, 1.0}, {dual, -1.0}, {ind, -theta}},
            RowSense::GreaterEqual, -theta);
}

}  // namespace

RecourseModel build_recourse(const SystemInstance& in, const CommitmentPlan& plan,
                             double chi, const BigMConfig& bigm) {
  require_valid(in);
  require_plan_shape(in, plan);
  if (!(chi >= 0.0) || !std::isfinite(chi)) {
    throw std::invalid_argument("fairness weight must be finite and >= 0");
  }
  const double theta = resolve_theta(in, bigm);
  const int T = in.horizon, G = in.num_generators(), D = in.num_loads(),
            P = in.num_pvs();
  RecourseModel out;
  out.theta_m = theta;
  MilpModel& m = out.model;
  RecourseVariableMap& v = out.vars;

  for (int t = 0; t < T; ++t) {
    v.balance_pos.push_back(m.add_variable("ap(" + std::to_string(t + 1) + ")", 0.0, theta));
    v.balance_neg.push_back(m.add_variable("an(" + std::to_string(t + 1) + ")", 0.0, theta));
    v.reserve.push_back(m.add_variable("io(" + std::to_string(t + 1) + ")", 0.0, kInf));
    // Only α⁺ − α⁻ enters the dual rows, so one side can always be zero.
    // Fixing the sign first removes the slack McCormick leaves when both
    // sides are large.
    const int sign = m.add_binary("asgn(" + std::to_string(t + 1) + ")");
    m.set_priority(sign, 1);
    v.balance_sign.push_back(sign);
    m.add_row("ap_on(" + std::to_string(t + 1) + ")", {{v.balance_pos[t], 1.0}, {sign, -theta}},
              RowSense::LessEqual, 0.0);
    m.add_row("an_on(" + std::to_string(t + 1) + ")", {{v.balance_neg[t], 1.0}, {sign, theta}},
              RowSense::LessEqual, theta);
  }
  v.ramp_up = grid_vars(m, "b1", G, T, kInf);
  v.ramp_down = grid_vars(m, "b2", G, T, kInf);
  v.cap_up = grid_vars(m, "k1", G, T, kInf);
  v.cap_low = grid_vars(m, "k2", G, T, kInf);
  v.gen_up = grid_vars(m, "l1", G, T, kInf);
  v.gen_low = grid_vars(m, "l2", G, T, kInf);
  v.reserve_cap = grid_vars(m, "om", G, T, kInf);
  v.zeta = grid_vars(m, "zeta", D, T, 1.0, VarType::Binary);
  v.eta = grid_vars(m, "eta", P, T, 1.0, VarType::Binary);
  v.demand_pos = grid_vars(m, "m1", D, T, theta);
  v.demand_neg = grid_vars(m, "m2", D, T, theta);
  v.pv_pos = grid_vars(m, "m3", P, T, theta);
  v.pv_neg = grid_vars(m, "m4", P, T, theta);

  // Objective.
  for (int t = 0; t < T; ++t) {
    double net = 0.0;
    for (int j = 0; j < D; ++j) net += in.loads[j].expected_load[t];
    for (int l = 0; l < P; ++l) net -= (1 - plan.curtail[l][t]) * in.pvs[l].expected_output[t];
    m.add_objective_term(v.balance_pos[t], net);
    m.add_objective_term(v.balance_neg[t], -net);
    m.add_objective_term(v.reserve[t], in.system_reserve[t]);
    for (int j = 0; j < D; ++j) {
      m.add_objective_term(v.demand_pos[j][t], in.loads[j].deviation[t]);
      m.add_objective_term(v.demand_neg[j][t], -in.loads[j].deviation[t]);
    }
    for (int l = 0; l < P; ++l) {
      const double c = (1 - plan.curtail[l][t]) * in.pvs[l].deviation[t];
      m.add_objective_term(v.pv_pos[l][t], c);
      m.add_objective_term(v.pv_neg[l][t], -c);
    }
  }
  for (int i = 0; i < G; ++i) {
    const GeneratorSpec& g = in.generators[i];
    for (int t = 0; t < T; ++t) {
      const double x = plan.on[i][t];
      const double p0 = t == 0 ? g.initial_output : 0.0;
      m.add_objective_term(v.ramp_up[i][t], -(g.ramp_up[t] + p0));
      m.add_objective_term(v.ramp_down[i][t], -(g.ramp_down[t] - p0));
      m.add_objective_term(v.cap_up[i][t], -g.p_max);
      m.add_objective_term(v.cap_low[i][t], g.p_min * x);
      m.add_objective_term(v.gen_up[i][t], -g.p_max * x);
      m.add_objective_term(v.gen_low[i][t], g.p_min * x);
      m.add_objective_term(v.reserve_cap[i][t], -g.reserve_cap[t]);
    }
  }

  // Dual feasibility: production and reserve columns.
  for (int i = 0; i < G; ++i) {
    for (int t = 0; t < T; ++t) {
      std::vector<Term> row = {{v.balance_pos[t], 1.0},  {v.balance_neg[t], -1.0},
                               {v.ramp_up[i][t], -1.0},  {v.ramp_down[i][t], 1.0},
                               {v.cap_up[i][t], -1.0},   {v.cap_low[i][t], 1.0},
                               {v.gen_up[i][t], -1.0},   {v.gen_low[i][t], 1.0}};
      if (t + 1 < T) {
        row.push_back({v.ramp_up[i][t + 1], 1.0});
        row.push_back({v.ramp_down[i][t + 1], -1.0});
      }
      m.add_row(label("dual_p", i, t), row, RowSense::LessEqual,
                in.generators[i].marginal_cost[t]);
      m.add_row(label("dual_q", i, t),
                {{v.cap_up[i][t], -1.0}, {v.cap_low[i][t], 1.0},
                 {v.reserve[t], 1.0}, {v.reserve_cap[i][t], -1.0}},
                RowSense::LessEqual, 0.0);
    }
  }

  // Big-M envelopes, budgets, and the aggregated strengthening rows.
  for (int t = 0; t < T; ++t) {
    std::vector<Term> zsum, esum, s1 = {{v.balance_pos[t], -in.budgets.demand_budget[t]}},
                                  s2 = {{v.balance_neg[t], -in.budgets.demand_budget[t]}},
                                  s3 = {{v.balance_pos[t], -in.budgets.pv_budget[t]}},
                                  s4 = {{v.balance_neg[t], -in.budgets.pv_budget[t]}};
    for (int j = 0; j < D; ++j) {
      envelope(m, v.demand_pos[j][t], v.balance_pos[t], v.zeta[j][t], theta, label("m1", j, t));
      envelope(m, v.demand_neg[j][t], v.balance_neg[t], v.zeta[j][t], theta, label("m2", j, t));
      zsum.push_back({v.zeta[j][t], 1.0});
      s1.push_back({v.demand_pos[j][t], 1.0});
      s2.push_back({v.demand_neg[j][t], 1.0});
    }
    for (int l = 0; l < P; ++l) {
      envelope(m, v.pv_pos[l][t], v.balance_pos[t], v.eta[l][t], theta, label("m3", l, t));
      envelope(m, v.pv_neg[l][t], v.balance_neg[t], v.eta[l][t], theta, label("m4", l, t));
      esum.push_back({v.eta[l][t], 1.0});
      s3.push_back({v.pv_pos[l][t], 1.0});
      s4.push_back({v.pv_neg[l][t], 1.0});
    }
    const std::string ts = "(" + std::to_string(t + 1) + ")";
    // Loads enter only through Σ d̂ ζ, so loads with equal deviation are
    // interchangeable: select them in index order.
    for (int k = 1; k < D; ++k) {
      for (int j = k - 1; j >= 0; --j) {
        if (in.loads[j].deviation[t] == in.loads[k].deviation[t]) {
          m.add_row(label("zeta_order", k, t), {{v.zeta[j][t], -1.0}, {v.zeta[k][t], 1.0}},
                    RowSense::LessEqual, 0.0);
          break;
        }
      }
    }
    if (D > 0) {
      m.add_row("budget_d" + ts, zsum, RowSense::LessEqual, in.budgets.demand_budget[t]);
      m.add_row("agg_m1" + ts, s1, RowSense::LessEqual, 0.0);
      m.add_row("agg_m2" + ts, s2, RowSense::LessEqual, 0.0);
    }
    if (P > 0) {
      m.add_row("budget_p" + ts, esum, RowSense::LessEqual, in.budgets.pv_budget[t]);
      m.add_row("agg_m3" + ts, s3, RowSense::LessEqual, 0.0);
      m.add_row("agg_m4" + ts, s4, RowSense::LessEqual, 0.0);
    }
  }

  // Fairness: a⁺_j − a⁻_j = Σ_k w_jk Σ_t (z̄ − η ẑ)(1 − r), w_jk = 1/N − [k=j].
  // The adversary maximizes a⁺ + a⁻, so one binary per PV keeps them
  // complementary. Each deviation is affine in η, so its exact range under
  // the per-slot budgets bounds a⁺ and a⁻ far tighter than a common big-M.
  if (chi > 0.0 && P > 0) {
    for (int j = 0; j < P; ++j) {
      const std::string js = "(" + std::to_string(j + 1) + ")";
      std::vector<Term> eta_terms;
      double rhs = 0.0, rise = 0.0, fall = 0.0;
      for (int t = 0; t < T; ++t) {
        // Effect on the deviation of setting η_k = 1 in slot t.
        std::vector<double> up, down;
        for (int k = 0; k < P; ++k) {
          if (plan.curtail[k][t]) continue;
          const double w = 1.0 / P - (k == j ? 1.0 : 0.0);
          rhs += w * in.pvs[k].expected_output[t];
          const double c = w * in.pvs[k].deviation[t];
          if (c == 0.0) continue;
          eta_terms.push_back({v.eta[k][t], c});
          (c < 0.0 ? up : down).push_back(std::abs(c));
        }
        const size_t budget = static_cast<size_t>(std::floor(in.budgets.pv_budget[t] + 1e-9));
        auto top = [budget](std::vector<double>& xs) {
          std::sort(xs.begin(), xs.end(), std::greater<>());
          double sum = 0.0;
          for (size_t i = 0; i < std::min(budget, xs.size()); ++i) sum += xs[i];
          return sum;
        };
        rise += top(up);
        fall += top(down);
      }
      const double hi_pos = std::max(0.0, rhs + rise);
      const double hi_neg = std::max(0.0, fall - rhs);
      v.dev_pos.push_back(m.add_variable("apos" + js, 0.0, hi_pos));
      v.dev_neg.push_back(m.add_variable("aneg" + js, 0.0, hi_neg));
      v.dev_sign.push_back(m.add_binary("asign" + js));
      m.add_objective_term(v.dev_pos[j], chi);
      m.add_objective_term(v.dev_neg[j], chi);
      std::vector<Term> row = {{v.dev_pos[j], 1.0}, {v.dev_neg[j], -1.0}};
      row.insert(row.end(), eta_terms.begin(), eta_terms.end());
      m.add_row("fair" + js, row, RowSense::Equal, rhs);
      m.add_row("apos_on" + js, {{v.dev_pos[j], 1.0}, {v.dev_sign[j], -hi_pos}},
                RowSense::LessEqual, 0.0);
      m.add_row("aneg_on" + js, {{v.dev_neg[j], 1.0}, {v.dev_sign[j], hi_neg}},
                RowSense::LessEqual, hi_neg);
    }
  }
  m.set_sense(ObjSense::Maximize);
  return out;
}

}  // namespace fairuc

namespace fairuc {

namespace {

Grid read(const IdGrid& ids, const std::vector<double>& x) {
  Grid g(ids.size());
  for (size_t a = 0; a < ids.size(); ++a) {
    for (int id : ids[a]) g[a].push_back(x[id]);
  }
  return g;
}

std::vector<double> read(const std::vector<int>& ids, const std::vector<double>& x) {
  std::vector<double> v;
  for (int id : ids) v.push_back(x[id]);
  return v;
}

Grid rounded(Grid g) {
  for (auto& row : g) {
    for (double& v : row) v = std::round(v);
  }
  return g;
}

}  // namespace

RecourseSolution solve_recourse(const SystemInstance& in, const CommitmentPlan& plan,
                                double chi, const BigMConfig& bigm,
                                const SolverConfig& config) {
  RecourseModel rm = build_recourse(in, plan, chi, bigm);
  MilpSolution s = solve(rm.model, config);
  if (s.status == SolveStatus::Unbounded) {
    throw RecourseUnbounded(
        "recourse problem is unbounded: the commitment admits no dispatch "
        "meeting ramp, capacity and reserve limits");
  }
  if (s.values.empty()) {
    throw std::runtime_error(std::string("recourse solve ended with status ") +
                             to_string(s.status));
  }
  const RecourseVariableMap& v = rm.vars;
  const std::vector<double>& x = s.values;
  RecourseSolution r;
  r.theta_m = rm.theta_m;
  r.worst_case.demand_dev = rounded(read(v.zeta, x));
  r.worst_case.pv_dev = rounded(read(v.eta, x));
  r.duals.balance_pos = read(v.balance_pos, x);
  r.duals.balance_neg = read(v.balance_neg, x);
  r.duals.reserve = read(v.reserve, x);
  r.duals.ramp_up = read(v.ramp_up, x);
  r.duals.ramp_down = read(v.ramp_down, x);
  r.duals.cap_up = read(v.cap_up, x);
  r.duals.cap_low = read(v.cap_low, x);
  r.duals.gen_up = read(v.gen_up, x);
  r.duals.gen_low = read(v.gen_low, x);
  r.duals.reserve_cap = read(v.reserve_cap, x);
  r.products.demand_pos = read(v.demand_pos, x);
  r.products.demand_neg = read(v.demand_neg, x);
  r.products.pv_pos = read(v.pv_pos, x);
  r.products.pv_neg = read(v.pv_neg, x);
  r.dev_pos = read(v.dev_pos, x);
  r.dev_neg = read(v.dev_neg, x);
  r.value = s.objective;
  r.bound = std::max(s.bound, s.objective);
  return r;
}

double envelope_residual(const RecourseSolution& r) {
  double worst = 0.0;
  auto family = [&](const Grid& prod, const std::vector<double>& dual,
                    const Grid& ind) {
    for (size_t a = 0; a < prod.size(); ++a) {
      for (size_t t = 0; t < prod[a].size(); ++t) {
        worst = std::max(worst, std::abs(prod[a][t] - dual[t] * ind[a][t]));
      }
    }
  };
  family(r.products.demand_pos, r.duals.balance_pos, r.worst_case.demand_dev);
  family(r.products.demand_neg, r.duals.balance_neg, r.worst_case.demand_dev);
  family(r.products.pv_pos, r.duals.balance_pos, r.worst_case.pv_dev);
  family(r.products.pv_neg, r.duals.balance_neg, r.worst_case.pv_dev);
  return worst;
}

double realization_value(const SystemInstance& in, const CommitmentPlan& plan,
                         const UncertaintyRealization& real, double chi,
                         double theta_m, const SolverConfig& config) {
  SecondStageOptions opt;
  opt.value_of_lost_load = theta_m;
  double v = second_stage(in, plan, real, opt, config).cost;
  if (chi > 0.0 && in.num_pvs() > 0) {
    v += chi * l1_deviation(delivered_energy(in, plan.curtail, real));
  }
  return v;
}

}  // namespace fairuc
