#include "fairuc/deterministic_uc.hpp"

#include <cmath>

#include "uc_rows.hpp"

namespace fairuc {

using detail::add_commitment;
using detail::add_dispatch;
using detail::as_refs;
using detail::demand_totals;
using detail::DispatchOptions;
using detail::pv_available;

namespace {

void check_scenario(const SystemInstance& in, const UncertaintyRealization& s,
                    double chi) {
  if (!(chi >= 0.0) || !std::isfinite(chi)) {
    throw std::invalid_argument("fairness weight must be finite and >= 0");
  }
  require_valid(in);
  ValidationReport r = check_realization(in, s);
  // Budgets do not constrain a fixed scenario; only shape and range do.
  for (const ValidationIssue& i : r.issues) {
    if (i.message != "exceeds budget") {
      throw std::invalid_argument("scenario: " + i.path + ": " + i.message);
    }
  }
}

// One row per PV j: a⁺_j − a⁻_j = Σ_k w_jk Σ_t z_kt (1 − r_kt),
// w_jk = 1/N − [k = j].
void add_fairness(MilpModel& m, const SystemInstance& in, const Grid& z,
                  const IdGrid& curtail, double chi, UcVariableMap& vars) {
  const int P = in.num_pvs(), T = in.horizon;
  for (int j = 0; j < P; ++j) {
    vars.dev_pos.push_back(m.add_variable("apos(" + std::to_string(j + 1) + ")", 0.0, kInf));
    vars.dev_neg.push_back(m.add_variable("aneg(" + std::to_string(j + 1) + ")", 0.0, kInf));
    m.add_objective_term(vars.dev_pos[j], chi);
    m.add_objective_term(vars.dev_neg[j], chi);
  }
  for (int j = 0; j < P; ++j) {
    std::vector<Term> terms = {{vars.dev_pos[j], 1.0}, {vars.dev_neg[j], -1.0}};
    double rhs = 0.0;
    for (int k = 0; k < P; ++k) {
      const double w = 1.0 / P - (k == j ? 1.0 : 0.0);
      for (int t = 0; t < T; ++t) {
        rhs += w * z[k][t];
        if (z[k][t] != 0.0) terms.push_back({curtail[k][t], w * z[k][t]});
      }
    }
    m.add_row("fair(" + std::to_string(j + 1) + ")", terms, RowSense::Equal, rhs);
  }
}

UcModel build(const SystemInstance& in, const UncertaintyRealization& s,
              double chi, const DispatchOptions& opt,
              std::vector<std::pair<int, int>>* elastic) {
  UcModel out;
  MilpModel& m = out.model;
  auto cb = add_commitment(m, in);
  const Grid z = pv_available(in, s);
  auto db = add_dispatch(m, in, as_refs(cb.on), as_refs(cb.curtail),
                         demand_totals(in, s), z, opt);
  out.vars.on = cb.on;
  out.vars.start = cb.start;
  out.vars.stop = cb.stop;
  out.vars.curtail = cb.curtail;
  out.vars.production = db.p;
  out.vars.reserve = db.q;
  if (chi > 0.0 && in.num_pvs() > 0) add_fairness(m, in, z, cb.curtail, chi, out.vars);
  if (elastic) *elastic = db.elastic;
  return out;
}

BinaryGrid read_binaries(const IdGrid& ids, const std::vector<double>& v) {
  BinaryGrid g(ids.size());
  for (size_t a = 0; a < ids.size(); ++a) {
    for (int id : ids[a]) g[a].push_back(static_cast<int>(std::lround(v[id])));
  }
  return g;
}

Grid read_values(const IdGrid& ids, const std::vector<double>& v) {
  Grid g(ids.size());
  for (size_t a = 0; a < ids.size(); ++a) {
    for (int id : ids[a]) g[a].push_back(v[id]);
  }
  return g;
}

// Locates the first slot whose rows cannot be satisfied: first with only the
// balance rows elastic, then with every dispatch row elastic.
int diagnose(const SystemInstance& in, const UncertaintyRealization& s,
             const SolverConfig& config) {
  for (int pass = 0; pass < 2; ++pass) {
    DispatchOptions opt;
    opt.price_production = false;
    opt.elastic_balance = true;
    opt.elastic = pass == 1;
    std::vector<std::pair<int, int>> elastic;
    UcModel um = build(in, s, 0.0, opt, &elastic);
    std::vector<Term> obj;
    for (auto [var, t] : elastic) obj.push_back({var, 1.0});
    um.model.set_objective(obj, ObjSense::Minimize);
    MilpSolution sol = solve(um.model, config);
    if (!sol.optimal()) continue;
    int first = -1;
    for (auto [var, t] : elastic) {
      if (sol.value(var) > 1e-7 && (first < 0 || t < first)) first = t;
    }
    if (first >= 0) return first + 1;
  }
  return 0;
}

}  // namespace

UcModel build_deterministic(const SystemInstance& in,
                            const UncertaintyRealization& s, double chi) {
  check_scenario(in, s, chi);
  return build(in, s, chi, DispatchOptions{}, nullptr);
}

CostBreakdown cost_breakdown(const SystemInstance& in,
                             const CommitmentPlan& plan,
                             const DispatchPlan& dispatch,
                             const std::vector<double>& dev, double chi) {
  CostBreakdown c;
  for (int i = 0; i < in.num_generators(); ++i) {
    const GeneratorSpec& g = in.generators[i];
    for (int t = 0; t < in.horizon; ++t) {
      c.commitment += g.no_load_cost[t] * plan.on[i][t] +
                      g.startup_cost[t] * plan.start[i][t] +
                      g.shutdown_cost[t] * plan.stop[i][t];
      c.dispatch += g.marginal_cost[t] * dispatch.production[i][t];
    }
  }
  for (int l = 0; l < in.num_pvs(); ++l) {
    for (int t = 0; t < in.horizon; ++t) {
      c.curtailment += in.pvs[l].curtail_cost[t] * plan.curtail[l][t];
    }
  }
  for (double d : dev) c.fairness += chi * std::abs(d);
  return c;
}

UcSolution solve_deterministic(const SystemInstance& in,
                               const UncertaintyRealization& s, double chi,
                               const SolverConfig& config) {
  UcModel um = build_deterministic(in, s, chi);
  MilpSolution sol = solve(um.model, config);
  if (sol.status == SolveStatus::Infeasible) {
    const int slot = diagnose(in, s, config);
    throw InfeasibleProblem(
        slot > 0 ? "no feasible dispatch: power balance cannot be met at slot " +
                       std::to_string(slot)
                 : std::string("no feasible dispatch"),
        slot);
  }
  if (!sol.optimal()) {
    throw std::runtime_error(std::string("deterministic UC solve ended with status ") +
                             to_string(sol.status));
  }
  const UcVariableMap& v = um.vars;
  UcSolution out;
  out.commitment.on = read_binaries(v.on, sol.values);
  out.commitment.start = read_binaries(v.start, sol.values);
  out.commitment.stop = read_binaries(v.stop, sol.values);
  out.commitment.curtail = read_binaries(v.curtail, sol.values);
  out.dispatch.production = read_values(v.production, sol.values);
  out.dispatch.reserve = read_values(v.reserve, sol.values);
  out.dispatch.unserved.assign(in.horizon, 0.0);
  out.dispatch.spilled.assign(in.horizon, 0.0);
  std::vector<double> dev;
  for (size_t j = 0; j < v.dev_pos.size(); ++j) {
    // The row fixes only a⁺ − a⁻; report the minimal split.
    const double d = sol.value(v.dev_pos[j]) - sol.value(v.dev_neg[j]);
    dev.push_back(d);
    out.dev_pos.push_back(std::max(d, 0.0));
    out.dev_neg.push_back(std::max(-d, 0.0));
  }
  out.breakdown = cost_breakdown(in, out.commitment, out.dispatch, dev, chi);
  out.dispatch.cost = out.breakdown.dispatch;
  out.total_cost = out.breakdown.total();
  out.gap = sol.gap;
  return out;
}

}  // namespace fairuc
