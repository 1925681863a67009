#include "fairuc/benders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <set>

#include "uc_rows.hpp"

namespace fairuc {

double Cut::rhs(const CommitmentPlan& plan) const {
  double v = constant;
  for (size_t i = 0; i < coef_on.size(); ++i) {
    for (size_t t = 0; t < coef_on[i].size(); ++t) v += coef_on[i][t] * plan.on[i][t];
  }
  for (size_t l = 0; l < coef_curtail.size(); ++l) {
    for (size_t t = 0; t < coef_curtail[l].size(); ++t) {
      v += coef_curtail[l][t] * plan.curtail[l][t];
    }
  }
  return v;
}

void BendersTrace::write_csv(std::ostream& out) const {
  out << "iteration,lower,upper,best_upper,gap,cuts,kind,seconds,master_seconds,"
         "subproblem_seconds\n";
  const auto old = out.precision(17);
  for (const TraceRow& r : rows) {
    out << r.iteration << ',' << r.lower << ',' << r.upper << ','
        << r.best_upper << ',' << r.gap << ',' << r.cuts << ','
        << (r.kind == Cut::Kind::Optimality ? "optimality" : "feasibility")
        << ',' << r.seconds << ',' << r.master_seconds << ','
        << r.subproblem_seconds << '\n';
  }
  out.precision(old);
}

MasterModel build_master(const SystemInstance& in, const std::vector<Cut>& cuts,
                         double w_lower) {
  require_valid(in);
  MasterModel mm;
  auto cb = detail::add_commitment(mm.model, in);
  mm.on = cb.on;
  mm.start = cb.start;
  mm.stop = cb.stop;
  mm.curtail = cb.curtail;
  mm.w = mm.model.add_variable("w", w_lower, kInf);
  mm.model.add_objective_term(mm.w, 1.0);
  for (size_t c = 0; c < cuts.size(); ++c) {
    const Cut& cut = cuts[c];
    std::vector<Term> terms;
    const double sign = cut.kind == Cut::Kind::Optimality ? -1.0 : 1.0;
    for (size_t i = 0; i < cut.coef_on.size(); ++i) {
      for (size_t t = 0; t < cut.coef_on[i].size(); ++t) {
        if (cut.coef_on[i][t] != 0.0) terms.push_back({mm.on[i][t], sign * cut.coef_on[i][t]});
      }
    }
    for (size_t l = 0; l < cut.coef_curtail.size(); ++l) {
      for (size_t t = 0; t < cut.coef_curtail[l].size(); ++t) {
        if (cut.coef_curtail[l][t] != 0.0) {
          terms.push_back({mm.curtail[l][t], sign * cut.coef_curtail[l][t]});
        }
      }
    }
    const std::string name = "cut" + std::to_string(c + 1);
    if (cut.kind == Cut::Kind::Optimality) {
      // w − lin(x, r) >= constant
      terms.push_back({mm.w, 1.0});
      mm.model.add_row(name, terms, RowSense::GreaterEqual, cut.constant);
    } else {
      // lin(x, r) <= −constant
      mm.model.add_row(name, terms, RowSense::LessEqual, -cut.constant);
    }
  }
  return mm;
}

double recourse_floor(const SystemInstance& in) {
  double floor = 0.0;
  for (const GeneratorSpec& g : in.generators) {
    for (double c : g.marginal_cost) floor += std::min(0.0, c) * g.p_max;
  }
  return floor;
}

Cut make_cut(const SystemInstance& in, const CommitmentPlan& plan,
             const RecourseSolution& rec, double chi, int iteration) {
  const int T = in.horizon, G = in.num_generators(), P = in.num_pvs();
  const RecourseDuals& d = rec.duals;
  const UncertaintyRealization& real = rec.worst_case;
  Cut cut;
  cut.kind = Cut::Kind::Optimality;
  cut.iteration = iteration;
  cut.realization = real;
  cut.coef_on.assign(G, std::vector<double>(T, 0.0));
  cut.coef_curtail.assign(P, std::vector<double>(T, 0.0));

  const std::vector<double> demand = detail::demand_totals(in, real);
  const Grid z = detail::pv_available(in, real);
  for (int t = 0; t < T; ++t) {
    // α_t (D_t − Σ_l (1 − r_lt) z_lt)
    const double alpha = d.balance_pos[t] - d.balance_neg[t];
    double net = demand[t];
    for (int l = 0; l < P; ++l) {
      net -= z[l][t];
      cut.coef_curtail[l][t] += alpha * z[l][t];
    }
    cut.constant += alpha * net + in.system_reserve[t] * d.reserve[t];
  }
  for (int i = 0; i < G; ++i) {
    const GeneratorSpec& g = in.generators[i];
    for (int t = 0; t < T; ++t) {
      const double p0 = t == 0 ? g.initial_output : 0.0;
      cut.constant += -(g.ramp_up[t] + p0) * d.ramp_up[i][t] -
                      (g.ramp_down[t] - p0) * d.ramp_down[i][t] -
                      g.p_max * d.cap_up[i][t] - g.reserve_cap[t] * d.reserve_cap[i][t];
      cut.coef_on[i][t] = g.p_min * d.cap_low[i][t] - g.p_max * d.gen_up[i][t] +
                          g.p_min * d.gen_low[i][t];
    }
  }
  // χ Σ_j σ_j dev_j(r), σ_j the sign of mean-minus-own energy at the
  // generating plan; |y| >= σ y keeps the cut valid for every r.
  if (chi > 0.0 && P > 0) {
    const std::vector<double> s = delivered_energy(in, plan.curtail, real);
    double mean = 0.0, scale = 1.0;
    for (double v : s) {
      mean += v / P;
      scale = std::max(scale, std::abs(v));
    }
    for (int j = 0; j < P; ++j) {
      const double dev = mean - s[j];
      const double sigma = std::abs(dev) <= 1e-12 * scale ? 0.0 : (dev > 0 ? 1.0 : -1.0);
      if (sigma == 0.0) continue;
      for (int k = 0; k < P; ++k) {
        const double w = 1.0 / P - (k == j ? 1.0 : 0.0);
        for (int t = 0; t < T; ++t) {
          cut.constant += chi * sigma * w * z[k][t];
          cut.coef_curtail[k][t] -= chi * sigma * w * z[k][t];
        }
      }
    }
  }
  return cut;
}

Cut make_feasibility_cut(const FeasibilityCertificate& cert,
                         const SystemInstance& in, int iteration) {
  Cut cut;
  cut.kind = Cut::Kind::Feasibility;
  cut.iteration = iteration;
  cut.constant = cert.constant;
  cut.coef_on = cert.coef_on;
  cut.coef_curtail.assign(in.num_pvs(), std::vector<double>(in.horizon, 0.0));
  return cut;
}

double first_stage_cost(const SystemInstance& in, const CommitmentPlan& plan) {
  double c = 0.0;
  for (int i = 0; i < in.num_generators(); ++i) {
    const GeneratorSpec& g = in.generators[i];
    for (int t = 0; t < in.horizon; ++t) {
      c += g.no_load_cost[t] * plan.on[i][t] + g.startup_cost[t] * plan.start[i][t] +
           g.shutdown_cost[t] * plan.stop[i][t];
    }
  }
  for (int l = 0; l < in.num_pvs(); ++l) {
    for (int t = 0; t < in.horizon; ++t) {
      c += in.pvs[l].curtail_cost[t] * plan.curtail[l][t];
    }
  }
  return c;
}

namespace {

BinaryGrid read_binaries(const IdGrid& ids, const std::vector<double>& v) {
  BinaryGrid g(ids.size());
  for (size_t a = 0; a < ids.size(); ++a) {
    for (int id : ids[a]) g[a].push_back(static_cast<int>(std::lround(v[id])));
  }
  return g;
}

std::string plan_key(const CommitmentPlan& p) {
  std::string k;
  for (const auto* g : {&p.on, &p.start, &p.stop, &p.curtail}) {
    for (const auto& row : *g) {
      for (int v : row) k += static_cast<char>('0' + v);
    }
    k += '|';
  }
  return k;
}

double relative_gap(double upper, double lower) {
  if (!std::isfinite(upper)) return kInf;
  if (upper == 0.0) return std::max(0.0, upper - lower);
  return std::max(0.0, (upper - lower) / std::abs(upper));
}

}  // namespace

RobustResult solve_robust(const SystemInstance& in, const BendersConfig& config) {
  require_valid(in);
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (config.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(config.chi >= 0.0)) throw std::invalid_argument("chi must be >= 0");
  const double theta = resolve_theta(in, config.bigm);
  BigMConfig bigm{theta};

  // Inner solves run at a gap well inside epsilon so that a repeated master
  // plan certifies convergence.
  SolverConfig inner = config.solver;
  inner.mip_gap = std::min(inner.mip_gap, config.epsilon / 4.0);

  const auto start = std::chrono::steady_clock::now();
  const double w_lower = recourse_floor(in);
  RobustResult res;
  res.theta_m = theta;
  double lower = -kInf, best = kInf;
  bool have_best = false;
  RecourseSolution best_rec;
  std::set<std::string> seen;

  for (int k = 1; k <= config.max_iterations; ++k) {
    const auto master_start = std::chrono::steady_clock::now();
    MasterModel mm = build_master(in, res.cuts, w_lower);
    MilpSolution ms = solve(mm.model, inner);
    const auto master_end = std::chrono::steady_clock::now();
    if (ms.values.empty()) {
      throw std::runtime_error(std::string("master problem ended with status ") +
                               to_string(ms.status) +
                               "; the commitment rows admit no plan");
    }
    lower = std::max(lower, ms.bound);
    CommitmentPlan plan;
    plan.on = read_binaries(mm.on, ms.values);
    plan.start = read_binaries(mm.start, ms.values);
    plan.stop = read_binaries(mm.stop, ms.values);
    plan.curtail = read_binaries(mm.curtail, ms.values);

    TraceRow row;
    row.iteration = k;
    row.lower = lower;
    row.master_seconds = std::chrono::duration<double>(master_end - master_start).count();
    const bool repeated = !seen.insert(plan_key(plan)).second;
    if (repeated) {
      // The cut for this plan is already present: nothing new to learn.
      row.upper = kInf;
      row.best_upper = best;
      row.gap = relative_gap(best, lower);
      row.cuts = static_cast<int>(res.cuts.size());
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      res.trace.rows.push_back(row);
      if (row.gap < config.epsilon) res.trace.status = BendersStatus::Converged;
      break;
    }
    FeasibilityCertificate cert = dispatch_feasibility(in, plan, inner);
    if (!cert.feasible) {
      res.cuts.push_back(make_feasibility_cut(cert, in, k));
      res.cuts.back().plan = plan;
      row.kind = Cut::Kind::Feasibility;
      row.upper = kInf;
    } else {
      RecourseSolution rec = solve_recourse(in, plan, config.chi, bigm, inner);
      row.upper = first_stage_cost(in, plan) + rec.bound;
      if (row.upper < best) {
        best = row.upper;
        have_best = true;
        res.commitment = plan;
        best_rec = rec;
      }
      res.cuts.push_back(make_cut(in, plan, rec, config.chi, k));
      res.cuts.back().plan = plan;
    }
    row.best_upper = best;
    row.gap = relative_gap(best, lower);
    row.cuts = static_cast<int>(res.cuts.size());
    row.subproblem_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - master_end).count();
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.trace.rows.push_back(row);
    if (have_best && row.gap < config.epsilon) {
      res.trace.status = BendersStatus::Converged;
      break;
    }
  }
  if (!have_best) {
    throw std::runtime_error(
        "no commitment with a feasible dispatch was found within the iteration limit");
  }
  res.converged = res.trace.status == BendersStatus::Converged;
  res.value = best;
  res.lower_bound = lower;
  res.worst_case = best_rec.worst_case;
  res.dispatch = final_dispatch(in, res.commitment, res.worst_case, bigm, inner);
  return res;
}

DispatchPlan final_dispatch(const SystemInstance& in, const CommitmentPlan& plan,
                            const UncertaintyRealization& real,
                            const BigMConfig& bigm, const SolverConfig& config) {
  SecondStageOptions opt;
  opt.value_of_lost_load = resolve_theta(in, bigm);
  return second_stage(in, plan, real, opt, config);
}

}  // namespace fairuc
