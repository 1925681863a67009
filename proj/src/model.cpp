#include "fairuc/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fairuc {

double SystemInstance::max_marginal_cost() const {
  double m = 0.0;
  for (const GeneratorSpec& g : generators) {
    for (double c : g.marginal_cost) m = std::max(m, c);
  }
  return m;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const ValidationIssue& i : issues) out << i.path << ": " << i.message << '\n';
  return out.str();
}

namespace {

class Checker {
 public:
  explicit Checker(ValidationReport& r) : r_(r) {}

  void fail(const std::string& path, const std::string& msg) {
    r_.issues.push_back({path, msg});
  }

  bool length(const std::string& path, size_t got, int want) {
    if (static_cast<int>(got) != want) {
      fail(path, "expected " + std::to_string(want) + " entries, got " +
                     std::to_string(got));
      return false;
    }
    return true;
  }

  void series(const std::string& path, const std::vector<double>& v, int T,
              double lo) {
    if (!length(path, v.size(), T)) return;
    for (size_t t = 0; t < v.size(); ++t) {
      if (!std::isfinite(v[t])) {
        fail(path + "[" + std::to_string(t) + "]", "not a finite number");
      } else if (v[t] < lo) {
        fail(path + "[" + std::to_string(t) + "]", "must be >= 0");
      }
    }
  }

 private:
  ValidationReport& r_;
};

}  // namespace

ValidationReport validate_instance(const SystemInstance& in,
                                   bool require_units) {
  ValidationReport report;
  Checker c(report);
  const int T = in.horizon;
  if (T < 1) {
    c.fail("horizon", "must be >= 1");
    return report;
  }
  if (in.generators.empty()) c.fail("generators", "at least one generator required");
  if (require_units && in.pvs.empty()) c.fail("pvs", "at least one PV required");
  if (require_units && in.loads.empty()) c.fail("loads", "at least one load required");

  for (size_t i = 0; i < in.generators.size(); ++i) {
    const GeneratorSpec& g = in.generators[i];
    const std::string p = "generators[" + std::to_string(i) + "]";
    c.series(p + ".no_load_cost", g.no_load_cost, T, -INFINITY);
    c.series(p + ".startup_cost", g.startup_cost, T, -INFINITY);
    c.series(p + ".shutdown_cost", g.shutdown_cost, T, -INFINITY);
    c.series(p + ".marginal_cost", g.marginal_cost, T, -INFINITY);
    c.series(p + ".ramp_up", g.ramp_up, T, 0.0);
    c.series(p + ".ramp_down", g.ramp_down, T, 0.0);
    c.series(p + ".reserve_cap", g.reserve_cap, T, 0.0);
    if (!std::isfinite(g.p_max) || !std::isfinite(g.p_min) || g.p_min < 0.0) {
      c.fail(p + ".p_min", "p_min must be finite and >= 0");
    } else if (g.p_min > g.p_max) {
      c.fail(p + ".p_min", "p_min exceeds p_max");
    }
    if (g.min_up < 0) c.fail(p + ".min_up", "must be >= 0");
    if (g.min_down < 0) c.fail(p + ".min_down", "must be >= 0");
    if (g.initial_on != 0 && g.initial_on != 1) {
      c.fail(p + ".initial_on", "must be 0 or 1");
    }
    if (!(g.initial_output >= 0.0 && g.initial_output <= g.p_max)) {
      c.fail(p + ".initial_output", "must lie in [0, p_max]");
    } else if (g.initial_on == 0 && g.initial_output != 0.0) {
      c.fail(p + ".initial_output", "must be 0 when initially off");
    }
  }

  for (size_t l = 0; l < in.pvs.size(); ++l) {
    const PVSpec& pv = in.pvs[l];
    const std::string p = "pvs[" + std::to_string(l) + "]";
    c.series(p + ".expected_output", pv.expected_output, T, 0.0);
    c.series(p + ".deviation", pv.deviation, T, 0.0);
    c.series(p + ".curtail_cost", pv.curtail_cost, T, 0.0);
    if (pv.expected_output.size() == static_cast<size_t>(T) &&
        pv.deviation.size() == static_cast<size_t>(T)) {
      for (int t = 0; t < T; ++t) {
        if (pv.deviation[t] > pv.expected_output[t]) {
          c.fail(p + ".deviation[" + std::to_string(t) + "]",
                 "exceeds expected output");
        }
      }
    }
  }

  for (size_t j = 0; j < in.loads.size(); ++j) {
    const LoadSpec& ld = in.loads[j];
    const std::string p = "loads[" + std::to_string(j) + "]";
    c.series(p + ".expected_load", ld.expected_load, T, 0.0);
    c.series(p + ".deviation", ld.deviation, T, 0.0);
    if (ld.expected_load.size() == static_cast<size_t>(T) &&
        ld.deviation.size() == static_cast<size_t>(T)) {
      for (int t = 0; t < T; ++t) {
        if (ld.deviation[t] > ld.expected_load[t]) {
          c.fail(p + ".deviation[" + std::to_string(t) + "]",
                 "exceeds expected load");
        }
      }
    }
  }

  c.series("system_reserve", in.system_reserve, T, 0.0);
  c.series("budgets.delta", in.budgets.demand_budget, T, 0.0);
  c.series("budgets.gamma", in.budgets.pv_budget, T, 0.0);
  if (in.budgets.demand_budget.size() == static_cast<size_t>(T)) {
    for (int t = 0; t < T; ++t) {
      if (in.budgets.demand_budget[t] > in.num_loads()) {
        c.fail("budgets.delta[" + std::to_string(t) + "]",
               "exceeds the number of loads");
      }
    }
  }
  if (in.budgets.pv_budget.size() == static_cast<size_t>(T)) {
    for (int t = 0; t < T; ++t) {
      if (in.budgets.pv_budget[t] > in.num_pvs()) {
        c.fail("budgets.gamma[" + std::to_string(t) + "]",
               "exceeds the number of PVs");
      }
    }
  }
  return report;
}

void require_valid(const SystemInstance& instance) {
  ValidationReport r = validate_instance(instance, false);
  if (!r.ok()) throw std::invalid_argument("invalid instance:\n" + r.to_string());
}

UncertaintyRealization zero_realization(const SystemInstance& in) {
  UncertaintyRealization r;
  r.demand_dev.assign(in.num_loads(), std::vector<double>(in.horizon, 0.0));
  r.pv_dev.assign(in.num_pvs(), std::vector<double>(in.horizon, 0.0));
  return r;
}

BinaryGrid no_curtailment(const SystemInstance& in) {
  return BinaryGrid(in.num_pvs(), std::vector<int>(in.horizon, 0));
}

namespace {

void require_shape(const std::string& what, size_t rows, size_t cols,
                   const auto& grid) {
  bool ok = grid.size() == rows;
  for (const auto& row : grid) ok = ok && row.size() == cols;
  if (!ok) {
    throw std::invalid_argument(what + " must be " + std::to_string(rows) +
                                " x " + std::to_string(cols));
  }
}

}  // namespace

RealizedScenario apply_uncertainty(const SystemInstance& in,
                                   const UncertaintyRealization& real,
                                   const BinaryGrid& curtail) {
  const size_t T = in.horizon;
  require_shape("demand deviation", in.loads.size(), T, real.demand_dev);
  require_shape("PV deviation", in.pvs.size(), T, real.pv_dev);
  require_shape("curtailment", in.pvs.size(), T, curtail);
  RealizedScenario s;
  s.demand.assign(in.loads.size(), std::vector<double>(T));
  s.pv.assign(in.pvs.size(), std::vector<double>(T));
  for (size_t j = 0; j < in.loads.size(); ++j) {
    for (size_t t = 0; t < T; ++t) {
      s.demand[j][t] = in.loads[j].expected_load[t] +
                       real.demand_dev[j][t] * in.loads[j].deviation[t];
    }
  }
  for (size_t l = 0; l < in.pvs.size(); ++l) {
    for (size_t t = 0; t < T; ++t) {
      s.pv[l][t] = curtail[l][t]
                       ? 0.0
                       : in.pvs[l].expected_output[t] -
                             real.pv_dev[l][t] * in.pvs[l].deviation[t];
    }
  }
  return s;
}

ValidationReport check_realization(const SystemInstance& in,
                                   const UncertaintyRealization& real) {
  ValidationReport report;
  Checker c(report);
  const int T = in.horizon;
  if (!c.length("demand_dev", real.demand_dev.size(), in.num_loads()) ||
      !c.length("pv_dev", real.pv_dev.size(), in.num_pvs())) {
    return report;
  }
  for (const auto& row : real.demand_dev) {
    if (!c.length("demand_dev[]", row.size(), T)) return report;
  }
  for (const auto& row : real.pv_dev) {
    if (!c.length("pv_dev[]", row.size(), T)) return report;
  }
  const double tol = 1e-9;
  for (int t = 0; t < T; ++t) {
    double zs = 0.0, es = 0.0;
    for (int j = 0; j < in.num_loads(); ++j) {
      const double v = real.demand_dev[j][t];
      if (v < -tol || v > 1.0 + tol) {
        c.fail("demand_dev[" + std::to_string(j) + "][" + std::to_string(t) + "]",
               "outside [0,1]");
      }
      zs += v;
    }
    for (int l = 0; l < in.num_pvs(); ++l) {
      const double v = real.pv_dev[l][t];
      if (v < -tol || v > 1.0 + tol) {
        c.fail("pv_dev[" + std::to_string(l) + "][" + std::to_string(t) + "]",
               "outside [0,1]");
      }
      es += v;
    }
    if (zs > in.budgets.demand_budget[t] + tol) {
      c.fail("demand_dev[*][" + std::to_string(t) + "]", "exceeds budget");
    }
    if (es > in.budgets.pv_budget[t] + tol) {
      c.fail("pv_dev[*][" + std::to_string(t) + "]", "exceeds budget");
    }
  }
  return report;
}

ValidationReport check_commitment(const SystemInstance& in,
                                  const CommitmentPlan& plan) {
  ValidationReport report;
  Checker c(report);
  const int T = in.horizon, G = in.num_generators();
  if (!c.length("on", plan.on.size(), G) ||
      !c.length("start", plan.start.size(), G) ||
      !c.length("stop", plan.stop.size(), G) ||
      !c.length("curtail", plan.curtail.size(), in.num_pvs())) {
    return report;
  }
  for (int i = 0; i < G; ++i) {
    if (!c.length("on[]", plan.on[i].size(), T) ||
        !c.length("start[]", plan.start[i].size(), T) ||
        !c.length("stop[]", plan.stop[i].size(), T)) {
      return report;
    }
  }
  for (const auto& row : plan.curtail) {
    if (!c.length("curtail[]", row.size(), T)) return report;
  }
  for (int i = 0; i < G; ++i) {
    const GeneratorSpec& g = in.generators[i];
    const std::string p = "generators[" + std::to_string(i) + "]";
    for (int t = 0; t < T; ++t) {
      const int prev = t == 0 ? g.initial_on : plan.on[i][t - 1];
      const int cur = plan.on[i][t];
      const std::string at = " at slot " + std::to_string(t + 1);
      if (prev - cur + plan.start[i][t] < 0) c.fail(p, "start flag missing" + at);
      if (cur - prev + plan.stop[i][t] < 0) c.fail(p, "stop flag missing" + at);
      for (int tau = t + 1; tau <= std::min(t + g.min_up - 1, T - 1); ++tau) {
        if (cur - prev > plan.on[i][tau]) {
          c.fail(p, "min-up violated" + at);
          break;
        }
      }
      for (int tau = t + 1; tau <= std::min(t + g.min_down - 1, T - 1); ++tau) {
        if (prev - cur > 1 - plan.on[i][tau]) {
          c.fail(p, "min-down violated" + at);
          break;
        }
      }
    }
  }
  return report;
}

void require_plan_shape(const SystemInstance& in, const CommitmentPlan& plan) {
  const size_t T = in.horizon, G = in.generators.size();
  require_shape("plan.on", G, T, plan.on);
  require_shape("plan.start", G, T, plan.start);
  require_shape("plan.stop", G, T, plan.stop);
  require_shape("plan.curtail", in.pvs.size(), T, plan.curtail);
}

CommitmentPlan empty_plan(const SystemInstance& in) {
  CommitmentPlan p;
  const int T = in.horizon;
  p.on.assign(in.num_generators(), std::vector<int>(T, 0));
  p.start = p.on;
  p.stop = p.on;
  for (int i = 0; i < in.num_generators(); ++i) {
    if (in.generators[i].initial_on) p.stop[i][0] = 1;
  }
  p.curtail = no_curtailment(in);
  return p;
}

}  // namespace fairuc
