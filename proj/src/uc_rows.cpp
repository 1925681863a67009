#include "uc_rows.hpp"

#include <algorithm>

namespace fairuc::detail {

std::string label(const char* base, int a, int t) {
  return std::string(base) + "(" + std::to_string(a + 1) + "," +
         std::to_string(t + 1) + ")";
}

CommitmentBlock add_commitment(MilpModel& m, const SystemInstance& in) {
  const int T = in.horizon, G = in.num_generators(), P = in.num_pvs();
  CommitmentBlock b;
  b.on.assign(G, std::vector<int>(T));
  b.start = b.on;
  b.stop = b.on;
  b.curtail.assign(P, std::vector<int>(T));
  for (int i = 0; i < G; ++i) {
    const GeneratorSpec& g = in.generators[i];
    for (int t = 0; t < T; ++t) {
      b.on[i][t] = m.add_binary(label("x", i, t));
      b.start[i][t] = m.add_binary(label("u", i, t));
      b.stop[i][t] = m.add_binary(label("v", i, t));
      m.add_objective_term(b.on[i][t], g.no_load_cost[t]);
      m.add_objective_term(b.start[i][t], g.startup_cost[t]);
      m.add_objective_term(b.stop[i][t], g.shutdown_cost[t]);
    }
  }
  for (int l = 0; l < P; ++l) {
    for (int t = 0; t < T; ++t) {
      b.curtail[l][t] = m.add_binary(label("r", l, t));
      m.add_objective_term(b.curtail[l][t], in.pvs[l].curtail_cost[t]);
    }
  }
  for (int i = 0; i < G; ++i) {
    const GeneratorSpec& g = in.generators[i];
    const double x0 = g.initial_on;
    for (int t = 0; t < T; ++t) {
      // x^{t-1} - x^t (+ u / - v) with x^0 folded into the right-hand side.
      std::vector<Term> diff = {{b.on[i][t], -1.0}};
      double prev_const = 0.0;
      if (t == 0) {
        prev_const = x0;
      } else {
        diff.push_back({b.on[i][t - 1], 1.0});
      }
      std::vector<Term> up = diff;
      up.push_back({b.start[i][t], 1.0});
      m.add_row(label("start", i, t), up, RowSense::GreaterEqual, -prev_const);
      std::vector<Term> down;
      for (const Term& d : diff) down.push_back({d.var, -d.coef});
      down.push_back({b.stop[i][t], 1.0});
      m.add_row(label("stop", i, t), down, RowSense::GreaterEqual, prev_const);

      // x^t - x^{t-1} <= x^tau
      for (int tau = t + 1; tau <= std::min(t + g.min_up - 1, T - 1); ++tau) {
        std::vector<Term> row;
        for (const Term& d : diff) row.push_back({d.var, -d.coef});
        row.push_back({b.on[i][tau], -1.0});
        m.add_row(label("minup", i, t) + "_" + std::to_string(tau + 1), row,
                  RowSense::LessEqual, prev_const);
      }
      // x^{t-1} - x^t <= 1 - x^tau
      for (int tau = t + 1; tau <= std::min(t + g.min_down - 1, T - 1); ++tau) {
        std::vector<Term> row = diff;
        row.push_back({b.on[i][tau], 1.0});
        m.add_row(label("mindown", i, t) + "_" + std::to_string(tau + 1), row,
                  RowSense::LessEqual, 1.0 - prev_const);
      }
    }
  }
  return b;
}

RefGrid as_refs(const IdGrid& ids) {
  RefGrid out(ids.size());
  for (size_t a = 0; a < ids.size(); ++a) {
    for (int v : ids[a]) out[a].push_back({v, 0.0});
  }
  return out;
}

RefGrid fixed_refs(const BinaryGrid& values) {
  RefGrid out(values.size());
  for (size_t a = 0; a < values.size(); ++a) {
    for (int v : values[a]) out[a].push_back({-1, static_cast<double>(v)});
  }
  return out;
}

namespace {

// Appends coef·ref to terms, or folds it into the constant.
void put(std::vector<Term>& terms, double& constant, const BinRef& ref,
         double coef) {
  if (ref.var >= 0) {
    terms.push_back({ref.var, coef});
  } else {
    constant += coef * ref.fixed;
  }
}

}  // namespace

DispatchBlock add_dispatch(MilpModel& m, const SystemInstance& in,
                           const RefGrid& on, const RefGrid& curtail,
                           const std::vector<double>& demand, const Grid& pv,
                           const DispatchOptions& opt) {
  const int T = in.horizon, G = in.num_generators(), P = in.num_pvs();
  DispatchBlock b;
  b.p.assign(G, std::vector<int>(T));
  b.q = b.p;
  for (int i = 0; i < G; ++i) {
    for (int t = 0; t < T; ++t) {
      b.p[i][t] = m.add_variable(label("p", i, t), 0.0, kInf);
      b.q[i][t] = m.add_variable(label("q", i, t), 0.0, kInf);
      if (opt.price_production) {
        m.add_objective_term(b.p[i][t], in.generators[i].marginal_cost[t]);
      }
    }
  }

  // Emits `terms sense rhs` where `constant` collects fixed-binary parts of
  // the left-hand side; optionally with an elastic column for slot t.
  auto row = [&](const std::string& name, std::vector<Term> terms,
                 double constant, RowSense sense, double rhs, int t,
                 bool elastic) {
    if (elastic) {
      const int e_lo = m.add_variable("e_" + name + "_lo", 0.0, kInf);
      m.add_objective_term(e_lo, 1.0);
      b.elastic.push_back({e_lo, t});
      if (sense != RowSense::GreaterEqual) {
        terms.push_back({e_lo, -1.0});
      } else {
        terms.push_back({e_lo, 1.0});
      }
      if (sense == RowSense::Equal) {
        const int e_hi = m.add_variable("e_" + name + "_hi", 0.0, kInf);
        m.add_objective_term(e_hi, 1.0);
        b.elastic.push_back({e_hi, t});
        terms.push_back({e_hi, 1.0});
      }
    }
    return m.add_row(name, std::move(terms), sense, rhs - constant);
  };

  for (int t = 0; t < T; ++t) {
    // Σ p − Σ z r (+ unserved − spilled) = D − Σ z
    std::vector<Term> terms;
    double constant = 0.0, rhs = demand[t];
    for (int i = 0; i < G; ++i) terms.push_back({b.p[i][t], 1.0});
    for (int l = 0; l < P; ++l) {
      rhs -= pv[l][t];
      put(terms, constant, curtail[l][t], -pv[l][t]);
    }
    if (opt.soft_balance) {
      const int un = m.add_variable("unserved(" + std::to_string(t + 1) + ")", 0.0, kInf);
      const int sp = m.add_variable("spilled(" + std::to_string(t + 1) + ")", 0.0, kInf);
      m.add_objective_term(un, opt.balance_penalty);
      m.add_objective_term(sp, opt.balance_penalty);
      terms.push_back({un, 1.0});
      terms.push_back({sp, -1.0});
      b.unserved.push_back(un);
      b.spilled.push_back(sp);
    }
    b.balance_rows.push_back(row("balance(" + std::to_string(t + 1) + ")", terms,
                                 constant, RowSense::Equal, rhs, t,
                                 opt.elastic_balance));
  }

  for (int i = 0; i < G; ++i) {
    const GeneratorSpec& g = in.generators[i];
    for (int t = 0; t < T; ++t) {
      const int p = b.p[i][t], q = b.q[i][t];
      const BinRef& x = on[i][t];
      // Ramp limits; slot 1 against the initial output.
      if (t == 0) {
        row(label("rampup", i, t), {{p, 1.0}}, 0.0, RowSense::LessEqual,
            g.ramp_up[t] + g.initial_output, t, opt.elastic);
        row(label("rampdown", i, t), {{p, -1.0}}, 0.0, RowSense::LessEqual,
            g.ramp_down[t] - g.initial_output, t, opt.elastic);
      } else {
        const int pp = b.p[i][t - 1];
        row(label("rampup", i, t), {{p, 1.0}, {pp, -1.0}}, 0.0,
            RowSense::LessEqual, g.ramp_up[t], t, opt.elastic);
        row(label("rampdown", i, t), {{pp, 1.0}, {p, -1.0}}, 0.0,
            RowSense::LessEqual, g.ramp_down[t], t, opt.elastic);
      }
      row(label("capup", i, t), {{p, 1.0}, {q, 1.0}}, 0.0, RowSense::LessEqual,
          g.p_max, t, opt.elastic);
      {
        std::vector<Term> terms = {{p, 1.0}, {q, 1.0}};
        double constant = 0.0;
        put(terms, constant, x, -g.p_min);
        row(label("caplow", i, t), terms, constant, RowSense::GreaterEqual, 0.0,
            t, opt.elastic);
      }
      {
        std::vector<Term> terms = {{p, 1.0}};
        double constant = 0.0;
        put(terms, constant, x, -g.p_max);
        row(label("genup", i, t), terms, constant, RowSense::LessEqual, 0.0, t,
            opt.elastic);
      }
      {
        std::vector<Term> terms = {{p, 1.0}};
        double constant = 0.0;
        put(terms, constant, x, -g.p_min);
        row(label("genlow", i, t), terms, constant, RowSense::GreaterEqual, 0.0,
            t, opt.elastic);
      }
      row(label("rescap", i, t), {{q, 1.0}}, 0.0, RowSense::LessEqual,
          g.reserve_cap[t], t, opt.elastic);
    }
  }
  for (int t = 0; t < T; ++t) {
    std::vector<Term> terms;
    for (int i = 0; i < G; ++i) terms.push_back({b.q[i][t], 1.0});
    row("reserve(" + std::to_string(t + 1) + ")", terms, 0.0,
        RowSense::GreaterEqual, in.system_reserve[t], t, opt.elastic);
  }
  return b;
}

std::vector<double> demand_totals(const SystemInstance& in,
                                  const UncertaintyRealization& real) {
  std::vector<double> d(in.horizon, 0.0);
  for (int j = 0; j < in.num_loads(); ++j) {
    for (int t = 0; t < in.horizon; ++t) {
      d[t] += in.loads[j].expected_load[t] +
              real.demand_dev[j][t] * in.loads[j].deviation[t];
    }
  }
  return d;
}

Grid pv_available(const SystemInstance& in, const UncertaintyRealization& real) {
  Grid z(in.num_pvs(), std::vector<double>(in.horizon));
  for (int l = 0; l < in.num_pvs(); ++l) {
    for (int t = 0; t < in.horizon; ++t) {
      z[l][t] = in.pvs[l].expected_output[t] -
                real.pv_dev[l][t] * in.pvs[l].deviation[t];
    }
  }
  return z;
}

}  // namespace fairuc::detail
