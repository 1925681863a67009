#include "commands.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fairuc/benders.hpp"
#include "fairuc/deterministic_uc.hpp"
#include "fairuc/evaluation.hpp"
#include "fairuc/fairness.hpp"
#include "fairuc/instance_io.hpp"
#include "fairuc/recourse.hpp"

namespace fairuc::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string instance;
  std::string plan;
  std::string realization;
  std::string out_dir = ".";
  std::string backend = "bundled";
  std::string label = "RP";
  std::vector<double> chi_list = {0.0, 1.0, 10.0, 100.0};
  double epsilon = 1e-3;
  int max_iters = 30;
  double chi = 100.0;
  int samples = 1000;
  std::uint64_t seed = 1;
  double mip_gap = 1e-4;
  double theta_m = 0.0;
  int workers = 1;
};

BendersConfig benders_config(const Options& o, double chi) {
  BendersConfig c;
  c.epsilon = o.epsilon;
  c.max_iterations = o.max_iters;
  c.chi = chi;
  c.bigm.theta_m = o.theta_m;
  c.solver.mip_gap = o.mip_gap;
  return c;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

template <typename Writer>
void write_with(const fs::path& path, Writer w) {
  std::ostringstream s;
  w(s);
  write_file(path, s.str());
}

double curtailment_cost(const SystemInstance& in, const BinaryGrid& curtail) {
  double c = 0;
  for (int l = 0; l < in.num_pvs(); ++l) {
    for (int t = 0; t < in.horizon; ++t) c += in.pvs[l].curtail_cost[t] * curtail[l][t];
  }
  return c;
}

// Gini of the curtailment-masked forecast energy; "undefined" when every
// PV is curtailed throughout.
std::string forecast_gini(const SystemInstance& in, const BinaryGrid& curtail) {
  Grid z;
  for (const PVSpec& pv : in.pvs) z.push_back(pv.expected_output);
  try {
    return fmt(gini_index(total_power(z, curtail)));
  } catch (const GiniUndefined&) {
    return "undefined";
  }
}

int cmd_check(const Options& o, std::ostream& out) {
  const SystemInstance in = parse_instance(o.instance, false);
  const ValidationReport rep = validate_instance(in);
  if (!rep.ok()) {
    out << rep.to_string();
    return 1;
  }
  out << "ok: " << in.num_generators() << " generators, " << in.num_pvs() << " PVs, "
      << in.num_loads() << " loads, horizon " << in.horizon << "\n";
  return 0;
}

int cmd_solve(const Options& o, std::ostream& out) {
  const SystemInstance in = parse_instance(o.instance);
  const RobustResult r = solve_robust(in, benders_config(o, o.chi));
  const fs::path dir(o.out_dir);
  write_file(dir / "result.json", serialize_result(r));
  write_file(dir / "plan.json", serialize_plan(r.commitment));
  write_with(dir / "trace.csv", [&](std::ostream& s) { r.trace.write_csv(s); });
  out << "status " << (r.converged ? "converged" : "iteration_limit") << "\n"
      << "value " << fmt(r.value) << "\n"
      << "lower_bound " << fmt(r.lower_bound) << "\n"
      << "iterations " << r.trace.rows.size() << "\n"
      << "curtailment_cost " << fmt(curtailment_cost(in, r.commitment.curtail)) << "\n"
      << "forecast_gini " << forecast_gini(in, r.commitment.curtail) << "\n";
  return 0;
}

int cmd_dispatch(const Options& o, std::ostream& out) {
  const SystemInstance in = parse_instance(o.instance);
  const CommitmentPlan plan = parse_plan(o.plan);
  require_plan_shape(in, plan);
  const ValidationReport rep = check_commitment(in, plan);
  if (!rep.ok()) {
    out << rep.to_string();
    return 1;
  }
  BigMConfig bigm;
  bigm.theta_m = o.theta_m;
  SolverConfig sc;
  sc.mip_gap = o.mip_gap;
  UncertaintyRealization real;
  if (!o.realization.empty()) {
    std::ifstream f(o.realization);
    if (!f) throw InstanceError(InstanceError::Kind::Io, "cannot read " + o.realization);
    std::stringstream s;
    s << f.rdbuf();
    real = parse_realization_text(s.str());
    const ValidationReport rr = check_realization(in, real);
    if (!rr.ok()) {
      out << rr.to_string();
      return 1;
    }
  } else {
    real = solve_recourse(in, plan, o.chi, bigm, sc).worst_case;
  }
  const DispatchPlan d = final_dispatch(in, plan, real, bigm, sc);
  const fs::path dir(o.out_dir);
  write_file(dir / "dispatch.json", serialize_dispatch(d));
  write_file(dir / "realization.json", serialize_realization(real));
  out << "dispatch_cost " << fmt(d.cost) << "\n"
      << "first_stage_cost " << fmt(first_stage_cost(in, plan)) << "\n";
  return 0;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const SystemInstance in = parse_instance(o.instance);
  EvaluationConfig ec;
  ec.samples = o.samples;
  ec.seed = o.seed;
  ec.workers = o.workers;
  ec.label = o.label;
  const PairReport rep = compare_pair(in, benders_config(o, o.chi), ec);
  const fs::path dir(o.out_dir);
  const std::vector<GiniSampleSet> sets = {rep.base_gini, rep.fair_gini};
  write_with(dir / "gini_samples.csv", [&](std::ostream& s) { write_samples_csv(s, sets); });
  write_with(dir / "gini_summary.csv", [&](std::ostream& s) { write_summary_csv(s, sets); });
  write_with(dir / "gini_tests.csv", [&](std::ostream& s) { write_tests_csv(s, rep); });
  for (const GiniSampleSet& g : sets) {
    out << g.label << " mean " << fmt(g.mean) << " std " << fmt(g.std) << "\n";
  }
  out << "t_test p " << fmt(rep.means.p_value) << "\n";
  return 0;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const SystemInstance in = parse_instance(o.instance);
  std::ostringstream csv;
  csv << "chi,total_cost,mean_gini\n";
  for (double chi : o.chi_list) {
    if (chi < 0) throw std::invalid_argument("chi must be >= 0");
    const RobustResult r = solve_robust(in, benders_config(o, chi));
    const GiniSampleSet g = run_monte_carlo(in, r.commitment, o.samples, o.seed, o.workers,
                                            "chi=" + fmt(chi));
    // Money only: commitment, curtailment and worst-case dispatch, without
    // the fairness penalty.
    const double cost = first_stage_cost(in, r.commitment) + r.dispatch.cost;
    csv << fmt(chi) << ',' << fmt(cost) << ',' << fmt(g.mean) << '\n';
    out << "chi " << fmt(chi) << " total_cost " << fmt(cost) << " mean_gini " << fmt(g.mean)
        << (r.converged ? "" : " (iteration limit)") << "\n";
  }
  write_file(fs::path(o.out_dir) / "chi_sweep.csv", csv.str());
  return 0;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fairness-aware robust unit commitment with PV curtailment"};
  app.require_subcommand(1);

  auto add_solver_flags = [&](CLI::App* c) {
    c->add_option("--epsilon", o.epsilon, "Relative Benders gap")->check(CLI::PositiveNumber);
    c->add_option("--max-iters", o.max_iters, "Benders iteration limit")
        ->check(CLI::PositiveNumber);
    c->add_option("--mip-gap", o.mip_gap, "Relative MILP gap")->check(CLI::NonNegativeNumber);
    c->add_option("--theta-m", o.theta_m, "Balance dual bound (0 = 10 x max marginal cost)")
        ->check(CLI::NonNegativeNumber);
    c->add_option("--backend", o.backend, "MILP backend")->check(CLI::IsMember({"bundled"}));
    c->add_option("--out-dir", o.out_dir, "Directory for emitted files");
  };
  auto add_chi = [&](CLI::App* c) {
    c->add_option("--chi", o.chi, "Fairness weight")->check(CLI::NonNegativeNumber);
  };
  auto add_mc_flags = [&](CLI::App* c) {
    c->add_option("--samples", o.samples, "Monte Carlo samples M")->check(CLI::Range(2, 1 << 24));
    c->add_option("--seed", o.seed, "Monte Carlo seed");
    c->add_option("--workers", o.workers, "Monte Carlo threads")->check(CLI::Range(1, 256));
  };

  CLI::App* check = app.add_subcommand("check", "Validate an instance file");
  check->add_option("instance", o.instance)->required();

  CLI::App* solve = app.add_subcommand("solve", "Robust solve; writes result, plan and trace");
  solve->add_option("instance", o.instance)->required();
  add_solver_flags(solve);
  add_chi(solve);

  CLI::App* dispatch =
      app.add_subcommand("dispatch", "Dispatch a plan at the worst case or a given realization");
  dispatch->add_option("instance", o.instance)->required();
  dispatch->add_option("plan", o.plan, "Plan or result JSON")->required();
  dispatch->add_option("--realization", o.realization, "Realization JSON (default: worst case)");
  add_solver_flags(dispatch);
  add_chi(dispatch);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Solve at chi = 0 and --chi, sample Gini indices, test");
  evaluate->add_option("instance", o.instance)->required();
  evaluate->add_option("--label", o.label, "Case label; the fair case gets a 'fair' suffix");
  add_solver_flags(evaluate);
  add_chi(evaluate);
  add_mc_flags(evaluate);

  CLI::App* sweep = app.add_subcommand("sweep-chi", "Cost and mean Gini over a chi list");
  sweep->add_option("instance", o.instance)->required();
  sweep->add_option("--chi-list", o.chi_list, "Comma-separated chi values")->delimiter(',');
  add_solver_flags(sweep);
  add_mc_flags(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (solve->parsed()) return cmd_solve(o, out);
    if (dispatch->parsed()) return cmd_dispatch(o, out);
    if (evaluate->parsed()) return cmd_evaluate(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
  } catch (const InstanceError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace fairuc::cli
