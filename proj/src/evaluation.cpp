#include "fairuc/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "fairuc/fairness.hpp"

namespace fairuc {

namespace {

// Shortest round-trip representation keeps the CSVs byte-stable.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Grid simulate_realized_outputs(const SystemInstance& instance,
                               std::uint64_t seed, std::uint64_t sample) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sample),
                    static_cast<std::uint32_t>(sample >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> unit(0.0, 1.0);
  const int T = instance.horizon;
  Grid z(instance.pvs.size(), std::vector<double>(T, 0.0));
  for (size_t j = 0; j < instance.pvs.size(); ++j) {
    const PVSpec& pv = instance.pvs[j];
    for (int t = 0; t < T; ++t) {
      const double noise = unit(rng);
      const double sigma = pv.deviation[t] / 3.0;
      if (sigma < 0.0) throw std::invalid_argument("negative PV deviation");
      z[j][t] = std::max(0.0, pv.expected_output[t] + sigma * noise);
    }
  }
  return z;
}

GiniSampleSet run_monte_carlo(const SystemInstance& instance,
                              const CommitmentPlan& plan, int samples,
                              std::uint64_t seed, int workers,
                              const std::string& label) {
  if (samples < 2) throw std::invalid_argument("Monte Carlo needs at least 2 samples");
  require_plan_shape(instance, plan);
  GiniSampleSet out;
  out.label = label;
  out.seed = seed;
  out.samples.assign(samples, 0.0);

  auto run = [&](int k) {
    const Grid z = simulate_realized_outputs(instance, seed, static_cast<std::uint64_t>(k));
    out.samples[k] = gini_index(total_power(z, plan.curtail));
  };

  workers = std::clamp(workers, 1, samples);
  if (workers == 1) {
    for (int k = 0; k < samples; ++k) run(k);
  } else {
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int k = w; k < samples; k += workers) run(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  out.mean = mean(out.samples);
  out.std = sample_std(out.samples);
  return out;
}

PairReport compare_pair(const SystemInstance& instance, const BendersConfig& config,
                        const EvaluationConfig& eval) {
  PairReport r;
  BendersConfig base = config;
  base.chi = 0.0;
  r.base = solve_robust(instance, base);
  r.fair = solve_robust(instance, config);
  r.base_gini = run_monte_carlo(instance, r.base.commitment, eval.samples, eval.seed,
                                eval.workers, eval.label);
  r.fair_gini = run_monte_carlo(instance, r.fair.commitment, eval.samples, eval.seed,
                                eval.workers, eval.label + "fair");
  r.normality_base = shapiro_wilk(r.base_gini.samples);
  r.normality_fair = shapiro_wilk(r.fair_gini.samples);
  r.variance = f_test(r.base_gini.samples, r.fair_gini.samples);
  r.means = t_test(r.base_gini.samples, r.fair_gini.samples);
  return r;
}

void write_samples_csv(std::ostream& out, const std::vector<GiniSampleSet>& sets) {
  out << "case,k,gini\n";
  for (const auto& s : sets) {
    for (int k = 0; k < s.size(); ++k) out << s.label << ',' << k << ',' << fmt(s.samples[k]) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<GiniSampleSet>& sets) {
  out << "case,mean,std,M,seed\n";
  for (const auto& s : sets) {
    out << s.label << ',' << fmt(s.mean) << ',' << fmt(s.std) << ',' << s.size() << ','
        << s.seed << '\n';
  }
}

void write_tests_csv(std::ostream& out, const PairReport& report) {
  out << "test,statistic,p\n";
  auto row = [&](const std::string& name, const TestResult& t) {
    out << name << ',' << fmt(t.statistic) << ',' << fmt(t.p_value) << '\n';
  };
  row("shapiro_wilk:" + report.base_gini.label, report.normality_base);
  row("shapiro_wilk:" + report.fair_gini.label, report.normality_fair);
  row("f_test", report.variance);
  row("t_test", report.means);
}

}  // namespace fairuc
