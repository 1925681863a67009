#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairuc/benders.hpp"
#include "fairuc/model.hpp"
#include "fairuc/stats.hpp"

namespace fairuc {

struct GiniSampleSet {
  std::string label;
  std::uint64_t seed = 0;
  std::vector<double> samples;
  double mean = 0.0;
  double std = 0.0;

  int size() const { return static_cast<int>(samples.size()); }
};

/// z_R = max(0, z̄ + N(0, (ẑ/3)²)) for every PV and slot. Sample k draws from
/// its own generator seeded with (seed, k), PV-major then slot order, so a
/// sample never depends on which worker produced it.
Grid simulate_realized_outputs(const SystemInstance& instance,
                               std::uint64_t seed, std::uint64_t sample);

/// M Gini samples of the curtailment-masked realized PV energy. Throws
/// GiniUndefined when a sample delivers no energy at all. The result does not
/// depend on `workers`.
GiniSampleSet run_monte_carlo(const SystemInstance& instance,
                              const CommitmentPlan& plan, int samples,
                              std::uint64_t seed, int workers = 1,
                              const std::string& label = "");

struct PairReport {
  RobustResult base;  // χ = 0
  RobustResult fair;  // χ > 0
  GiniSampleSet base_gini;
  GiniSampleSet fair_gini;
  TestResult normality_base;
  TestResult normality_fair;
  TestResult variance;
  TestResult means;
};

struct EvaluationConfig {
  int samples = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string label = "RP";  // the fair case is labelled label + "fair"
};

/// Solves at χ = 0 and at config.chi, samples both plans and runs the
/// normality, variance and mean tests on the two Gini sets.
PairReport compare_pair(const SystemInstance& instance,
                        const BendersConfig& config,
                        const EvaluationConfig& eval = {});

/// case,k,gini
void write_samples_csv(std::ostream& out, const std::vector<GiniSampleSet>& sets);
/// case,mean,std,M,seed
void write_summary_csv(std::ostream& out, const std::vector<GiniSampleSet>& sets);
/// test,statistic,p
void write_tests_csv(std::ostream& out, const PairReport& report);

}  // namespace fairuc
