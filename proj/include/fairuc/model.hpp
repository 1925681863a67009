#pragma once

#include <string>
#include <vector>

namespace fairuc {

/// Rows are units (generators, PVs, loads), columns are time slots.
using Grid = std::vector<std::vector<double>>;
using BinaryGrid = std::vector<std::vector<int>>;

struct GeneratorSpec {
  std::string name;
  // Per-slot series, length T.
  std::vector<double> no_load_cost;
  std::vector<double> startup_cost;
  std::vector<double> shutdown_cost;
  std::vector<double> marginal_cost;
  std::vector<double> ramp_up;
  std::vector<double> ramp_down;
  std::vector<double> reserve_cap;
  double p_max = 0.0;
  double p_min = 0.0;
  int min_up = 0;
  int min_down = 0;
  int initial_on = 0;
  double initial_output = 0.0;
};

struct PVSpec {
  std::string name;
  std::vector<double> expected_output;
  std::vector<double> deviation;
  std::vector<double> curtail_cost;
};

struct LoadSpec {
  std::string name;
  std::vector<double> expected_load;
  std::vector<double> deviation;
};

struct UncertaintyBudget {
  std::vector<double> demand_budget;
  std::vector<double> pv_budget;
};

struct SystemInstance {
  int horizon = 0;
  std::vector<GeneratorSpec> generators;
  std::vector<PVSpec> pvs;
  std::vector<LoadSpec> loads;
  std::vector<double> system_reserve;
  UncertaintyBudget budgets;

  int num_generators() const { return static_cast<int>(generators.size()); }
  int num_pvs() const { return static_cast<int>(pvs.size()); }
  int num_loads() const { return static_cast<int>(loads.size()); }
  double max_marginal_cost() const;
};

struct CommitmentPlan {
  BinaryGrid on;       // N_g x T
  BinaryGrid start;    // N_g x T
  BinaryGrid stop;     // N_g x T
  BinaryGrid curtail;  // N_p x T
};

struct DispatchPlan {
  Grid production;  // N_g x T
  Grid reserve;     // N_g x T
  // Balance violations priced at the value of lost load; zero whenever the
  // realized scenario can be served exactly.
  std::vector<double> unserved;
  std::vector<double> spilled;
  double cost = 0.0;
};

struct UncertaintyRealization {
  Grid demand_dev;  // N_d x T, in [0,1]
  Grid pv_dev;      // N_p x T, in [0,1]
};

struct RealizedScenario {
  Grid demand;  // N_d x T
  Grid pv;      // N_p x T, zero where curtailed
};

struct ValidationIssue {
  std::string path;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

/// Every type invariant. With `require_units` false, instances without PVs
/// or loads are accepted (the builders handle empty index sets).
ValidationReport validate_instance(const SystemInstance& instance,
                                   bool require_units = true);

/// Builder precondition: validate_instance without the unit-count rule.
/// Throws std::invalid_argument listing every violation.
void require_valid(const SystemInstance& instance);

UncertaintyRealization zero_realization(const SystemInstance& instance);
BinaryGrid no_curtailment(const SystemInstance& instance);

/// Realized demand d̄ + ζ∘d̂ and PV (z̄ − η∘ẑ)∘(1−r).
RealizedScenario apply_uncertainty(const SystemInstance& instance,
                                   const UncertaintyRealization& real,
                                   const BinaryGrid& curtail);

/// Per-slot budget and range check of a realization.
ValidationReport check_realization(const SystemInstance& instance,
                                   const UncertaintyRealization& real);

/// Start/stop logic and min-up/min-down windows, with slot 1 anchored to
/// the initial state.
ValidationReport check_commitment(const SystemInstance& instance,
                                  const CommitmentPlan& plan);

/// Throws std::invalid_argument unless every plan grid is sized to the
/// instance.
void require_plan_shape(const SystemInstance& instance,
                        const CommitmentPlan& plan);

/// All-off plan with consistent stop flags (feasible only when every unit's
/// min-down window allows it).
CommitmentPlan empty_plan(const SystemInstance& instance);

}  // namespace fairuc
