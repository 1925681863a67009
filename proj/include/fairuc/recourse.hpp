#pragma once

#include <stdexcept>
#include <vector>

#include "fairuc/milp.hpp"
#include "fairuc/model.hpp"

namespace fairuc {

struct BigMConfig {
  /// Upper bound on the balance duals; 0 selects default_theta().
  double theta_m = 0.0;
};

/// 10 × the largest marginal cost (at least 1).
double default_theta(const SystemInstance& instance);

/// theta_m after defaulting; throws std::invalid_argument when it is below
/// the instance's largest marginal cost.
double resolve_theta(const SystemInstance& instance, const BigMConfig& bigm);

struct RecourseDuals {
  std::vector<double> balance_pos, balance_neg;  // per slot
  Grid ramp_up, ramp_down;                       // per generator, slot
  Grid cap_up, cap_low;                          // p+q <= pmax, p+q >= pmin·x
  Grid gen_up, gen_low;                          // pmin·x <= p <= pmax·x
  std::vector<double> reserve;                   // Σ q >= requirement
  Grid reserve_cap;                              // q <= cap
};

/// Linearization products: demand_pos = α⁺·ζ, demand_neg = α⁻·ζ (per load),
/// pv_pos = α⁺·η, pv_neg = α⁻·η (per PV).
struct RecourseProducts {
  Grid demand_pos, demand_neg, pv_pos, pv_neg;
};

struct RecourseSolution {
  UncertaintyRealization worst_case;  // binary
  RecourseDuals duals;
  RecourseProducts products;
  std::vector<double> dev_pos, dev_neg;
  /// Worst-case dispatch cost plus χ·L1, and the solver's proven upper bound.
  double value = 0.0;
  double bound = 0.0;
  double theta_m = 0.0;
};

struct RecourseVariableMap {
  std::vector<int> balance_pos, balance_neg, balance_sign, reserve;
  IdGrid ramp_up, ramp_down, cap_up, cap_low, gen_up, gen_low, reserve_cap;
  IdGrid zeta, eta;
  IdGrid demand_pos, demand_neg, pv_pos, pv_neg;
  std::vector<int> dev_pos, dev_neg, dev_sign;
};

struct RecourseModel {
  MilpModel model;
  RecourseVariableMap vars;
  double theta_m = 0.0;
};

/// The dual dispatch problem for fixed commitment is unbounded: ramp,
/// capacity or reserve rows admit no dispatch at all.
class RecourseUnbounded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// max over budget-feasible binary (ζ, η) and dual-feasible multipliers of
/// the dualized dispatch cost plus χ·Σ(a⁺ + a⁻), with big-M products for
/// the dual × indicator terms.
RecourseModel build_recourse(const SystemInstance& instance,
                             const CommitmentPlan& plan, double chi,
                             const BigMConfig& bigm = {});

RecourseSolution solve_recourse(const SystemInstance& instance,
                                const CommitmentPlan& plan, double chi,
                                const BigMConfig& bigm = {},
                                const SolverConfig& config = {});

/// Largest |product − dual·indicator| over all four product families.
double envelope_residual(const RecourseSolution& rec);

/// Second-stage value at a fixed realization: soft-balance dispatch cost
/// plus χ·L1 of delivered PV energy.
double realization_value(const SystemInstance& instance,
                         const CommitmentPlan& plan,
                         const UncertaintyRealization& realization, double chi,
                         double theta_m, const SolverConfig& config = {});

/// Delivered PV energy per unit under curtailment and realization.
std::vector<double> delivered_energy(const SystemInstance& instance,
                                     const BinaryGrid& curtail,
                                     const UncertaintyRealization& realization);

}  // namespace fairuc
