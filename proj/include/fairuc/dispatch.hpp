#pragma once

#include "fairuc/milp.hpp"
#include "fairuc/model.hpp"

namespace fairuc {

/// Balance violations are priced at `value_of_lost_load`; this is the LP
/// whose dual is the recourse inner problem with balance duals bounded by
/// the same value.
struct SecondStageOptions {
  double value_of_lost_load = 0.0;
};

/// Optimal dispatch for a fixed plan and realization. Throws
/// InfeasibleProblem (naming the first slot) when ramp, capacity or reserve
/// rows cannot be met.
DispatchPlan second_stage(const SystemInstance& instance,
                          const CommitmentPlan& plan,
                          const UncertaintyRealization& realization,
                          const SecondStageOptions& options,
                          const SolverConfig& config = {});

/// Certificate that no dispatch satisfies the non-balance rows for the
/// commitment: constant + Σ coef_on[i][t]·x[i][t] > 0 at the tested plan and
/// <= 0 at every plan admitting a dispatch.
struct FeasibilityCertificate {
  bool feasible = true;
  double constant = 0.0;
  Grid coef_on;
  double evaluate(const BinaryGrid& on) const;
};

FeasibilityCertificate dispatch_feasibility(const SystemInstance& instance,
                                            const CommitmentPlan& plan,
                                            const SolverConfig& config = {});

}  // namespace fairuc
