#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fairuc/milp.hpp"
#include "fairuc/model.hpp"

namespace fairuc {

struct UcVariableMap {
  IdGrid on, start, stop, curtail;  // binaries
  IdGrid production, reserve;       // continuous
  std::vector<int> dev_pos, dev_neg;  // empty when chi == 0
};

struct CostBreakdown {
  double commitment = 0.0;   // no-load, start-up, shut-down
  double dispatch = 0.0;     // marginal cost of production
  double curtailment = 0.0;  // Σ Π r
  double fairness = 0.0;     // χ·L1 of delivered PV energy
  double total() const { return commitment + dispatch + curtailment + fairness; }
};

struct UcSolution {
  CommitmentPlan commitment;
  DispatchPlan dispatch;
  std::vector<double> dev_pos, dev_neg;
  double total_cost = 0.0;
  CostBreakdown breakdown;
  double gap = 0.0;
};

struct UcModel {
  MilpModel model;
  UcVariableMap vars;
};

/// Raised when a fixed-scenario problem has no feasible dispatch. `slot()` is
/// the first offending slot (1-based), or 0 when it could not be located.
class InfeasibleProblem : public std::runtime_error {
 public:
  InfeasibleProblem(const std::string& what, int slot)
      : std::runtime_error(what), slot_(slot) {}
  int slot() const { return slot_; }

 private:
  int slot_;
};

/// Unit commitment for the scenario (d̄ + ζ∘d̂, z̄ − η∘ẑ). With chi > 0 one
/// deviation pair per PV prices χ·|mean delivered energy − own energy|.
UcModel build_deterministic(const SystemInstance& instance,
                            const UncertaintyRealization& scenario,
                            double chi);

UcSolution solve_deterministic(const SystemInstance& instance,
                               const UncertaintyRealization& scenario,
                               double chi, const SolverConfig& config = {});

/// Cost components of a plan and dispatch; `dev` is mean-minus-own
/// delivered energy per PV.
CostBreakdown cost_breakdown(const SystemInstance& instance,
                             const CommitmentPlan& plan,
                             const DispatchPlan& dispatch,
                             const std::vector<double>& dev, double chi);

}  // namespace fairuc
