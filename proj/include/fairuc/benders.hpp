#pragma once

#include <iosfwd>
#include <vector>

#include "fairuc/dispatch.hpp"
#include "fairuc/milp.hpp"
#include "fairuc/model.hpp"
#include "fairuc/recourse.hpp"

namespace fairuc {

struct BendersConfig {
  double epsilon = 1e-3;
  int max_iterations = 30;
  double chi = 100.0;
  BigMConfig bigm;
  SolverConfig solver;
};

/// Optimality cut: w >= rhs(x, r). Feasibility cut: rhs(x, r) <= 0.
struct Cut {
  enum class Kind { Optimality, Feasibility };
  Kind kind = Kind::Optimality;
  int iteration = 0;
  double constant = 0.0;
  Grid coef_on;       // N_g x T
  Grid coef_curtail;  // N_p x T
  UncertaintyRealization realization;  // worst case behind an optimality cut
  CommitmentPlan plan;                 // master plan the cut was generated at

  double rhs(const CommitmentPlan& plan) const;
};

struct TraceRow {
  int iteration = 0;
  double lower = 0.0;
  double upper = 0.0;  // +inf when the plan admitted no dispatch
  double best_upper = 0.0;
  double gap = 0.0;
  int cuts = 0;
  Cut::Kind kind = Cut::Kind::Optimality;
  double seconds = 0.0;  // cumulative wall time
  double master_seconds = 0.0;
  double subproblem_seconds = 0.0;
};

enum class BendersStatus { Converged, IterationLimit };

struct BendersTrace {
  std::vector<TraceRow> rows;
  BendersStatus status = BendersStatus::IterationLimit;
  /// iteration,lower,upper,best_upper,gap,cuts,kind,seconds,master_seconds,
  /// subproblem_seconds
  void write_csv(std::ostream& out) const;
};

struct RobustResult {
  CommitmentPlan commitment;
  double value = 0.0;        // best upper bound
  double lower_bound = 0.0;  // last master bound
  bool converged = false;
  BendersTrace trace;
  UncertaintyRealization worst_case;
  DispatchPlan dispatch;
  std::vector<Cut> cuts;
  double theta_m = 0.0;
};

struct MasterModel {
  MilpModel model;
  IdGrid on, start, stop, curtail;
  int w = -1;
};

/// Commitment cost + Σ Π r + w over the start/stop and min-up/min-down
/// rows, w >= w_lower, one row per cut.
MasterModel build_master(const SystemInstance& instance,
                         const std::vector<Cut>& cuts, double w_lower = 0.0);

/// Lower bound on any second-stage value (0 unless marginal costs are
/// negative).
double recourse_floor(const SystemInstance& instance);

/// Affine under-estimator of the recourse at every plan, tight at `plan`.
Cut make_cut(const SystemInstance& instance, const CommitmentPlan& plan,
             const RecourseSolution& rec, double chi, int iteration = 0);

Cut make_feasibility_cut(const FeasibilityCertificate& cert,
                         const SystemInstance& instance, int iteration = 0);

/// F, S, G and curtailment costs of a plan.
double first_stage_cost(const SystemInstance& instance,
                        const CommitmentPlan& plan);

RobustResult solve_robust(const SystemInstance& instance,
                          const BendersConfig& config = {});

/// Optimal dispatch for the plan under the realization, with balance
/// violations priced at theta_m (default_theta when bigm.theta_m is 0).
DispatchPlan final_dispatch(const SystemInstance& instance,
                            const CommitmentPlan& plan,
                            const UncertaintyRealization& realization,
                            const BigMConfig& bigm = {},
                            const SolverConfig& config = {});

}  // namespace fairuc
