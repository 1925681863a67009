#pragma once

// Row emitters shared by the deterministic UC, the robust master, and the
// second-stage dispatch LP.

#include <string>
#include <vector>

#include "fairuc/milp.hpp"
#include "fairuc/model.hpp"

namespace fairuc::detail {

/// A binary that is either a model variable (var >= 0) or a fixed value.
struct BinRef {
  int var = -1;
  double fixed = 0.0;
};
using RefGrid = std::vector<std::vector<BinRef>>;

struct CommitmentBlock {
  IdGrid on, start, stop, curtail;
};

/// Commitment binaries with start/stop logic and min-up/min-down windows
/// (slot 1 anchored to the initial state). Adds F, S, G and curtailment
/// costs to the objective.
CommitmentBlock add_commitment(MilpModel& m, const SystemInstance& in);

RefGrid as_refs(const IdGrid& ids);
RefGrid fixed_refs(const BinaryGrid& values);

struct DispatchOptions {
  /// Balance shortfall/surplus columns priced at `balance_penalty`.
  bool soft_balance = false;
  double balance_penalty = 0.0;
  /// Price production at marginal cost. Off for pure feasibility models.
  bool price_production = true;
  /// Elastic columns (cost 1) on every non-balance row, for diagnostics.
  bool elastic = false;
  /// Elastic column on the balance rows as well (hard-balance diagnostics).
  bool elastic_balance = false;
};

struct DispatchBlock {
  IdGrid p, q;
  std::vector<int> unserved, spilled;  // empty unless soft_balance
  std::vector<int> balance_rows;
  // (elastic column, slot) pairs
  std::vector<std::pair<int, int>> elastic;
};

/// Second-stage rows for realized demand totals `demand[t]` and available
/// PV output `pv[l][t]` (before curtailment).
DispatchBlock add_dispatch(MilpModel& m, const SystemInstance& in,
                           const RefGrid& on, const RefGrid& curtail,
                           const std::vector<double>& demand, const Grid& pv,
                           const DispatchOptions& opt);

/// Σ_j realized demand per slot.
std::vector<double> demand_totals(const SystemInstance& in,
                                  const UncertaintyRealization& real);
/// z̄ − η∘ẑ per PV and slot.
Grid pv_available(const SystemInstance& in, const UncertaintyRealization& real);

std::string label(const char* base, int a, int t);

}  // namespace fairuc::detail
