#pragma once

// Dense bounded-variable simplex used by the bundled MILP solver. Internal
// header; the public surface is fairuc::solve().

#include <vector>

#include "fairuc/milp.hpp"

namespace fairuc::detail {

/// min c'x  s.t.  row_lo <= A x <= row_hi,  col_lo <= x <= col_hi
struct LpProblem {
  int num_rows = 0;
  int num_cols = 0;
  std::vector<std::vector<Term>> rows;
  std::vector<double> cost;
  std::vector<double> col_lo, col_hi;
  std::vector<double> row_lo, row_hi;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct SimplexTolerances {
  double primal = 1e-9;
  double dual = 1e-9;
  double pivot = 1e-9;
};

class DenseSimplex {
 public:
  explicit DenseSimplex(const LpProblem& lp, SimplexTolerances tol = {});

  /// Cold start from the all-slack basis.
  LpStatus solve();
  /// Warm start after bound changes: dual simplex when the basis is still
  /// dual feasible, primal otherwise.
  LpStatus reoptimize();

  void set_col_bounds(int col, double lo, double hi);

  /// Compact restart point: basis plus all column values and bounds.
  struct Basis {
    std::vector<int> basis;
    std::vector<double> x, lo, hi;
  };
  Basis save_basis() const { return {basis_, x_, lo_, hi_}; }
  /// Rebuilds the tableau for a saved basis (requires a prior solve()).
  void load_basis(const Basis& b);

  double objective() const;
  std::vector<double> primal() const;
  double value(int col) const { return x_[static_cast<size_t>(col)]; }
  long iterations() const { return iterations_; }
  size_t memory_bytes() const;

 private:
  double& at(int row, int col) {
    return tab_[static_cast<size_t>(row) * ncols_ + col];
  }
  double at(int row, int col) const {
    return tab_[static_cast<size_t>(row) * ncols_ + col];
  }

  void load_slack_basis();
  void refactor();
  void recompute_basics();
  void recompute_duals();
  void pivot(int row, int col);

  bool primal_feasible() const;
  bool dual_feasible() const;
  double dual_infeasibility(int col) const;

  LpStatus primal_phase1();
  LpStatus primal_phase2();
  LpStatus dual_phase();
  LpStatus finish(LpStatus status);

  // Move nonbasic `col` by `step` in direction `dir`, then either flip its
  // bound (leave_row < 0) or pivot it into `leave_row`.
  void apply_step(int col, int dir, double step, int leave_row,
                  double leave_value);

  bool iteration_budget_left() const { return iterations_ < max_iterations_; }
  void note_step(double step);

  const LpProblem* lp_;
  SimplexTolerances tol_;
  int m_ = 0;
  int n_ = 0;
  int ncols_ = 0;
  std::vector<double> tab_;
  std::vector<double> x_, lo_, hi_, cost_, d_;
  std::vector<int> basis_;  // row -> column
  std::vector<int> where_;  // column -> row, or -1 when nonbasic
  std::vector<int> scratch_;
  long iterations_ = 0;
  long max_iterations_ = 0;
  int since_refactor_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
};

}  // namespace fairuc::detail
