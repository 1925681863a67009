#include "simplex.hpp"

#include <algorithm>
#include <cmath>

namespace fairuc::detail {

namespace {

constexpr int kBlandAfterDegenerate = 50;
constexpr double kDropTol = 1e-14;
constexpr double kSingularTol = 1e-11;

bool finite(double v) { return std::isfinite(v); }

}  // namespace

DenseSimplex::DenseSimplex(const LpProblem& lp, SimplexTolerances tol)
    : lp_(&lp), tol_(tol) {
  m_ = lp.num_rows;
  n_ = lp.num_cols;
  ncols_ = n_ + m_;
  lo_.resize(ncols_);
  hi_.resize(ncols_);
  cost_.assign(ncols_, 0.0);
  for (int j = 0; j < n_; ++j) {
    lo_[j] = lp.col_lo[j];
    hi_[j] = lp.col_hi[j];
    cost_[j] = lp.cost[j];
  }
  for (int i = 0; i < m_; ++i) {
    lo_[n_ + i] = lp.row_lo[i];
    hi_[n_ + i] = lp.row_hi[i];
  }
  x_.assign(ncols_, 0.0);
  d_.assign(ncols_, 0.0);
  basis_.assign(m_, -1);
  where_.assign(ncols_, -1);
  max_iterations_ = 200L * (m_ + n_) + 10000;
  scratch_.reserve(ncols_);
}

size_t DenseSimplex::memory_bytes() const {
  return tab_.size() * sizeof(double) + 5 * x_.size() * sizeof(double);
}

void DenseSimplex::set_col_bounds(int col, double lo, double hi) {
  lo_[col] = lo;
  hi_[col] = hi;
  if (where_[col] >= 0 || tab_.empty()) {
    if (tab_.empty()) x_[col] = finite(lo) ? lo : (finite(hi) ? hi : 0.0);
    return;
  }
  const double old = x_[col];
  double now = old;
  if (old > hi || (old >= hi && finite(hi))) now = hi;
  if (old < lo || !finite(now)) now = finite(lo) ? lo : (finite(hi) ? hi : 0.0);
  if (!(now >= lo && now <= hi)) now = finite(lo) ? lo : hi;
  const double delta = now - old;
  if (delta != 0.0) {
    for (int i = 0; i < m_; ++i) {
      const double t = at(i, col);
      if (t != 0.0) x_[basis_[i]] -= t * delta;
    }
    x_[col] = now;
  }
}

void DenseSimplex::load_basis(const Basis& b) {
  basis_ = b.basis;
  x_ = b.x;
  lo_ = b.lo;
  hi_ = b.hi;
  std::fill(where_.begin(), where_.end(), -1);
  for (int i = 0; i < m_; ++i) where_[basis_[i]] = i;
  refactor();
}

void DenseSimplex::load_slack_basis() {
  tab_.assign(static_cast<size_t>(m_) * ncols_, 0.0);
  for (int i = 0; i < m_; ++i) {
    for (const Term& t : lp_->rows[i]) at(i, t.var) -= t.coef;
    at(i, n_ + i) = 1.0;
  }
  std::fill(where_.begin(), where_.end(), -1);
  for (int i = 0; i < m_; ++i) {
    basis_[i] = n_ + i;
    where_[n_ + i] = i;
  }
  since_refactor_ = 0;
  recompute_basics();
  recompute_duals();
}

void DenseSimplex::recompute_basics() {
  for (int i = 0; i < m_; ++i) {
    const double* row = &tab_[static_cast<size_t>(i) * ncols_];
    double s = 0.0;
    for (int j = 0; j < ncols_; ++j) {
      if (where_[j] < 0 && x_[j] != 0.0 && row[j] != 0.0) s -= row[j] * x_[j];
    }
    x_[basis_[i]] = s;
  }
}

void DenseSimplex::recompute_duals() {
  for (int j = 0; j < ncols_; ++j) d_[j] = cost_[j];
  for (int i = 0; i < m_; ++i) {
    const double cb = cost_[basis_[i]];
    if (cb == 0.0) continue;
    const double* row = &tab_[static_cast<size_t>(i) * ncols_];
    for (int j = 0; j < ncols_; ++j) {
      if (row[j] != 0.0) d_[j] -= cb * row[j];
    }
  }
  for (int i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
}

void DenseSimplex::pivot(int r, int q) {
  double* pr = &tab_[static_cast<size_t>(r) * ncols_];
  const double inv = 1.0 / pr[q];
  scratch_.clear();
  for (int j = 0; j < ncols_; ++j) {
    if (pr[j] == 0.0) continue;
    pr[j] *= inv;
    if (std::abs(pr[j]) < kDropTol) {
      pr[j] = 0.0;
    } else {
      scratch_.push_back(j);
    }
  }
  pr[q] = 1.0;
  if (std::find(scratch_.begin(), scratch_.end(), q) == scratch_.end()) {
    scratch_.push_back(q);
  }
  for (int i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* pi = &tab_[static_cast<size_t>(i) * ncols_];
    const double f = pi[q];
    if (f == 0.0) continue;
    for (int j : scratch_) {
      double v = pi[j] - f * pr[j];
      pi[j] = std::abs(v) < kDropTol ? 0.0 : v;
    }
    pi[q] = 0.0;
  }
  const double f = d_[q];
  if (f != 0.0) {
    for (int j : scratch_) d_[j] -= f * pr[j];
  }
  d_[q] = 0.0;
  where_[basis_[r]] = -1;
  basis_[r] = q;
  where_[q] = r;
  ++since_refactor_;
}

void DenseSimplex::refactor() {
  std::vector<char> was_basic(ncols_, 0);
  for (int c : basis_) was_basic[c] = 1;

  tab_.assign(static_cast<size_t>(m_) * ncols_, 0.0);
  for (int i = 0; i < m_; ++i) {
    for (const Term& t : lp_->rows[i]) at(i, t.var) -= t.coef;
    at(i, n_ + i) = 1.0;
  }
  std::fill(where_.begin(), where_.end(), -1);
  std::vector<char> row_used(m_, 0);
  for (int i = 0; i < m_; ++i) {
    if (was_basic[n_ + i]) {
      basis_[i] = n_ + i;
      where_[n_ + i] = i;
      row_used[i] = 1;
    } else {
      basis_[i] = -1;
    }
  }
  for (int q = 0; q < n_; ++q) {
    if (!was_basic[q]) continue;
    int best = -1;
    double best_abs = kSingularTol;
    for (int i = 0; i < m_; ++i) {
      if (row_used[i]) continue;
      const double a = std::abs(at(i, q));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (best < 0) {
      // Singular basis column: drop it to a bound, a slack takes its place.
      x_[q] = finite(lo_[q]) ? lo_[q] : (finite(hi_[q]) ? hi_[q] : 0.0);
      continue;
    }
    // Temporarily mark the slack of `best` as basic in that row so pivot()
    // has a valid leaving column.
    basis_[best] = n_ + best;
    where_[n_ + best] = best;
    pivot(best, q);
    row_used[best] = 1;
  }
  for (int i = 0; i < m_; ++i) {
    if (!row_used[i]) {
      basis_[i] = n_ + i;
      where_[n_ + i] = i;
    }
  }
  for (int j = 0; j < ncols_; ++j) {
    if (where_[j] < 0) {
      // Nonbasic values must sit on a bound (or at zero when free).
      if (x_[j] < lo_[j]) x_[j] = lo_[j];
      if (x_[j] > hi_[j]) x_[j] = hi_[j];
      if (finite(lo_[j]) && finite(hi_[j]) && x_[j] != lo_[j] &&
          x_[j] != hi_[j]) {
        x_[j] = (x_[j] - lo_[j] <= hi_[j] - x_[j]) ? lo_[j] : hi_[j];
      } else if (finite(lo_[j]) && !finite(hi_[j])) {
        x_[j] = lo_[j];
      } else if (!finite(lo_[j]) && finite(hi_[j])) {
        x_[j] = hi_[j];
      }
    }
  }
  since_refactor_ = 0;
  recompute_basics();
  recompute_duals();
}

bool DenseSimplex::primal_feasible() const {
  for (int i = 0; i < m_; ++i) {
    const int b = basis_[i];
    if (x_[b] < lo_[b] - tol_.primal * (1.0 + std::abs(lo_[b]))) return false;
    if (x_[b] > hi_[b] + tol_.primal * (1.0 + std::abs(hi_[b]))) return false;
  }
  return true;
}

double DenseSimplex::dual_infeasibility(int j) const {
  if (where_[j] >= 0 || lo_[j] == hi_[j]) return 0.0;
  const double dj = d_[j];
  const double dtol = tol_.dual * (1.0 + std::abs(cost_[j]));
  const bool at_lo = x_[j] == lo_[j];
  const bool at_hi = x_[j] == hi_[j];
  if (at_lo) return dj < -dtol ? -dj : 0.0;
  if (at_hi) return dj > dtol ? dj : 0.0;
  return std::abs(dj) > dtol ? std::abs(dj) : 0.0;
}

bool DenseSimplex::dual_feasible() const {
  for (int j = 0; j < ncols_; ++j) {
    if (dual_infeasibility(j) > 0.0) return false;
  }
  return true;
}

void DenseSimplex::note_step(double step) {
  if (step <= 1e-12) {
    if (++degenerate_run_ > kBlandAfterDegenerate) bland_ = true;
  } else {
    degenerate_run_ = 0;
    bland_ = false;
  }
}

void DenseSimplex::apply_step(int q, int dir, double step, int leave_row,
                              double leave_value) {
  if (step != 0.0) {
    const double delta = dir * step;
    for (int i = 0; i < m_; ++i) {
      const double t = at(i, q);
      if (t != 0.0) x_[basis_[i]] -= t * delta;
    }
    x_[q] += delta;
  }
  ++iterations_;
  note_step(step);
  if (leave_row < 0) {
    x_[q] = dir > 0 ? hi_[q] : lo_[q];
    return;
  }
  const int leaving = basis_[leave_row];
  pivot(leave_row, q);
  x_[leaving] = leave_value;
}

LpStatus DenseSimplex::primal_phase1() {
  std::vector<double> w(m_), d1(ncols_);
  const int refactor_every = std::max(200, 2 * m_);
  while (true) {
    if (since_refactor_ >= refactor_every) refactor();
    bool any = false;
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[i];
      if (x_[b] < lo_[b] - tol_.primal * (1.0 + std::abs(lo_[b]))) {
        w[i] = -1.0;
        any = true;
      } else if (x_[b] > hi_[b] + tol_.primal * (1.0 + std::abs(hi_[b]))) {
        w[i] = 1.0;
        any = true;
      } else {
        w[i] = 0.0;
      }
    }
    if (!any) return LpStatus::Optimal;
    if (!iteration_budget_left()) return LpStatus::IterationLimit;

    std::fill(d1.begin(), d1.end(), 0.0);
    for (int i = 0; i < m_; ++i) {
      if (w[i] == 0.0) continue;
      const double* row = &tab_[static_cast<size_t>(i) * ncols_];
      for (int j = 0; j < ncols_; ++j) {
        if (row[j] != 0.0) d1[j] -= w[i] * row[j];
      }
    }

    int q = -1, qdir = 0;
    double best = 0.0;
    for (int j = 0; j < ncols_; ++j) {
      if (where_[j] >= 0 || lo_[j] == hi_[j]) continue;
      const double dj = d1[j];
      int dir = 0;
      if (x_[j] <= lo_[j]) {
        if (dj < -tol_.dual) dir = 1;
      } else if (x_[j] >= hi_[j]) {
        if (dj > tol_.dual) dir = -1;
      } else if (dj < -tol_.dual) {
        dir = 1;
      } else if (dj > tol_.dual) {
        dir = -1;
      }
      if (dir == 0) continue;
      if (bland_) {
        q = j;
        qdir = dir;
        break;
      }
      if (std::abs(dj) > best) {
        best = std::abs(dj);
        q = j;
        qdir = dir;
      }
    }
    if (q < 0) return LpStatus::Infeasible;

    // Ratio test: stop at the first breakpoint of the infeasibility sum.
    double step = (finite(lo_[q]) && finite(hi_[q])) ? hi_[q] - lo_[q] : kInf;
    int leave = -1;
    double leave_value = 0.0;
    double leave_abs = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double t = at(i, q);
      if (std::abs(t) <= tol_.pivot) continue;
      const double a = -t * qdir;
      const int b = basis_[i];
      double lim = kInf, target = 0.0;
      if (w[i] < 0.0) {
        if (a > 0.0) {
          lim = (lo_[b] - x_[b]) / a;
          target = lo_[b];
        }
      } else if (w[i] > 0.0) {
        if (a < 0.0) {
          lim = (x_[b] - hi_[b]) / -a;
          target = hi_[b];
        }
      } else if (a > 0.0) {
        if (finite(hi_[b])) {
          lim = std::max(0.0, hi_[b] - x_[b]) / a;
          target = hi_[b];
        }
      } else if (finite(lo_[b])) {
        lim = std::max(0.0, x_[b] - lo_[b]) / -a;
        target = lo_[b];
      }
      if (!finite(lim)) continue;
      const bool better =
          lim < step - 1e-12 ||
          (lim <= step + 1e-12 && leave >= 0 &&
           (bland_ ? b < basis_[leave] : std::abs(a) > leave_abs));
      if (better || (leave < 0 && lim <= step)) {
        step = lim;
        leave = i;
        leave_value = target;
        leave_abs = std::abs(a);
      }
    }
    if (leave < 0 && !finite(step)) {
      // Unbounded ray that reduces infeasibility cannot exist; treat as
      // numerical trouble and rebuild the tableau.
      refactor();
      return LpStatus::Infeasible;
    }
    apply_step(q, qdir, step, leave, leave_value);
  }
}

LpStatus DenseSimplex::primal_phase2() {
  const int refactor_every = std::max(200, 2 * m_);
  while (true) {
    if (since_refactor_ >= refactor_every) refactor();
    if (!iteration_budget_left()) return LpStatus::IterationLimit;

    int q = -1, qdir = 0;
    double best = 0.0;
    for (int j = 0; j < ncols_; ++j) {
      if (where_[j] >= 0 || lo_[j] == hi_[j]) continue;
      const double dj = d_[j];
      const double dtol = tol_.dual * (1.0 + std::abs(cost_[j]));
      int dir = 0;
      if (x_[j] <= lo_[j]) {
        if (dj < -dtol) dir = 1;
      } else if (x_[j] >= hi_[j]) {
        if (dj > dtol) dir = -1;
      } else if (dj < -dtol) {
        dir = 1;
      } else if (dj > dtol) {
        dir = -1;
      }
      if (dir == 0) continue;
      if (bland_) {
        q = j;
        qdir = dir;
        break;
      }
      if (std::abs(dj) > best) {
        best = std::abs(dj);
        q = j;
        qdir = dir;
      }
    }
    if (q < 0) return LpStatus::Optimal;

    const double range =
        (finite(lo_[q]) && finite(hi_[q])) ? hi_[q] - lo_[q] : kInf;

    // Harris two-pass ratio test.
    double relaxed = kInf;
    for (int i = 0; i < m_; ++i) {
      const double t = at(i, q);
      if (std::abs(t) <= tol_.pivot) continue;
      const double a = -t * qdir;
      const int b = basis_[i];
      if (a > 0.0 && finite(hi_[b])) {
        relaxed = std::min(
            relaxed,
            (hi_[b] - x_[b] + tol_.primal * (1.0 + std::abs(hi_[b]))) / a);
      } else if (a < 0.0 && finite(lo_[b])) {
        relaxed = std::min(
            relaxed,
            (x_[b] - lo_[b] + tol_.primal * (1.0 + std::abs(lo_[b]))) / -a);
      }
    }
    int leave = -1;
    double leave_value = 0.0, step = kInf, leave_abs = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double t = at(i, q);
      if (std::abs(t) <= tol_.pivot) continue;
      const double a = -t * qdir;
      const int b = basis_[i];
      double exact, target;
      if (a > 0.0 && finite(hi_[b])) {
        exact = (hi_[b] - x_[b]) / a;
        target = hi_[b];
      } else if (a < 0.0 && finite(lo_[b])) {
        exact = (x_[b] - lo_[b]) / -a;
        target = lo_[b];
      } else {
        continue;
      }
      if (bland_) {
        if (exact < step - 1e-12 ||
            (exact <= step + 1e-12 && leave >= 0 && b < basis_[leave])) {
          step = exact;
          leave = i;
          leave_value = target;
        }
      } else if (exact <= relaxed && std::abs(a) > leave_abs) {
        leave_abs = std::abs(a);
        step = exact;
        leave = i;
        leave_value = target;
      }
    }
    if (leave >= 0) step = std::max(0.0, step);
    if (leave < 0 || range <= step) {
      if (!finite(range)) return LpStatus::Unbounded;
      apply_step(q, qdir, range, -1, 0.0);
      continue;
    }
    apply_step(q, qdir, step, leave, leave_value);
  }
}

LpStatus DenseSimplex::dual_phase() {
  const int refactor_every = std::max(200, 2 * m_);
  while (true) {
    if (since_refactor_ >= refactor_every) refactor();
    if (!iteration_budget_left()) return LpStatus::IterationLimit;

    int r = -1;
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[i];
      double v = 0.0;
      if (x_[b] < lo_[b] - tol_.primal * (1.0 + std::abs(lo_[b]))) {
        v = lo_[b] - x_[b];
      } else if (x_[b] > hi_[b] + tol_.primal * (1.0 + std::abs(hi_[b]))) {
        v = x_[b] - hi_[b];
      }
      if (v > worst) {
        worst = v;
        r = i;
      }
    }
    if (r < 0) return LpStatus::Optimal;

    const int b = basis_[r];
    const bool raise = x_[b] < lo_[b];
    const double target = raise ? lo_[b] : hi_[b];
    // x_b moves by -T_rj * dx_j; we need that to have sign `raise`.
    double relaxed = kInf;
    for (int j = 0; j < ncols_; ++j) {
      if (where_[j] >= 0 || lo_[j] == hi_[j]) continue;
      const double t = at(r, j);
      if (std::abs(t) <= tol_.pivot) continue;
      const bool can_up = x_[j] < hi_[j];
      const bool can_down = x_[j] > lo_[j];
      // Direction of x_j that moves x_b the right way.
      const int dir = ((raise ? -t : t) > 0.0) ? 1 : -1;
      if ((dir > 0 && !can_up) || (dir < 0 && !can_down)) continue;
      if (dir > 0 && x_[j] != lo_[j] && finite(lo_[j])) continue;
      if (dir < 0 && x_[j] != hi_[j] && finite(hi_[j])) continue;
      const double dtol = tol_.dual * (1.0 + std::abs(cost_[j]));
      relaxed = std::min(relaxed, (std::abs(d_[j]) + dtol) / std::abs(t));
    }
    int q = -1;
    double q_abs = 0.0;
    for (int j = 0; j < ncols_; ++j) {
      if (where_[j] >= 0 || lo_[j] == hi_[j]) continue;
      const double t = at(r, j);
      if (std::abs(t) <= tol_.pivot) continue;
      const bool can_up = x_[j] < hi_[j];
      const bool can_down = x_[j] > lo_[j];
      const int dir = ((raise ? -t : t) > 0.0) ? 1 : -1;
      if ((dir > 0 && !can_up) || (dir < 0 && !can_down)) continue;
      if (dir > 0 && x_[j] != lo_[j] && finite(lo_[j])) continue;
      if (dir < 0 && x_[j] != hi_[j] && finite(hi_[j])) continue;
      const double ratio = std::abs(d_[j]) / std::abs(t);
      if (ratio <= relaxed && std::abs(t) > q_abs) {
        q_abs = std::abs(t);
        q = j;
      }
    }
    if (q < 0) return LpStatus::Infeasible;

    const double t = at(r, q);
    const double dxq = (x_[b] - target) / t;
    for (int i = 0; i < m_; ++i) {
      const double ti = at(i, q);
      if (ti != 0.0) x_[basis_[i]] -= ti * dxq;
    }
    x_[q] += dxq;
    ++iterations_;
    pivot(r, q);
    x_[b] = target;
  }
}

LpStatus DenseSimplex::finish(LpStatus status) {
  for (int attempt = 0; attempt < 3 && status == LpStatus::Optimal; ++attempt) {
    if (since_refactor_ > 0) refactor();
    const bool pf = primal_feasible();
    const bool df = dual_feasible();
    if (pf && df) return LpStatus::Optimal;
    if (!pf) {
      status = primal_phase1();
      if (status != LpStatus::Optimal) return status;
    }
    status = primal_phase2();
  }
  return status;
}

LpStatus DenseSimplex::solve() {
  for (int j = 0; j < n_; ++j) {
    x_[j] = finite(lo_[j]) ? lo_[j] : (finite(hi_[j]) ? hi_[j] : 0.0);
  }
  degenerate_run_ = 0;
  bland_ = false;
  load_slack_basis();
  LpStatus st = primal_phase1();
  if (st != LpStatus::Optimal) return st;
  st = primal_phase2();
  return finish(st);
}

LpStatus DenseSimplex::reoptimize() {
  degenerate_run_ = 0;
  bland_ = false;
  if (tab_.empty()) return solve();
  LpStatus st;
  if (dual_feasible()) {
    st = dual_phase();
    if (st == LpStatus::IterationLimit) return st;
    if (st == LpStatus::Infeasible) {
      // Confirm with a primal phase 1 from the current basis.
      st = primal_phase1();
      if (st != LpStatus::Optimal) return st;
    }
  } else {
    st = primal_phase1();
    if (st != LpStatus::Optimal) return st;
  }
  st = primal_phase2();
  return finish(st);
}

double DenseSimplex::objective() const {
  double v = 0.0;
  for (int j = 0; j < n_; ++j) v += cost_[j] * x_[j];
  return v;
}

std::vector<double> DenseSimplex::primal() const {
  return std::vector<double>(x_.begin(), x_.begin() + n_);
}

}  // namespace fairuc::detail
