#include "fairuc/milp.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <string_view>
#include <variant>

#include "simplex.hpp"

namespace fairuc {

int MilpModel::add_variable(std::string name, double lower, double upper,
                            VarType type) {
  vars_.push_back({std::move(name), lower, upper, type});
  obj_.push_back(0.0);
  return static_cast<int>(vars_.size()) - 1;
}

int MilpModel::add_row(std::string name, std::vector<Term> terms,
                       RowSense sense, double rhs) {
  rows_.push_back({std::move(name), std::move(terms), sense, rhs});
  return static_cast<int>(rows_.size()) - 1;
}

void MilpModel::set_objective(std::vector<Term> terms, ObjSense sense,
                              double constant) {
  std::fill(obj_.begin(), obj_.end(), 0.0);
  sense_ = sense;
  obj_const_ = constant;
  for (const Term& t : terms) add_objective_term(t.var, t.coef);
}

void MilpModel::add_objective_term(int var, double coef) {
  if (var < 0 || var >= num_variables()) {
    throw ModelError("objective references unknown variable " +
                     std::to_string(var));
  }
  obj_[static_cast<size_t>(var)] += coef;
}

void MilpModel::set_bounds(int var, double lower, double upper) {
  Variable& v = vars_.at(static_cast<size_t>(var));
  v.lower = lower;
  v.upper = upper;
}

void MilpModel::set_priority(int var, int priority) {
  vars_.at(static_cast<size_t>(var)).priority = priority;
}

int MilpModel::num_binaries() const {
  return static_cast<int>(std::count_if(vars_.begin(), vars_.end(), [](const Variable& v) {
    return v.type == VarType::Binary;
  }));
}

void MilpModel::validate() const {
  for (size_t j = 0; j < vars_.size(); ++j) {
    const Variable& v = vars_[j];
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      throw ModelError("variable " + v.name + " has invalid bounds");
    }
    if (v.type == VarType::Binary &&
        (v.lower < 0.0 || v.upper > 1.0 || !std::isfinite(v.lower) ||
         !std::isfinite(v.upper))) {
      throw ModelError("binary variable " + v.name +
                       " has bounds outside [0,1]");
    }
    if (!std::isfinite(obj_[j])) {
      throw ModelError("objective coefficient of " + v.name +
                       " is not finite");
    }
  }
  for (const Row& r : rows_) {
    if (!std::isfinite(r.rhs)) {
      throw ModelError("row " + r.name + " has a non-finite right-hand side");
    }
    for (const Term& t : r.terms) {
      if (t.var < 0 || t.var >= num_variables()) {
        throw ModelError("row " + r.name + " references unknown variable " +
                         std::to_string(t.var));
      }
      if (!std::isfinite(t.coef)) {
        throw ModelError("row " + r.name + " has a non-finite coefficient");
      }
    }
  }
}

double MilpModel::evaluate_objective(const std::vector<double>& values) const {
  double v = obj_const_;
  for (size_t j = 0; j < obj_.size(); ++j) v += obj_[j] * values.at(j);
  return v;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "Optimal";
    case SolveStatus::Infeasible:
      return "Infeasible";
    case SolveStatus::Unbounded:
      return "Unbounded";
    case SolveStatus::IterationLimit:
      return "IterationLimit";
  }
  return "?";
}

namespace {

using detail::DenseSimplex;
using detail::LpProblem;
using detail::LpStatus;

constexpr size_t kSnapshotBudgetBytes = size_t{256} << 20;

LpProblem relaxation(const MilpModel& model) {
  LpProblem lp;
  lp.num_rows = model.num_rows();
  lp.num_cols = model.num_variables();
  const double sign = model.sense() == ObjSense::Maximize ? -1.0 : 1.0;
  for (int j = 0; j < lp.num_cols; ++j) {
    const Variable& v = model.variables()[j];
    lp.cost.push_back(sign * model.objective()[j]);
    lp.col_lo.push_back(v.lower);
    lp.col_hi.push_back(v.upper);
  }
  for (const Row& r : model.rows()) {
    // Merge duplicate variable references so the tableau sees one entry.
    std::map<int, double> merged;
    for (const Term& t : r.terms) merged[t.var] += t.coef;
    std::vector<Term> terms;
    for (auto [var, coef] : merged) {
      if (coef != 0.0) terms.push_back({var, coef});
    }
    // Power-of-two row equilibration: exact, and keeps big-M rows from
    // drowning the pivot tolerances. Only primal values leave the solver, so
    // nothing needs unscaling.
    double biggest = 0.0;
    for (const Term& t : terms) biggest = std::max(biggest, std::abs(t.coef));
    const double scale = biggest > 0.0 ? std::ldexp(1.0, -std::ilogb(biggest)) : 1.0;
    for (Term& t : terms) t.coef *= scale;
    lp.rows.push_back(std::move(terms));
    lp.row_lo.push_back(r.sense == RowSense::LessEqual ? -kInf : r.rhs * scale);
    lp.row_hi.push_back(r.sense == RowSense::GreaterEqual ? kInf : r.rhs * scale);
  }
  return lp;
}

struct OpenNode {
  long id;
  double bound;  // parent LP value, minimization form
  int var;
  double value;  // branching fixes var to value
  std::variant<std::unique_ptr<DenseSimplex>, DenseSimplex::Basis> state;
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const SolverConfig& config)
      : model_(model), config_(config), lp_(relaxation(model)) {
    for (int j = 0; j < model.num_variables(); ++j) {
      if (model.variables()[j].type == VarType::Binary) binaries_.push_back(j);
    }
    sign_ = model.sense() == ObjSense::Maximize ? -1.0 : 1.0;
  }

  MilpSolution run();

 private:
  double cutoff() const {
    if (!has_incumbent_) return kInf;
    return incumbent_obj_ -
           std::max(1e-9, config_.mip_gap * std::abs(incumbent_obj_));
  }
  int pick_branch_var(const DenseSimplex& e) const;
  void consider_incumbent(DenseSimplex& e);
  void dive(DenseSimplex& e, LpStatus st);
  bool out_of_budget() const;

  const MilpModel& model_;
  const SolverConfig& config_;
  LpProblem lp_;
  std::vector<int> binaries_;
  double sign_ = 1.0;

  std::vector<OpenNode> open_;
  size_t snapshot_bytes_ = 0;
  long next_id_ = 1;
  long nodes_ = 0;
  bool has_incumbent_ = false;
  double incumbent_obj_ = kInf;  // minimization form, without constant
  std::vector<double> incumbent_;
  double pruned_bound_ = kInf;   // least bound among nodes pruned by bound
  bool truncated_ = false;
  bool unbounded_ = false;
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

bool BranchAndBound::out_of_budget() const {
  if (nodes_ >= config_.node_limit) return true;
  if (std::isfinite(config_.time_limit_sec)) {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    if (elapsed > config_.time_limit_sec) return true;
  }
  return false;
}

int BranchAndBound::pick_branch_var(const DenseSimplex& e) const {
  int best = -1, best_priority = 0;
  double best_frac = 0.0;
  for (int j : binaries_) {
    const double v = e.value(j);
    const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
    if (frac <= config_.integrality_tol) continue;
    const int priority = model_.variables()[j].priority;
    if (best < 0 || priority > best_priority ||
        (priority == best_priority && frac > best_frac)) {
      best = j;
      best_priority = priority;
      best_frac = frac;
    }
  }
  return best;
}

void BranchAndBound::consider_incumbent(DenseSimplex& e) {
  // Polish: pin binaries to their rounded values and re-solve the LP so the
  // continuous part is consistent with exact integers.
  for (int j : binaries_) {
    const double v = std::round(e.value(j));
    e.set_col_bounds(j, v, v);
  }
  LpStatus st = e.reoptimize();
  if (st != LpStatus::Optimal) return;
  std::vector<double> values = e.primal();
  for (int j : binaries_) values[j] = std::round(values[j]);
  double obj = 0.0;
  for (size_t j = 0; j < values.size(); ++j) obj += lp_.cost[j] * values[j];
  if (!has_incumbent_ || obj < incumbent_obj_) {
    has_incumbent_ = true;
    incumbent_obj_ = obj;
    incumbent_ = std::move(values);
  }
}

void BranchAndBound::dive(DenseSimplex& e, LpStatus st) {
  while (true) {
    ++nodes_;
    if (st == LpStatus::Infeasible) return;
    if (st == LpStatus::Unbounded) {
      unbounded_ = true;
      return;
    }
    if (st == LpStatus::IterationLimit) {
      truncated_ = true;
      return;
    }
    const double obj = e.objective();
    if (obj >= cutoff()) {
      pruned_bound_ = std::min(pruned_bound_, obj);
      return;
    }
    const int j = pick_branch_var(e);
    if (j < 0) {
      consider_incumbent(e);
      return;
    }
    if (out_of_budget()) {
      truncated_ = true;
      pruned_bound_ = std::min(pruned_bound_, obj);
      return;
    }
    const double v = e.value(j);
    const double near = v >= 0.5 ? 1.0 : 0.0;
    const double far = 1.0 - near;
    OpenNode sibling{next_id_++, obj, j, far, DenseSimplex::Basis{}};
    const size_t bytes = e.memory_bytes();
    if (snapshot_bytes_ + bytes <= kSnapshotBudgetBytes) {
      sibling.state = std::make_unique<DenseSimplex>(e);
      snapshot_bytes_ += bytes;
    } else {
      sibling.state = e.save_basis();
    }
    open_.push_back(std::move(sibling));
    e.set_col_bounds(j, near, near);
    st = e.reoptimize();
  }
}

MilpSolution BranchAndBound::run() {
  MilpSolution sol;
  auto engine = std::make_unique<DenseSimplex>(lp_);
  LpStatus st = engine->solve();
  if (st == LpStatus::Infeasible) {
    sol.status = SolveStatus::Infeasible;
    sol.lp_iterations = engine->iterations();
    return sol;
  }
  if (st == LpStatus::Unbounded) {
    sol.status = SolveStatus::Unbounded;
    sol.lp_iterations = engine->iterations();
    return sol;
  }
  long iters_done = 0;
  dive(*engine, st);

  while (!open_.empty() && !unbounded_) {
    // Best bound first, ties to the oldest node.
    auto it = std::min_element(
        open_.begin(), open_.end(), [](const OpenNode& a, const OpenNode& b) {
          return a.bound < b.bound || (a.bound == b.bound && a.id < b.id);
        });
    OpenNode node = std::move(*it);
    open_.erase(it);
    if (node.bound >= cutoff()) {
      pruned_bound_ = std::min(pruned_bound_, node.bound);
      if (auto* p = std::get_if<std::unique_ptr<DenseSimplex>>(&node.state)) {
        snapshot_bytes_ -= (*p)->memory_bytes();
      }
      continue;
    }
    if (out_of_budget()) {
      truncated_ = true;
      pruned_bound_ = std::min(pruned_bound_, node.bound);
      for (const OpenNode& o : open_) {
        pruned_bound_ = std::min(pruned_bound_, o.bound);
      }
      break;
    }
    iters_done += engine->iterations();
    if (auto* p = std::get_if<std::unique_ptr<DenseSimplex>>(&node.state)) {
      snapshot_bytes_ -= (*p)->memory_bytes();
      engine = std::move(*p);
    } else {
      engine->load_basis(std::get<DenseSimplex::Basis>(node.state));
    }
    iters_done -= engine->iterations();
    engine->set_col_bounds(node.var, node.value, node.value);
    dive(*engine, engine->reoptimize());
  }
  sol.lp_iterations = iters_done + engine->iterations();
  sol.nodes = nodes_;

  if (unbounded_) {
    sol.status = SolveStatus::Unbounded;
    return sol;
  }
  if (!has_incumbent_) {
    sol.status = truncated_ ? SolveStatus::IterationLimit : SolveStatus::Infeasible;
    return sol;
  }
  const double bound_min = std::min(pruned_bound_, incumbent_obj_);
  sol.values = incumbent_;
  sol.objective = model_.evaluate_objective(incumbent_);
  sol.bound = sign_ * bound_min + model_.objective_constant();
  sol.gap = (incumbent_obj_ - bound_min) /
            std::max(1e-10, std::abs(incumbent_obj_));
  if (sol.gap < 0.0) sol.gap = 0.0;
  sol.status = truncated_ ? SolveStatus::IterationLimit : SolveStatus::Optimal;
  return sol;
}

}  // namespace

MilpSolution solve(const MilpModel& model, const SolverConfig& config) {
  model.validate();
  if (!(config.mip_gap > 0.0) || !(config.feasibility_tol > 0.0) ||
      !(config.integrality_tol > 0.0)) {
    throw ModelError("solver tolerances must be positive");
  }
  if (config.backend == Backend::External) {
    if (!config.external) {
      throw ModelError("external backend selected but none supplied");
    }
    return config.external->solve(model, config);
  }
  BranchAndBound bb(model, config);
  return bb.run();
}

std::vector<Violation> check_feasible(const MilpModel& model,
                                      const std::vector<double>& values,
                                      double tol) {
  if (values.size() != static_cast<size_t>(model.num_variables())) {
    throw std::invalid_argument(
        "assignment has " + std::to_string(values.size()) +
        " entries, model has " + std::to_string(model.num_variables()) +
        " variables");
  }
  std::vector<Violation> out;
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variables()[j];
    const double x = values[j];
    const double below = v.lower - x;
    const double above = x - v.upper;
    if (below > tol || above > tol || std::isnan(x)) {
      out.push_back({Violation::Kind::Bound, j, v.name,
                     std::isnan(x) ? kInf : std::max(below, above)});
    }
    if (v.type == VarType::Binary) {
      const double frac = std::abs(x - std::round(x));
      if (frac > tol) {
        out.push_back({Violation::Kind::Integrality, j, v.name, frac});
      }
    }
  }
  for (int i = 0; i < model.num_rows(); ++i) {
    const Row& r = model.rows()[i];
    double lhs = 0.0;
    for (const Term& t : r.terms) lhs += t.coef * values[t.var];
    double viol = 0.0;
    if (r.sense != RowSense::GreaterEqual) viol = std::max(viol, lhs - r.rhs);
    if (r.sense != RowSense::LessEqual) viol = std::max(viol, r.rhs - lhs);
    if (viol > tol) out.push_back({Violation::Kind::Row, i, r.name, viol});
  }
  return out;
}

namespace {

std::string lp_name(const std::string& raw, char prefix, int id) {
  if (raw.empty()) return prefix + std::to_string(id);
  std::string s;
  for (char c : raw) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) ||
                    std::string_view("!\"#$%&()/,.;?@_`'{}|~").find(c) !=
                        std::string_view::npos;
    s += ok ? c : '_';
  }
  if (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '.') {
    s.insert(s.begin(), prefix);
  }
  return s;
}

void write_terms(std::ostream& out, const std::vector<std::string>& names,
                 const std::vector<Term>& terms) {
  bool first = true;
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    out << (t.coef < 0 ? " - " : (first ? " " : " + ")) << std::abs(t.coef)
        << ' ' << names[t.var];
    first = false;
  }
  if (first) out << " 0 " << (names.empty() ? "x" : names[0]);
}

}  // namespace

void write_lp(const MilpModel& model, std::ostream& out) {
  std::vector<std::string> names;
  for (int j = 0; j < model.num_variables(); ++j) {
    names.push_back(lp_name(model.variables()[j].name, 'x', j));
  }
  out.precision(17);
  out << (model.sense() == ObjSense::Minimize ? "Minimize\n" : "Maximize\n");
  std::vector<Term> obj;
  for (int j = 0; j < model.num_variables(); ++j) {
    if (model.objective()[j] != 0.0) obj.push_back({j, model.objective()[j]});
  }
  out << " obj:";
  write_terms(out, names, obj);
  if (model.objective_constant() != 0.0) {
    // LP format has no objective constant; keep it as a comment.
    out << "\n\\ constant " << model.objective_constant();
  }
  out << "\nSubject To\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    const Row& r = model.rows()[i];
    out << ' ' << lp_name(r.name, 'c', i) << ':';
    write_terms(out, names, r.terms);
    out << (r.sense == RowSense::LessEqual
                ? " <= "
                : (r.sense == RowSense::Equal ? " = " : " >= "))
        << r.rhs << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variables()[j];
    if (v.type == VarType::Binary) continue;
    out << ' ';
    if (std::isfinite(v.lower)) {
      out << v.lower;
    } else {
      out << "-inf";
    }
    out << " <= " << names[j] << " <= ";
    if (std::isfinite(v.upper)) {
      out << v.upper;
    } else {
      out << "+inf";
    }
    out << '\n';
  }
  if (model.num_binaries() > 0) {
    out << "Binaries\n";
    for (int j = 0; j < model.num_variables(); ++j) {
      if (model.variables()[j].type == VarType::Binary) {
        out << ' ' << names[j] << '\n';
      }
    }
  }
  out << "End\n";
}

}  // namespace fairuc
