#pragma once

#include <iosfwd>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairuc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarType { Continuous, Binary };
enum class RowSense { LessEqual, Equal, GreaterEqual };
enum class ObjSense { Minimize, Maximize };

/// Variable ids laid out unit x slot.
using IdGrid = std::vector<std::vector<int>>;

struct Term {
  int var;
  double coef;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  VarType type = VarType::Continuous;
  // Branch-and-bound branches on fractional binaries of the highest
  // priority first.
  int priority = 0;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

/// Thrown for structurally malformed models (unknown variable ids, bad
/// bounds on binaries, NaN coefficients).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Solver-agnostic mixed-binary linear model. Builders append variables
/// and rows; nothing is ever removed.
class MilpModel {
 public:
  int add_variable(std::string name, double lower, double upper,
                   VarType type = VarType::Continuous);
  int add_binary(std::string name) {
    return add_variable(std::move(name), 0.0, 1.0, VarType::Binary);
  }
  int add_row(std::string name, std::vector<Term> terms, RowSense sense,
              double rhs);

  void set_objective(std::vector<Term> terms, ObjSense sense,
                     double constant = 0.0);
  void add_objective_term(int var, double coef);
  void set_sense(ObjSense sense) { sense_ = sense; }

  void set_bounds(int var, double lower, double upper);
  void set_priority(int var, int priority);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<double>& objective() const { return obj_; }
  double objective_constant() const { return obj_const_; }
  ObjSense sense() const { return sense_; }

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_binaries() const;

  /// Throws ModelError describing the first structural defect.
  void validate() const;

  double evaluate_objective(const std::vector<double>& values) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  std::vector<double> obj_;
  double obj_const_ = 0.0;
  ObjSense sense_ = ObjSense::Minimize;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(SolveStatus s);

struct MilpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  /// Best proven bound (lower for min, upper for max).
  double bound = 0.0;
  std::vector<double> values;
  double gap = 0.0;
  long nodes = 0;
  long lp_iterations = 0;

  bool optimal() const { return status == SolveStatus::Optimal; }
  double value(int var) const { return values.at(static_cast<size_t>(var)); }
};

class MilpBackend;

enum class Backend { Bundled, External };

struct SolverConfig {
  double mip_gap = 1e-4;
  double feasibility_tol = 1e-6;
  double integrality_tol = 1e-6;
  long node_limit = 1'000'000;
  double time_limit_sec = kInf;
  Backend backend = Backend::Bundled;
  /// Engine used when backend == External.
  std::shared_ptr<const MilpBackend> external;
};

/// Seam for delegating solves to an out-of-tree engine.
class MilpBackend {
 public:
  virtual ~MilpBackend() = default;
  virtual MilpSolution solve(const MilpModel& model,
                             const SolverConfig& config) const = 0;
  virtual std::string name() const = 0;
};

MilpSolution solve(const MilpModel& model, const SolverConfig& config = {});

struct Violation {
  enum class Kind { Bound, Integrality, Row };
  Kind kind;
  int index;  // variable id for Bound/Integrality, row id for Row
  std::string name;
  double magnitude;
};

/// Independent checker: every bound, integrality and row violation larger
/// than `tol`.
std::vector<Violation> check_feasible(const MilpModel& model,
                                      const std::vector<double>& values,
                                      double tol = 1e-6);

/// CPLEX-LP style text dump, one row per line.
void write_lp(const MilpModel& model, std::ostream& out);

}  // namespace fairuc
