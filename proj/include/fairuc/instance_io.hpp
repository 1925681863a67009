#pragma once

#include <stdexcept>
#include <string>

#include "fairuc/benders.hpp"
#include "fairuc/model.hpp"

namespace fairuc {

/// Malformed or invalid instance/plan document. Syntax errors carry a
/// 1-based line and column; schema and validation errors carry field paths.
class InstanceError : public std::runtime_error {
 public:
  enum class Kind { Io, Syntax, Schema, Validation };
  InstanceError(Kind kind, const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(what), kind_(kind), line_(line), column_(column) {}
  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_, column_;
};

/// Per-slot fields accept a scalar (broadcast over the horizon) or an array.
/// Omitted PV/load deviations default to uncertainty_coeff times the
/// expected value and omitted curtailment costs to curtail_tariff times the
/// expected output. Validation runs unless `validate` is false.
SystemInstance parse_instance_text(const std::string& text, bool validate = true);
SystemInstance parse_instance(const std::string& path, bool validate = true);

/// Fully explicit document (every series spelled out); parses back to an
/// identical instance.
std::string serialize_instance(const SystemInstance& instance);

std::string serialize_plan(const CommitmentPlan& plan);
CommitmentPlan parse_plan_text(const std::string& text);
CommitmentPlan parse_plan(const std::string& path);

std::string serialize_realization(const UncertaintyRealization& real);
UncertaintyRealization parse_realization_text(const std::string& text);

std::string serialize_dispatch(const DispatchPlan& dispatch);

/// Plan, objective, bounds, status, worst case and dispatch of a robust solve.
std::string serialize_result(const RobustResult& result);

}  // namespace fairuc
