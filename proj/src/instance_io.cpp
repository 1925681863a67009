#include "fairuc/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fairuc {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError(InstanceError::Kind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Convert the byte offset into a line and column.
    const size_t pos = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    int line = 1, column = 1;
    for (size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InstanceError(InstanceError::Kind::Syntax,
                        "syntax error at line " + std::to_string(line) + ", column " +
                            std::to_string(column) + ": " + e.what(),
                        line, column);
  }
}

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  throw InstanceError(InstanceError::Kind::Schema, path + ": " + msg);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) schema_error(path, "expected an integer");
  return v.get<int>();
}

const json* field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& required(const json& obj, const char* key, const std::string& path) {
  const json* v = field(obj, key);
  if (!v) schema_error(path + "." + key, "missing");
  return *v;
}

std::vector<double> series(const json& v, int T, const std::string& path) {
  if (v.is_number()) return std::vector<double>(T, v.get<double>());
  if (!v.is_array()) schema_error(path, "expected a number or an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<double> series_or(const json& obj, const char* key, int T,
                              const std::string& path, double fallback) {
  const json* v = field(obj, key);
  return v ? series(*v, T, path + "." + key) : std::vector<double>(T, fallback);
}

std::vector<double> scaled(const std::vector<double>& v, double k) {
  std::vector<double> out(v);
  for (double& x : out) x *= k;
  return out;
}

const json& array_field(const json& doc, const char* key) {
  const json& v = required(doc, key, "$");
  if (!v.is_array()) schema_error(key, "expected an array");
  return v;
}

std::string unit_path(const char* key, size_t i) {
  return std::string(key) + "[" + std::to_string(i) + "]";
}

std::string name_or(const json& obj, const std::string& fallback) {
  const json* v = field(obj, "name");
  if (!v) return fallback;
  if (!v->is_string()) schema_error("name", "expected a string");
  return v->get<std::string>();
}

}  // namespace

SystemInstance parse_instance_text(const std::string& text, bool validate) {
  const json doc = parse_json(text);
  if (!doc.is_object()) schema_error("$", "expected an object");

  double coeff = 0.2, tariff = 11.0;
  if (const json* d = field(doc, "defaults")) {
    if (!d->is_object()) schema_error("defaults", "expected an object");
    if (const json* c = field(*d, "uncertainty_coeff")) {
      coeff = number(*c, "defaults.uncertainty_coeff");
    }
    if (const json* c = field(*d, "curtail_tariff")) {
      tariff = number(*c, "defaults.curtail_tariff");
    }
  }

  SystemInstance in;
  in.horizon = integer(required(doc, "horizon", "$"), "horizon");
  const int T = in.horizon;
  if (T < 1) schema_error("horizon", "must be >= 1");

  const json& gens = array_field(doc, "generators");
  for (size_t i = 0; i < gens.size(); ++i) {
    const json& g = gens[i];
    const std::string p = unit_path("generators", i);
    if (!g.is_object()) schema_error(p, "expected an object");
    GeneratorSpec s;
    s.name = name_or(g, "G" + std::to_string(i + 1));
    s.no_load_cost = series_or(g, "no_load_cost", T, p, 0.0);
    s.startup_cost = series_or(g, "startup_cost", T, p, 0.0);
    s.shutdown_cost = series_or(g, "shutdown_cost", T, p, 0.0);
    s.marginal_cost = series(required(g, "marginal_cost", p), T, p + ".marginal_cost");
    s.p_max = number(required(g, "p_max", p), p + ".p_max");
    s.p_min = field(g, "p_min") ? number(g["p_min"], p + ".p_min") : 0.0;
    s.ramp_up = series_or(g, "ramp_up", T, p, s.p_max);
    s.ramp_down = series_or(g, "ramp_down", T, p, s.p_max);
    s.reserve_cap = series_or(g, "reserve_cap", T, p, 0.0);
    s.min_up = field(g, "min_up") ? integer(g["min_up"], p + ".min_up") : 0;
    s.min_down = field(g, "min_down") ? integer(g["min_down"], p + ".min_down") : 0;
    s.initial_on = field(g, "initial_on") ? integer(g["initial_on"], p + ".initial_on") : 0;
    s.initial_output =
        field(g, "initial_output") ? number(g["initial_output"], p + ".initial_output") : 0.0;
    in.generators.push_back(std::move(s));
  }

  if (const json* pvs = field(doc, "pvs")) {
    if (!pvs->is_array()) schema_error("pvs", "expected an array");
    for (size_t l = 0; l < pvs->size(); ++l) {
      const json& v = (*pvs)[l];
      const std::string p = unit_path("pvs", l);
      if (!v.is_object()) schema_error(p, "expected an object");
      PVSpec s;
      s.name = name_or(v, "PV" + std::to_string(l + 1));
      s.expected_output =
          series(required(v, "expected_output", p), T, p + ".expected_output");
      const json* dev = field(v, "deviation");
      s.deviation = dev ? series(*dev, T, p + ".deviation") : scaled(s.expected_output, coeff);
      const json* cost = field(v, "curtail_cost");
      s.curtail_cost =
          cost ? series(*cost, T, p + ".curtail_cost") : scaled(s.expected_output, tariff);
      in.pvs.push_back(std::move(s));
    }
  }

  if (const json* loads = field(doc, "loads")) {
    if (!loads->is_array()) schema_error("loads", "expected an array");
    for (size_t j = 0; j < loads->size(); ++j) {
      const json& v = (*loads)[j];
      const std::string p = unit_path("loads", j);
      if (!v.is_object()) schema_error(p, "expected an object");
      LoadSpec s;
      s.name = name_or(v, "D" + std::to_string(j + 1));
      s.expected_load = series(required(v, "expected_load", p), T, p + ".expected_load");
      const json* dev = field(v, "deviation");
      s.deviation = dev ? series(*dev, T, p + ".deviation") : scaled(s.expected_load, coeff);
      in.loads.push_back(std::move(s));
    }
  }

  in.system_reserve = series_or(doc, "system_reserve", T, "$", 0.0);
  if (const json* b = field(doc, "budgets")) {
    if (!b->is_object()) schema_error("budgets", "expected an object");
    in.budgets.demand_budget = series_or(*b, "delta", T, "budgets", 0.0);
    in.budgets.pv_budget = series_or(*b, "gamma", T, "budgets", 0.0);
  } else {
    in.budgets.demand_budget.assign(T, 0.0);
    in.budgets.pv_budget.assign(T, 0.0);
  }

  if (validate) {
    const ValidationReport r = validate_instance(in);
    if (!r.ok()) {
      throw InstanceError(InstanceError::Kind::Validation, "invalid instance:\n" + r.to_string());
    }
  }
  return in;
}

SystemInstance parse_instance(const std::string& path, bool validate) {
  return parse_instance_text(read_file(path), validate);
}

std::string serialize_instance(const SystemInstance& in) {
  json doc;
  doc["horizon"] = in.horizon;
  doc["generators"] = json::array();
  for (const auto& g : in.generators) {
    doc["generators"].push_back({{"name", g.name},
                                 {"no_load_cost", g.no_load_cost},
                                 {"startup_cost", g.startup_cost},
                                 {"shutdown_cost", g.shutdown_cost},
                                 {"marginal_cost", g.marginal_cost},
                                 {"ramp_up", g.ramp_up},
                                 {"ramp_down", g.ramp_down},
                                 {"reserve_cap", g.reserve_cap},
                                 {"p_max", g.p_max},
                                 {"p_min", g.p_min},
                                 {"min_up", g.min_up},
                                 {"min_down", g.min_down},
                                 {"initial_on", g.initial_on},
                                 {"initial_output", g.initial_output}});
  }
  doc["pvs"] = json::array();
  for (const auto& v : in.pvs) {
    doc["pvs"].push_back({{"name", v.name},
                          {"expected_output", v.expected_output},
                          {"deviation", v.deviation},
                          {"curtail_cost", v.curtail_cost}});
  }
  doc["loads"] = json::array();
  for (const auto& l : in.loads) {
    doc["loads"].push_back(
        {{"name", l.name}, {"expected_load", l.expected_load}, {"deviation", l.deviation}});
  }
  doc["system_reserve"] = in.system_reserve;
  doc["budgets"] = {{"delta", in.budgets.demand_budget}, {"gamma", in.budgets.pv_budget}};
  return doc.dump(2) + "\n";
}

namespace {

json plan_json(const CommitmentPlan& p) {
  return {{"on", p.on}, {"start", p.start}, {"stop", p.stop}, {"curtail", p.curtail}};
}

BinaryGrid binary_grid(const json& doc, const char* key) {
  const json& v = required(doc, key, "$");
  if (!v.is_array()) schema_error(key, "expected an array of rows");
  BinaryGrid g;
  for (size_t i = 0; i < v.size(); ++i) {
    const std::string p = unit_path(key, i);
    if (!v[i].is_array()) schema_error(p, "expected an array");
    std::vector<int> row;
    for (size_t t = 0; t < v[i].size(); ++t) {
      const int b = integer(v[i][t], p + "[" + std::to_string(t) + "]");
      if (b != 0 && b != 1) schema_error(p + "[" + std::to_string(t) + "]", "expected 0 or 1");
      row.push_back(b);
    }
    g.push_back(std::move(row));
  }
  return g;
}

Grid real_grid(const json& doc, const char* key) {
  const json& v = required(doc, key, "$");
  if (!v.is_array()) schema_error(key, "expected an array of rows");
  Grid g;
  for (size_t i = 0; i < v.size(); ++i) {
    const std::string p = unit_path(key, i);
    if (!v[i].is_array()) schema_error(p, "expected an array");
    g.push_back(series(v[i], static_cast<int>(v[i].size()), p));
  }
  return g;
}

json realization_json(const UncertaintyRealization& r) {
  return {{"demand_dev", r.demand_dev}, {"pv_dev", r.pv_dev}};
}

json dispatch_json(const DispatchPlan& d) {
  return {{"production", d.production},
          {"reserve", d.reserve},
          {"unserved", d.unserved},
          {"spilled", d.spilled},
          {"cost", d.cost}};
}

// JSON has no infinity; unbounded trace entries are written as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string serialize_plan(const CommitmentPlan& plan) { return plan_json(plan).dump(2) + "\n"; }

CommitmentPlan parse_plan_text(const std::string& text) {
  json doc = parse_json(text);
  if (!doc.is_object()) schema_error("$", "expected an object");
  // A full solve report nests the plan under "commitment".
  if (const json* c = field(doc, "commitment")) doc = *c;
  CommitmentPlan p;
  p.on = binary_grid(doc, "on");
  p.start = binary_grid(doc, "start");
  p.stop = binary_grid(doc, "stop");
  p.curtail = binary_grid(doc, "curtail");
  return p;
}

CommitmentPlan parse_plan(const std::string& path) { return parse_plan_text(read_file(path)); }

std::string serialize_realization(const UncertaintyRealization& real) {
  return realization_json(real).dump(2) + "\n";
}

UncertaintyRealization parse_realization_text(const std::string& text) {
  json doc = parse_json(text);
  if (!doc.is_object()) schema_error("$", "expected an object");
  if (const json* c = field(doc, "worst_case")) doc = *c;
  UncertaintyRealization r;
  r.demand_dev = real_grid(doc, "demand_dev");
  r.pv_dev = real_grid(doc, "pv_dev");
  return r;
}

std::string serialize_dispatch(const DispatchPlan& dispatch) {
  return dispatch_json(dispatch).dump(2) + "\n";
}

std::string serialize_result(const RobustResult& r) {
  json doc;
  doc["status"] = r.converged ? "converged" : "iteration_limit";
  doc["value"] = r.value;
  doc["lower_bound"] = r.lower_bound;
  doc["iterations"] = r.trace.rows.size();
  doc["theta_m"] = r.theta_m;
  doc["commitment"] = plan_json(r.commitment);
  doc["worst_case"] = realization_json(r.worst_case);
  doc["dispatch"] = dispatch_json(r.dispatch);
  json trace = json::array();
  for (const auto& row : r.trace.rows) {
    trace.push_back({{"iteration", row.iteration},
                     {"lower", finite_or_null(row.lower)},
                     {"upper", finite_or_null(row.upper)},
                     {"best_upper", finite_or_null(row.best_upper)},
                     {"gap", finite_or_null(row.gap)}});
  }
  doc["trace"] = trace;
  return doc.dump(2) + "\n";
}

}  // namespace fairuc
