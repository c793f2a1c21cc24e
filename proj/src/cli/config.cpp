#include "jetlag/cli/config.hpp"

#include "jetlag/vfexpr.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

namespace jetlag::cli {

namespace {

std::string child(const std::string& path, std::string_view key) { return path + "/" + std::string(key); }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

std::string_view type_name(const Json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  return "object";
}

const Json& require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, fmt::format("expected an object, got {}", type_name(j)));
  return j;
}

void check_keys(const Json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(child(path, key), "unknown key");
  }
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, fmt::format("expected a number, got {}", type_name(j)));
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "number must be finite");
  return v;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, fmt::format("expected a string, got {}", type_name(j)));
  return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, fmt::format("expected an array, got {}", type_name(j)));
  return j;
}

Vector as_vector(const Json& j, const std::string& path, std::size_t dimension) {
  as_array(j, path);
  if (j.size() != dimension)
    throw ConfigError(path, fmt::format("expected {} entries, got {}", dimension, j.size()));
  Vector v(static_cast<Eigen::Index>(dimension));
  for (std::size_t i = 0; i < dimension; ++i) v[static_cast<Eigen::Index>(i)] = as_number(j[i], child(path, i));
  return v;
}

ode::Method parse_method(const Json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "rk4") return ode::Method::RK4;
  if (s == "rk45") return ode::Method::RK45;
  throw ConfigError(path, fmt::format("unknown method '{}' (expected rk4 or rk45)", s));
}

ode::ExitPolicy parse_policy(const Json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "stop") return ode::ExitPolicy::StopAndRecord;
  if (s == "error") return ode::ExitPolicy::Throw;
  throw ConfigError(path, fmt::format("unknown policy '{}' (expected stop or error)", s));
}

ode::IntegratorConfig parse_integrator(const Json& j, const std::string& path) {
  require_object(j, path);
  check_keys(j, path,
             {"method", "t0", "t_end", "initial_step", "abs_tol", "rel_tol", "max_steps", "max_step", "on_exit"});
  ode::IntegratorConfig c;
  if (j.contains("method")) c.method = parse_method(j["method"], child(path, "method"));
  if (j.contains("t0")) c.t0 = as_number(j["t0"], child(path, "t0"));
  if (j.contains("t_end")) c.t_end = as_number(j["t_end"], child(path, "t_end"));
  if (j.contains("initial_step")) c.initial_step = as_number(j["initial_step"], child(path, "initial_step"));
  if (j.contains("abs_tol")) c.abs_tol = as_number(j["abs_tol"], child(path, "abs_tol"));
  if (j.contains("rel_tol")) c.rel_tol = as_number(j["rel_tol"], child(path, "rel_tol"));
  if (j.contains("max_steps")) {
    const std::string p = child(path, "max_steps");
    const double v = as_number(j["max_steps"], p);
    if (v < 1 || v != std::floor(v) || v > 1e15) throw ConfigError(p, "expected a positive integer");
    c.max_steps = static_cast<std::size_t>(v);
  }
  if (j.contains("max_step")) {
    const Json& v = j["max_step"];
    c.max_step = v.is_null() ? std::numeric_limits<double>::infinity() : as_number(v, child(path, "max_step"));
  }
  if (j.contains("on_exit")) c.on_exit = parse_policy(j["on_exit"], child(path, "on_exit"));
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    // Messages lead with the offending field name.
    std::string msg = e.what();
    const std::string field = msg.substr(0, msg.find(' '));
    throw ConfigError(child(path, field), msg);
  }
  return c;
}

CustomField parse_custom(const Json& j, const std::string& path) {
  require_object(j, path);
  check_keys(j, path, {"variables", "expressions", "parameters"});
  CustomField f;
  for (auto key : {"variables", "expressions"})
    if (!j.contains(key)) throw ConfigError(child(path, key), "missing required key");

  const std::string vpath = child(path, "variables");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < as_array(j["variables"], vpath).size(); ++i) {
    const std::string ip = child(vpath, i);
    std::string name = as_string(j["variables"][i], ip);
    if (!vfexpr::is_identifier(name)) throw ConfigError(ip, fmt::format("'{}' is not an identifier", name));
    if (!seen.insert(name).second) throw ConfigError(ip, fmt::format("duplicate variable '{}'", name));
    f.variables.push_back(std::move(name));
  }
  if (f.variables.empty()) throw ConfigError(vpath, "at least one variable is required");

  const std::string epath = child(path, "expressions");
  for (std::size_t i = 0; i < as_array(j["expressions"], epath).size(); ++i)
    f.expressions.push_back(as_string(j["expressions"][i], child(epath, i)));
  if (f.expressions.size() != f.variables.size())
    throw ConfigError(epath, fmt::format("expected {} expressions (one per variable), got {}", f.variables.size(),
                                         f.expressions.size()));

  if (j.contains("parameters")) {
    const std::string ppath = child(path, "parameters");
    require_object(j["parameters"], ppath);
    for (const auto& [name, value] : j["parameters"].items()) {
      const std::string ip = child(ppath, name);
      if (!vfexpr::is_identifier(name)) throw ConfigError(ip, fmt::format("'{}' is not an identifier", name));
      if (seen.count(name)) throw ConfigError(ip, fmt::format("parameter '{}' shadows a variable", name));
      f.parameters.emplace_back(name, as_number(value, ip));
    }
  }

  std::vector<std::string> pnames;
  for (const auto& [name, _] : f.parameters) pnames.push_back(name);
  for (std::size_t i = 0; i < f.expressions.size(); ++i) {
    try {
      (void)vfexpr::parse(f.expressions[i], f.variables, pnames);
    } catch (const vfexpr::ExprError& e) {
      throw ConfigError(child(epath, i), e.what());
    }
  }
  return f;
}

model::ModelParams parse_params(const Json& j, const std::string& path) {
  require_object(j, path);
  model::ModelParams p = model::ModelParams::desk();
  for (const auto& [name, value] : j.items()) {
    const std::string ip = child(path, name);
    if (!p.get(name)) throw ConfigError(ip, "unknown parameter");
    p.set(name, as_number(value, ip));
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    for (auto name : model::ModelParams::kNames) {
      model::ModelParams probe = model::ModelParams::desk();
      probe.set(name, *p.get(name));
      try {
        probe.validate();
      } catch (const std::invalid_argument&) {
        throw ConfigError(child(path, name), e.what());
      }
    }
    throw ConfigError(path, e.what());
  }
  return p;
}

std::vector<SweepAxis> parse_sweep(const Json& j, const std::string& path, const RunConfig& base) {
  as_array(j, path);
  std::vector<SweepAxis> axes;
  std::size_t cells = 1;
  const auto names = base.parameter_names();
  for (std::size_t a = 0; a < j.size(); ++a) {
    const std::string ap = child(path, a);
    require_object(j[a], ap);
    check_keys(j[a], ap, {"parameter", "values"});
    if (!j[a].contains("parameter")) throw ConfigError(child(ap, "parameter"), "missing required key");
    if (!j[a].contains("values")) throw ConfigError(child(ap, "values"), "missing required key");
    SweepAxis axis;
    axis.parameter = as_string(j[a]["parameter"], child(ap, "parameter"));
    if (std::find(names.begin(), names.end(), axis.parameter) == names.end())
      throw ConfigError(child(ap, "parameter"), fmt::format("unknown parameter '{}'", axis.parameter));
    for (const auto& prev : axes)
      if (prev.parameter == axis.parameter)
        throw ConfigError(child(ap, "parameter"), fmt::format("axis '{}' appears more than once", axis.parameter));
    const std::string vp = child(ap, "values");
    const Json& values = as_array(j[a]["values"], vp);
    if (values.empty()) throw ConfigError(vp, "grid must be nonempty");
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double v = as_number(values[i], child(vp, i));
      if (base.model == ModelKind::StarfishCoral) {
        model::ModelParams probe = base.params;
        probe.set(axis.parameter, v);
        try {
          probe.validate();
        } catch (const std::invalid_argument& e) {
          throw ConfigError(child(vp, i), e.what());
        }
      }
      axis.values.push_back(v);
    }
    if (cells > kMaxSweepCells / axis.values.size())
      throw ConfigError(path, fmt::format("sweep expands to more than {} cells", kMaxSweepCells));
    cells *= axis.values.size();
    axes.push_back(std::move(axis));
  }
  return axes;
}

OutputSpec parse_output(const Json& j, const std::string& path) {
  require_object(j, path);
  check_keys(j, path, {"path", "format"});
  OutputSpec o;
  if (j.contains("path")) o.path = as_string(j["path"], child(path, "path"));
  if (j.contains("format")) {
    const std::string f = as_string(j["format"], child(path, "format"));
    if (f == "csv") {
      o.format = OutputFormat::Csv;
    } else if (f == "json") {
      o.format = OutputFormat::Json;
    } else {
      throw ConfigError(child(path, "format"), fmt::format("unknown format '{}' (expected csv or json)", f));
    }
  }
  return o;
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(fmt::format("{}: {}", field.empty() ? std::string("/") : field, message)),
      field_(std::move(field)),
      line_(0),
      column_(0) {}

ConfigError::ConfigError(std::string_view origin, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(fmt::format("{}:{}:{}: {}", origin, line, column, message)), line_(line), column_(column) {}

std::size_t RunConfig::dimension() const {
  return model == ModelKind::StarfishCoral ? 3 : custom.variables.size();
}

std::vector<std::string> RunConfig::variable_names() const {
  if (model == ModelKind::Custom) return custom.variables;
  return {std::string(model::kSlotNames[0]), std::string(model::kSlotNames[1]), std::string(model::kSlotNames[2])};
}

std::vector<std::string> RunConfig::parameter_names() const {
  std::vector<std::string> out;
  if (model == ModelKind::StarfishCoral) {
    for (auto n : model::ModelParams::kNames) out.emplace_back(n);
  } else {
    for (const auto& [n, _] : custom.parameters) out.push_back(n);
  }
  return out;
}

std::optional<double> RunConfig::parameter(std::string_view name) const {
  if (model == ModelKind::StarfishCoral) return params.get(name);
  for (const auto& [n, v] : custom.parameters)
    if (n == name) return v;
  return std::nullopt;
}

void RunConfig::set_parameter(std::string_view name, double value) {
  if (model == ModelKind::StarfishCoral) {
    if (!params.set(name, value)) throw ConfigError("/params", fmt::format("unknown parameter '{}'", name));
    return;
  }
  for (auto& [n, v] : custom.parameters) {
    if (n == name) {
      v = value;
      return;
    }
  }
  throw ConfigError("/field/parameters", fmt::format("unknown parameter '{}'", name));
}

bool RunConfig::operator==(const RunConfig& o) const {
  auto same = [](const Vector& a, const Vector& b) { return a.size() == b.size() && a == b; };
  if (y0.has_value() != o.y0.has_value()) return false;
  if (y0 && !same(*y0, *o.y0)) return false;
  return model == o.model && params == o.params && custom == o.custom && same(initial_state, o.initial_state) &&
         integrator == o.integrator && sweep == o.sweep && output == o.output;
}

RunConfig parse_config(std::string_view text, std::string_view origin) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // e.byte is the 1-based offset of the offending character.
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ConfigError(origin, line, column, msg);
  }

  require_object(root, "");
  check_keys(root, "",
             {"schema", "model", "params", "field", "initial_state", "y0", "integrator", "sweep", "output"});
  if (root.contains("schema")) {
    const double s = as_number(root["schema"], "/schema");
    if (s != kSchemaVersion) throw ConfigError("/schema", fmt::format("unsupported schema {} (expected {})", s, kSchemaVersion));
  }

  RunConfig cfg;
  if (root.contains("model")) {
    const std::string m = as_string(root["model"], "/model");
    if (m == "starfish-coral") {
      cfg.model = ModelKind::StarfishCoral;
    } else if (m == "custom") {
      cfg.model = ModelKind::Custom;
    } else {
      throw ConfigError("/model", fmt::format("unknown model '{}' (expected starfish-coral or custom)", m));
    }
  }

  if (cfg.model == ModelKind::StarfishCoral) {
    if (root.contains("field")) throw ConfigError("/field", "only allowed with model \"custom\"");
    if (root.contains("params")) cfg.params = parse_params(root["params"], "/params");
  } else {
    if (root.contains("params")) throw ConfigError("/params", "not allowed with model \"custom\"; use /field/parameters");
    if (!root.contains("field")) throw ConfigError("/field", "model \"custom\" requires a field block");
    cfg.custom = parse_custom(root["field"], "/field");
  }

  if (root.contains("initial_state")) {
    cfg.initial_state = as_vector(root["initial_state"], "/initial_state", cfg.dimension());
  } else if (cfg.model == ModelKind::Custom) {
    throw ConfigError("/initial_state", "model \"custom\" requires an initial state");
  }
  if (root.contains("y0") && !root["y0"].is_null()) cfg.y0 = as_vector(root["y0"], "/y0", cfg.dimension());
  if (root.contains("integrator")) cfg.integrator = parse_integrator(root["integrator"], "/integrator");
  if (root.contains("sweep")) cfg.sweep = parse_sweep(root["sweep"], "/sweep", cfg);
  if (root.contains("output")) cfg.output = parse_output(root["output"], "/output");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", fmt::format("cannot open config file '{}'", path));
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return parse_config(text, path == "-" ? "<stdin>" : path);
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["model"] = std::string(to_string(c.model));
  if (c.model == ModelKind::StarfishCoral) {
    Json p;
    for (auto name : model::ModelParams::kNames) p[std::string(name)] = *c.params.get(name);
    j["params"] = std::move(p);
  } else {
    Json f;
    f["variables"] = c.custom.variables;
    f["expressions"] = c.custom.expressions;
    Json p = Json::object();
    for (const auto& [n, v] : c.custom.parameters) p[n] = v;
    f["parameters"] = std::move(p);
    j["field"] = std::move(f);
  }
  j["initial_state"] = vector_json(c.initial_state);
  if (c.y0) j["y0"] = vector_json(*c.y0);
  const auto& ic = c.integrator;
  Json i;
  i["method"] = std::string(ode::to_string(ic.method));
  i["t0"] = ic.t0;
  i["t_end"] = ic.t_end;
  i["initial_step"] = ic.initial_step;
  i["abs_tol"] = ic.abs_tol;
  i["rel_tol"] = ic.rel_tol;
  i["max_steps"] = ic.max_steps;
  i["max_step"] = std::isfinite(ic.max_step) ? Json(ic.max_step) : Json(nullptr);
  i["on_exit"] = std::string(ode::to_string(ic.on_exit));
  j["integrator"] = std::move(i);
  if (!c.sweep.empty()) {
    Json s = Json::array();
    for (const auto& axis : c.sweep) s.push_back(Json{{"parameter", axis.parameter}, {"values", axis.values}});
    j["sweep"] = std::move(s);
  }
  j["output"] = Json{{"path", c.output.path}, {"format", std::string(to_string(c.output.format))}};
  return j;
}

FieldPtr make_field(const RunConfig& c) {
  if (c.model == ModelKind::StarfishCoral) return std::make_shared<model::StarfishCoralField>(c.params);
  try {
    return vfexpr::field_from_exprs(c.custom.expressions, c.custom.variables, c.custom.parameters);
  } catch (const vfexpr::ExprError& e) {
    throw ConfigError("/field/expressions", e.what());
  }
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::StarfishCoral ? "starfish-coral" : "custom";
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

}  // namespace jetlag::cli
