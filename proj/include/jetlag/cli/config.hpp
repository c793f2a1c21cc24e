#pragma once

#include "jetlag/model.hpp"
#include "jetlag/ode.hpp"
#include "jetlag/vector_field.hpp"

#include "json.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jetlag::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
/// Upper bound on the number of cells a sweep may expand to.
inline constexpr std::size_t kMaxSweepCells = 100'000;

/// A rejected configuration. `field` is a JSON pointer ("/integrator/t_end")
/// or empty for syntax errors, which carry a 1-based line and column instead.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  /// Syntax error at a 1-based line and column of `origin`.
  ConfigError(std::string_view origin, std::size_t line, std::size_t column, const std::string& message);

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string field_;
  std::size_t line_;
  std::size_t column_;
};

enum class ModelKind { StarfishCoral, Custom };

struct CustomField {
  std::vector<std::string> variables;
  std::vector<std::string> expressions;
  std::vector<std::pair<std::string, double>> parameters;

  bool operator==(const CustomField&) const = default;
};

struct SweepAxis {
  std::string parameter;
  std::vector<double> values;

  bool operator==(const SweepAxis&) const = default;
};

enum class OutputFormat { Csv, Json };

struct OutputSpec {
  std::string path;
  OutputFormat format = OutputFormat::Csv;

  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  ModelKind model = ModelKind::StarfishCoral;
  model::ModelParams params = model::ModelParams::desk();
  CustomField custom;
  Vector initial_state = model::desk_initial_state();
  std::optional<Vector> y0;
  ode::IntegratorConfig integrator;
  std::vector<SweepAxis> sweep;
  OutputSpec output;

  std::size_t dimension() const;
  std::vector<std::string> variable_names() const;
  std::vector<std::string> parameter_names() const;
  std::optional<double> parameter(std::string_view name) const;
  /// Throws ConfigError for unknown names.
  void set_parameter(std::string_view name, double value);

  bool operator==(const RunConfig&) const;
};

/// Parses a configuration document. `origin` prefixes syntax diagnostics.
RunConfig parse_config(std::string_view text, std::string_view origin = "config");

/// Reads a configuration from `path`, or from standard input when path is "-".
RunConfig load_config(const std::string& path);

/// Fully expanded configuration (defaults filled in); parse_config of the dump
/// yields an equal RunConfig.
Json config_to_json(const RunConfig& config);

/// Builds the vector field the configuration describes.
FieldPtr make_field(const RunConfig& config);

std::string_view to_string(ModelKind kind);
std::string_view to_string(OutputFormat format);

}  // namespace jetlag::cli
