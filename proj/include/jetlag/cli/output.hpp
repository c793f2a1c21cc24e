#pragma once

#include "jetlag/cli/config.hpp"
#include "jetlag/dynamics.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace jetlag::cli {

/// 17 significant digits; parses back to the identical double.
std::string format_number(double v);

/// t, the state variables, y1…yn, EYM.
std::vector<std::string> trajectory_columns(const std::vector<std::string>& variables);

std::string trajectory_csv(const dynamics::Trajectory& trajectory, const std::vector<dynamics::EymSample>& eym,
                           const std::vector<std::string>& variables);

/// Same rows as the CSV under "rows", plus a metadata block.
Json trajectory_json(const dynamics::Trajectory& trajectory, const std::vector<dynamics::EymSample>& eym,
                     const std::vector<std::string>& variables, Json metadata);

Json matrix_json(const Matrix& m);
Json vector_json(const Vector& v);

/// Writes to `path`, or to standard output for "-". Throws std::runtime_error.
void write_output(const std::string& path, std::string_view content);

std::uint64_t fnv1a(std::string_view bytes);

/// Stable identifier of a command applied to a configuration.
std::string run_id(std::string_view command, const Json& config_echo, std::string_view extra = {});

}  // namespace jetlag::cli
