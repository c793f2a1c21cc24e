#include "jetlag/cli/output.hpp"

#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace jetlag::cli {

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::vector<std::string> trajectory_columns(const std::vector<std::string>& variables) {
  std::vector<std::string> cols{"t"};
  cols.insert(cols.end(), variables.begin(), variables.end());
  for (std::size_t i = 1; i <= variables.size(); ++i) cols.push_back(fmt::format("y{}", i));
  cols.emplace_back("EYM");
  return cols;
}

namespace {

void check_lengths(const dynamics::Trajectory& trajectory, const std::vector<dynamics::EymSample>& eym) {
  if (trajectory.samples.size() != eym.size())
    throw std::invalid_argument("EYM series does not match the trajectory samples");
}

}  // namespace

std::string trajectory_csv(const dynamics::Trajectory& trajectory, const std::vector<dynamics::EymSample>& eym,
                           const std::vector<std::string>& variables) {
  check_lengths(trajectory, eym);
  std::string out = fmt::format("{}\n", fmt::join(trajectory_columns(variables), ","));
  for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
    const auto& s = trajectory.samples[i];
    out += format_number(s.t);
    for (Eigen::Index k = 0; k < s.x.size(); ++k) out += "," + format_number(s.x[k]);
    for (Eigen::Index k = 0; k < s.y.size(); ++k) out += "," + format_number(s.y[k]);
    out += "," + format_number(eym[i].value);
    out += '\n';
  }
  return out;
}

Json trajectory_json(const dynamics::Trajectory& trajectory, const std::vector<dynamics::EymSample>& eym,
                     const std::vector<std::string>& variables, Json metadata) {
  check_lengths(trajectory, eym);
  Json rows = Json::array();
  for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
    const auto& s = trajectory.samples[i];
    Json row = Json::array();
    row.push_back(s.t);
    for (Eigen::Index k = 0; k < s.x.size(); ++k) row.push_back(s.x[k]);
    for (Eigen::Index k = 0; k < s.y.size(); ++k) row.push_back(s.y[k]);
    row.push_back(eym[i].value);
    rows.push_back(std::move(row));
  }
  metadata["columns"] = trajectory_columns(variables);
  metadata["rows"] = std::move(rows);
  return metadata;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

void write_output(const std::string& path, std::string_view content) {
  if (path == "-") {
    std::cout.write(content.data(), static_cast<std::streamsize>(content.size()));
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path));
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string run_id(std::string_view command, const Json& config_echo, std::string_view extra) {
  std::string key(command);
  key += '\n';
  key += config_echo.dump();
  key += '\n';
  key += extra;
  return fmt::format("{:016x}", fnv1a(key));
}

}  // namespace jetlag::cli
