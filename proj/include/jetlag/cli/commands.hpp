#pragma once

#include "jetlag/cli/config.hpp"
#include "jetlag/dynamics.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace jetlag::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitTruncated = 2,
  kExitValidation = 3,
};

/// Reports are self-validating: connection and EYM must agree with their
/// closed forms to this relative tolerance.
inline constexpr double kGeometryTolerance = 1e-9;
/// The differenced torsion is compared at this looser tolerance.
inline constexpr double kTorsionTolerance = 1e-6;

/// Geometry report at `point`. Throws DomainError for inadmissible points.
Json geometry_record(const RunConfig& config, const Vector& point);

struct TrajectoryRun {
  dynamics::Trajectory trajectory;
  std::vector<dynamics::EymSample> eym;
};

TrajectoryRun run_first_order(const RunConfig& config);
/// y0 precedence: `y0` argument, then config.y0, then the jet lift X(x0).
TrajectoryRun run_second_order(const RunConfig& config, const std::optional<Vector>& y0 = std::nullopt);

struct SweepRow {
  std::vector<std::size_t> index;
  std::vector<double> values;
  double t_final = 0.0;
  Vector endpoint;
  double eym_min = 0.0;
  double eym_max = 0.0;
  double eym_final = 0.0;
  dynamics::Termination termination = dynamics::Termination::Completed;
};

/// Cells of the Cartesian product of the sweep axes, axis 0 varying slowest.
std::vector<std::vector<std::size_t>> sweep_cells(const RunConfig& config);

/// Each cell is integrated independently; rows come back in cell order
/// regardless of `jobs` (0 picks the hardware concurrency).
std::vector<SweepRow> run_sweep(const RunConfig& config, unsigned jobs = 1);

std::string sweep_csv(const RunConfig& config, const std::vector<SweepRow>& rows);

struct OutputOptions {
  std::optional<std::string> path;
  std::optional<OutputFormat> format;
};

int cmd_geometry(const RunConfig& config, const std::optional<Vector>& point, const std::optional<std::string>& out);
int cmd_simulate(const RunConfig& config, const OutputOptions& out);
int cmd_geodynamics(const RunConfig& config, const OutputOptions& out, const std::optional<Vector>& y0);
int cmd_sweep(const RunConfig& config, const std::optional<std::string>& out, unsigned jobs);
int cmd_check(std::uint64_t seed, std::size_t count);

/// Runs `body`, mapping exceptions onto the exit-code contract and logging
/// them: configuration, usage and domain errors give 1, integration aborts 2.
int run_guarded(const std::function<int()>& body);

/// Parses "a,b,c" into a vector; throws std::invalid_argument.
Vector parse_point(const std::string& text);

}  // namespace jetlag::cli
