#include "jetlag/cli/commands.hpp"

#include "jetlag/cli/check.hpp"
#include "jetlag/cli/log.hpp"
#include "jetlag/cli/output.hpp"
#include "jetlag/geometry.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <iostream>
#include <thread>

namespace jetlag::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double scaled_gap(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::max({1.0, std::abs(a(i, j)), std::abs(b(i, j))}));
  return worst;
}

Json zero_family_json(const geometry::ZeroFamily& z) {
  return Json{{"dimension", z.dimension()},
              {"rank", z.rank()},
              {"identically_zero", z.identically_zero()},
              {"norm", z.norm()},
              {"description", z.describe()}};
}

Json torsion_json(const geometry::TorsionSet& t) {
  Json out;
  for (std::size_t k = 0; k < t.dimension(); ++k) out[fmt::format("R{}", k + 1)] = matrix_json(t[k]);
  return out;
}

void require_dimension(const Vector& v, std::size_t n, const std::string& what) {
  if (static_cast<std::size_t>(v.size()) != n)
    throw ConfigError(what, fmt::format("expected {} components, got {}", n, v.size()));
}

std::string point_key(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

void log_truncation(const dynamics::Trajectory& t) {
  if (!t.truncated()) return;
  log().warn("integration truncated at t={} ({}): {}", format_number(t.samples.back().t),
             ode::to_string(t.termination), t.detail);
}

std::string resolve_path(const RunConfig& config, const std::optional<std::string>& out) {
  if (out) return *out;
  if (!config.output.path.empty()) return config.output.path;
  throw ConfigError("/output/path", "no output path given (use --out or set /output/path)");
}

int emit_trajectory(const RunConfig& config, const OutputOptions& out, const TrajectoryRun& run,
                    std::string_view command, Clock::time_point start) {
  const std::string path = resolve_path(config, out.path);
  const OutputFormat format = out.format.value_or(config.output.format);
  const auto variables = config.variable_names();
  const auto& t = run.trajectory;
  if (format == OutputFormat::Csv) {
    write_output(path, trajectory_csv(t, run.eym, variables));
  } else {
    const Json echo = config_to_json(config);
    Json meta;
    meta["schema"] = kSchemaVersion;
    meta["command"] = std::string(command);
    meta["run_id"] = run_id(command, echo);
    meta["config"] = echo;
    meta["order"] = t.order == dynamics::Order::First ? "first" : "second";
    meta["integrator"] = t.integrator;
    meta["step_policy"] = t.step_policy;
    meta["termination"] = std::string(ode::to_string(t.termination));
    meta["detail"] = t.detail;
    meta["accepted_steps"] = t.accepted_steps;
    meta["rejected_steps"] = t.rejected_steps;
    meta["timing"] = Json{{"elapsed_seconds", seconds_since(start)}};
    write_output(path, trajectory_json(t, run.eym, variables, std::move(meta)).dump(2) + "\n");
  }
  log().info("{}: {} samples, {} accepted / {} rejected steps, {:.3f}s", command, t.samples.size(),
             t.accepted_steps, t.rejected_steps, seconds_since(start));
  log_truncation(t);
  return t.truncated() ? kExitTruncated : kExitOk;
}

}  // namespace

Json geometry_record(const RunConfig& config, const Vector& point) {
  const auto start = Clock::now();
  const FieldPtr field = make_field(config);
  require_dimension(point, field->dimension(), "--at");
  field->require_admissible(point);
  const std::size_t n = field->dimension();

  const Matrix j = field->jacobian(point);
  const auto conn = geometry::nonlinear_connection(j);
  const auto tors = geometry::torsion(*field, point);
  const auto form = geometry::em_form(conn);
  const double eym = geometry::yang_mills(form).value;

  Json pipeline;
  pipeline["jacobian"] = matrix_json(j);
  pipeline["connection"] = Json{{"spatial", matrix_json(conn.spatial)}, {"temporal", vector_json(conn.temporal)}};
  pipeline["cartan"] = zero_family_json(geometry::cartan_coefficients(n));
  pipeline["torsion"] = torsion_json(tors);
  pipeline["curvature"] = zero_family_json(geometry::curvature(n));
  pipeline["em_form"] = matrix_json(form.matrix);
  pipeline["eym"] = eym;

  Json skew;
  skew["connection"] = geometry::skew_defect(conn.spatial);
  skew["em_form"] = geometry::skew_defect(form.matrix);
  double worst_skew = std::max(geometry::skew_defect(conn.spatial), geometry::skew_defect(form.matrix));
  Json tskew = Json::array();
  for (std::size_t k = 0; k < tors.dimension(); ++k) {
    tskew.push_back(geometry::skew_defect(tors[k]));
    worst_skew = std::max(worst_skew, geometry::skew_defect(tors[k]));
  }
  skew["torsion"] = std::move(tskew);

  Json record;
  const Json echo = config_to_json(config);
  record["schema"] = kSchemaVersion;
  record["command"] = "geometry";
  record["run_id"] = run_id("geometry", echo, point_key(point));
  record["config"] = echo;
  record["point"] = vector_json(point);
  record["variables"] = field->variable_names();
  record["pipeline"] = std::move(pipeline);

  bool valid = worst_skew <= 1e-12;
  if (config.model == ModelKind::StarfishCoral) {
    const auto closed_conn = geometry::connection_closed_form(config.params, point);
    const auto closed_tors = geometry::torsion_closed_form(config.params, point);
    const double closed_eym = geometry::eym_closed_form(config.params, point);
    Json closed;
    closed["connection"] = matrix_json(closed_conn.spatial);
    closed["torsion"] = torsion_json(closed_tors);
    closed["eym"] = closed_eym;
    record["closed_form"] = std::move(closed);

    const double dconn = scaled_gap(conn.spatial, closed_conn.spatial);
    const double deym = std::abs(eym - closed_eym) / std::max({1.0, std::abs(eym), std::abs(closed_eym)});
    double dtors = 0.0;
    for (std::size_t k = 0; k < tors.dimension(); ++k) dtors = std::max(dtors, scaled_gap(tors[k], closed_tors[k]));
    const double max_disc = std::max(dconn, deym);
    record["discrepancy"] = Json{{"connection", dconn},
                                 {"eym", deym},
                                 {"max", max_disc},
                                 {"tolerance", kGeometryTolerance},
                                 {"torsion", dtors},
                                 {"torsion_tolerance", kTorsionTolerance}};
    valid = valid && max_disc <= kGeometryTolerance && dtors <= kTorsionTolerance;
  } else {
    record["closed_form"] = nullptr;
    record["discrepancy"] = nullptr;
  }
  record["skew_defect"] = std::move(skew);
  record["valid"] = valid;
  record["timing"] = Json{{"elapsed_seconds", seconds_since(start)}};
  return record;
}

TrajectoryRun run_first_order(const RunConfig& config) {
  const FieldPtr field = make_field(config);
  TrajectoryRun run;
  run.trajectory = dynamics::integrate_first_order(*field, config.initial_state, config.integrator);
  run.eym = dynamics::eym_along(run.trajectory, *field);
  return run;
}

TrajectoryRun run_second_order(const RunConfig& config, const std::optional<Vector>& y0) {
  const FieldPtr field = make_field(config);
  field->require_admissible(config.initial_state);
  Vector start_velocity;
  if (y0) {
    require_dimension(*y0, field->dimension(), "--y0");
    start_velocity = *y0;
  } else if (config.y0) {
    start_velocity = *config.y0;
  } else {
    start_velocity = field->eval(config.initial_state);
  }
  TrajectoryRun run;
  run.trajectory = dynamics::integrate_second_order(*field, config.initial_state, start_velocity, config.integrator);
  run.eym = dynamics::eym_along(run.trajectory, *field);
  return run;
}

std::vector<std::vector<std::size_t>> sweep_cells(const RunConfig& config) {
  if (config.sweep.empty()) throw ConfigError("/sweep", "sweep needs at least one axis");
  std::vector<std::vector<std::size_t>> cells{{}};
  for (const auto& axis : config.sweep) {
    if (axis.values.empty()) throw ConfigError("/sweep", fmt::format("axis '{}' has an empty grid", axis.parameter));
    std::vector<std::vector<std::size_t>> next;
    next.reserve(cells.size() * axis.values.size());
    for (const auto& prefix : cells) {
      for (std::size_t i = 0; i < axis.values.size(); ++i) {
        next.push_back(prefix);
        next.back().push_back(i);
      }
    }
    if (next.size() > kMaxSweepCells)
      throw ConfigError("/sweep", fmt::format("sweep expands to more than {} cells", kMaxSweepCells));
    cells = std::move(next);
  }
  return cells;
}

std::vector<SweepRow> run_sweep(const RunConfig& config, unsigned jobs) {
  const auto cells = sweep_cells(config);
  std::vector<SweepRow> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());

  auto run_cell = [&](std::size_t c) {
    try {
      RunConfig cell = config;
      cell.sweep.clear();
      SweepRow& row = rows[c];
      row.index = cells[c];
      for (std::size_t a = 0; a < config.sweep.size(); ++a) {
        const double v = config.sweep[a].values[cells[c][a]];
        cell.set_parameter(config.sweep[a].parameter, v);
        row.values.push_back(v);
      }
      const TrajectoryRun run = run_first_order(cell);
      const auto& last = run.trajectory.samples.back();
      row.t_final = last.t;
      row.endpoint = last.x;
      row.eym_min = row.eym_max = run.eym.front().value;
      for (const auto& e : run.eym) {
        row.eym_min = std::min(row.eym_min, e.value);
        row.eym_max = std::max(row.eym_max, e.value);
      }
      row.eym_final = run.eym.back().value;
      row.termination = run.trajectory.termination;
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, cells.size()));
  if (jobs <= 1) {
    for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < cells.size(); c = next++) run_cell(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  // Report the first failure in cell order so the outcome does not depend on scheduling.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string sweep_csv(const RunConfig& config, const std::vector<SweepRow>& rows) {
  std::vector<std::string> header{"cell"};
  for (const auto& axis : config.sweep) header.push_back("i_" + axis.parameter);
  for (const auto& axis : config.sweep) header.push_back(axis.parameter);
  header.emplace_back("t_final");
  for (const auto& v : config.variable_names()) header.push_back(v);
  for (auto h : {"eym_min", "eym_max", "eym_final", "termination"}) header.emplace_back(h);

  std::string out = fmt::format("{}\n", fmt::join(header, ","));
  for (std::size_t c = 0; c < rows.size(); ++c) {
    const auto& r = rows[c];
    out += std::to_string(c);
    for (auto i : r.index) out += "," + std::to_string(i);
    for (auto v : r.values) out += "," + format_number(v);
    out += "," + format_number(r.t_final);
    for (Eigen::Index k = 0; k < r.endpoint.size(); ++k) out += "," + format_number(r.endpoint[k]);
    out += fmt::format(",{},{},{},{}\n", format_number(r.eym_min), format_number(r.eym_max),
                       format_number(r.eym_final), ode::to_string(r.termination));
  }
  return out;
}

int cmd_geometry(const RunConfig& config, const std::optional<Vector>& point, const std::optional<std::string>& out) {
  const Json record = geometry_record(config, point.value_or(config.initial_state));
  write_output(out.value_or("-"), record.dump(2) + "\n");
  if (!record["valid"].get<bool>()) {
    log().error("geometry report failed self-validation (see discrepancy and skew_defect)");
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, const OutputOptions& out) {
  const auto start = Clock::now();
  (void)resolve_path(config, out.path);
  return emit_trajectory(config, out, run_first_order(config), "simulate", start);
}

int cmd_geodynamics(const RunConfig& config, const OutputOptions& out, const std::optional<Vector>& y0) {
  const auto start = Clock::now();
  (void)resolve_path(config, out.path);
  return emit_trajectory(config, out, run_second_order(config, y0), "geodynamics", start);
}

int cmd_sweep(const RunConfig& config, const std::optional<std::string>& out, unsigned jobs) {
  const auto start = Clock::now();
  const std::string path = resolve_path(config, out);
  const auto rows = run_sweep(config, jobs);
  write_output(path, sweep_csv(config, rows));
  const auto truncated = std::count_if(rows.begin(), rows.end(),
                                       [](const SweepRow& r) { return r.termination != ode::Termination::Completed; });
  log().info("sweep: {} cells, {:.3f}s", rows.size(), seconds_since(start));
  if (truncated > 0) {
    log().warn("sweep: {} of {} cells truncated", truncated, rows.size());
    return kExitTruncated;
  }
  return kExitOk;
}

int cmd_check(std::uint64_t seed, std::size_t count) {
  const CheckReport report = run_checks(seed, count);
  write_output("-", report.render());
  return report.passed() ? kExitOk : kExitValidation;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log().error("config error: {}", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    log().error("domain error: {}", e.what());
    return kExitConfig;
  } catch (const ode::IntegrationError& e) {
    log().error("integration aborted: {}", e.what());
    return kExitTruncated;
  } catch (const std::invalid_argument& e) {
    log().error("usage error: {}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    log().error("error: {}", e.what());
    return kExitConfig;
  }
}

Vector parse_point(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const char* first = text.data() + pos;
    const char* last = text.data() + comma;
    while (first < last && *first == ' ') ++first;
    while (last > first && last[-1] == ' ') --last;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (first == last || ec != std::errc() || ptr != last || !std::isfinite(v))
      throw std::invalid_argument(fmt::format("'{}' is not a comma-separated list of numbers", text));
    values.push_back(v);
    pos = comma + 1;
  }
  Vector out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) out[static_cast<Eigen::Index>(i)] = values[i];
  return out;
}

}  // namespace jetlag::cli
