#include "jetlag/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

namespace jetlag::ode {

std::string_view to_string(Method m) { return m == Method::RK4 ? "rk4" : "rk45"; }

std::string_view to_string(ExitPolicy p) { return p == ExitPolicy::StopAndRecord ? "stop" : "error"; }

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::DomainExit: return "domain_exit";
    case Termination::StepUnderflow: return "step_underflow";
    case Termination::MaxSteps: return "max_steps";
  }
  return "unknown";
}

void IntegratorConfig::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(t_end)) throw std::invalid_argument("t0 and t_end must be finite");
  if (t_end < t0) throw std::invalid_argument("t_end must not precede t0");
  if (!(initial_step > 0.0) || !std::isfinite(initial_step))
    throw std::invalid_argument("initial_step must be positive");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("abs_tol must be positive");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  if (max_steps == 0) throw std::invalid_argument("max_steps must be at least 1");
  if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
}

namespace {

// Evaluates rhs, mapping DomainError to a failed trial.
struct Stage {
  const Problem& problem;
  std::string last_error;

  bool operator()(const Vector& z, Vector& out) {
    try {
      out = problem.rhs(z);
    } catch (const DomainError& e) {
      last_error = e.what();
      return false;
    }
    if (!out.allFinite()) {
      last_error = "right-hand side is not finite";
      return false;
    }
    return true;
  }
};

void finish(Solution& sol, Termination why, std::string detail, const IntegratorConfig& cfg) {
  sol.termination = why;
  sol.detail = std::move(detail);
  if (why != Termination::Completed && cfg.on_exit == ExitPolicy::Throw)
    throw IntegrationError(why, fmt::format("integration stopped at t = {:.17g}: {} ({})", sol.t.back(),
                                            to_string(why), sol.detail));
}

void solve_rk4(const Problem& problem, Solution& sol, const IntegratorConfig& cfg) {
  const double span = cfg.t_end - cfg.t0;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / cfg.initial_step - 1e-9)));
  const double h = span / static_cast<double>(steps);
  sol.step_policy = fmt::format("fixed h={:.17g}", h);
  Stage stage{problem, {}};
  Vector k1, k2, k3, k4;
  for (std::size_t s = 0; s < steps; ++s) {
    if (s >= cfg.max_steps) return finish(sol, Termination::MaxSteps, "step budget exhausted", cfg);
    const Vector& z = sol.z.back();
    if (!stage(z, k1) || !stage(z + 0.5 * h * k1, k2) || !stage(z + 0.5 * h * k2, k3) ||
        !stage(z + h * k3, k4))
      return finish(sol, Termination::DomainExit, stage.last_error, cfg);
    Vector next = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (auto verdict = problem.admissible(next); !verdict)
      return finish(sol, Termination::DomainExit, verdict.reason, cfg);
    sol.t.push_back(s + 1 == steps ? cfg.t_end : cfg.t0 + static_cast<double>(s + 1) * h);
    sol.z.push_back(std::move(next));
    ++sol.accepted_steps;
  }
}

// Dormand–Prince 5(4) tableau; the system is autonomous so the nodes c_i are unused.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b − b̂ (fifth minus embedded fourth order weights).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

void solve_rk45(const Problem& problem, Solution& sol, const IntegratorConfig& cfg) {
  sol.step_policy = fmt::format("adaptive atol={:.3g} rtol={:.3g}", cfg.abs_tol, cfg.rel_tol);
  Stage stage{problem, {}};
  double t = cfg.t0;
  double h = std::min(cfg.initial_step, cfg.max_step);
  Vector k1, k2, k3, k4, k5, k6, k7;
  if (!stage(sol.z.back(), k1)) return finish(sol, Termination::DomainExit, stage.last_error, cfg);
  bool k1_valid = true;
  std::size_t attempts = 0;

  while (t < cfg.t_end) {
    if (sol.accepted_steps >= cfg.max_steps)
      return finish(sol, Termination::MaxSteps, "step budget exhausted", cfg);
    if (++attempts > 16 * cfg.max_steps)
      return finish(sol, Termination::MaxSteps, "too many rejected steps", cfg);
    const double h_min = 1e-14 * std::max(1.0, std::abs(t));
    const double remaining = cfg.t_end - t;
    bool last = false;
    if (h >= remaining * (1.0 - 1e-12)) {
      h = remaining;
      last = true;
    }
    // Accepted steps may also shrink h, so guard every attempt, not just rejections.
    if (!last && (h < h_min || t + h == t))
      return finish(sol, Termination::StepUnderflow,
                    fmt::format("step size fell below {:.3g} at t = {:.17g}", h_min, t), cfg);
    const Vector& z = sol.z.back();
    if (!k1_valid && !stage(z, k1)) return finish(sol, Termination::DomainExit, stage.last_error, cfg);
    k1_valid = true;

    Vector next;
    bool stages_ok = stage(z + h * (a21 * k1), k2) && stage(z + h * (a31 * k1 + a32 * k2), k3) &&
                     stage(z + h * (a41 * k1 + a42 * k2 + a43 * k3), k4) &&
                     stage(z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), k5) &&
                     stage(z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), k6);
    std::string domain_reason = stage.last_error;
    if (stages_ok) {
      next = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      if (auto verdict = problem.admissible(next); !verdict) {
        stages_ok = false;
        domain_reason = verdict.reason;
      } else if (!stage(next, k7)) {
        stages_ok = false;
        domain_reason = stage.last_error;
      }
    }
    if (!stages_ok) {
      ++sol.rejected_steps;
      h *= 0.25;
      if (h < h_min) return finish(sol, Termination::DomainExit, domain_reason, cfg);
      continue;
    }

    const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double norm = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(z[i]), std::abs(next[i]));
      norm = std::max(norm, std::abs(err[i]) / scale);
    }

    if (norm <= 1.0) {
      t = last ? cfg.t_end : t + h;
      sol.t.push_back(t);
      sol.z.push_back(std::move(next));
      ++sol.accepted_steps;
      k1 = k7;  // first-same-as-last
      const double grow = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      h = std::min(h * grow, cfg.max_step);
    } else {
      ++sol.rejected_steps;
      h *= std::max(0.2, 0.9 * std::pow(norm, -0.2));
    }
  }
}

}  // namespace

Solution solve(const Problem& problem, const Vector& z0, const IntegratorConfig& config) {
  config.validate();
  if (auto verdict = problem.admissible(z0); !verdict) verdict.raise();
  Solution sol;
  sol.t.push_back(config.t0);
  sol.z.push_back(z0);
  if (config.t_end == config.t0) {
    sol.step_policy = "empty horizon";
    return sol;
  }
  if (config.method == Method::RK4) solve_rk4(problem, sol, config);
  else solve_rk45(problem, sol, config);
  return sol;
}

}  // namespace jetlag::ode
