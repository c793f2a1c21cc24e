#pragma once

#include "jetlag/types.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jetlag::ode {

enum class Method { RK4, RK45 };

/// What to do when integration cannot continue (domain exit, step underflow,
/// step budget exhausted).
enum class ExitPolicy { StopAndRecord, Throw };

enum class Termination { Completed, DomainExit, StepUnderflow, MaxSteps };

std::string_view to_string(Method m);
std::string_view to_string(ExitPolicy p);
std::string_view to_string(Termination t);

struct IntegratorConfig {
  Method method = Method::RK45;
  double t0 = 0.0;
  double t_end = 10.0;
  /// Fixed step for RK4, first trial step for RK45.
  double initial_step = 1e-2;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_steps = 1'000'000;
  /// Upper bound on any accepted RK45 step.
  double max_step = std::numeric_limits<double>::infinity();
  ExitPolicy on_exit = ExitPolicy::StopAndRecord;

  /// Throws std::invalid_argument naming the bad field.
  void validate() const;

  bool operator==(const IntegratorConfig&) const = default;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(Termination reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}
  Termination reason() const noexcept { return reason_; }

 private:
  Termination reason_;
};

/// Autonomous system z' = f(z). `rhs` may throw DomainError at inadmissible
/// states; `admissible` is consulted for every accepted state.
struct Problem {
  std::function<Vector(const Vector&)> rhs;
  std::function<Admissibility(const Vector&)> admissible;
};

struct Solution {
  std::vector<double> t;
  std::vector<Vector> z;
  Termination termination = Termination::Completed;
  std::string detail;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::string step_policy;
};

/// Samples are the initial state and every accepted step; the last sample is
/// at t_end unless integration was truncated.
Solution solve(const Problem& problem, const Vector& z0, const IntegratorConfig& config);

}  // namespace jetlag::ode
