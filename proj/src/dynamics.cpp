#include "jetlag/dynamics.hpp"

#include "jetlag/geometry.hpp"

#include <fmt/format.h>

namespace jetlag::dynamics {
namespace {

void check_size(const VectorField& field, const Vector& v, const char* what) {
  if (static_cast<std::size_t>(v.size()) != field.dimension())
    throw std::invalid_argument(
        fmt::format("{} has {} component(s), field dimension is {}", what, v.size(), field.dimension()));
}

Trajectory from_solution(ode::Solution& sol, const IntegratorConfig& cfg, Order order) {
  Trajectory traj;
  traj.integrator = std::string(ode::to_string(cfg.method));
  traj.step_policy = std::move(sol.step_policy);
  traj.order = order;
  traj.termination = sol.termination;
  traj.detail = std::move(sol.detail);
  traj.accepted_steps = sol.accepted_steps;
  traj.rejected_steps = sol.rejected_steps;
  traj.samples.reserve(sol.t.size());
  return traj;
}

}  // namespace

double lagrangian(const VectorField& field, const JetPoint& p) {
  check_size(field, p.y, "velocity");
  return (p.y - field.eval(p.x)).squaredNorm();
}

LagrangianGradient lagrangian_gradient(const VectorField& field, const JetPoint& p) {
  check_size(field, p.y, "velocity");
  const Vector residual = p.y - field.eval(p.x);
  return {-2.0 * field.jacobian(p.x).transpose() * residual, 2.0 * residual};
}

Vector el_residual(const VectorField& field, const Vector& x, const Vector& xdot, const Vector& xddot) {
  check_size(field, xdot, "first derivative");
  check_size(field, xddot, "second derivative");
  const Matrix j = field.jacobian(x);
  const Vector fx = field.eval(x);
  return -2.0 * (j.transpose() * (xdot - fx) + xddot - j * xdot);
}

Vector geodesic_rhs(const VectorField& field, const Vector& x, const Vector& y) {
  check_size(field, y, "velocity");
  const Matrix j = field.jacobian(x);
  return (j - j.transpose()) * y + j.transpose() * field.eval(x);
}

Trajectory integrate_first_order(const VectorField& field, const Vector& x0, const IntegratorConfig& config) {
  check_size(field, x0, "initial state");
  ode::Problem problem{
      [&field](const Vector& x) { return field.eval(x); },
      [&field](const Vector& x) { return field.admissible(x); },
  };
  auto sol = ode::solve(problem, x0, config);
  Trajectory traj = from_solution(sol, config, Order::First);
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    Vector y = field.eval(sol.z[i]);
    traj.samples.push_back(JetPoint{sol.t[i], std::move(sol.z[i]), std::move(y)});
  }
  return traj;
}

Trajectory integrate_second_order(const VectorField& field, const Vector& x0, const Vector& y0,
                                  const IntegratorConfig& config) {
  check_size(field, x0, "initial state");
  check_size(field, y0, "initial velocity");
  const auto n = x0.size();
  ode::Problem problem{
      [&field, n](const Vector& z) {
        Vector out(2 * n);
        out.head(n) = z.tail(n);
        out.tail(n) = geodesic_rhs(field, z.head(n), z.tail(n));
        return out;
      },
      [&field, n](const Vector& z) {
        if (!z.tail(n).allFinite())
          return Admissibility::reject(0, "y", "velocity is not finite");
        return field.admissible(z.head(n));
      },
  };
  Vector z0(2 * n);
  z0 << x0, y0;
  auto sol = ode::solve(problem, z0, config);
  Trajectory traj = from_solution(sol, config, Order::Second);
  for (std::size_t i = 0; i < sol.t.size(); ++i)
    traj.samples.push_back(JetPoint{sol.t[i], sol.z[i].head(n), sol.z[i].tail(n)});
  return traj;
}

std::vector<EymSample> eym_along(const Trajectory& trajectory, const VectorField& field) {
  std::vector<EymSample> out;
  out.reserve(trajectory.samples.size());
  for (const auto& p : trajectory.samples) out.push_back({p.t, geometry::eym_at(field, p.x)});
  return out;
}

}  // namespace jetlag::dynamics
