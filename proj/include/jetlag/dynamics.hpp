#pragma once

// First-order flow x' = X(x) and the second-order "geometric dynamics" of the
// least-squares Lagrangian L(x, y) = Σ_i (y^i − X^i(x))².
//
// Euler–Lagrange equations. With J = ∂X/∂x,
//   ∂L/∂x^i        = −2 Σ_j (y^j − X^j) J_ji
//   d/dt ∂L/∂y^i   =  2 (ẍ^i − Σ_j J_ij ẋ^j)
// so the residual ∂L/∂x − d/dt ∂L/∂y is
//   r = −2 [Jᵀ(ẋ − X) + ẍ − J ẋ],
// and r = 0 solves to
//   ẍ = (J − Jᵀ) ẋ + Jᵀ X = −2 N ẋ + Jᵀ X,     N = −(J − Jᵀ)/2.
// On the jet lift ẋ = X this gives ẍ = J X, the derivative of X along the flow,
// so first-order solutions solve the second-order system.

#include "jetlag/ode.hpp"
#include "jetlag/types.hpp"
#include "jetlag/vector_field.hpp"

#include <string>
#include <vector>

namespace jetlag::dynamics {

using ode::IntegratorConfig;
using ode::Termination;

/// Point (t, x, y) of the 1-jet space; y holds the velocities y_1^i.
struct JetPoint {
  double t = 0.0;
  Vector x;
  Vector y;
};

enum class Order { First, Second };

struct Trajectory {
  std::vector<JetPoint> samples;
  std::string integrator;
  std::string step_policy;
  Order order = Order::First;
  Termination termination = Termination::Completed;
  std::string detail;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  bool truncated() const noexcept { return termination != Termination::Completed; }
};

double lagrangian(const VectorField& field, const JetPoint& p);

struct LagrangianGradient {
  Vector dx;  // ∂L/∂x = −2 Jᵀ (y − X)
  Vector dy;  // ∂L/∂y =  2 (y − X)
};

LagrangianGradient lagrangian_gradient(const VectorField& field, const JetPoint& p);

/// ∂L/∂x − d/dt(∂L/∂y) evaluated with the supplied ẋ and ẍ.
Vector el_residual(const VectorField& field, const Vector& x, const Vector& xdot, const Vector& xddot);

/// Solved Euler–Lagrange acceleration (J − Jᵀ)·y + Jᵀ·X(x).
Vector geodesic_rhs(const VectorField& field, const Vector& x, const Vector& y);

/// Samples carry the jet lift y = X(x).
Trajectory integrate_first_order(const VectorField& field, const Vector& x0, const IntegratorConfig& config);

/// Integrates (x, y)' = (y, geodesic_rhs(x, y)).
Trajectory integrate_second_order(const VectorField& field, const Vector& x0, const Vector& y0,
                                  const IntegratorConfig& config);

struct EymSample {
  double t;
  double value;
};

/// Yang–Mills entity at each sample of `trajectory`.
std::vector<EymSample> eym_along(const Trajectory& trajectory, const VectorField& field);

}  // namespace jetlag::dynamics
