#pragma once

// Jet Riemann–Lagrange geometry of the least-squares Lagrangian
// L = Σ_i (y^i − X^i(x))² attached to an autonomous field X.
//
// Matrix convention throughout: row = upper index (i), column = lower index (j).

#include "jetlag/model.hpp"
#include "jetlag/types.hpp"
#include "jetlag/vector_field.hpp"

#include <string>
#include <vector>

namespace jetlag::geometry {

/// Canonical nonlinear connection: spatial block N_(1) and temporal block
/// M_(1)1, the latter identically zero for autonomous fields.
struct Connection {
  Matrix spatial;
  Vector temporal;

  std::size_t dimension() const { return static_cast<std::size_t>(spatial.rows()); }
};

/// R_k = ∂N/∂x^k, k = 1…n.
struct TorsionSet {
  std::vector<Matrix> matrices;

  const Matrix& operator[](std::size_t k) const { return matrices.at(k); }
  std::size_t dimension() const { return matrices.size(); }
};

struct EMForm {
  Matrix matrix;
};

struct YangMills {
  double value = 0.0;
};

/// A tensor family that vanishes identically. Used for the Cartan connection
/// coefficients and its curvature, which are zero for this construction.
class ZeroFamily {
 public:
  ZeroFamily(std::string name, std::size_t dimension, std::size_t rank)
      : name_(std::move(name)), dimension_(dimension), rank_(rank) {}

  const std::string& name() const noexcept { return name_; }
  std::size_t dimension() const noexcept { return dimension_; }
  /// Number of indices of an adapted component.
  std::size_t rank() const noexcept { return rank_; }
  /// Any adapted component. Indices are range-checked.
  double component(const std::vector<std::size_t>& indices) const;
  double norm() const noexcept { return 0.0; }
  bool identically_zero() const noexcept { return true; }
  std::string describe() const;

 private:
  std::string name_;
  std::size_t dimension_;
  std::size_t rank_;
};

/// N = −(J − Jᵀ)/2, temporal part zero. Rejects non-finite J.
Connection nonlinear_connection(const Matrix& jacobian);

/// Convenience: the connection of `field` at `x`.
Connection connection_at(const VectorField& field, const Vector& x);

/// Adapted components of the canonical generalized Cartan connection.
ZeroFamily cartan_coefficients(std::size_t dimension = 3);

/// Adapted components of the curvature d-tensor of the Cartan connection.
ZeroFamily curvature(std::size_t dimension = 3);

struct TorsionOptions {
  /// Central-difference step along x^k is relative_step·max(1, |x_k|).
  double relative_step = 1e-5;
};

/// Central differences of the connection along each coordinate, re-skewed.
/// Throws DomainError if a stencil point leaves the admissible set.
TorsionSet torsion(const VectorField& field, const Vector& x, TorsionOptions options = {});

/// F = −N.
EMForm em_form(const Connection& connection);

/// Σ_{i<j} F_ij². Rejects forms that are not skew-symmetric to 1e-12.
YangMills yang_mills(const EMForm& form);

/// Pipeline composition at a point: yang_mills ∘ em_form ∘ nonlinear_connection ∘ J.
double eym_at(const VectorField& field, const Vector& x);

/// Connection under the constant linear change x̃ = A·x with t̃ = t:
/// Ñ = A·N·A⁻¹, temporal part unchanged (zero). Throws on singular A.
Connection transform_connection(const Connection& connection, const Matrix& a);

/// max |M + Mᵀ|.
double skew_defect(const Matrix& m);

// Closed forms for the starfish/coral model ------------------------------------

/// The three independent entries of N for the starfish/coral model.
struct ConnectionEntries {
  double n12;  // N_(1)2^(1) = −N_(1)1^(2)
  double n13;  // N_(1)3^(1) = −N_(1)1^(3)
  double n23;  // N_(1)3^(2) = −N_(1)2^(3)
};

ConnectionEntries connection_entries(const model::ModelParams& params, const Vector& x);

Connection connection_closed_form(const model::ModelParams& params, const Vector& x);

/// ∂N_12/∂N¹ and ∂N_12/∂N².
struct TorsionEntries {
  double dn12_dn1;
  double dn12_dn2;
};

TorsionEntries torsion_entries(const model::ModelParams& params, const Vector& x);

TorsionSet torsion_closed_form(const model::ModelParams& params, const Vector& x);

double eym_closed_form(const model::ModelParams& params, const Vector& x);

}  // namespace jetlag::geometry
