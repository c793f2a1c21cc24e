#pragma once

#include "jetlag/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace jetlag {

/// An autonomous vector field X : U ⊂ R^n → R^n with its Jacobian.
///
/// Implementations are immutable after construction; all members are safe to
/// call concurrently.
class VectorField {
 public:
  virtual ~VectorField() = default;

  virtual std::size_t dimension() const = 0;

  /// Component names used in diagnostics and CSV headers.
  virtual std::vector<std::string> variable_names() const;

  virtual Admissibility admissible(const Vector& x) const = 0;

  /// X(x). Throws DomainError outside the admissible set.
  virtual Vector eval(const Vector& x) const = 0;

  /// J(x)_{ij} = ∂X^i/∂x^j. Throws DomainError outside the admissible set.
  virtual Matrix jacobian(const Vector& x) const = 0;

  /// Throws DomainError if x is not admissible.
  void require_admissible(const Vector& x) const;
};

using FieldPtr = std::shared_ptr<const VectorField>;

/// X̃(x̃) = A·X(A⁻¹x̃) for a constant invertible A, with J̃ = A·J·A⁻¹.
class ConjugatedField final : public VectorField {
 public:
  ConjugatedField(FieldPtr base, Matrix a);

  std::size_t dimension() const override { return base_->dimension(); }
  Admissibility admissible(const Vector& x) const override;
  Vector eval(const Vector& x) const override;
  Matrix jacobian(const Vector& x) const override;

 private:
  FieldPtr base_;
  Matrix a_;
  Matrix a_inv_;
};

/// Central finite-difference Jacobian of `field` with per-column step
/// rel_step·max(1, |x_j|).
Matrix finite_difference_jacobian(const VectorField& field, const Vector& x,
                                  double rel_step = 1e-6);

}  // namespace jetlag
