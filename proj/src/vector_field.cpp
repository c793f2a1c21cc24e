#include "jetlag/vector_field.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace jetlag {

std::vector<std::string> VectorField::variable_names() const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dimension(); ++i) names.push_back(fmt::format("x{}", i + 1));
  return names;
}

void VectorField::require_admissible(const Vector& x) const {
  if (auto verdict = admissible(x); !verdict) verdict.raise();
}

ConjugatedField::ConjugatedField(FieldPtr base, Matrix a)
    : base_(std::move(base)), a_(std::move(a)) {
  const auto n = static_cast<Eigen::Index>(base_->dimension());
  if (a_.rows() != n || a_.cols() != n)
    throw std::invalid_argument("conjugating matrix must be n x n");
  Eigen::FullPivLU<Matrix> lu(a_);
  if (!lu.isInvertible()) throw std::invalid_argument("conjugating matrix is singular");
  a_inv_ = lu.inverse();
}

Admissibility ConjugatedField::admissible(const Vector& x) const {
  return base_->admissible(a_inv_ * x);
}

Vector ConjugatedField::eval(const Vector& x) const { return a_ * base_->eval(a_inv_ * x); }

Matrix ConjugatedField::jacobian(const Vector& x) const {
  return a_ * base_->jacobian(a_inv_ * x) * a_inv_;
}

Matrix finite_difference_jacobian(const VectorField& field, const Vector& x, double rel_step) {
  const auto n = x.size();
  Matrix jac(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = rel_step * std::max(1.0, std::abs(x[j]));
    Vector plus = x, minus = x;
    plus[j] += h;
    minus[j] -= h;
    jac.col(j) = (field.eval(plus) - field.eval(minus)) / (plus[j] - minus[j]);
  }
  return jac;
}

}  // namespace jetlag
