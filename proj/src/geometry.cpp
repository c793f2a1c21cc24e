#include "jetlag/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace jetlag::geometry {

double ZeroFamily::component(const std::vector<std::size_t>& indices) const {
  if (indices.size() != rank_)
    throw std::invalid_argument(fmt::format("{} has {} indices, got {}", name_, rank_, indices.size()));
  for (auto i : indices)
    if (i >= dimension_) throw std::out_of_range(fmt::format("{} index {} out of range", name_, i));
  return 0.0;
}

std::string ZeroFamily::describe() const {
  return fmt::format("{}: identically zero (n = {}, rank {})", name_, dimension_, rank_);
}

Connection nonlinear_connection(const Matrix& jacobian) {
  if (jacobian.rows() != jacobian.cols()) throw std::invalid_argument("Jacobian must be square");
  if (!jacobian.allFinite()) throw std::invalid_argument("Jacobian has non-finite entries");
  const auto n = jacobian.rows();
  Connection c;
  c.spatial = Matrix::Zero(n, n);
  // Entry-by-entry so that N(i,j) == -N(j,i) holds bitwise.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = -0.5 * (jacobian(i, j) - jacobian(j, i));
      c.spatial(i, j) = v;
      c.spatial(j, i) = -v;
    }
  }
  c.temporal = Vector::Zero(n);
  return c;
}

Connection connection_at(const VectorField& field, const Vector& x) {
  return nonlinear_connection(field.jacobian(x));
}

ZeroFamily cartan_coefficients(std::size_t dimension) {
  // Adapted components C_(i)... carry one upper and two lower spatial indices.
  return ZeroFamily("generalized Cartan connection", dimension, 3);
}

ZeroFamily curvature(std::size_t dimension) {
  return ZeroFamily("curvature d-tensor", dimension, 4);
}

TorsionSet torsion(const VectorField& field, const Vector& x, TorsionOptions options) {
  field.require_admissible(x);
  const auto n = x.size();
  TorsionSet out;
  out.matrices.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double h = options.relative_step * std::max(1.0, std::abs(x[k]));
    Vector plus = x, minus = x;
    plus[k] += h;
    minus[k] -= h;
    for (const Vector* p : {&plus, &minus}) {
      if (auto verdict = field.admissible(*p); !verdict)
        throw DomainError(verdict.slot, verdict.slot_name,
                          fmt::format("torsion stencil along x{} leaves the admissible set: {}", k + 1,
                                      verdict.reason));
    }
    const Matrix diff =
        (connection_at(field, plus).spatial - connection_at(field, minus).spatial) / (plus[k] - minus[k]);
    out.matrices.push_back(0.5 * (diff - diff.transpose()));
  }
  return out;
}

EMForm em_form(const Connection& connection) { return EMForm{-connection.spatial}; }

double skew_defect(const Matrix& m) { return (m + m.transpose()).cwiseAbs().maxCoeff(); }

YangMills yang_mills(const EMForm& form) {
  const Matrix& f = form.matrix;
  if (f.rows() != f.cols()) throw std::invalid_argument("2-form matrix must be square");
  if (f.size() > 0 && skew_defect(f) > 1e-12)
    throw std::invalid_argument(fmt::format("2-form is not skew-symmetric (defect {:.3e})", skew_defect(f)));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < f.rows(); ++i)
    for (Eigen::Index j = i + 1; j < f.cols(); ++j) sum += f(i, j) * f(i, j);
  return YangMills{sum};
}

double eym_at(const VectorField& field, const Vector& x) {
  return yang_mills(em_form(connection_at(field, x))).value;
}

Connection transform_connection(const Connection& connection, const Matrix& a) {
  const auto n = connection.spatial.rows();
  if (a.rows() != n || a.cols() != n) throw std::invalid_argument("transformation must be n x n");
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) throw std::invalid_argument("transformation matrix is singular");
  return Connection{a * connection.spatial * lu.inverse(), Vector::Zero(n)};
}

}  // namespace jetlag::geometry
