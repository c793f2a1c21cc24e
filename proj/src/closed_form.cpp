// Closed forms of the connection, torsion and Yang–Mills entity for the
// starfish/coral field, obtained from N = −(J − Jᵀ)/2 and the analytic J.
// With k = m/(m−1):
//
//   N12 = (k/2)[(α₂N¹ − α₁N²) + (α₂(N¹)^{m−1}/(N²)^{m−2} − α₁(N²)^{m−1}/(N¹)^{m−2})]
//   N13 = (βF + δ₁N¹)/2,   N23 = (βF + δ₂N²)/2
//
//   ∂N12/∂N¹ = (k/2)[ α₂ + α₂(m−1)(N¹/N²)^{m−2} + α₁(m−2)(N²/N¹)^{m−1}]
//   ∂N12/∂N² = (k/2)[−α₁ − α₂(m−2)(N¹/N²)^{m−1} − α₁(m−1)(N²/N¹)^{m−2}]

#include "jetlag/geometry.hpp"

namespace jetlag::geometry {

using model::kF;
using model::kN1;
using model::kN2;
using model::ratio_power;

ConnectionEntries connection_entries(const model::ModelParams& p, const Vector& x) {
  if (auto verdict = model::domain_check(p, x); !verdict) verdict.raise();
  const double n1 = x[kN1], n2 = x[kN2], f = x[kF];
  const double half_k = 0.5 * p.m / (p.m - 1.0);
  const double linear = p.alpha2 * n1 - p.alpha1 * n2;
  const double social = p.alpha2 * n1 * ratio_power(n1, n2, p.m - 2.0) - p.alpha1 * n2 * ratio_power(n2, n1, p.m - 2.0);
  return {half_k * (linear + social), 0.5 * (p.beta * f + p.delta1 * n1), 0.5 * (p.beta * f + p.delta2 * n2)};
}

Connection connection_closed_form(const model::ModelParams& p, const Vector& x) {
  const auto e = connection_entries(p, x);
  Matrix n = Matrix::Zero(3, 3);
  n(0, 1) = e.n12;
  n(1, 0) = -e.n12;
  n(0, 2) = e.n13;
  n(2, 0) = -e.n13;
  n(1, 2) = e.n23;
  n(2, 1) = -e.n23;
  return Connection{n, Vector::Zero(3)};
}

TorsionEntries torsion_entries(const model::ModelParams& p, const Vector& x) {
  if (auto verdict = model::domain_check(p, x); !verdict) verdict.raise();
  const double n1 = x[kN1], n2 = x[kN2];
  const double half_k = 0.5 * p.m / (p.m - 1.0);
  const bool quadratic = p.m == 2.0;
  const double r12_lo = ratio_power(n1, n2, p.m - 2.0);
  const double r21_lo = ratio_power(n2, n1, p.m - 2.0);
  // (m−2)-weighted terms vanish at m = 2; skip them so N = 0 stays admissible.
  const double r12_hi = quadratic ? 0.0 : (p.m - 2.0) * ratio_power(n1, n2, p.m - 1.0);
  const double r21_hi = quadratic ? 0.0 : (p.m - 2.0) * ratio_power(n2, n1, p.m - 1.0);
  return {
      half_k * (p.alpha2 + p.alpha2 * (p.m - 1.0) * r12_lo + p.alpha1 * r21_hi),
      half_k * (-p.alpha1 - p.alpha2 * r12_hi - p.alpha1 * (p.m - 1.0) * r21_lo),
  };
}

TorsionSet torsion_closed_form(const model::ModelParams& p, const Vector& x) {
  const auto e = torsion_entries(p, x);
  auto skew = [](double a01, double a02, double a12) {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 1) = a01;
    m(1, 0) = -a01;
    m(0, 2) = a02;
    m(2, 0) = -a02;
    m(1, 2) = a12;
    m(2, 1) = -a12;
    return m;
  };
  TorsionSet out;
  out.matrices.push_back(skew(e.dn12_dn1, 0.5 * p.delta1, 0.0));
  out.matrices.push_back(skew(e.dn12_dn2, 0.0, 0.5 * p.delta2));
  out.matrices.push_back(skew(0.0, 0.5 * p.beta, 0.5 * p.beta));
  return out;
}

double eym_closed_form(const model::ModelParams& p, const Vector& x) {
  const auto e = connection_entries(p, x);
  return e.n12 * e.n12 + e.n13 * e.n13 + e.n23 * e.n23;
}

}  // namespace jetlag::geometry
