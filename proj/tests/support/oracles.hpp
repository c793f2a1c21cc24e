#pragma once

// Test-only oracles. Nothing here calls into the code paths it is used to
// check: the reference field is written out directly with std::pow, the
// alternative closed forms are written out by hand, and the random samplers are
// seeded so every run sees the same points.

#include "jetlag/model.hpp"
#include "jetlag/types.hpp"
#include "jetlag/vector_field.hpp"
#include "jetlag/vfexpr.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using jetlag::Matrix;
using jetlag::Vector;
using jetlag::model::ModelParams;

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

/// Right-hand side of the coral/starfish system, transcribed term by term.
template <class T>
std::array<T, 3> reference_field(const ModelParams& p, const std::array<T, 3>& x) {
  using std::pow;
  using boost::multiprecision::pow;
  const T n1 = x[0], n2 = x[1], f = x[2];
  const T m = p.m;
  const T k = m / (m - 1);
  return {
      T(p.lambda1) * n1 - T(p.alpha1) * n1 * n1 - T(p.alpha2) * k * n1 * n2 +
          T(p.alpha1) / (m - 1) * pow(n2 / n1, m - 2) * n2 * n2 - T(p.delta1) * f * n1,
      T(p.lambda2) * n2 - T(p.alpha2) * n2 * n2 - T(p.alpha1) * k * n1 * n2 +
          T(p.alpha2) / (m - 1) * pow(n1 / n2, m - 2) * n1 * n1 - T(p.delta2) * f * n2,
      T(p.beta) * f * (n1 + n2) + T(p.gamma) * f * f - T(p.rho) * f,
  };
}

/// Central differences of the reference field, evaluated in 50-digit
/// arithmetic so that only truncation error remains.
/// Step along x_j: rel_step·max(1, |x_j|).
inline Matrix reference_fd_jacobian(const ModelParams& p, const Vector& x, double rel_step = 1e-6) {
  Matrix jac(3, 3);
  for (int j = 0; j < 3; ++j) {
    const HighPrecision h = rel_step * std::max(1.0, std::abs(x[j]));
    std::array<HighPrecision, 3> plus{x[0], x[1], x[2]}, minus = plus;
    plus[j] += h;
    minus[j] -= h;
    const auto fp = reference_field(p, plus);
    const auto fm = reference_field(p, minus);
    for (int i = 0; i < 3; ++i) jac(i, j) = static_cast<double>((fp[i] - fm[i]) / (2 * h));
  }
  return jac;
}

/// Un-halved -(J - J^T) entries with the first N12 bracket negated.
struct UnhalvedEntries {
  double n12, n13, n23;
  double dn12_dn1, dn12_dn2;
};

inline UnhalvedEntries unhalved_entries(const ModelParams& p, const Vector& x) {
  const double n1 = x[0], n2 = x[1], f = x[2], m = p.m, k = m / (m - 1);
  UnhalvedEntries e{};
  e.n12 = k * (p.alpha1 * n2 - p.alpha2 * n1) +
          k * (p.alpha2 * std::pow(n1, m - 1) / std::pow(n2, m - 2) -
               p.alpha1 * std::pow(n2, m - 1) / std::pow(n1, m - 2));
  e.n13 = p.beta * f + p.delta1 * n1;
  e.n23 = p.beta * f + p.delta2 * n2;
  e.dn12_dn1 = k * (-p.alpha2 + p.alpha2 * (m - 1) * std::pow(n1 / n2, m - 2) +
                    p.alpha1 * (m - 2) * std::pow(n2 / n1, m - 1));
  e.dn12_dn2 = k * (p.alpha1 - p.alpha2 * (m - 2) * std::pow(n1 / n2, m - 1) -
                    p.alpha1 * (m - 1) * std::pow(n2 / n1, m - 2));
  return e;
}

/// The model written in the expression language, over variables named
/// `v[0..2]` (which may themselves be substituted sub-expressions).
inline std::vector<std::string> starfish_sources(const std::array<std::string, 3>& v = {"N1", "N2", "F"}) {
  const std::string n1 = "(" + v[0] + ")", n2 = "(" + v[1] + ")", f = "(" + v[2] + ")";
  return {
      "lambda1*" + n1 + " - alpha1*" + n1 + "^2 - alpha2*(m/(m-1))*" + n1 + "*" + n2 +
          " + alpha1/(m-1)*(" + n2 + "/" + n1 + ")^(m-2)*" + n2 + "^2 - delta1*" + f + "*" + n1,
      "lambda2*" + n2 + " - alpha2*" + n2 + "^2 - alpha1*(m/(m-1))*" + n1 + "*" + n2 +
          " + alpha2/(m-1)*(" + n1 + "/" + n2 + ")^(m-2)*" + n1 + "^2 - delta2*" + f + "*" + n2,
      "beta*" + f + "*(" + n1 + " + " + n2 + ") + gamma*" + f + "^2 - rho*" + f,
  };
}

inline std::vector<std::pair<std::string, double>> param_bindings(const ModelParams& p) {
  std::vector<std::pair<std::string, double>> out;
  for (auto name : ModelParams::kNames) out.emplace_back(std::string(name), *p.get(name));
  return out;
}

/// Seeded sampler for parameters (log-uniform in [0.1, 10], m from a fixed
/// menu) and states (log-uniform in [lo, hi]).
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double log_uniform(double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng_));
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  ModelParams params(const std::vector<double>& m_menu = {2.0, 2.5, 3.0, 4.0, 7.0}) {
    ModelParams p;
    p.m = m_menu[std::uniform_int_distribution<std::size_t>(0, m_menu.size() - 1)(rng_)];
    for (auto name : ModelParams::kNames)
      if (name != "m") p.set(name, log_uniform(0.1, 10.0));
    return p;
  }

  Vector state(double lo = 0.05, double hi = 20.0) {
    return Vector{{log_uniform(lo, hi), log_uniform(lo, hi), log_uniform(lo, hi)}};
  }

  /// Haar-ish random rotation (det +1) from QR of a Gaussian matrix.
  Matrix rotation(int n) {
    std::normal_distribution<double> g;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = g(rng_);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
      if (r(i, i) < 0) q.col(i) *= -1.0;
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// |a − b| / max(1, |a|, |b|).
inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double max_rel_err(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, rel_err(a.data()[i], b.data()[i]));
  return worst;
}

/// X(x) = A·x.
class LinearField final : public jetlag::VectorField {
 public:
  explicit LinearField(Matrix a) : a_(std::move(a)) {}
  std::size_t dimension() const override { return static_cast<std::size_t>(a_.rows()); }
  jetlag::Admissibility admissible(const Vector& x) const override {
    return x.allFinite() ? jetlag::Admissibility::accept()
                         : jetlag::Admissibility::reject(0, "x1", "not finite");
  }
  Vector eval(const Vector& x) const override { return a_ * x; }
  Matrix jacobian(const Vector&) const override { return a_; }

 private:
  Matrix a_;
};

// X̃(u) = A·X(Aᵀu) written out in the expression language, so its Jacobian
// comes from dual-number evaluation rather than from A·J·Aᵀ.
inline jetlag::FieldPtr conjugated_expr_field(const ModelParams& p, const Matrix& a) {
  std::array<std::string, 3> subs;
  for (int j = 0; j < 3; ++j)
    subs[j] = fmt::format("{:.17g}*u1 + {:.17g}*u2 + {:.17g}*u3", a(0, j), a(1, j), a(2, j));
  const auto base = starfish_sources(subs);
  std::vector<std::string> rotated;
  for (int i = 0; i < 3; ++i)
    rotated.push_back(fmt::format("{:.17g}*({}) + {:.17g}*({}) + {:.17g}*({})", a(i, 0), base[0], a(i, 1),
                                  base[1], a(i, 2), base[2]));
  return jetlag::vfexpr::field_from_exprs(rotated, {"u1", "u2", "u3"}, param_bindings(p));
}

}  // namespace oracle
