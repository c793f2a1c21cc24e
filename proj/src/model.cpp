#include "jetlag/model.hpp"

#include <cmath>

#include <fmt/format.h>

namespace jetlag::model {
namespace {

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

// Exact repeated-multiplication path applies for integer m <= 8, i.e. ratio
// exponents m-2 <= 6 and m-1 <= 7.
constexpr double kExactPathMaxExponent = 7.0;

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(m) || m < 2.0)
    throw std::invalid_argument(fmt::format("parameter m must be a finite real >= 2 (got {})", m));
  for (auto name : kNames) {
    if (name == "m") continue;
    const double v = *get(name);
    if (!std::isfinite(v) || v <= 0.0)
      throw std::invalid_argument(
          fmt::format("parameter {} must be strictly positive (got {})", name, v));
  }
}

std::optional<double> ModelParams::get(std::string_view name) const {
  if (name == "m") return m;
  if (name == "alpha1") return alpha1;
  if (name == "alpha2") return alpha2;
  if (name == "lambda1") return lambda1;
  if (name == "lambda2") return lambda2;
  if (name == "delta1") return delta1;
  if (name == "delta2") return delta2;
  if (name == "beta") return beta;
  if (name == "gamma") return gamma;
  if (name == "rho") return rho;
  return std::nullopt;
}

bool ModelParams::set(std::string_view name, double value) {
  double* slot = nullptr;
  if (name == "m") slot = &m;
  else if (name == "alpha1") slot = &alpha1;
  else if (name == "alpha2") slot = &alpha2;
  else if (name == "lambda1") slot = &lambda1;
  else if (name == "lambda2") slot = &lambda2;
  else if (name == "delta1") slot = &delta1;
  else if (name == "delta2") slot = &delta2;
  else if (name == "beta") slot = &beta;
  else if (name == "gamma") slot = &gamma;
  else if (name == "rho") slot = &rho;
  if (slot == nullptr) return false;
  *slot = value;
  return true;
}

Vector desk_initial_state() { return Vector{{1.0, 1.2, 0.4}}; }

double ratio_power(double num, double den, double exponent, PowerPath path) {
  const bool exact_ok = is_integer(exponent) && exponent >= 0.0 && exponent <= kExactPathMaxExponent;
  if (path == PowerPath::Exact && !exact_ok)
    throw std::invalid_argument("exact power path needs a small nonnegative integer exponent");
  if (path == PowerPath::Exact || (path == PowerPath::Automatic && exact_ok)) {
    const auto k = static_cast<int>(std::lround(exponent));
    if (k == 0) return 1.0;
    const double r = num / den;
    double out = r;
    for (int i = 1; i < k; ++i) out *= r;
    return out;
  }
  return std::exp(exponent * (std::log(num) - std::log(den)));
}

Admissibility domain_check(const ModelParams& params, const Vector& x) {
  if (x.size() != 3)
    return Admissibility::reject(0, "N1", fmt::format("state must have 3 components (got {})", x.size()));
  for (std::size_t i = 0; i < 3; ++i) {
    if (!std::isfinite(x[i]))
      return Admissibility::reject(i, std::string(kSlotNames[i]),
                                   fmt::format("{} is not finite", kSlotNames[i]));
  }
  const double floor = params.m > 2.0 ? kDomainEpsilon : 0.0;
  for (std::size_t i : {kN1, kN2}) {
    if (x[i] < floor)
      return Admissibility::reject(
          i, std::string(kSlotNames[i]),
          fmt::format("{} = {} is below the admissible floor {} for m = {}", kSlotNames[i], x[i],
                      floor, params.m));
  }
  if (x[kF] < 0.0)
    return Admissibility::reject(kF, "F", fmt::format("F = {} is negative", x[kF]));
  return Admissibility::accept();
}

Vector eval_field(const ModelParams& p, const Vector& x) {
  if (auto verdict = domain_check(p, x); !verdict) verdict.raise();
  const double n1 = x[kN1], n2 = x[kN2], f = x[kF];
  const double k = p.m / (p.m - 1.0);
  const double social1 = n2 * n2 * ratio_power(n2, n1, p.m - 2.0);
  const double social2 = n1 * n1 * ratio_power(n1, n2, p.m - 2.0);
  const double n12 = n1 * n2;  // shared so the coral swap symmetry is bitwise exact
  Vector out(3);
  out[kN1] = p.lambda1 * n1 - p.alpha1 * n1 * n1 - p.alpha2 * k * n12 +
             p.alpha1 / (p.m - 1.0) * social1 - p.delta1 * f * n1;
  out[kN2] = p.lambda2 * n2 - p.alpha2 * n2 * n2 - p.alpha1 * k * n12 +
             p.alpha2 / (p.m - 1.0) * social2 - p.delta2 * f * n2;
  out[kF] = p.beta * f * (n1 + n2) + p.gamma * f * f - p.rho * f;
  return out;
}

Matrix eval_jacobian_analytic(const ModelParams& p, const Vector& x) {
  if (auto verdict = domain_check(p, x); !verdict) verdict.raise();
  const double n1 = x[kN1], n2 = x[kN2], f = x[kF];
  const double k = p.m / (p.m - 1.0);
  const bool quadratic = p.m == 2.0;

  // (N²)^m/(N¹)^{m-1} = N²·(N²/N¹)^{m-1}; vanishes with its (m-2) factor at m = 2.
  const double hi1 = quadratic ? 0.0 : n2 * ratio_power(n2, n1, p.m - 1.0);
  const double hi2 = quadratic ? 0.0 : n1 * ratio_power(n1, n2, p.m - 1.0);
  // (N²)^{m-1}/(N¹)^{m-2} = N²·(N²/N¹)^{m-2}.
  const double mid1 = n2 * ratio_power(n2, n1, p.m - 2.0);
  const double mid2 = n1 * ratio_power(n1, n2, p.m - 2.0);
  const double drop = (p.m - 2.0) / (p.m - 1.0);

  Matrix j(3, 3);
  j(0, 0) = p.lambda1 - 2.0 * p.alpha1 * n1 - p.alpha2 * k * n2 - p.alpha1 * drop * hi1 - p.delta1 * f;
  j(0, 1) = -p.alpha2 * k * n1 + p.alpha1 * k * mid1;
  j(0, 2) = -p.delta1 * n1;
  j(1, 0) = -p.alpha1 * k * n2 + p.alpha2 * k * mid2;
  j(1, 1) = p.lambda2 - 2.0 * p.alpha2 * n2 - p.alpha1 * k * n1 - p.alpha2 * drop * hi2 - p.delta2 * f;
  j(1, 2) = -p.delta2 * n2;
  j(2, 0) = p.beta * f;
  j(2, 1) = p.beta * f;
  j(2, 2) = p.beta * (n1 + n2) + 2.0 * p.gamma * f - p.rho;
  return j;
}

StarfishCoralField::StarfishCoralField(ModelParams params) : params_(params) { params_.validate(); }

std::vector<std::string> StarfishCoralField::variable_names() const {
  return {std::string(kSlotNames[0]), std::string(kSlotNames[1]), std::string(kSlotNames[2])};
}

}  // namespace jetlag::model
