#pragma once

#include "jetlag/types.hpp"
#include "jetlag/vector_field.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace jetlag::model {

/// Slot layout of the starfish/coral state (N¹, N², F).
enum Slot : std::size_t { kN1 = 0, kN2 = 1, kF = 2 };

inline constexpr std::array<std::string_view, 3> kSlotNames{"N1", "N2", "F"};

/// Densities below this floor are refused when m > 2 (the ratio powers
/// (N²/N¹)^{m-2} blow up at the boundary).
inline constexpr double kDomainEpsilon = 1e-8;

/// Coefficients of the two-coral / one-starfish model with social exponent m.
struct ModelParams {
  double m = 3.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double delta1 = 0.5;
  double delta2 = 0.5;
  double beta = 0.2;
  double gamma = 0.1;
  double rho = 0.3;

  /// Repository desk model (not ecological data): the defaults above.
  static ModelParams desk() { return {}; }

  /// Throws std::invalid_argument naming the first bad coefficient.
  void validate() const;

  /// Named access used by config parsing and sweeps; nullopt for unknown names.
  std::optional<double> get(std::string_view name) const;
  bool set(std::string_view name, double value);

  static constexpr std::array<std::string_view, 10> kNames{
      "m", "alpha1", "alpha2", "lambda1", "lambda2",
      "delta1", "delta2", "beta", "gamma", "rho"};

  bool operator==(const ModelParams&) const = default;
};

/// Repository default initial state (1, 1.2, 0.4).
Vector desk_initial_state();

enum class PowerPath { Automatic, Exact, Logarithmic };

/// (num/den)^exponent for positive num, den. The exact path uses repeated
/// multiplication and requires an integer exponent in [0, 7]; the logarithmic
/// path is exp(exponent·(ln num − ln den)). Automatic picks exact when legal.
double ratio_power(double num, double den, double exponent, PowerPath path = PowerPath::Automatic);

Admissibility domain_check(const ModelParams& params, const Vector& x);

/// Right-hand side of the social-interaction system.
Vector eval_field(const ModelParams& params, const Vector& x);

/// Closed-form Jacobian entries J11…J33.
Matrix eval_jacobian_analytic(const ModelParams& params, const Vector& x);

/// The model as a VectorField.
class StarfishCoralField final : public VectorField {
 public:
  explicit StarfishCoralField(ModelParams params);

  const ModelParams& params() const noexcept { return params_; }

  std::size_t dimension() const override { return 3; }
  std::vector<std::string> variable_names() const override;
  Admissibility admissible(const Vector& x) const override { return domain_check(params_, x); }
  Vector eval(const Vector& x) const override { return eval_field(params_, x); }
  Matrix jacobian(const Vector& x) const override { return eval_jacobian_analytic(params_, x); }

 private:
  ModelParams params_;
};

}  // namespace jetlag::model
