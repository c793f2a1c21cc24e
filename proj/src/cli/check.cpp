#include "jetlag/cli/check.hpp"

#include "jetlag/dynamics.hpp"
#include "jetlag/geometry.hpp"
#include "jetlag/model.hpp"
#include "jetlag/vfexpr.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace jetlag::cli {

namespace {

// Uniform doubles straight from the engine bits, so reports do not depend on
// the standard library's distribution implementations.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double log_uniform(double lo, double hi) { return std::exp(std::log(lo) + unit() * (std::log(hi) - std::log(lo))); }
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

 private:
  std::mt19937_64 rng_;
};

constexpr std::array<double, 5> kExponents{2.0, 2.5, 3.0, 4.0, 7.0};

model::ModelParams draw_params(Stream& s) {
  model::ModelParams p;
  p.m = kExponents[s.pick(kExponents.size())];
  for (auto name : model::ModelParams::kNames)
    if (name != "m") p.set(name, s.log_uniform(0.1, 10.0));
  return p;
}

Vector draw_state(Stream& s) {
  return Vector{{s.log_uniform(0.05, 20.0), s.log_uniform(0.05, 20.0), s.log_uniform(0.05, 20.0)}};
}

// Model equations as expression text, differentiated by dual numbers.
FieldPtr expression_model(const model::ModelParams& p) {
  static const std::vector<std::string> sources{
      "lambda1*N1 - alpha1*N1^2 - alpha2*(m/(m-1))*N1*N2 + alpha1/(m-1)*(N2/N1)^(m-2)*N2^2 - delta1*F*N1",
      "lambda2*N2 - alpha2*N2^2 - alpha1*(m/(m-1))*N1*N2 + alpha2/(m-1)*(N1/N2)^(m-2)*N1^2 - delta2*F*N2",
      "beta*F*(N1 + N2) + gamma*F^2 - rho*F",
  };
  std::vector<std::pair<std::string, double>> bindings;
  for (auto name : model::ModelParams::kNames) bindings.emplace_back(std::string(name), *p.get(name));
  return vfexpr::field_from_exprs(sources, {"N1", "N2", "F"}, bindings);
}

double scaled_gap(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::max({1.0, std::abs(a(i, j)), std::abs(b(i, j))}));
  return worst;
}

double scaled_gap(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

struct Tracker {
  SuiteResult result;

  Tracker(std::string name, double tolerance) {
    result.name = std::move(name);
    result.tolerance = tolerance;
  }

  void record(double gap, std::size_t index, const model::ModelParams& p, const Vector& x) {
    ++result.samples;
    result.worst = std::max(result.worst, gap);
    if (!(gap <= result.tolerance) && result.passed) {
      result.passed = false;
      result.failure = fmt::format("sample {}: m={} x=({:.17g}, {:.17g}, {:.17g}) gap={:.3e}", index, p.m, x[0],
                                   x[1], x[2], gap);
    }
  }
};

}  // namespace

bool CheckReport::passed() const {
  for (const auto& s : suites)
    if (!s.passed) return false;
  return true;
}

std::string CheckReport::render() const {
  std::string out = fmt::format("check seed={} count={}\n", seed, count);
  std::size_t ok = 0;
  for (const auto& s : suites) {
    out += fmt::format("  {:<24} {}  worst={:.3e}  tol={:.0e}  n={}\n", s.name, s.passed ? "PASS" : "FAIL", s.worst,
                       s.tolerance, s.samples);
    if (!s.passed) out += fmt::format("    {}\n", s.failure);
    ok += s.passed ? 1 : 0;
  }
  out += fmt::format("result: {} ({}/{} suites)\n", passed() ? "PASS" : "FAIL", ok, suites.size());
  return out;
}

CheckReport run_checks(std::uint64_t seed, std::size_t count) {
  if (count == 0) throw std::invalid_argument("count must be at least 1");
  Stream stream(seed);
  Tracker jacobian("jacobian_analytic_vs_ad", 1e-10);
  Tracker connection("connection_closed_form", 1e-10);
  Tracker torsion("torsion_closed_form", 1e-6);
  Tracker eym("eym_closed_form", 1e-9);
  Tracker eym_sign("eym_nonnegative", 0.0);
  Tracker skew("skewness", 0.0);
  Tracker zero("cartan_curvature_zero", 0.0);
  Tracker lift("lagrangian_lift", 1e-12);

  const auto cartan = geometry::cartan_coefficients(3);
  const auto curv = geometry::curvature(3);

  for (std::size_t n = 0; n < count; ++n) {
    const model::ModelParams p = draw_params(stream);
    const Vector x = draw_state(stream);
    const model::StarfishCoralField field(p);

    const Matrix j = field.jacobian(x);
    jacobian.record(scaled_gap(j, expression_model(p)->jacobian(x)), n, p, x);

    const auto conn = geometry::nonlinear_connection(j);
    connection.record(scaled_gap(conn.spatial, geometry::connection_closed_form(p, x).spatial), n, p, x);

    const auto fd = geometry::torsion(field, x);
    const auto closed = geometry::torsion_closed_form(p, x);
    double tgap = 0.0, tskew = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      tgap = std::max(tgap, scaled_gap(fd[k], closed[k]));
      tskew = std::max({tskew, geometry::skew_defect(fd[k]), geometry::skew_defect(closed[k])});
    }
    torsion.record(tgap, n, p, x);

    const auto form = geometry::em_form(conn);
    const double pipeline = geometry::yang_mills(form).value;
    const double closed_eym = geometry::eym_closed_form(p, x);
    eym.record(scaled_gap(pipeline, closed_eym), n, p, x);
    eym_sign.record(std::max(0.0, -std::min(pipeline, closed_eym)), n, p, x);

    skew.record(std::max({geometry::skew_defect(conn.spatial), geometry::skew_defect(form.matrix), tskew,
                          conn.temporal.cwiseAbs().maxCoeff()}),
                n, p, x);

    const std::vector<std::size_t> ci{n % 3, (n / 3) % 3, (n / 9) % 3};
    const std::vector<std::size_t> ri{n % 3, (n / 3) % 3, (n / 9) % 3, (n / 27) % 3};
    zero.record(std::abs(cartan.component(ci)) + std::abs(curv.component(ri)), n, p, x);

    const Vector xdot = field.eval(x);
    lift.record(dynamics::lagrangian(field, dynamics::JetPoint{0.0, x, xdot}), n, p, x);
  }

  CheckReport report;
  report.seed = seed;
  report.count = count;
  for (auto* t : {&jacobian, &connection, &torsion, &eym, &eym_sign, &skew, &zero, &lift})
    report.suites.push_back(t->result);
  return report;
}

}  // namespace jetlag::cli
