// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit if any
// criterion fails. The CLI binary is taken from argv[1].

#include "jetlag/dynamics.hpp"
#include "jetlag/geometry.hpp"
#include "jetlag/model.hpp"
#include "jetlag/vfexpr.hpp"
#include "support/oracles.hpp"
#include "support/process.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace jetlag;
using jetlag::model::ModelParams;

namespace {

constexpr int kPoints = 1000;

struct Outcome {
  bool pass = true;
  std::vector<std::string> parts;

  void clause(bool ok, std::string text) {
    pass = pass && ok;
    parts.push_back(std::move(text));
  }
};

int failures = 0;

void report(int id, const char* name, const Outcome& o) {
  std::string line = fmt::format("[{}] {} {}: ", o.pass ? "PASS" : "FAIL", id, name);
  for (std::size_t i = 0; i < o.parts.size(); ++i) line += (i ? "; " : "") + o.parts[i];
  std::puts(line.c_str());
  if (!o.pass) ++failures;
}

std::string verdict(double value, double tol) {
  return fmt::format("{:.3e} {} {:.0e}", value, value <= tol ? "<=" : ">", tol);
}

// Shared seeded sample of parameter sets and admissible points.
struct Sample {
  ModelParams p;
  Vector x;
};

std::vector<Sample> draw(std::uint64_t seed) {
  oracle::Sampler s(seed);
  std::vector<Sample> out;
  for (int i = 0; i < kPoints; ++i) {
    Sample smp;
    smp.p = s.params();
    smp.x = s.state();
    out.push_back(std::move(smp));
  }
  return out;
}

ModelParams ones(double m) {
  ModelParams p;
  for (auto name : ModelParams::kNames) p.set(name, 1.0);
  p.m = m;
  return p;
}

ode::IntegratorConfig rk45(double t_end, double tol = 1e-10) {
  ode::IntegratorConfig c;
  c.method = ode::Method::RK45;
  c.t_end = t_end;
  c.abs_tol = c.rel_tol = tol;
  return c;
}

Outcome criterion_jacobian(const std::vector<Sample>& points) {
  Outcome o;
  double worst = 0.0;
  for (const auto& s : points) {
    const Matrix j = model::eval_jacobian_analytic(s.p, s.x);
    const Matrix fd = oracle::reference_fd_jacobian(s.p, s.x, 1e-6);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(fd(r, c) - j(r, c)) / std::max(1.0, std::abs(j(r, c))));
  }
  o.clause(worst <= 1e-5, fmt::format("{} points, worst scaled error {}", points.size(), verdict(worst, 1e-5)));
  return o;
}

Outcome criterion_connection(const std::vector<Sample>& points) {
  Outcome o;
  double skew = 0.0, closed = 0.0, m2 = 0.0, unhalved = 0.0;
  int m2_points = 0;
  for (const auto& s : points) {
    const Matrix j = model::eval_jacobian_analytic(s.p, s.x);
    const Matrix n = geometry::nonlinear_connection(j).spatial;
    skew = std::max(skew, (n + n.transpose()).cwiseAbs().maxCoeff());
    const Matrix reference = -0.5 * (j - j.transpose());
    const auto e = geometry::connection_entries(s.p, s.x);
    closed = std::max({closed, oracle::rel_err(e.n12, reference(0, 1)), oracle::rel_err(e.n13, reference(0, 2)),
                       oracle::rel_err(e.n23, reference(1, 2))});
    const auto lit = oracle::unhalved_entries(s.p, s.x);
    unhalved = std::max({unhalved, oracle::rel_err(lit.n12, reference(0, 1)), oracle::rel_err(lit.n13, reference(0, 2)),
                        oracle::rel_err(lit.n23, reference(1, 2))});
    if (s.p.m == 2.0) {
      ++m2_points;
      m2 = std::max(m2, std::abs(n(0, 1)));
    }
  }
  o.clause(skew == 0.0, fmt::format("skew defect {:.1e} (exact required)", skew));
  o.clause(closed <= 1e-10, fmt::format("closed form vs -(J-J^T)/2 {}", verdict(closed, 1e-10)));
  o.clause(m2 <= 1e-12, fmt::format("m=2 max |N12| over {} points {}", m2_points, verdict(m2, 1e-12)));
  o.parts.push_back(fmt::format("[info] the unhalved -(J-J^T) entries with the first N12 bracket negated differ by {:.3e}", unhalved));
  return o;
}

Outcome criterion_torsion(const std::vector<Sample>& points) {
  Outcome o;
  double worst = 0.0;
  bool placements = true;
  for (const auto& s : points) {
    const model::StarfishCoralField field(s.p);
    const auto fd = geometry::torsion(field, s.x);
    const auto closed = geometry::torsion_closed_form(s.p, s.x);
    for (std::size_t k = 0; k < 3; ++k) worst = std::max(worst, oracle::max_rel_err(fd[k], closed[k]));
    // Constant entries: predation rates in R1, R2 and the starfish gain in R3,
    // with zeros where no coordinate dependence enters.
    placements = placements && closed[0](0, 2) == 0.5 * s.p.delta1 && closed[0](1, 2) == 0.0 &&
                 closed[1](1, 2) == 0.5 * s.p.delta2 && closed[1](0, 2) == 0.0 && closed[2](0, 1) == 0.0 &&
                 closed[2](0, 2) == 0.5 * s.p.beta && closed[2](1, 2) == 0.5 * s.p.beta &&
                 std::abs(fd[0](0, 2) - 0.5 * s.p.delta1) <= 1e-6 * std::max(1.0, s.p.delta1) &&
                 std::abs(fd[2](1, 2) - 0.5 * s.p.beta) <= 1e-6 * std::max(1.0, s.p.beta);
    const auto shifted = geometry::torsion_closed_form(s.p, 1.5 * s.x);
    placements = placements && shifted[0](0, 2) == closed[0](0, 2) && shifted[1](1, 2) == closed[1](1, 2) &&
                 shifted[2](0, 2) == closed[2](0, 2);
  }
  o.clause(worst <= 1e-6, fmt::format("closed form vs differenced connection {}", verdict(worst, 1e-6)));
  o.clause(placements, fmt::format("constant entries at (1,3) of R1, (2,3) of R2, (1,3),(2,3) of R3: {}",
                                   placements ? "present, x-independent" : "mismatch"));
  const ModelParams p = ones(3.0);
  const Vector x{{1.0, 1.0, 1.0}};
  const auto e = geometry::torsion_entries(p, x);
  const auto fd = geometry::torsion(model::StarfishCoralField(p), x);
  const bool values = std::abs(e.dn12_dn1 - 3.0) <= 1e-12 && std::abs(e.dn12_dn2 + 3.0) <= 1e-12 &&
                      std::abs(fd[0](0, 1) - 3.0) <= 1e-6 && std::abs(fd[1](0, 1) + 3.0) <= 1e-6;
  o.clause(values, fmt::format("dN12/dN1 = {:.12g}, dN12/dN2 = {:.12g} at m=3, unit point (expect 3, -3)", e.dn12_dn1,
                               e.dn12_dn2));
  return o;
}

Outcome criterion_yang_mills(const std::vector<Sample>& points) {
  Outcome o;
  double worst = 0.0, lowest = 0.0;
  for (const auto& s : points) {
    const model::StarfishCoralField field(s.p);
    const auto form = geometry::em_form(geometry::connection_at(field, s.x));
    double direct = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) direct += form.matrix(i, j) * form.matrix(i, j);
    const double closed = geometry::eym_closed_form(s.p, s.x);
    worst = std::max(worst, std::abs(closed - direct) / std::max(1.0, std::abs(direct)));
    lowest = std::min({lowest, closed, direct, geometry::yang_mills(form).value});
  }
  o.clause(worst <= 1e-9, fmt::format("closed form vs sum of squared F entries {}", verdict(worst, 1e-9)));
  const double symmetric = geometry::eym_closed_form(ones(2.0), Vector{{1.0, 1.0, 1.0}});
  const double symmetric_pipeline =
      geometry::eym_at(model::StarfishCoralField(ones(2.0)), Vector{{1.0, 1.0, 1.0}});
  o.clause(std::abs(symmetric - 8.0) <= 1e-9 && std::abs(symmetric_pipeline - 8.0) <= 1e-9,
           fmt::format("all-ones m=2 at (1,1,1): closed {:.12g}, pipeline {:.12g} (expect 8)", symmetric,
                       symmetric_pipeline));
  o.clause(lowest >= 0.0, fmt::format("minimum EYM {:.3e} (>= 0)", lowest));
  return o;
}

Outcome criterion_lift() {
  Outcome o;
  const model::StarfishCoralField field(ModelParams::desk());
  const Vector x0 = model::desk_initial_state();
  const Vector y0 = field.eval(x0);
  double worst = 0.0;
  int checkpoints = 0;
  for (int k = 1; k <= 100; ++k) {
    const double t = 0.1 * k;
    const auto first = dynamics::integrate_first_order(field, x0, rk45(t));
    const auto second = dynamics::integrate_second_order(field, x0, y0, rk45(t));
    if (first.truncated() || second.truncated()) {
      o.clause(false, fmt::format("integration truncated before t={}", t));
      return o;
    }
    worst = std::max(worst, (first.samples.back().x - second.samples.back().x).cwiseAbs().maxCoeff());
    ++checkpoints;
  }
  o.clause(worst <= 1e-6, fmt::format("sup gap over {} checkpoints in [0,10] {}", checkpoints, verdict(worst, 1e-6)));
  return o;
}

Outcome criterion_least_squares(const std::vector<Sample>& points) {
  Outcome o;
  oracle::Sampler s(606);
  double on_lift = 0.0, bump = 0.0, grad = 0.0;
  using HP = oracle::HighPrecision;
  for (const auto& smp : points) {
    const model::StarfishCoralField field(smp.p);
    const Vector fx = field.eval(smp.x);
    on_lift = std::max(on_lift, dynamics::lagrangian(field, {0.0, smp.x, fx}));
    for (int k = 0; k < 3; ++k) {
      Vector y = fx;
      y[k] += 1.0;
      bump = std::max(bump, std::abs(dynamics::lagrangian(field, {0.0, smp.x, y}) - 1.0));
    }

  }
  // The gradient is checked on a moderate box: at the far corners of the shared
  // sample the rounding of X itself exceeds a unit-sized residual y - X.
  for (int n = 0; n < kPoints; ++n) {
    const Sample smp{s.params(), s.state(0.25, 4.0)};
    const model::StarfishCoralField field(smp.p);
    const Vector fx = field.eval(smp.x);
    const Vector y = fx + Vector{{s.uniform(-2, 2), s.uniform(-2, 2), s.uniform(-2, 2)}};
    const auto g = dynamics::lagrangian_gradient(field, {0.0, smp.x, y});
    // Central differences of L in 50-digit arithmetic; the tiny step keeps the
    // truncation error negligible where L is sharply curved (m = 7).
    auto lagrangian_hp = [&](const std::array<HP, 3>& x, const std::array<HP, 3>& v) {
      const auto fxh = oracle::reference_field<HP>(smp.p, x);
      HP sum = 0;
      for (int i = 0; i < 3; ++i) sum += (v[i] - fxh[i]) * (v[i] - fxh[i]);
      return sum;
    };
    const std::array<HP, 3> xh{smp.x[0], smp.x[1], smp.x[2]}, yh{y[0], y[1], y[2]};
    for (int k = 0; k < 3; ++k) {
      const HP hx = 1e-9 * std::max(1.0, std::abs(smp.x[k]));
      auto xp = xh, xm = xh;
      xp[k] += hx;
      xm[k] -= hx;
      const double fdx = static_cast<double>((lagrangian_hp(xp, yh) - lagrangian_hp(xm, yh)) / (2 * hx));
      const HP hy = 1e-9 * std::max(1.0, std::abs(y[k]));
      auto yp = yh, ym = yh;
      yp[k] += hy;
      ym[k] -= hy;
      const double fdy = static_cast<double>((lagrangian_hp(xh, yp) - lagrangian_hp(xh, ym)) / (2 * hy));
      grad = std::max({grad, std::abs(fdx - g.dx[k]) / std::max(1.0, std::abs(g.dx[k])),
                       std::abs(fdy - g.dy[k]) / std::max(1.0, std::abs(g.dy[k]))});
    }
  }
  o.clause(on_lift <= 1e-12, fmt::format("L on the lift {}", verdict(on_lift, 1e-12)));
  o.clause(bump <= 1e-12, fmt::format("|L - 1| for a unit bump {}", verdict(bump, 1e-12)));
  o.clause(grad <= 1e-5, fmt::format("gradient vs finite differences {}", verdict(grad, 1e-5)));
  return o;
}

Outcome criterion_integrators() {
  Outcome o;
  const auto logistic = vfexpr::field_from_exprs(std::vector<std::string>{"x1*(1-x1)"}, {"x1"}, {});
  const Vector x0{{0.5}};
  auto exact = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
  auto rk4_error = [&](double h) {
    ode::IntegratorConfig c;
    c.method = ode::Method::RK4;
    c.t_end = 5.0;
    c.initial_step = h;
    return std::abs(dynamics::integrate_first_order(*logistic, x0, c).samples.back().x[0] - exact(5.0));
  };
  const double ratio = rk4_error(0.1) / rk4_error(0.05);
  o.clause(std::abs(ratio - 16.0) <= 1.6, fmt::format("RK4 error ratio under halving {:.4f} (16 +/- 10%)", ratio));
  const auto traj = dynamics::integrate_first_order(*logistic, x0, rk45(5.0));
  double worst = 0.0;
  for (const auto& s : traj.samples) worst = std::max(worst, std::abs(s.x[0] - exact(s.t)));
  o.clause(worst <= 1e-8 && traj.samples.back().t == 5.0, fmt::format("RK45 vs closed form {}", verdict(worst, 1e-8)));
  return o;
}

Outcome criterion_rotations() {
  Outcome o;
  oracle::Sampler s(808);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ModelParams p = s.params();
    const Vector x = s.state(0.2, 5.0);
    const Matrix a = s.rotation(3);
    const Matrix moved = a * geometry::connection_at(model::StarfishCoralField(p), x).spatial * a.transpose();
    const auto conjugated = oracle::conjugated_expr_field(p, a);
    const Matrix direct = geometry::nonlinear_connection(conjugated->jacobian(a * x)).spatial;
    worst = std::max(worst, oracle::max_rel_err(direct, moved));
  }
  o.clause(worst <= 1e-9, fmt::format("100 rotations, A N A^T vs connection of the rotated field {}", verdict(worst, 1e-9)));
  return o;
}

Outcome criterion_cli(const std::string& cli) {
  Outcome o;
  proc::TempDir dir;
  proc::write_file(dir / "desk.json", R"({"schema": 1, "model": "starfish-coral"})");
  const std::string cfg = (dir / "desk.json").string();
  const auto a = proc::run(cli, {"simulate", "--config", cfg, "--out", (dir / "a.csv").string()});
  const auto b = proc::run(cli, {"simulate", "--config", cfg, "--out", (dir / "b.csv").string()});
  const std::string first = proc::slurp(dir / "a.csv");
  const bool identical = a.exit_code == 0 && b.exit_code == 0 && !first.empty() && first == proc::slurp(dir / "b.csv");
  o.clause(identical, fmt::format("two simulate runs {} ({} bytes)", identical ? "byte-identical" : "differ",
                                  first.size()));
  const auto check = proc::run(cli, {"check", "--seed", "42", "--count", "1000"});
  o.clause(check.exit_code == 0, fmt::format("check --seed 42 --count 1000 exit code {}", check.exit_code));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-jetlag>\n", argv[0]);
    return 2;
  }
  const auto points = draw(20240601);
  report(1, "jacobian oracle", criterion_jacobian(points));
  report(2, "connection identity", criterion_connection(points));
  report(3, "torsion oracle", criterion_torsion(points));
  report(4, "yang-mills", criterion_yang_mills(points));
  report(5, "geometric-dynamics lift", criterion_lift());
  report(6, "least-squares characterization", criterion_least_squares(points));
  report(7, "integrator order", criterion_integrators());
  report(8, "coordinate behavior", criterion_rotations());
  report(9, "determinism and formats", criterion_cli(argv[1]));
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
