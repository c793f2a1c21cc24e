#include "jetlag/vfexpr.hpp"

#include <cmath>

#include <fmt/format.h>

namespace jetlag::vfexpr {
namespace {

constexpr double kIntegerTolerance = 1e-12;
constexpr long kMaxRepeatedMultiplication = 64;

double value_of(double x) { return x; }
double value_of(Dual x) { return x.v; }
bool constant_exponent(double) { return true; }
bool constant_exponent(Dual x) { return x.d == 0.0; }
bool finite(double x) { return std::isfinite(x); }
bool finite(Dual x) { return jetlag::isfinite(x); }

template <class T>
T integer_power(T base, long k) {
  T result{1.0};
  T factor = base;
  const long n = k < 0 ? -k : k;
  for (long i = 0; i < n; ++i) result = result * factor;
  return k < 0 ? T{1.0} / result : result;
}

template <class T>
class Evaluator {
 public:
  Evaluator(const Expr& expr, Env env) : expr_(expr), env_(env) {
    if (env_.variables.size() < expr.variables().size())
      throw ExprError(ErrorKind::Dimension,
                      fmt::format("expected {} variable value(s), got {}", expr.variables().size(),
                                  env_.variables.size()));
    if (env_.parameters.size() < expr.parameters().size())
      throw ExprError(ErrorKind::Dimension,
                      fmt::format("expected {} parameter value(s), got {}", expr.parameters().size(),
                                  env_.parameters.size()));
  }

  T run(std::size_t seed) {
    const auto& nodes = expr_.nodes();
    std::vector<T> val(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Node& n = nodes[i];
      T out{};
      switch (n.kind) {
        case NodeKind::Literal: out = T{n.value}; break;
        case NodeKind::Variable: out = seeded(env_.variables[n.slot], n.slot == seed); break;
        case NodeKind::Parameter: out = T{env_.parameters[n.slot]}; break;
        case NodeKind::Negate: out = -val[n.child[0]]; break;
        case NodeKind::Add: out = val[n.child[0]] + val[n.child[1]]; break;
        case NodeKind::Sub: out = val[n.child[0]] - val[n.child[1]]; break;
        case NodeKind::Mul: out = val[n.child[0]] * val[n.child[1]]; break;
        case NodeKind::Div: out = val[n.child[0]] / val[n.child[1]]; break;
        case NodeKind::Pow: out = power(val[n.child[0]], val[n.child[1]], i); break;
        case NodeKind::Call: out = call(n, val, i); break;
      }
      if (!finite(out))
        throw ExprError(ErrorKind::NonFinite,
                        fmt::format("'{}' evaluated to a non-finite value", expr_.render(static_cast<std::uint32_t>(i))),
                        n.position);
      val[i] = out;
    }
    return val.back();
  }

 private:
  static T seeded(double v, bool is_seed) {
    if constexpr (std::is_same_v<T, Dual>) return Dual{v, is_seed ? 1.0 : 0.0};
    else return v;
  }

  [[noreturn]] void domain(std::size_t i, std::string_view what) const {
    throw ExprError(ErrorKind::Domain,
                    fmt::format("{} in '{}'", what, expr_.render(static_cast<std::uint32_t>(i))),
                    expr_.nodes()[i].position);
  }

  T power(T base, T exponent, std::size_t i) const {
    const double e = value_of(exponent);
    const double b = value_of(base);
    const double rounded = std::round(e);
    if (constant_exponent(exponent) && std::abs(e - rounded) < kIntegerTolerance &&
        std::abs(rounded) <= kMaxRepeatedMultiplication) {
      const long k = static_cast<long>(rounded);
      if (b == 0.0 && k < 0) domain(i, "zero raised to a negative power");
      return integer_power(base, k);
    }
    if (!(b > 0.0)) domain(i, "non-integer power of a non-positive base");
    using std::exp;
    using std::log;
    return exp(exponent * log(base));
  }

  T call(const Node& n, const std::vector<T>& val, std::size_t i) const {
    using std::abs;
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    const T a = val[n.child[0]];
    switch (n.func) {
      case Func::Exp: return exp(a);
      case Func::Ln:
        if (!(value_of(a) > 0.0)) domain(i, "logarithm of a non-positive value");
        return log(a);
      case Func::Sqrt:
        if (value_of(a) < 0.0) domain(i, "square root of a negative value");
        return sqrt(a);
      case Func::Sin: return sin(a);
      case Func::Cos: return cos(a);
      case Func::Abs: return abs(a);
      case Func::Pow: return power(a, val[n.child[1]], i);
    }
    return a;
  }

  const Expr& expr_;
  Env env_;
};

}  // namespace

double eval(const Expr& expr, Env env) {
  return Evaluator<double>(expr, env).run(ExprError::npos);
}

Dual eval_dual(const Expr& expr, Env env, std::size_t seed) {
  if (seed >= expr.variables().size())
    throw ExprError(ErrorKind::Binding, fmt::format("seed index {} out of range", seed));
  return Evaluator<Dual>(expr, env).run(seed);
}

Dual eval_dual(const Expr& expr, Env env, std::string_view seed_name) {
  const auto& vars = expr.variables();
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == seed_name) return eval_dual(expr, env, i);
  throw ExprError(ErrorKind::Binding, fmt::format("unknown seed variable '{}'", seed_name),
                  ExprError::npos, std::string(seed_name));
}

// ExprField -------------------------------------------------------------------

ExprField::ExprField(std::vector<Expr> components, std::vector<std::string> variables,
                     std::vector<double> parameter_values)
    : components_(std::move(components)),
      variables_(std::move(variables)),
      parameter_values_(std::move(parameter_values)) {
  if (components_.size() != variables_.size())
    throw ExprError(ErrorKind::Dimension,
                    fmt::format("{} expression(s) for {} variable(s)", components_.size(), variables_.size()));
  if (variables_.empty()) throw ExprError(ErrorKind::Dimension, "a field needs at least one variable");
  for (const auto& e : components_) {
    if (e.variables() != variables_)
      throw ExprError(ErrorKind::Dimension, "component parsed against a different variable list");
    if (e.parameters().size() != parameter_values_.size())
      throw ExprError(ErrorKind::Dimension,
                      fmt::format("component declares {} parameter(s), {} value(s) bound",
                                  e.parameters().size(), parameter_values_.size()));
  }
}

Env ExprField::env(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != variables_.size())
    throw ExprError(ErrorKind::Dimension,
                    fmt::format("state has {} component(s), field has {}", x.size(), variables_.size()));
  return Env{std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), parameter_values_};
}

Admissibility ExprField::admissible(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != variables_.size())
    return Admissibility::reject(0, variables_.front(), "state dimension mismatch");
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]))
      return Admissibility::reject(static_cast<std::size_t>(i), variables_[i],
                                   fmt::format("{} is not finite", variables_[i]));
  const Env e = env(x);
  for (std::size_t c = 0; c < components_.size(); ++c) {
    try {
      for (std::size_t j = 0; j < variables_.size(); ++j) (void)eval_dual(components_[c], e, j);
    } catch (const ExprError& err) {
      return Admissibility::reject(c, variables_[c],
                                   fmt::format("component {} ({}): {}", c + 1, variables_[c], err.what()));
    }
  }
  return Admissibility::accept();
}

Vector ExprField::eval(const Vector& x) const {
  const Env e = env(x);
  Vector out(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t c = 0; c < components_.size(); ++c) {
    try {
      out[static_cast<Eigen::Index>(c)] = vfexpr::eval(components_[c], e);
    } catch (const ExprError& err) {
      throw DomainError(c, variables_[c], err.what());
    }
  }
  return out;
}

Matrix ExprField::jacobian(const Vector& x) const {
  const Env e = env(x);
  const auto n = static_cast<Eigen::Index>(components_.size());
  Matrix jac(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      try {
        jac(i, j) = eval_dual(components_[i], e, static_cast<std::size_t>(j)).d;
      } catch (const ExprError& err) {
        throw DomainError(static_cast<std::size_t>(i), variables_[i], err.what());
      }
    }
  }
  return jac;
}

FieldPtr field_from_exprs(std::vector<Expr> exprs, std::vector<std::string> variables,
                          std::vector<double> parameter_values) {
  return std::make_shared<ExprField>(std::move(exprs), std::move(variables), std::move(parameter_values));
}

FieldPtr field_from_exprs(const std::vector<std::string>& sources, const std::vector<std::string>& variables,
                          const std::vector<std::pair<std::string, double>>& parameters) {
  if (sources.size() != variables.size())
    throw ExprError(ErrorKind::Dimension,
                    fmt::format("{} expression(s) for {} variable(s)", sources.size(), variables.size()));
  std::vector<std::string> names;
  std::vector<double> values;
  for (const auto& [name, value] : parameters) {
    names.push_back(name);
    values.push_back(value);
  }
  std::vector<Expr> exprs;
  for (const auto& s : sources) exprs.push_back(parse(s, variables, names));
  return field_from_exprs(std::move(exprs), variables, std::move(values));
}

}  // namespace jetlag::vfexpr
