#pragma once

// Expression language for user-defined autonomous vector fields.
//
// Grammar, loosest to tightest:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | ident | ident '(' sum (',' sum)* ')' | '(' sum ')'
//
// so `-x^2` is -(x^2) and `2^3^2` is 512. Implicit multiplication ("2x") is a
// lexical error.

#include "jetlag/dual.hpp"
#include "jetlag/types.hpp"
#include "jetlag/vector_field.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jetlag::vfexpr {

enum class ErrorKind { Lexical, Syntax, Binding, Arity, Domain, NonFinite, Dimension };

std::string_view to_string(ErrorKind kind);

class ExprError : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ExprError(ErrorKind kind, const std::string& message, std::size_t position = npos,
            std::string name = {});

  ErrorKind kind() const noexcept { return kind_; }
  /// Byte offset into the source, or npos.
  std::size_t position() const noexcept { return position_; }
  /// Offending identifier for binding errors.
  const std::string& name() const noexcept { return name_; }

 private:
  ErrorKind kind_;
  std::size_t position_;
  std::string name_;
};

enum class Func : std::uint8_t { Exp, Ln, Sqrt, Sin, Cos, Abs, Pow };

enum class NodeKind : std::uint8_t { Literal, Variable, Parameter, Negate, Add, Sub, Mul, Div, Pow, Call };

struct Node {
  NodeKind kind = NodeKind::Literal;
  Func func = Func::Exp;
  std::uint8_t arity = 0;
  double value = 0.0;     // Literal
  std::size_t slot = 0;   // Variable / Parameter index
  std::array<std::uint32_t, 2> child{};
  std::size_t position = 0;
};

/// Immutable, bound AST. Nodes are stored children-before-parents; the root is
/// the last node, so the tree is acyclic by construction.
class Expr {
 public:
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& root() const { return nodes_.back(); }
  std::uint32_t root_index() const { return static_cast<std::uint32_t>(nodes_.size() - 1); }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::vector<std::string>& parameters() const noexcept { return parameters_; }
  const std::string& source() const noexcept { return source_; }

  /// Canonical text: minimal parentheses, literals with 17 significant digits.
  std::string render() const;
  std::string render(std::uint32_t node) const;

  /// Same shape, same literals (bitwise), same bindings.
  bool structurally_equal(const Expr& other) const;

 private:
  friend class Parser;
  std::vector<Node> nodes_;
  std::vector<std::string> variables_;
  std::vector<std::string> parameters_;
  std::string source_;
};

/// Parses and binds `source`. Identifiers resolve to a declared variable, then
/// to a positional name x1…xn, then to a declared parameter.
Expr parse(std::string_view source, std::vector<std::string> variables,
           std::vector<std::string> parameters = {});

struct Env {
  std::span<const double> variables;
  std::span<const double> parameters;
};

double eval(const Expr& expr, Env env);

/// Value and partial derivative with respect to variable `seed`.
Dual eval_dual(const Expr& expr, Env env, std::size_t seed);
Dual eval_dual(const Expr& expr, Env env, std::string_view seed_name);

/// Vector field whose components are expressions over a common variable list.
/// The Jacobian is assembled one column per dual-seeded evaluation.
class ExprField final : public VectorField {
 public:
  ExprField(std::vector<Expr> components, std::vector<std::string> variables,
            std::vector<double> parameter_values);

  std::size_t dimension() const override { return variables_.size(); }
  std::vector<std::string> variable_names() const override { return variables_; }
  Admissibility admissible(const Vector& x) const override;
  Vector eval(const Vector& x) const override;
  Matrix jacobian(const Vector& x) const override;

  const std::vector<Expr>& components() const noexcept { return components_; }

 private:
  Env env(const Vector& x) const;

  std::vector<Expr> components_;
  std::vector<std::string> variables_;
  std::vector<double> parameter_values_;
};

/// Parses each source against `variables` and the names in `parameters`.
FieldPtr field_from_exprs(const std::vector<std::string>& sources,
                          const std::vector<std::string>& variables,
                          const std::vector<std::pair<std::string, double>>& parameters);

FieldPtr field_from_exprs(std::vector<Expr> exprs, std::vector<std::string> variables,
                          std::vector<double> parameter_values);

bool is_identifier(std::string_view name);

}  // namespace jetlag::vfexpr
