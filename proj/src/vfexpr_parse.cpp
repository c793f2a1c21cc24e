#include "jetlag/vfexpr.hpp"

#include <cctype>
#include <charconv>
#include <cstring>
#include <optional>

#include <fmt/format.h>

namespace jetlag::vfexpr {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Lexical: return "lexical error";
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::Binding: return "binding error";
    case ErrorKind::Arity: return "arity error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::NonFinite: return "non-finite result";
    case ErrorKind::Dimension: return "dimension mismatch";
  }
  return "error";
}

ExprError::ExprError(ErrorKind kind, const std::string& message, std::size_t position,
                     std::string name)
    : std::runtime_error(position == npos
                             ? fmt::format("{}: {}", to_string(kind), message)
                             : fmt::format("{} at position {}: {}", to_string(kind), position, message)),
      kind_(kind),
      position_(position),
      name_(std::move(name)) {}

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  const auto first = static_cast<unsigned char>(name.front());
  if (!(std::isalpha(first) || first == '_')) return false;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || u == '_')) return false;
  }
  return true;
}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t pos;
  double number = 0.0;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (digit(c) || (c == '.' && i + 1 < src.size() && digit(src[i + 1]))) {
      while (i < src.size() && digit(src[i])) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && digit(src[i])) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j >= src.size() || !digit(src[j]))
          throw ExprError(ErrorKind::Lexical, "malformed exponent in numeric literal", i);
        while (j < src.size() && digit(src[j])) ++j;
        i = j;
      }
      if (i < src.size() && (ident_start(src[i]) || src[i] == '.'))
        throw ExprError(ErrorKind::Lexical,
                        fmt::format("unexpected '{}' after number (no implicit multiplication)", src[i]), i);
      Token t{Tok::Number, src.substr(start, i - start), start};
      // from_chars for double is available in libstdc++ 11.
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (ec != std::errc() || ptr != t.text.data() + t.text.size())
        throw ExprError(ErrorKind::Lexical, fmt::format("bad numeric literal '{}'", t.text), start);
      out.push_back(t);
      continue;
    }
    if (ident_start(c)) {
      while (i < src.size() && ident_char(src[i])) ++i;
      out.push_back({Tok::Ident, src.substr(start, i - start), start});
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      default:
        throw ExprError(ErrorKind::Lexical, fmt::format("unexpected character '{}'", c), start);
    }
    out.push_back({kind, src.substr(start, 1), start});
    ++i;
  }
  out.push_back({Tok::End, {}, src.size()});
  return out;
}

struct FuncInfo {
  std::string_view name;
  Func func;
  std::uint8_t arity;
};

constexpr FuncInfo kFunctions[] = {
    {"exp", Func::Exp, 1}, {"ln", Func::Ln, 1},   {"sqrt", Func::Sqrt, 1}, {"sin", Func::Sin, 1},
    {"cos", Func::Cos, 1}, {"abs", Func::Abs, 1}, {"pow", Func::Pow, 2},
};

const FuncInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return &f;
  return nullptr;
}

std::string_view func_name(Func f) {
  for (const auto& info : kFunctions)
    if (info.func == f) return info.name;
  return "?";
}

// Positional name x<k>, 1-based; nullopt if `name` is not of that form.
std::optional<std::size_t> positional_index(std::string_view name) {
  if (name.size() < 2 || name[0] != 'x') return std::nullopt;
  std::size_t k = 0;
  auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
  if (ec != std::errc() || ptr != name.data() + name.size() || k == 0 || name[1] == '0')
    return std::nullopt;
  return k;
}

}  // namespace

class Parser {
 public:
  Parser(std::string_view src, std::vector<std::string> variables, std::vector<std::string> parameters)
      : tokens_(lex(src)) {
    expr_.source_ = std::string(src);
    expr_.variables_ = std::move(variables);
    expr_.parameters_ = std::move(parameters);
    for (const auto& v : expr_.variables_)
      if (!is_identifier(v))
        throw ExprError(ErrorKind::Binding, fmt::format("invalid variable name '{}'", v), ExprError::npos, v);
    for (const auto& p : expr_.parameters_) {
      if (!is_identifier(p))
        throw ExprError(ErrorKind::Binding, fmt::format("invalid parameter name '{}'", p), ExprError::npos, p);
      if (auto k = positional_index(p); k && *k <= expr_.variables_.size())
        throw ExprError(ErrorKind::Binding,
                        fmt::format("parameter '{}' shadows a positional variable", p), ExprError::npos, p);
    }
  }

  Expr run() {
    if (tokens_.front().kind == Tok::End) throw ExprError(ErrorKind::Syntax, "empty expression", 0);
    sum();
    const Token& t = peek();
    if (t.kind == Tok::RParen) throw ExprError(ErrorKind::Syntax, "unbalanced parenthesis", t.pos);
    if (t.kind != Tok::End) throw ExprError(ErrorKind::Syntax, fmt::format("unexpected '{}'", t.text), t.pos);
    return std::move(expr_);
  }

 private:
  const Token& peek() const { return tokens_[at_]; }
  const Token& next() { return tokens_[at_++]; }

  std::uint32_t push(Node n) {
    expr_.nodes_.push_back(n);
    return static_cast<std::uint32_t>(expr_.nodes_.size() - 1);
  }
  std::uint32_t binary(NodeKind kind, std::uint32_t lhs, std::uint32_t rhs, std::size_t pos) {
    Node n;
    n.kind = kind;
    n.arity = 2;
    n.child = {lhs, rhs};
    n.position = pos;
    return push(n);
  }

  std::uint32_t sum() {
    auto lhs = product();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& op = next();
      auto rhs = product();
      lhs = binary(op.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub, lhs, rhs, op.pos);
    }
    return lhs;
  }

  std::uint32_t product() {
    auto lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token& op = next();
      auto rhs = unary();
      lhs = binary(op.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div, lhs, rhs, op.pos);
    }
    return lhs;
  }

  std::uint32_t unary() {
    if (peek().kind == Tok::Minus) {
      const Token& op = next();
      auto operand = unary();
      Node n;
      n.kind = NodeKind::Negate;
      n.arity = 1;
      n.child = {operand, 0};
      n.position = op.pos;
      return push(n);
    }
    return power();
  }

  std::uint32_t power() {
    auto base = primary();
    if (peek().kind == Tok::Caret) {
      const Token& op = next();
      auto exponent = unary();
      return binary(NodeKind::Pow, base, exponent, op.pos);
    }
    return base;
  }

  std::uint32_t primary() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Number: {
        Node n;
        n.kind = NodeKind::Literal;
        n.value = t.number;
        n.position = t.pos;
        return push(n);
      }
      case Tok::Ident:
        if (peek().kind == Tok::LParen) return call(t);
        return identifier(t);
      case Tok::LParen: {
        auto inner = sum();
        const Token& close = next();
        if (close.kind != Tok::RParen) {
          if (close.kind == Tok::End) throw ExprError(ErrorKind::Syntax, "unbalanced parenthesis", close.pos);
          throw ExprError(ErrorKind::Syntax, fmt::format("expected ')' but found '{}'", close.text), close.pos);
        }
        return inner;
      }
      case Tok::End: throw ExprError(ErrorKind::Syntax, "unexpected end of expression", t.pos);
      case Tok::RParen: throw ExprError(ErrorKind::Syntax, "unbalanced parenthesis", t.pos);
      default: throw ExprError(ErrorKind::Syntax, fmt::format("unexpected '{}'", t.text), t.pos);
    }
  }

  std::uint32_t identifier(const Token& t) {
    const auto& vars = expr_.variables_;
    const auto& params = expr_.parameters_;
    Node n;
    n.position = t.pos;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == t.text) {
        n.kind = NodeKind::Variable;
        n.slot = i;
        return push(n);
      }
    }
    if (auto k = positional_index(t.text); k && *k <= vars.size()) {
      n.kind = NodeKind::Variable;
      n.slot = *k - 1;
      return push(n);
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i] == t.text) {
        n.kind = NodeKind::Parameter;
        n.slot = i;
        return push(n);
      }
    }
    throw ExprError(ErrorKind::Binding, fmt::format("unknown identifier '{}'", t.text), t.pos,
                    std::string(t.text));
  }

  std::uint32_t call(const Token& name) {
    const FuncInfo* info = find_function(name.text);
    if (info == nullptr)
      throw ExprError(ErrorKind::Binding, fmt::format("unknown function '{}'", name.text), name.pos,
                      std::string(name.text));
    next();  // '('
    std::vector<std::uint32_t> args;
    if (peek().kind != Tok::RParen) {
      args.push_back(sum());
      while (peek().kind == Tok::Comma) {
        next();
        args.push_back(sum());
      }
    }
    const Token& close = next();
    if (close.kind != Tok::RParen) {
      if (close.kind == Tok::End) throw ExprError(ErrorKind::Syntax, "unbalanced parenthesis", close.pos);
      throw ExprError(ErrorKind::Syntax, fmt::format("expected ',' or ')' but found '{}'", close.text), close.pos);
    }
    if (args.size() != info->arity)
      throw ExprError(ErrorKind::Arity,
                      fmt::format("{} expects {} argument(s), got {}", info->name, info->arity, args.size()),
                      name.pos, std::string(name.text));
    Node n;
    n.kind = NodeKind::Call;
    n.func = info->func;
    n.arity = info->arity;
    n.child = {args[0], args.size() > 1 ? args[1] : 0};
    n.position = name.pos;
    return push(n);
  }

  std::vector<Token> tokens_;
  std::size_t at_ = 0;
  Expr expr_;
};

Expr parse(std::string_view source, std::vector<std::string> variables, std::vector<std::string> parameters) {
  return Parser(source, std::move(variables), std::move(parameters)).run();
}

// Rendering -------------------------------------------------------------------

namespace {

int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Negate: return 3;
    case NodeKind::Pow: return 4;
    default: return 5;
  }
}

std::string_view op_text(NodeKind k) {
  switch (k) {
    case NodeKind::Add: return " + ";
    case NodeKind::Sub: return " - ";
    case NodeKind::Mul: return " * ";
    case NodeKind::Div: return " / ";
    case NodeKind::Pow: return "^";
    default: return "?";
  }
}

}  // namespace

std::string Expr::render() const { return render(root_index()); }

std::string Expr::render(std::uint32_t index) const {
  const Node& n = nodes_.at(index);
  auto wrap = [&](std::uint32_t child, bool paren) {
    auto s = render(child);
    return paren ? "(" + s + ")" : s;
  };
  switch (n.kind) {
    case NodeKind::Literal: return fmt::format("{:.17g}", n.value);
    case NodeKind::Variable: return variables_[n.slot];
    case NodeKind::Parameter: return parameters_[n.slot];
    case NodeKind::Negate: return "-" + wrap(n.child[0], precedence(nodes_[n.child[0]].kind) < 3);
    case NodeKind::Call: {
      std::string s = std::string(func_name(n.func)) + "(" + render(n.child[0]);
      if (n.arity == 2) s += ", " + render(n.child[1]);
      return s + ")";
    }
    case NodeKind::Pow:
      return wrap(n.child[0], precedence(nodes_[n.child[0]].kind) <= 4) + "^" +
             wrap(n.child[1], precedence(nodes_[n.child[1]].kind) < 3);
    default: {
      const int p = precedence(n.kind);
      return wrap(n.child[0], precedence(nodes_[n.child[0]].kind) < p) + std::string(op_text(n.kind)) +
             wrap(n.child[1], precedence(nodes_[n.child[1]].kind) <= p);
    }
  }
}

bool Expr::structurally_equal(const Expr& other) const {
  if (variables_ != other.variables_ || parameters_ != other.parameters_) return false;
  auto same = [&](auto&& self, std::uint32_t a, std::uint32_t b) -> bool {
    const Node& x = nodes_[a];
    const Node& y = other.nodes_[b];
    if (x.kind != y.kind || x.arity != y.arity) return false;
    switch (x.kind) {
      case NodeKind::Literal: return std::memcmp(&x.value, &y.value, sizeof(double)) == 0;
      case NodeKind::Variable:
      case NodeKind::Parameter: return x.slot == y.slot;
      case NodeKind::Call:
        if (x.func != y.func) return false;
        break;
      default: break;
    }
    for (std::uint8_t i = 0; i < x.arity; ++i)
      if (!self(self, x.child[i], y.child[i])) return false;
    return true;
  };
  return !nodes_.empty() && !other.nodes_.empty() && same(same, root_index(), other.root_index());
}

}  // namespace jetlag::vfexpr
