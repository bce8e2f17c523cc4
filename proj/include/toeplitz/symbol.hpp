#pragma once

// Separately radial symbols a(r_1, ..., r_n): expression trees over the radii,
// with the macros
//   S  = sum r_k^2
//   Ek = k-th elementary symmetric polynomial of (r_1^2, ..., r_n^2)
//   V  = prod_{i<j} (r_i^2 - r_j^2)
//
// Grammar (whitespace-insensitive, indices 1-based):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' ['-'] integer)?
//   base   := number | 'r' index | 'S' | 'E' index | 'V'
//           | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp | abs | sign | sqrt

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "toeplitz/multiindex.hpp"

namespace toeplitz {

struct ParseError : std::invalid_argument {
  ParseError(const std::string& msg, std::size_t pos)
      : std::invalid_argument(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

struct SymbolDomainError : std::domain_error {
  SymbolDomainError(const std::string& msg, std::string subexpr)
      : std::domain_error(msg + " in '" + subexpr + "'"), subexpression(std::move(subexpr)) {}
  std::string subexpression;
};

enum class Func { sin, cos, exp, abs, sign, sqrt };
enum class BinOp { add, sub, mul, div };
enum class MacroKind { S, E, V };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

namespace ast {
struct Number { double value; };
struct Radius { int index; };  // zero-based
struct Macro { MacroKind kind; int index; };  // index used by E only (1-based)
struct Negate { NodePtr arg; };
struct Binary { BinOp op; NodePtr lhs, rhs; };
struct Power { NodePtr base; int exponent; };
struct Call { Func fn; NodePtr arg; };
}  // namespace ast

struct Node {
  std::variant<ast::Number, ast::Radius, ast::Macro, ast::Negate, ast::Binary, ast::Power, ast::Call> v;
};

namespace detail {
template <typename T>
NodePtr make(T t) { return std::make_shared<const Node>(Node{std::move(t)}); }
template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline const char* func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::exp: return "exp";
    case Func::abs: return "abs";
    case Func::sign: return "sign";
    case Func::sqrt: return "sqrt";
  }
  return "?";
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string print(const NodePtr& p);

inline std::string print(const Node& node) {
  return std::visit(
      overloaded{
          [](const ast::Number& x) {
            auto s = format_number(std::abs(x.value));
            return std::signbit(x.value) ? "(-" + s + ")" : s;
          },
          [](const ast::Radius& x) { return "r" + std::to_string(x.index + 1); },
          [](const ast::Macro& x) -> std::string {
            switch (x.kind) {
              case MacroKind::S: return "S";
              case MacroKind::V: return "V";
              case MacroKind::E: return "E" + std::to_string(x.index);
            }
            return "?";
          },
          [](const ast::Negate& x) { return "(-" + print(x.arg) + ")"; },
          [](const ast::Binary& x) {
            static constexpr char ops[] = {'+', '-', '*', '/'};
            return "(" + print(x.lhs) + ops[static_cast<int>(x.op)] + print(x.rhs) + ")";
          },
          [](const ast::Power& x) { return "(" + print(x.base) + "^" + std::to_string(x.exponent) + ")"; },
          [](const ast::Call& x) { return std::string(func_name(x.fn)) + "(" + print(x.arg) + ")"; },
      },
      node.v);
}

inline std::string print(const NodePtr& p) { return print(*p); }

class Parser {
 public:
  Parser(std::string_view text, int n) : s_(text), n_(n) {}

  NodePtr parse() {
    auto e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  std::string_view s_;
  int n_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (eat('+')) lhs = make(ast::Binary{BinOp::add, lhs, term()});
      else if (eat('-')) lhs = make(ast::Binary{BinOp::sub, lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    auto lhs = factor();
    for (;;) {
      if (eat('*')) lhs = make(ast::Binary{BinOp::mul, lhs, factor()});
      else if (eat('/')) lhs = make(ast::Binary{BinOp::div, lhs, factor()});
      else return lhs;
    }
  }

  NodePtr factor() {
    if (eat('-')) {
      auto arg = factor();
      if (auto* num = std::get_if<ast::Number>(&arg->v)) return make(ast::Number{-num->value});
      return make(ast::Negate{arg});
    }
    auto b = base();
    if (eat('^')) {
      bool neg = eat('-');
      skip_ws();
      const std::size_t start = pos_;
      int k = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        k = k * 10 + (s_[pos_] - '0');
        if (k > 10000) throw ParseError("exponent too large", start);
        ++pos_;
      }
      if (pos_ == start) throw ParseError("expected integer exponent", pos_);
      return make(ast::Power{b, neg ? -k : k});
    }
    return b;
  }

  int index(std::size_t at) {
    const std::size_t start = pos_;
    int k = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      k = k * 10 + (s_[pos_] - '0');
      if (k > 1000) throw ParseError("index too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected index", at);
    return k;
  }

  NodePtr base() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (eat('(')) {
      auto e = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      std::size_t end = pos_;
      while (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) ++end;
      const auto word = s_.substr(start, end - start);
      static constexpr std::pair<std::string_view, Func> funcs[] = {
          {"sin", Func::sin}, {"cos", Func::cos}, {"exp", Func::exp},
          {"abs", Func::abs}, {"sign", Func::sign}, {"sqrt", Func::sqrt}};
      for (auto [name, fn] : funcs) {
        if (word == name) {
          pos_ = end;
          if (!eat('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
          auto arg = expr();
          if (!eat(')')) throw ParseError("expected ')'", pos_);
          return make(ast::Call{fn, arg});
        }
      }
      if (word == "r") {
        pos_ = end;
        const int k = index(start);
        if (k < 1 || k > n_) {
          throw ParseError("unknown variable r" + std::to_string(k) + " for n = " + std::to_string(n_), start);
        }
        return make(ast::Radius{k - 1});
      }
      if (word == "E") {
        pos_ = end;
        const int k = index(start);
        if (k < 1 || k > n_) {
          throw ParseError("unknown macro E" + std::to_string(k) + " for n = " + std::to_string(n_), start);
        }
        return make(ast::Macro{MacroKind::E, k});
      }
      if (word == "S" || word == "V") {
        pos_ = end;
        return make(ast::Macro{word == "S" ? MacroKind::S : MacroKind::V, 0});
      }
      throw ParseError("unknown identifier '" + std::string(word) + "'", start);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string tok(s_.substr(start, pos_ - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ParseError("malformed number '" + tok + "'", start);
    }
    if (used != tok.size()) throw ParseError("malformed number '" + tok + "'", start);
    return make(ast::Number{v});
  }
};

}  // namespace detail

// Immutable parsed symbol together with its dimension.
class SymbolExpr {
 public:
  SymbolExpr(NodePtr root, int n) : root_(std::move(root)), n_(n) { validate_dimension(n_); }

  const NodePtr& root() const { return root_; }
  int n() const { return n_; }

  // Fully parenthesized; parse(to_string()) reproduces the tree.
  std::string to_string() const { return detail::print(root_); }

  double operator()(std::span<const double> r) const {
    if (static_cast<int>(r.size()) != n_) throw DimensionError("point dimension does not match symbol");
    return eval(*root_, r);
  }

 private:
  NodePtr root_;
  int n_;

  double eval(const Node& node, std::span<const double> r) const {
    return std::visit(
        detail::overloaded{
            [](const ast::Number& x) { return x.value; },
            [&](const ast::Radius& x) { return r[static_cast<std::size_t>(x.index)]; },
            [&](const ast::Macro& x) { return eval_macro(x, r); },
            [&](const ast::Negate& x) { return -eval(*x.arg, r); },
            [&](const ast::Binary& x) {
              const double a = eval(*x.lhs, r);
              const double b = eval(*x.rhs, r);
              switch (x.op) {
                case BinOp::add: return a + b;
                case BinOp::sub: return a - b;
                case BinOp::mul: return a * b;
                case BinOp::div:
                  if (b == 0.0) throw SymbolDomainError("division by zero", detail::print(node));
                  return a / b;
              }
              return 0.0;
            },
            [&](const ast::Power& x) {
              const double b = eval(*x.base, r);
              if (x.exponent < 0 && b == 0.0) {
                throw SymbolDomainError("negative power of zero", detail::print(node));
              }
              return std::pow(b, x.exponent);
            },
            [&](const ast::Call& x) {
              const double a = eval(*x.arg, r);
              switch (x.fn) {
                case Func::sin: return std::sin(a);
                case Func::cos: return std::cos(a);
                case Func::exp: return std::exp(a);
                case Func::abs: return std::abs(a);
                case Func::sign: return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
                case Func::sqrt:
                  if (a < 0.0) throw SymbolDomainError("square root of negative value", detail::print(node));
                  return std::sqrt(a);
              }
              return 0.0;
            },
        },
        node.v);
  }

  double eval_macro(const ast::Macro& m, std::span<const double> r) const {
    switch (m.kind) {
      case MacroKind::S: {
        double s = 0.0;
        for (double x : r) s += x * x;
        return s;
      }
      case MacroKind::V: {
        double v = 1.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
          for (std::size_t j = i + 1; j < r.size(); ++j) v *= r[i] * r[i] - r[j] * r[j];
        }
        return v;
      }
      case MacroKind::E: {
        // e[j] accumulates the degree-j elementary polynomial.
        std::vector<double> e(static_cast<std::size_t>(m.index) + 1, 0.0);
        e[0] = 1.0;
        for (double x : r) {
          const double x2 = x * x;
          for (int j = m.index; j >= 1; --j) e[static_cast<std::size_t>(j)] += x2 * e[static_cast<std::size_t>(j) - 1];
        }
        return e[static_cast<std::size_t>(m.index)];
      }
    }
    return 0.0;
  }
};

inline SymbolExpr parse_symbol(std::string_view text, int n) {
  validate_dimension(n);
  return SymbolExpr(detail::Parser(text, n).parse(), n);
}

inline double eval_symbol(const SymbolExpr& a, std::span<const double> r) {
  if (static_cast<int>(r.size()) != a.n()) throw DimensionError("point dimension does not match symbol");
  return a(r);
}

// ---------------------------------------------------------------------------
// Tree construction and rewriting
// ---------------------------------------------------------------------------

namespace sym {
inline NodePtr number(double v) { return detail::make(ast::Number{v}); }
inline NodePtr add(NodePtr a, NodePtr b) { return detail::make(ast::Binary{BinOp::add, std::move(a), std::move(b)}); }
inline NodePtr sub(NodePtr a, NodePtr b) { return detail::make(ast::Binary{BinOp::sub, std::move(a), std::move(b)}); }
inline NodePtr mul(NodePtr a, NodePtr b) { return detail::make(ast::Binary{BinOp::mul, std::move(a), std::move(b)}); }
inline NodePtr div(NodePtr a, NodePtr b) { return detail::make(ast::Binary{BinOp::div, std::move(a), std::move(b)}); }
inline NodePtr negate(NodePtr a) { return detail::make(ast::Negate{std::move(a)}); }
}  // namespace sym

// The symbol a_sigma(r) = a(sigma(r)), built by relabelling radii. S and Ek
// are symmetric; V picks up Sgn(sigma).
inline SymbolExpr permute_symbol(const SymbolExpr& a, const Permutation& sigma) {
  if (sigma.size() != a.n()) throw DimensionError("permutation size does not match symbol");
  const bool odd = !sigma.is_even();
  auto rewrite = [&](auto&& self, const NodePtr& p) -> NodePtr {
    return std::visit(
        detail::overloaded{
            [&](const ast::Number&) { return p; },
            [&](const ast::Radius& x) { return detail::make(ast::Radius{sigma(x.index)}); },
            [&](const ast::Macro& x) {
              if (x.kind == MacroKind::V && odd) return sym::negate(p);
              return p;
            },
            [&](const ast::Negate& x) { return sym::negate(self(self, x.arg)); },
            [&](const ast::Binary& x) {
              return detail::make(ast::Binary{x.op, self(self, x.lhs), self(self, x.rhs)});
            },
            [&](const ast::Power& x) { return detail::make(ast::Power{self(self, x.base), x.exponent}); },
            [&](const ast::Call& x) { return detail::make(ast::Call{x.fn, self(self, x.arg)}); },
        },
        p->v);
  };
  return SymbolExpr(rewrite(rewrite, a.root()), a.n());
}

// A symbol of the form c * prod r_k^{2 beta_k}.
struct MonomialForm {
  double coefficient = 1.0;
  MultiIndex beta;
};

// Recognizes constants, radii, En, products and nonnegative integer powers
// thereof whose radius exponents are all even.
inline std::optional<MonomialForm> as_monomial(const SymbolExpr& a) {
  struct Raw {
    double c;
    std::vector<int> e;  // exponents in r
  };
  const auto n = static_cast<std::size_t>(a.n());
  auto walk = [&](auto&& self, const NodePtr& p) -> std::optional<Raw> {
    return std::visit(
        detail::overloaded{
            [&](const ast::Number& x) -> std::optional<Raw> { return Raw{x.value, std::vector<int>(n, 0)}; },
            [&](const ast::Radius& x) -> std::optional<Raw> {
              Raw r{1.0, std::vector<int>(n, 0)};
              r.e[static_cast<std::size_t>(x.index)] = 1;
              return r;
            },
            [&](const ast::Macro& x) -> std::optional<Raw> {
              if (x.kind == MacroKind::E && x.index == static_cast<int>(n)) return Raw{1.0, std::vector<int>(n, 2)};
              return std::nullopt;
            },
            [&](const ast::Negate& x) -> std::optional<Raw> {
              auto r = self(self, x.arg);
              if (r) r->c = -r->c;
              return r;
            },
            [&](const ast::Binary& x) -> std::optional<Raw> {
              if (x.op != BinOp::mul) return std::nullopt;
              auto l = self(self, x.lhs);
              auto r = self(self, x.rhs);
              if (!l || !r) return std::nullopt;
              for (std::size_t k = 0; k < n; ++k) l->e[k] += r->e[k];
              l->c *= r->c;
              return l;
            },
            [&](const ast::Power& x) -> std::optional<Raw> {
              if (x.exponent < 0) return std::nullopt;
              auto b = self(self, x.base);
              if (!b) return std::nullopt;
              for (auto& e : b->e) e *= x.exponent;
              b->c = std::pow(b->c, x.exponent);
              return b;
            },
            [&](const ast::Call&) -> std::optional<Raw> { return std::nullopt; },
        },
        p->v);
  };
  auto raw = walk(walk, a.root());
  if (!raw) return std::nullopt;
  std::vector<int> beta(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (raw->e[k] % 2 != 0) return std::nullopt;
    beta[k] = raw->e[k] / 2;
  }
  return MonomialForm{raw->c, MultiIndex(std::move(beta))};
}

}  // namespace toeplitz
