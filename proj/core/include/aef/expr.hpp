#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "aef/rational.hpp"

namespace aef {

enum class Kind : std::uint8_t { Const, Coord, Param, Opaque, Call, Pow, Mul, Add, Neg, Div };
enum class Fn : std::uint8_t { Exp, Log, Sin, Cos, Sinh, Cosh, Atan };

const char* fn_name(Fn f);
std::optional<Fn> fn_from_name(const char* name);

struct Node;

// Immutable expression handle. Copies share the underlying tree.
//
// Arithmetic operators build canonical forms (see normalize). The raw::
// builders keep the tree exactly as written and are used by the parser.
class Expr {
 public:
  Expr();
  Expr(std::int64_t v);  // NOLINT(google-explicit-constructor)
  Expr(int v) : Expr(static_cast<std::int64_t>(v)) {}  // NOLINT(google-explicit-constructor)
  Expr(const Rational& v);  // NOLINT(google-explicit-constructor)

  static Expr coord(int i);
  static Expr param(int i);
  // order-th derivative of function `fn`, whose argument is coordinate `coord`.
  static Expr opaque(int fn, int coord, int order = 0);

  Kind kind() const;
  const std::vector<Expr>& args() const;
  const Rational& value() const;  // Const only
  int index() const;              // Coord, Param, Opaque
  int order() const;              // Opaque derivative order
  int opaque_coord() const;       // Opaque argument coordinate
  Fn fn() const;                  // Call only
  std::size_t hash() const;
  const Node* get() const { return node_.get(); }

  bool is_const() const { return kind() == Kind::Const; }
  bool is_zero_literal() const;
  bool is_one_literal() const;
  std::optional<Rational> as_rational() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  Kind kind = Kind::Const;
  Fn fn = Fn::Exp;
  int index = 0;
  int order = 0;
  int coord = 0;
  Rational value;
  std::vector<Expr> args;
  std::size_t hash = 0;
};

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

// Canonicalizing constructors.
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr& base, const Expr& exponent);
Expr call(Fn f, const Expr& arg);
inline Expr exp(const Expr& x) { return call(Fn::Exp, x); }
inline Expr log(const Expr& x) { return call(Fn::Log, x); }
inline Expr sin(const Expr& x) { return call(Fn::Sin, x); }
inline Expr cos(const Expr& x) { return call(Fn::Cos, x); }
inline Expr sinh(const Expr& x) { return call(Fn::Sinh, x); }
inline Expr cosh(const Expr& x) { return call(Fn::Cosh, x); }
inline Expr atan(const Expr& x) { return call(Fn::Atan, x); }

// Verbatim constructors: no folding, no reordering.
namespace raw {
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr neg(const Expr& x);
Expr div(const Expr& a, const Expr& b);  // throws on a literal zero denominator
Expr pow(const Expr& base, const Expr& exponent);
Expr call(Fn f, const Expr& arg);
}  // namespace raw

// Total order on expressions, used for canonical ordering.
int compare(const Expr& a, const Expr& b);

// Flatten, fold constants, collect like terms and powers, cancel equal
// factors, expand small polynomial products. No trig/exp identities beyond
// exp(a)exp(b) = exp(a+b). Idempotent.
Expr normalize(const Expr& e);

struct Var {
  enum class Kind { Coord, Param } kind = Kind::Coord;
  int index = 0;
  static Var coord(int i) { return {Kind::Coord, i}; }
  static Var param(int i) { return {Kind::Param, i}; }
};

Expr differentiate(const Expr& e, Var v);
inline Expr diff(const Expr& e, int coord) { return differentiate(e, Var::coord(coord)); }

bool depends_on(const Expr& e, Var v);
bool depends_on_coordinates(const Expr& e);
bool contains_opaque(const Expr& e);

// Rebuild `e`, replacing every leaf for which `leaf` returns a value.
Expr substitute(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& leaf);

// Number of distinct nodes (shared subtrees counted once).
std::size_t dag_size(const Expr& e);

}  // namespace aef
