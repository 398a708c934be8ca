#include "aef/parse.hpp"

#include <algorithm>
#include <cctype>
#include <utility>
#include <vector>

namespace aef {
namespace {

struct Operand {
  Expr e;
  bool int_literal = false;  // a bare integer token, eligible for p/q folding
  bool own_mul = false;      // a product built at the current level
};

class Parser {
 public:
  Parser(const std::string& s, const SymbolTable& t) : s_(s), t_(t) {}

  Expr run() {
    Expr e = sum().e;
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  const std::string& s_;
  const SymbolTable& t_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Operand sum() {
    std::vector<Expr> terms{product().e};
    while (true) {
      if (accept('+')) {
        terms.push_back(product().e);
      } else if (accept('-')) {
        terms.push_back(raw::neg(product().e));
      } else {
        break;
      }
    }
    if (terms.size() == 1) return {terms.front()};
    return {raw::add(std::move(terms))};
  }

  Operand product() {
    Operand acc = unary();
    while (true) {
      if (accept('*')) {
        Operand rhs = unary();
        if (acc.own_mul) {
          auto args = acc.e.args();
          args.push_back(rhs.e);
          acc = {raw::mul(std::move(args)), false, true};
        } else {
          acc = {raw::mul({acc.e, rhs.e}), false, true};
        }
      } else if (peek('/')) {
        std::size_t at = pos_;
        ++pos_;
        Operand rhs = unary();
        if (rhs.e.is_zero_literal()) throw ParseError("division by the zero constant", at);
        if (acc.int_literal && rhs.int_literal) {
          acc = {Expr(acc.e.value() / rhs.e.value())};
        } else {
          acc = {raw::div(acc.e, rhs.e)};
        }
      } else {
        break;
      }
    }
    return acc;
  }

  Operand unary() {
    if (accept('-')) return {raw::neg(unary().e)};
    return power();
  }

  Operand power() {
    Operand base = primary();
    if (accept('^')) return {raw::pow(base.e, unary().e)};
    return base;
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  Operand primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum().e;
      expect(')');
      return {e};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      std::string lit = s_.substr(start, pos_ - start);
      if (lit.find('.') != lit.rfind('.') || lit == ".") throw ParseError("malformed number '" + lit + "'", start);
      Rational r = Rational::from_decimal(lit);
      return {Expr(r), lit.find('.') == std::string::npos};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      std::string name = ident();
      int primes = 0;
      while (pos_ < s_.size() && s_[pos_] == '\'') {
        ++primes;
        ++pos_;
      }
      if (auto f = t_.function_index(name)) {
        expect('(');
        std::size_t arg_at = pos_;
        std::string arg = ident();
        auto ci = t_.coordinate_index(arg);
        if (!ci || *ci != t_.functions()[*f].coord)
          throw ParseError("function " + name + " takes exactly its declared coordinate", arg_at);
        if (!accept(')')) throw ParseError("function " + name + " takes one argument", pos_);
        return {Expr::opaque(*f, *ci, primes)};
      }
      if (primes > 0) throw ParseError("derivative mark on non-function '" + name + "'", start);
      if (auto fn = fn_from_name(name.c_str())) {
        if (!peek('(')) throw ParseError("function " + name + " requires an argument", pos_);
        ++pos_;
        Expr arg = sum().e;
        if (peek(',')) throw ParseError("function " + name + " takes one argument", pos_);
        expect(')');
        return {raw::call(*fn, arg)};
      }
      if (peek('(')) throw ParseError("unknown function '" + name + "'", start);
      if (auto ci = t_.coordinate_index(name)) return {Expr::coord(*ci)};
      if (auto pi = t_.parameter_index(name)) return {Expr::param(*pi)};
      throw ParseError("undeclared identifier '" + name + "'", start);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

// Precedence levels of rendered fragments.
constexpr int kAdd = 1, kMul = 2, kUnary = 3, kPow = 4, kAtom = 5;

struct Piece {
  std::string s;
  int prec;
};

std::string wrap(const Piece& p, int need) { return p.prec < need ? "(" + p.s + ")" : p.s; }

class Renderer {
 public:
  explicit Renderer(const SymbolTable& t) : t_(t) {}

  Piece go(const Expr& e) {
    switch (e.kind()) {
      case Kind::Const: return constant(e.value());
      case Kind::Coord: return {t_.coordinates()[e.index()], kAtom};
      case Kind::Param: return {t_.parameters()[e.index()].name, kAtom};
      case Kind::Opaque: {
        const auto& f = t_.functions()[e.index()];
        return {f.name + std::string(e.order(), '\'') + "(" + t_.coordinates()[f.coord] + ")", kAtom};
      }
      case Kind::Call: return {std::string(fn_name(e.fn())) + "(" + go(e.args()[0]).s + ")", kAtom};
      case Kind::Neg: return {"-" + wrap(go(e.args()[0]), kUnary), kUnary};
      case Kind::Pow: return power(e);
      case Kind::Div: {
        const Expr& a = e.args()[0];
        const Expr& b = e.args()[1];
        Piece pa = go(a);
        std::string left = wrap(pa, kMul);
        if (a.kind() == Kind::Const && a.value().is_integer() && !a.value().is_negative() &&
            b.kind() == Kind::Const && b.value().is_integer())
          left = "(" + pa.s + ")";
        return {left + "/" + wrap(go(b), kUnary), kMul};
      }
      case Kind::Mul: return product(e);
      case Kind::Add: return sum(e);
    }
    return {"?", kAtom};
  }

 private:
  const SymbolTable& t_;

  static Piece constant(const Rational& r) {
    if (r.is_integer()) return {r.str(), r.is_negative() ? kUnary : kAtom};
    return {r.str(), kMul};
  }

  static bool negative_exponent(const Expr& f) {
    return f.kind() == Kind::Pow && f.args()[1].kind() == Kind::Const && f.args()[1].value().is_negative();
  }

  Piece power(const Expr& e) {
    const Expr& b = e.args()[0];
    const Expr& x = e.args()[1];
    if (negative_exponent(e)) {
      Rational r = -x.value();
      Expr inv = r.is_one() ? b : raw::pow(b, Expr(r));
      return {"1/" + wrap(go(inv), kUnary), kMul};
    }
    Piece pb = go(b);
    std::string base = wrap(pb, kAtom);
    if (b.kind() == Kind::Const && (b.value().is_negative() || !b.value().is_integer())) base = "(" + pb.s + ")";
    Piece px = go(x);
    std::string ex = px.prec >= kUnary ? px.s : "(" + px.s + ")";
    return {base + "^" + ex, kPow};
  }

  Piece product(const Expr& e) {
    const auto& fs = e.args();
    bool canonical_style = false;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (negative_exponent(fs[i])) canonical_style = true;
      if (i == 0 && fs[i].kind() == Kind::Const && (fs[i].value().is_negative() || !fs[i].value().is_integer()))
        canonical_style = true;
    }
    if (!canonical_style) {
      std::string out;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        Piece p = go(fs[i]);
        if (i == 0) {
          bool keep = p.prec >= kMul && fs[i].kind() != Kind::Mul;
          out = keep ? p.s : "(" + p.s + ")";
        } else {
          std::string s = p.prec >= kUnary ? p.s : "(" + p.s + ")";
          out += "*" + s;
        }
      }
      return {out, kMul};
    }
    Rational coef(1);
    std::vector<Expr> num, den;
    for (const auto& f : fs) {
      if (f.kind() == Kind::Const) {
        coef = coef * f.value();
      } else if (negative_exponent(f)) {
        Rational r = -f.args()[1].value();
        den.push_back(r.is_one() ? f.args()[0] : raw::pow(f.args()[0], Expr(r)));
      } else {
        num.push_back(f);
      }
    }
    bool neg = coef.is_negative();
    if (neg) coef = -coef;
    std::vector<std::string> ns, ds;
    if (coef.num() != 1) ns.push_back(std::to_string(coef.num()));
    for (const auto& f : num) ns.push_back(wrap(go(f), kUnary));
    if (coef.den() != 1) ds.push_back(std::to_string(coef.den()));
    for (const auto& f : den) ds.push_back(wrap(go(f), kUnary));
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "*" : "") + v[i];
      return s;
    };
    std::string out = ns.empty() ? "1" : join(ns);
    // Grouping several factors under one slash would let the parser multiply
    // the sums out, so denominators containing a sum are divided one by one.
    bool chain = ds.size() > 1 && std::any_of(den.begin(), den.end(), [](const Expr& f) {
      return f.kind() == Kind::Add || (f.kind() == Kind::Pow && f.args()[0].kind() == Kind::Add);
    });
    if (chain) {
      for (const auto& d : ds) out += "/" + d;
    } else if (!ds.empty()) {
      out += "/" + (ds.size() == 1 ? ds[0] : "(" + join(ds) + ")");
    }
    if (neg) out = "-" + out;
    bool compound = ns.size() > 1 || !ds.empty();
    return {out, compound ? kMul : (neg ? kUnary : kMul)};
  }

  static bool negative_term(const Expr& t) {
    if (t.kind() == Kind::Const) return t.value().is_negative();
    return t.kind() == Kind::Mul && t.args().front().kind() == Kind::Const && t.args().front().value().is_negative();
  }

  Piece sum(const Expr& e) {
    std::string out;
    const auto& ts = e.args();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const Expr& t = ts[i];
      if (i == 0) {
        Piece p = go(t);
        out = p.prec >= kMul || t.kind() == Kind::Neg ? p.s : "(" + p.s + ")";
        continue;
      }
      if (t.kind() == Kind::Neg) {
        out += " - " + wrap(go(t.args()[0]), kMul);
      } else if (negative_term(t)) {
        out += " - " + wrap(go(mul({Expr(-1), t})), kMul);
      } else {
        out += " + " + wrap(go(t), kMul);
      }
    }
    return {out, kAdd};
  }
};

}  // namespace

Expr parse(const std::string& text, const SymbolTable& table) { return Parser(text, table).run(); }

Expr parse_canonical(const std::string& text, const SymbolTable& table) { return normalize(parse(text, table)); }

std::string render(const Expr& e, const SymbolTable& table) { return Renderer(table).go(e).s; }

}  // namespace aef
