#include "aef/expr.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace aef {
namespace {

constexpr std::size_t kExpandLimit = 64;  // max terms produced by one distribution
constexpr std::int64_t kMaxFoldExponent = 64;

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t std_hash_rational(const Rational& r) {
  return mix(std::hash<std::int64_t>{}(r.num()), std::hash<std::int64_t>{}(r.den()));
}

Expr make_node(Node n) {
  std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
  switch (n.kind) {
    case Kind::Const: h = mix(h, std_hash_rational(n.value)); break;
    case Kind::Coord:
    case Kind::Param: h = mix(h, static_cast<std::size_t>(n.index)); break;
    case Kind::Opaque:
      h = mix(h, static_cast<std::size_t>(n.index));
      h = mix(h, static_cast<std::size_t>(n.order));
      break;
    case Kind::Call: h = mix(h, static_cast<std::size_t>(n.fn)); break;
    default: break;
  }
  for (const auto& a : n.args) h = mix(h, a.hash());
  n.hash = h;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr make_const(const Rational& r) {
  Node n;
  n.kind = Kind::Const;
  n.value = r;
  return make_node(std::move(n));
}

Expr make_nary(Kind k, std::vector<Expr> args) {
  Node n;
  n.kind = k;
  n.args = std::move(args);
  return make_node(std::move(n));
}

Expr make_pow_node(const Expr& b, const Expr& e) { return make_nary(Kind::Pow, {b, e}); }

Expr make_call_node(Fn f, const Expr& x) {
  Node n;
  n.kind = Kind::Call;
  n.fn = f;
  n.args = {x};
  return make_node(std::move(n));
}

// Free functions sort ahead of coordinates, so products read a0(u0)*u3.
int kind_rank(Kind k) {
  switch (k) {
    case Kind::Opaque: return static_cast<int>(Kind::Coord);
    case Kind::Coord: return static_cast<int>(Kind::Param);
    case Kind::Param: return static_cast<int>(Kind::Opaque);
    default: return static_cast<int>(k);
  }
}

// Split a canonical term into rational coefficient and the remaining factor.
std::pair<Rational, Expr> split_coefficient(const Expr& t) {
  if (t.kind() == Kind::Const) return {t.value(), Expr(1)};
  if (t.kind() == Kind::Mul && t.args().front().kind() == Kind::Const) {
    const auto& a = t.args();
    if (a.size() == 2) return {a[0].value(), a[1]};
    return {a[0].value(), make_nary(Kind::Mul, std::vector<Expr>(a.begin() + 1, a.end()))};
  }
  return {Rational(1), t};
}

Expr with_coefficient(const Rational& c, const Expr& rest) {
  if (c.is_zero()) return Expr(0);
  if (rest.is_one_literal()) return make_const(c);
  if (c.is_one()) return rest;
  std::vector<Expr> args{make_const(c)};
  if (rest.kind() == Kind::Mul) {
    args.insert(args.end(), rest.args().begin(), rest.args().end());
  } else {
    args.push_back(rest);
  }
  return make_nary(Kind::Mul, std::move(args));
}

bool negative_leading(const Expr& x) {
  if (x.kind() == Kind::Const) return x.value().is_negative();
  if (x.kind() == Kind::Mul) return x.args().front().kind() == Kind::Const && x.args().front().value().is_negative();
  return false;
}

// A sum reads as negative when most of its terms do (ties: the first term).
bool negative_sum(const Expr& x) {
  if (x.kind() != Kind::Add) return false;
  int neg = 0;
  for (const auto& t : x.args()) neg += negative_leading(t) ? 1 : -1;
  return neg > 0 || (neg == 0 && negative_leading(x.args().front()));
}

Expr expand_product(const std::vector<Expr>& a_terms, const std::vector<Expr>& b_terms) {
  std::vector<Expr> out;
  out.reserve(a_terms.size() * b_terms.size());
  for (const auto& a : a_terms)
    for (const auto& b : b_terms) out.push_back(mul({a, b}));
  return add(std::move(out));
}

std::vector<Expr> terms_of(const Expr& e) {
  if (e.kind() == Kind::Add) return e.args();
  return {e};
}

}  // namespace

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Sinh: return "sinh";
    case Fn::Cosh: return "cosh";
    case Fn::Atan: return "atan";
  }
  return "?";
}

std::optional<Fn> fn_from_name(const char* name) {
  static const Fn all[] = {Fn::Exp, Fn::Log, Fn::Sin, Fn::Cos, Fn::Sinh, Fn::Cosh, Fn::Atan};
  for (Fn f : all)
    if (std::strcmp(fn_name(f), name) == 0) return f;
  return std::nullopt;
}

// ---------------------------------------------------------------- Expr basics

Expr::Expr() : Expr(std::int64_t{0}) {}
Expr::Expr(std::int64_t v) : node_(make_const(Rational(v)).node_) {}
Expr::Expr(const Rational& v) : node_(make_const(v).node_) {}

Expr Expr::coord(int i) {
  Node n;
  n.kind = Kind::Coord;
  n.index = i;
  return make_node(std::move(n));
}

Expr Expr::param(int i) {
  Node n;
  n.kind = Kind::Param;
  n.index = i;
  return make_node(std::move(n));
}

Expr Expr::opaque(int fn, int coord, int order) {
  Node n;
  n.kind = Kind::Opaque;
  n.index = fn;
  n.coord = coord;
  n.order = order;
  return make_node(std::move(n));
}

Kind Expr::kind() const { return node_->kind; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
const Rational& Expr::value() const { return node_->value; }
int Expr::index() const { return node_->index; }
int Expr::order() const { return node_->order; }
int Expr::opaque_coord() const { return node_->coord; }
Fn Expr::fn() const { return node_->fn; }
std::size_t Expr::hash() const { return node_->hash; }

bool Expr::is_zero_literal() const { return kind() == Kind::Const && value().is_zero(); }
bool Expr::is_one_literal() const { return kind() == Kind::Const && value().is_one(); }

std::optional<Rational> Expr::as_rational() const {
  if (kind() == Kind::Const) return value();
  return std::nullopt;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  int ka = kind_rank(a.kind()), kb = kind_rank(b.kind());
  if (ka != kb) return ka < kb ? -1 : 1;
  switch (a.kind()) {
    case Kind::Const:
      if (a.value() == b.value()) return 0;
      return a.value() < b.value() ? -1 : 1;
    case Kind::Coord:
    case Kind::Param:
      return a.index() == b.index() ? 0 : (a.index() < b.index() ? -1 : 1);
    case Kind::Opaque:
      if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
      if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
      return 0;
    case Kind::Call:
      if (a.fn() != b.fn()) return a.fn() < b.fn() ? -1 : 1;
      break;
    default: break;
  }
  const auto& x = a.args();
  const auto& y = b.args();
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(x[i], y[i]);
    if (c != 0) return c;
  }
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  return 0;
}

// ----------------------------------------------------------- canonical forms

Expr add(std::vector<Expr> input) {
  std::vector<Expr> flat;
  flat.reserve(input.size());
  for (auto& t : input) {
    if (t.kind() == Kind::Add) {
      flat.insert(flat.end(), t.args().begin(), t.args().end());
    } else {
      flat.push_back(std::move(t));
    }
  }
  Rational constant(0);
  std::vector<std::pair<Expr, Rational>> terms;
  terms.reserve(flat.size());
  for (const auto& t : flat) {
    if (t.kind() == Kind::Const) {
      constant = constant + t.value();
      continue;
    }
    auto [c, rest] = split_coefficient(t);
    terms.emplace_back(rest, c);
  }
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return compare(x.first, y.first) < 0; });
  std::vector<Expr> out;
  if (!constant.is_zero()) out.push_back(make_const(constant));
  for (std::size_t i = 0; i < terms.size();) {
    Rational c = terms[i].second;
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j].first == terms[i].first) {
      c = c + terms[j].second;
      ++j;
    }
    if (!c.is_zero()) out.push_back(with_coefficient(c, terms[i].first));
    i = j;
  }
  if (out.empty()) return Expr(0);
  if (out.size() == 1) return out.front();
  return make_nary(Kind::Add, std::move(out));
}

Expr mul(std::vector<Expr> input) {
  for (int pass = 0; pass < 8; ++pass) {
    std::vector<Expr> flat;
    flat.reserve(input.size());
    for (auto& f : input) {
      if (f.kind() == Kind::Mul) {
        flat.insert(flat.end(), f.args().begin(), f.args().end());
      } else {
        flat.push_back(std::move(f));
      }
    }
    Rational coef(1);
    std::vector<std::pair<Expr, Expr>> powers;
    std::vector<Expr> exp_args;
    for (const auto& f : flat) {
      switch (f.kind()) {
        case Kind::Const:
          coef = coef * f.value();
          break;
        case Kind::Pow:
          powers.emplace_back(f.args()[0], f.args()[1]);
          break;
        case Kind::Call:
          if (f.fn() == Fn::Exp) {
            exp_args.push_back(f.args()[0]);
            break;
          }
          powers.emplace_back(f, Expr(1));
          break;
        default:
          powers.emplace_back(f, Expr(1));
      }
    }
    if (coef.is_zero()) return Expr(0);
    std::stable_sort(powers.begin(), powers.end(),
                     [](const auto& x, const auto& y) { return compare(x.first, y.first) < 0; });
    std::vector<Expr> factors;
    bool again = false;
    for (std::size_t i = 0; i < powers.size();) {
      std::vector<Expr> exps{powers[i].second};
      std::size_t j = i + 1;
      while (j < powers.size() && powers[j].first == powers[i].first) exps.push_back(powers[j++].second);
      Expr e = exps.size() == 1 ? exps.front() : add(std::move(exps));
      Expr p = pow(powers[i].first, e);
      if (p.kind() == Kind::Const) {
        coef = coef * p.value();
      } else if (p.kind() == Kind::Mul || (p.kind() == Kind::Call && p.fn() == Fn::Exp) ||
                 (p.kind() == Kind::Pow && !(p.args()[0] == powers[i].first))) {
        factors.push_back(p);
        again = true;
      } else {
        factors.push_back(p);
      }
      i = j;
    }
    if (!exp_args.empty()) {
      Expr ex = call(Fn::Exp, add(exp_args));
      if (ex.kind() == Kind::Const) {
        coef = coef * ex.value();
      } else {
        if (!(ex.kind() == Kind::Call && ex.fn() == Fn::Exp)) again = true;
        factors.push_back(ex);
      }
    }
    if (coef.is_zero()) return Expr(0);
    if (again) {
      input = std::move(factors);
      input.push_back(make_const(coef));
      continue;
    }
    // Distribute over sums when the result stays small.
    std::size_t expanded = 1;
    bool has_sum = false;
    for (const auto& f : factors) {
      if (f.kind() == Kind::Add) {
        has_sum = true;
        expanded *= f.args().size();
      }
    }
    if (has_sum && expanded <= kExpandLimit) {
      std::vector<Expr> acc{make_const(coef)};
      std::vector<Expr> plain;
      for (const auto& f : factors)
        if (f.kind() != Kind::Add) plain.push_back(f);
      plain.push_back(make_const(coef));
      acc = {mul(plain)};
      for (const auto& f : factors) {
        if (f.kind() != Kind::Add) continue;
        acc = terms_of(expand_product(acc, f.args()));
      }
      return add(std::move(acc));
    }
    std::sort(factors.begin(), factors.end(), [](const Expr& x, const Expr& y) {
      const Expr& bx = x.kind() == Kind::Pow ? x.args()[0] : x;
      const Expr& by = y.kind() == Kind::Pow ? y.args()[0] : y;
      int c = compare(bx, by);
      if (c != 0) return c < 0;
      return compare(x, y) < 0;
    });
    if (factors.empty()) return make_const(coef);
    if (factors.size() == 1 && coef.is_one()) return factors.front();
    std::vector<Expr> args;
    if (!coef.is_one()) args.push_back(make_const(coef));
    args.insert(args.end(), factors.begin(), factors.end());
    if (args.size() == 1) return args.front();
    return make_nary(Kind::Mul, std::move(args));
  }
  throw std::logic_error("mul: canonicalization did not converge");
}

Expr pow(const Expr& b, const Expr& e) {
  if (e.kind() == Kind::Const) {
    const Rational& r = e.value();
    if (r.is_zero()) return Expr(1);
    if (r.is_one()) return b;
    if (b.kind() == Kind::Const) {
      if (b.value().is_zero()) {
        if (r.is_negative()) throw std::domain_error("division by zero");
        return Expr(0);
      }
      if (b.value().is_one()) return Expr(1);
      if (r.is_integer() && r.num() >= -kMaxFoldExponent && r.num() <= kMaxFoldExponent) {
        try {
          return make_const(b.value().pow(r.num()));
        } catch (const std::overflow_error&) {
        }
      }
      return make_pow_node(b, e);
    }
    if (b.kind() == Kind::Call && b.fn() == Fn::Exp) return call(Fn::Exp, mul({b.args()[0], e}));
    if (r.is_integer()) {
      // Keep denominators and powers of sums sign-normalized: (-s)^n = (-1)^n s^n.
      if (r.is_negative() && negative_sum(b)) {
        Expr p = pow(mul({Expr(-1), b}), e);
        return r.num() % 2 == 0 ? p : mul({Expr(-1), p});
      }
      if (b.kind() == Kind::Pow) {
        const Expr& inner = b.args()[1];
        Expr ne = inner.kind() == Kind::Const ? Expr(inner.value() * r) : mul({inner, e});
        return pow(b.args()[0], ne);
      }
      if (b.kind() == Kind::Mul) {
        std::vector<Expr> fs;
        for (const auto& f : b.args()) fs.push_back(pow(f, e));
        return mul(std::move(fs));
      }
      // s^-n is stored as (s^n)^-1 so that it matches 1/(s^n) built by division.
      if (b.kind() == Kind::Add && r.num() < -1) {
        Expr positive = pow(b, Expr(-r));
        if (positive.kind() != Kind::Pow) return pow(positive, Expr(-1));
      }
      if (b.kind() == Kind::Add && r.num() > 1 && r.num() <= 6) {
        std::size_t n = b.args().size();
        std::size_t total = 1;
        bool small = true;
        for (std::int64_t k = 0; k < r.num(); ++k) {
          total *= n;
          if (total > kExpandLimit) {
            small = false;
            break;
          }
        }
        if (small) {
          std::vector<Expr> acc{Expr(1)};
          for (std::int64_t k = 0; k < r.num(); ++k) acc = terms_of(expand_product(acc, b.args()));
          return add(std::move(acc));
        }
      }
    }
    return make_pow_node(b, e);
  }
  if (b.kind() == Kind::Call && b.fn() == Fn::Exp) return call(Fn::Exp, mul({b.args()[0], e}));
  if (b.is_one_literal()) return Expr(1);
  return make_pow_node(b, e);
}

Expr call(Fn f, const Expr& x) {
  if (x.is_zero_literal()) {
    switch (f) {
      case Fn::Exp:
      case Fn::Cos:
      case Fn::Cosh: return Expr(1);
      case Fn::Sin:
      case Fn::Sinh:
      case Fn::Atan: return Expr(0);
      case Fn::Log: throw std::domain_error("log of zero");
    }
  }
  if (f == Fn::Exp && x.kind() == Kind::Call && x.fn() == Fn::Log) return x.args()[0];
  if (f == Fn::Log && x.is_one_literal()) return Expr(0);
  if (f == Fn::Log && x.kind() == Kind::Call && x.fn() == Fn::Exp) return x.args()[0];
  if (negative_leading(x)) {
    Expr nx = mul({Expr(-1), x});
    switch (f) {
      case Fn::Cos:
      case Fn::Cosh: return make_call_node(f, nx);
      case Fn::Sin:
      case Fn::Sinh:
      case Fn::Atan: return mul({Expr(-1), make_call_node(f, nx)});
      default: break;
    }
  }
  return make_call_node(f, x);
}

Expr Expr::operator-() const { return mul({Expr(-1), *this}); }
Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return add({a, mul({Expr(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero_literal()) throw std::domain_error("division by the zero constant");
  return mul({a, pow(b, Expr(-1))});
}

// ---------------------------------------------------------------- raw forms

namespace raw {
Expr add(std::vector<Expr> terms) { return make_nary(Kind::Add, std::move(terms)); }
Expr mul(std::vector<Expr> factors) { return make_nary(Kind::Mul, std::move(factors)); }
Expr neg(const Expr& x) { return make_nary(Kind::Neg, {x}); }
Expr div(const Expr& a, const Expr& b) {
  if (b.is_zero_literal()) throw std::domain_error("division by the zero constant");
  return make_nary(Kind::Div, {a, b});
}
Expr pow(const Expr& base, const Expr& exponent) { return make_pow_node(base, exponent); }
Expr call(Fn f, const Expr& arg) { return make_call_node(f, arg); }
}  // namespace raw

// ------------------------------------------------------------ tree utilities

namespace {

template <typename F>
Expr rebuild(const Expr& e, std::unordered_map<const Node*, Expr>& memo, F&& leaf) {
  auto it = memo.find(e.get());
  if (it != memo.end()) return it->second;
  Expr out;
  switch (e.kind()) {
    case Kind::Const:
    case Kind::Coord:
    case Kind::Param:
    case Kind::Opaque: {
      auto r = leaf(e);
      out = r ? *r : e;
      break;
    }
    case Kind::Call: out = call(e.fn(), rebuild(e.args()[0], memo, leaf)); break;
    case Kind::Pow: out = pow(rebuild(e.args()[0], memo, leaf), rebuild(e.args()[1], memo, leaf)); break;
    case Kind::Neg: out = mul({Expr(-1), rebuild(e.args()[0], memo, leaf)}); break;
    case Kind::Div: {
      Expr den = rebuild(e.args()[1], memo, leaf);
      if (den.is_zero_literal()) throw std::domain_error("division by zero");
      out = mul({rebuild(e.args()[0], memo, leaf), pow(den, Expr(-1))});
      break;
    }
    case Kind::Mul:
    case Kind::Add: {
      std::vector<Expr> xs;
      xs.reserve(e.args().size());
      for (const auto& a : e.args()) xs.push_back(rebuild(a, memo, leaf));
      out = e.kind() == Kind::Mul ? mul(std::move(xs)) : add(std::move(xs));
      break;
    }
  }
  memo.emplace(e.get(), out);
  return out;
}

}  // namespace

Expr normalize(const Expr& e) {
  std::unordered_map<const Node*, Expr> memo;
  auto none = [](const Expr&) -> std::optional<Expr> { return std::nullopt; };
  Expr cur = rebuild(e, memo, none);
  // Canonical builders are stable on canonical input; iterate defensively.
  for (int i = 0; i < 4; ++i) {
    memo.clear();
    Expr next = rebuild(cur, memo, none);
    if (next == cur) return cur;
    cur = next;
  }
  return cur;
}

Expr substitute(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& leaf) {
  std::unordered_map<const Node*, Expr> memo;
  return rebuild(e, memo, leaf);
}

namespace {

struct Differ {
  Var v;
  std::unordered_map<const Node*, Expr> memo;

  Expr d(const Expr& e) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    Expr r = compute(e);
    memo.emplace(e.get(), r);
    return r;
  }

  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::Const: return Expr(0);
      case Kind::Coord: return Expr(v.kind == Var::Kind::Coord && v.index == e.index() ? 1 : 0);
      case Kind::Param: return Expr(v.kind == Var::Kind::Param && v.index == e.index() ? 1 : 0);
      case Kind::Opaque:
        if (v.kind == Var::Kind::Coord && v.index == e.opaque_coord())
          return Expr::opaque(e.index(), e.opaque_coord(), e.order() + 1);
        return Expr(0);
      case Kind::Neg: return -d(e.args()[0]);
      case Kind::Add: {
        std::vector<Expr> ts;
        for (const auto& a : e.args()) ts.push_back(d(a));
        return add(std::move(ts));
      }
      case Kind::Mul: {
        const auto& fs = e.args();
        std::vector<Expr> ts;
        for (std::size_t i = 0; i < fs.size(); ++i) {
          Expr di = d(fs[i]);
          if (di.is_zero_literal()) continue;
          std::vector<Expr> prod{di};
          for (std::size_t j = 0; j < fs.size(); ++j)
            if (j != i) prod.push_back(fs[j]);
          ts.push_back(mul(std::move(prod)));
        }
        return add(std::move(ts));
      }
      case Kind::Div: {
        const Expr& a = e.args()[0];
        const Expr& b = e.args()[1];
        Expr bi = pow(b, Expr(-1));
        return d(a) * bi - a * d(b) * pow(b, Expr(-2));
      }
      case Kind::Pow: {
        const Expr& b = e.args()[0];
        const Expr& x = e.args()[1];
        Expr db = d(b);
        Expr dx = depends_on(x, v) ? d(x) : Expr(0);
        Expr out = dx.is_zero_literal() ? Expr(0) : e * dx * log(b);
        if (!db.is_zero_literal()) out = out + x * pow(b, x - Expr(1)) * db;
        return out;
      }
      case Kind::Call: {
        const Expr& x = e.args()[0];
        Expr dx = d(x);
        if (dx.is_zero_literal()) return Expr(0);
        switch (e.fn()) {
          case Fn::Exp: return e * dx;
          case Fn::Log: return dx / x;
          case Fn::Sin: return cos(x) * dx;
          case Fn::Cos: return -(sin(x) * dx);
          case Fn::Sinh: return cosh(x) * dx;
          case Fn::Cosh: return sinh(x) * dx;
          case Fn::Atan: return dx / (Expr(1) + x * x);
        }
      }
    }
    return Expr(0);
  }
};

template <typename Pred>
bool any_node(const Expr& e, std::unordered_set<const Node*>& seen, Pred&& p) {
  if (!seen.insert(e.get()).second) return false;
  if (p(e)) return true;
  for (const auto& a : e.args())
    if (any_node(a, seen, p)) return true;
  return false;
}

}  // namespace

Expr differentiate(const Expr& e, Var v) {
  if (!depends_on(e, v)) return Expr(0);
  Differ d{v, {}};
  return d.d(e);
}

bool depends_on(const Expr& e, Var v) {
  std::unordered_set<const Node*> seen;
  return any_node(e, seen, [&](const Expr& x) {
    if (v.kind == Var::Kind::Coord) {
      if (x.kind() == Kind::Coord && x.index() == v.index) return true;
      if (x.kind() == Kind::Opaque && x.opaque_coord() == v.index) return true;
      return false;
    }
    return x.kind() == Kind::Param && x.index() == v.index;
  });
}

bool depends_on_coordinates(const Expr& e) {
  std::unordered_set<const Node*> seen;
  return any_node(e, seen, [](const Expr& x) { return x.kind() == Kind::Coord || x.kind() == Kind::Opaque; });
}

bool contains_opaque(const Expr& e) {
  std::unordered_set<const Node*> seen;
  return any_node(e, seen, [](const Expr& x) { return x.kind() == Kind::Opaque; });
}

std::size_t dag_size(const Expr& e) {
  std::unordered_set<const Node*> seen;
  any_node(e, seen, [](const Expr&) { return false; });
  return seen.size();
}

}  // namespace aef
