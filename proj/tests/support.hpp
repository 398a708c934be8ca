#pragma once

#include <random>
#include <string>
#include <vector>

#include "aef/catalog.hpp"
#include "aef/parse.hpp"
#include "aef/program.hpp"
#include "aef/zero_test.hpp"

namespace aeftest {

// u0..u3, parameters e0 in {-1, 1} and c in [0.2, 1.2], free functions a0..a2 of u0.
inline aef::SymbolTable standard_table() {
  aef::SymbolTable t;
  t.add_parameter("e0", aef::ParamDomain::finite({aef::Rational(-1), aef::Rational(1)}));
  t.add_parameter("c", aef::ParamDomain::interval(0.2, 1.2));
  t.add_function("a0", 0);
  t.add_function("a1", 0);
  t.add_function("a2", 0);
  return t;
}

inline aef::Expr P(const std::string& s, const aef::SymbolTable& t) { return aef::parse_canonical(s, t); }

inline aef::ExprVec PV(const std::vector<std::string>& v, const aef::SymbolTable& t) {
  aef::ExprVec out;
  for (const auto& s : v) out.push_back(P(s, t));
  return out;
}

inline aef::ExprMat PM(const std::vector<std::vector<std::string>>& m, const aef::SymbolTable& t) {
  aef::ExprMat out;
  for (const auto& row : m) out.push_back(PV(row, t));
  return out;
}

inline const aef::Catalog& catalog() {
  static const aef::Catalog cat;
  return cat;
}

inline aef::GroupCase load(const std::string& id) { return catalog().load(id); }

// Random expressions over the standard table. Denominators are kept away
// from zero so that numeric checks stay well conditioned.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  aef::Expr leaf() {
    switch (pick(6)) {
      case 0:
      case 1:
      case 2: return aef::Expr::coord(pick(4));
      case 3: return aef::Expr(static_cast<std::int64_t>(pick(7)) - 3);
      case 4: return aef::Expr::param(1);
      default: return aef::Expr::opaque(pick(3), 0, 0);
    }
  }

  aef::Expr gen(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(9)) {
      case 0:
      case 1: return gen(depth - 1) + gen(depth - 1);
      case 2:
      case 3: return gen(depth - 1) * gen(depth - 1);
      case 4: return gen(depth - 1) - gen(depth - 1);
      case 5: return gen(depth - 1) / (aef::Expr(2) + aef::pow(gen(depth - 1), aef::Expr(2)));
      case 6: return aef::sin(gen(depth - 1));
      case 7: return aef::exp(aef::Expr(aef::Rational(1, 2)) * aef::sin(gen(depth - 1)));
      default: return aef::pow(gen(depth - 1), aef::Expr(static_cast<std::int64_t>(pick(3)) + 1));
    }
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline aef::Point random_point(const aef::SymbolTable& t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.3, 1.7);
  aef::Point p;
  for (auto& x : p.u) x = d(rng);
  for (const auto& par : t.parameters()) p.params.push_back(par.domain.is_finite() ? par.domain.values.back().to_double() : d(rng));
  p.opaque.assign(t.functions().size(), std::vector<double>(6));
  for (auto& f : p.opaque)
    for (auto& v : f) v = d(rng);
  return p;
}

}  // namespace aeftest
