#include "aef/geometry.hpp"

#include "aef/parse.hpp"

namespace aef {

MetricSpec metric_from_ds2(const Expr& ds2, const std::array<int, kDim>& du_index) {
  MetricSpec m{zeros(kDim, kDim)};
  for (int i = 0; i < kDim; ++i) {
    Expr di = differentiate(ds2, Var::param(du_index[i]));
    for (int j = i; j < kDim; ++j) {
      Expr gij = normalize(differentiate(di, Var::param(du_index[j])) * Expr(Rational(1, 2)));
      for (int k = 0; k < kDim; ++k)
        if (depends_on(gij, Var::param(du_index[k])))
          throw std::invalid_argument("line element is not quadratic in the differentials");
      m.g[i][j] = m.g[j][i] = gij;
    }
  }
  // Terms of degree zero or one in the differentials make a malformed line element.
  auto at_origin = [&](const Expr& e) {
    return normalize(substitute(e, [&](const Expr& leaf) -> std::optional<Expr> {
      if (leaf.kind() == Kind::Param)
        for (int k = 0; k < kDim; ++k)
          if (leaf.index() == du_index[k]) return Expr(0);
      return std::nullopt;
    }));
  };
  if (!at_origin(ds2).is_zero_literal()) throw std::invalid_argument("line element has terms without differentials");
  for (int k = 0; k < kDim; ++k)
    if (!at_origin(differentiate(ds2, Var::param(du_index[k]))).is_zero_literal())
      throw std::invalid_argument("line element has terms linear in the differentials");
  return m;
}

MetricSpec metric_from_ds2(const std::string& ds2, const SymbolTable& table) {
  SymbolTable ext = table;
  std::array<int, kDim> du{};
  for (int i = 0; i < kDim; ++i) du[i] = ext.add_parameter("d" + table.coordinates()[i], ParamDomain::interval(-1, 1));
  return metric_from_ds2(parse(ds2, ext), du);
}

bool is_symmetric(const ExprMat& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m[i][j] != m[j][i]) return false;
  return true;
}

ExprMat metric_inverse(const MetricSpec& g, ZeroTester& z) {
  if (g.g.size() != static_cast<std::size_t>(kDim) || !is_symmetric(g.g)) throw SingularMetric("not a symmetric 4x4 table");
  Expr det = normalize(determinant(g.g));
  if (det.is_zero_literal()) throw SingularMetric("determinant vanishes structurally");
  if (z.is_zero(det)) throw SingularMetric("determinant vanishes identically");
  ExprMat inv = normalize(inverse(g.g));
  ExprMat check = difference(matmul(g.g, inv), identity(kDim));
  if (!z.test_all(entries(check))) throw SingularMetric("g * g^-1 differs from the identity");
  return inv;
}

ExprMat killing_residual(const ExprMat& gi, const VectorField& xi) {
  ExprMat r = zeros(kDim, kDim);
  ExprMat dxi = zeros(kDim, kDim);  // dxi[i][l] = d_l xi^i
  for (int i = 0; i < kDim; ++i)
    for (int l = 0; l < kDim; ++l) dxi[i][l] = diff(xi[i], l);
  for (int i = 0; i < kDim; ++i)
    for (int j = i; j < kDim; ++j) {
      std::vector<Expr> t;
      for (int l = 0; l < kDim; ++l) {
        t.push_back(gi[i][l] * dxi[j][l]);
        t.push_back(gi[j][l] * dxi[i][l]);
        t.push_back(-(diff(gi[i][j], l) * xi[l]));
      }
      r[i][j] = r[j][i] = add(std::move(t));
    }
  return r;
}

ZeroResult is_killing(const ExprMat& g_inv, const VectorField& xi, ZeroTester& z) {
  ExprMat r = killing_residual(g_inv, xi);
  std::vector<Expr> upper;
  for (int i = 0; i < kDim; ++i)
    for (int j = i; j < kDim; ++j) upper.push_back(r[i][j]);
  return z.test_all(upper);
}

ExprMat faraday(const Covector& a) {
  ExprMat f = zeros(kDim, kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = i + 1; j < kDim; ++j) {
      f[i][j] = diff(a[j], i) - diff(a[i], j);
      f[j][i] = -f[i][j];
    }
  return f;
}

Covector gradient(const Expr& chi) {
  Covector g(kDim);
  for (int i = 0; i < kDim; ++i) g[i] = diff(chi, i);
  return g;
}

Expr contract(const VectorField& xi, const Covector& a) {
  std::vector<Expr> t;
  for (int i = 0; i < kDim; ++i) t.push_back(xi[i] * a[i]);
  return add(std::move(t));
}

Expr directional(const VectorField& xi, const Expr& f) {
  std::vector<Expr> t;
  for (int i = 0; i < kDim; ++i)
    if (!xi[i].is_zero_literal()) t.push_back(xi[i] * diff(f, i));
  return add(std::move(t));
}

}  // namespace aef
