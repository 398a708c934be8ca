#include "aef/matrix.hpp"

#include <stdexcept>

namespace aef {

ExprMat zeros(std::size_t rows, std::size_t cols) { return ExprMat(rows, ExprVec(cols, Expr(0))); }

ExprMat identity(std::size_t n) {
  ExprMat m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Expr(1);
  return m;
}

ExprMat matmul(const ExprMat& a, const ExprMat& b) {
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  ExprMat c = zeros(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Expr> terms;
      for (std::size_t l = 0; l < k; ++l)
        if (!a[i][l].is_zero_literal() && !b[l][j].is_zero_literal()) terms.push_back(a[i][l] * b[l][j]);
      c[i][j] = add(std::move(terms));
    }
  return c;
}

ExprVec matvec(const ExprMat& a, const ExprVec& v) {
  ExprVec out(a.size(), Expr(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!a[i][j].is_zero_literal() && !v[j].is_zero_literal()) terms.push_back(a[i][j] * v[j]);
    out[i] = add(std::move(terms));
  }
  return out;
}

ExprVec vecmat(const ExprVec& v, const ExprMat& a) {
  std::size_t m = a.empty() ? 0 : a[0].size();
  ExprVec out(m, Expr(0));
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Expr> terms;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!a[i][j].is_zero_literal() && !v[i].is_zero_literal()) terms.push_back(v[i] * a[i][j]);
    out[j] = add(std::move(terms));
  }
  return out;
}

ExprMat transpose(const ExprMat& a) {
  if (a.empty()) return {};
  ExprMat t = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

ExprMat normalize(const ExprMat& a) {
  ExprMat out = a;
  for (auto& row : out)
    for (auto& x : row) x = normalize(x);
  return out;
}

ExprVec normalize(const ExprVec& v) {
  ExprVec out = v;
  for (auto& x : out) x = normalize(x);
  return out;
}

namespace {

ExprMat minor_of(const ExprMat& a, std::size_t r, std::size_t c) {
  ExprMat m;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i == r) continue;
    ExprVec row;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (j != c) row.push_back(a[i][j]);
    m.push_back(std::move(row));
  }
  return m;
}

}  // namespace

Expr determinant(const ExprMat& a) {
  std::size_t n = a.size();
  if (n == 0) return Expr(1);
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  // Expand along the row with the most literal zeros.
  std::size_t best = 0, best_zeros = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t z = 0;
    for (const auto& x : a[i]) z += x.is_zero_literal();
    if (z > best_zeros) {
      best_zeros = z;
      best = i;
    }
  }
  std::vector<Expr> terms;
  for (std::size_t j = 0; j < n; ++j) {
    if (a[best][j].is_zero_literal()) continue;
    Expr cof = determinant(minor_of(a, best, j));
    Expr t = a[best][j] * cof;
    terms.push_back((best + j) % 2 ? -t : t);
  }
  return add(std::move(terms));
}

ExprMat adjugate(const ExprMat& a) {
  std::size_t n = a.size();
  ExprMat adj = zeros(n, n);
  if (n == 1) {
    adj[0][0] = Expr(1);
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr c = determinant(minor_of(a, i, j));
      adj[j][i] = (i + j) % 2 ? -c : c;
    }
  return adj;
}

ExprMat inverse(const ExprMat& a) {
  Expr det = determinant(a);
  if (det.is_zero_literal()) throw std::domain_error("matrix is structurally singular");
  Expr inv_det = pow(det, Expr(-1));
  ExprMat adj = adjugate(a);
  for (auto& row : adj)
    for (auto& x : row) x = x * inv_det;
  return adj;
}

std::vector<Expr> entries(const ExprMat& a) {
  std::vector<Expr> out;
  for (const auto& row : a) out.insert(out.end(), row.begin(), row.end());
  return out;
}

ExprMat difference(const ExprMat& a, const ExprMat& b) {
  ExprMat d = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) d[i][j] = a[i][j] - b[i][j];
  return d;
}

}  // namespace aef
