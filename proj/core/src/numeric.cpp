#include "numeric.hpp"

#include <cmath>

namespace aef::detail {

int numeric_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  double cut = rel_tol * std::max(1.0, s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

MatrixProgram::MatrixProgram(const ExprMat& m) : prog_(entries(m)), rows_(m.size()), cols_(m.empty() ? 0 : m[0].size()) {}

bool MatrixProgram::eval(const Point& p, double delta_den, Eigen::MatrixXd& out) const {
  std::vector<double> v;
  if (prog_.run(p, delta_den, v) != EvalStatus::Ok) return false;
  out.resize(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = v[i * cols_ + j];
  return true;
}

std::vector<Point> generic_points(ZeroTester& z, const std::vector<const ExprMat*>& mats, std::size_t n) {
  std::vector<Expr> all;
  for (const auto* m : mats) {
    auto e = entries(*m);
    all.insert(all.end(), e.begin(), e.end());
  }
  if (all.empty()) all.push_back(Expr(0));
  return z.sample_points(all, n);
}

std::optional<Rational> snap_rational(double x, std::int64_t max_den, double tol) {
  Rational r;
  if (!std::isfinite(x)) return std::nullopt;
  if (!Rational::approximate(x, max_den, tol * std::max(1.0, std::fabs(x)), r)) return std::nullopt;
  return r;
}

}  // namespace aef::detail
