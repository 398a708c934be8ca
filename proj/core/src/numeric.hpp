#pragma once

// Dense numeric helpers shared by the symbolic modules. Internal header:
// keeps Eigen out of the public interface.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "aef/expr.hpp"
#include "aef/matrix.hpp"
#include "aef/program.hpp"
#include "aef/rational.hpp"
#include "aef/zero_test.hpp"

namespace aef::detail {

// Relative singular-value threshold used for every numeric rank decision.
inline constexpr double kRankTol = 1e-8;

int numeric_rank(const Eigen::MatrixXd& m, double rel_tol = kRankTol);

// Compiles a matrix of expressions once and evaluates it at points.
class MatrixProgram {
 public:
  explicit MatrixProgram(const ExprMat& m);
  // Returns false when the point hits a near-zero denominator or a non-finite value.
  bool eval(const Point& p, double delta_den, Eigen::MatrixXd& out) const;
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Program& program() const { return prog_; }

 private:
  Program prog_;
  std::size_t rows_ = 0, cols_ = 0;
};

// Points at which every entry of the given matrices evaluates cleanly.
std::vector<Point> generic_points(ZeroTester& z, const std::vector<const ExprMat*>& mats, std::size_t n);

std::optional<Rational> snap_rational(double x, std::int64_t max_den = 10000, double tol = 1e-7);

}  // namespace aef::detail
