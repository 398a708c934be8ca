#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "aef/geometry.hpp"

namespace aef {

// Operators are indexed 0..3 (the dependent one is 3); the independent block
// uses operators 0..2 and coordinates u1..u3.
inline constexpr int kOps = 4;
inline constexpr int kBlock = 3;
inline constexpr int kDependent = 3;

struct KillingBasis {
  std::array<VectorField, kOps> xi;
  // block()[a][b] = xi_a^{b+1} for a, b in 0..2
  ExprMat block() const;
};

class NotClosed : public std::runtime_error {
 public:
  NotClosed(int a, int b) : std::runtime_error("commutator of operators " + std::to_string(a + 1) + "," + std::to_string(b + 1) + " leaves the span"), a_(a), b_(b) {}
  int a() const { return a_; }
  int b() const { return b_; }

 private:
  int a_, b_;
};

class NonConstantCoefficients : public std::runtime_error {
 public:
  NonConstantCoefficients(int a, int b) : std::runtime_error("commutator of operators " + std::to_string(a + 1) + "," + std::to_string(b + 1) + " has point-dependent coefficients") {}
};

class DegenerateBlock : public std::runtime_error {
 public:
  DegenerateBlock() : std::runtime_error("independent 3x3 block of the Killing basis is degenerate") {}
};

class InconsistentDependentOperator : public std::runtime_error {
 public:
  InconsistentDependentOperator() : std::runtime_error("dependent operator is not spanned by the independent ones") {}
};

// C^d_{ab}, antisymmetric in (a,b). Entries are free of coordinates but may
// involve case parameters (e.g. 2*c, sin(c)).
class StructureConstants {
 public:
  StructureConstants();
  const Expr& operator()(int d, int a, int b) const { return c_[idx(d, a, b)]; }
  void set(int d, int a, int b, const Expr& v);
  bool operator==(const StructureConstants& o) const { return c_ == o.c_; }

 private:
  static int idx(int d, int a, int b) { return (d * kOps + a) * kOps + b; }
  std::array<Expr, kOps * kOps * kOps> c_;
};

// [x,y]^i = x^j d_j y^i - y^j d_j x^i
VectorField commutator(const VectorField& x, const VectorField& y);

struct StructureRecoveryOptions {
  int points = 8;              // coordinate samples per parameter sample
  int parameter_samples = 0;   // 0 picks twice the fit basis size
  double consistency_tol = 1e-9;
  std::int64_t max_den = 10000;
};

// Numeric stacked solve at generic points, parameter fit, rational rounding
// and symbolic certification of every bracket.
StructureConstants recover_structure_constants(const KillingBasis& basis, ZeroTester& z,
                                               const StructureRecoveryOptions& opt = {});

// [X_a,X_b] - C^d_{ab} X_d for every a < b.
std::vector<Expr> closure_residuals(const KillingBasis& basis, const StructureConstants& c);
// sum over cyclic (a,b,e) of C^f_{ab} C^g_{fe}, for all a<b<e and g.
std::vector<Expr> jacobi_residuals(const StructureConstants& c);

// Inverse of the independent block; certified block * lambda == I.
ExprMat lambda_matrix(const KillingBasis& basis, ZeroTester& z);

// Row vector with xi_4 = omega^a xi_a, certified on all four components.
ExprVec omega(const KillingBasis& basis, const ExprMat& lambda, ZeroTester& z);

// ct[g][a][b] = C^g_{ab} + omega^g C^4_{ab}, g in 0..2.
using CTilde = std::array<std::array<std::array<Expr, kOps>, kOps>, kBlock>;
CTilde c_tilde(const StructureConstants& c, const ExprVec& omega);

// Per (a, s, g): sum_r d_s xi_a^r lambda^g_r + X_a(lambda^g_s) + lambda^r_s Ct^g_{ar}.
std::vector<Expr> lambda_identity_residuals(const KillingBasis& basis, const ExprMat& lambda, const CTilde& ct);
// Per (a, g): X_a(omega^g) - Ct^g_{a4} - omega^b Ct^g_{ba}.
std::vector<Expr> omega_identity_residuals(const KillingBasis& basis, const ExprVec& omega, const CTilde& ct);

}  // namespace aef
