#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aef/lie.hpp"

namespace aef {

class RankInstability : public std::runtime_error {
 public:
  explicit RankInstability(const std::string& what) : std::runtime_error("rank instability: " + what) {}
};

class NonTermination : public std::runtime_error {
 public:
  NonTermination() : std::runtime_error("reduction did not terminate within 6 steps") {}
};

class CertificationFailed : public std::runtime_error {
 public:
  explicit CertificationFailed(const std::string& what) : std::runtime_error("certification failed: " + what) {}
};

// Everything derived from the Killing basis alone.
struct ReductionFrame {
  KillingBasis basis;
  StructureConstants c;
  ExprMat lambda;  // lambda[b][a]: inverse of the independent block
  ExprVec omega;   // xi_4 = omega^a xi_a
  CTilde ct;
};

ReductionFrame make_frame(const KillingBasis& basis, ZeroTester& z);

// Constraint rows on the projections (A_1, A_2, A_3):
//   X_a(omega^g)                    for a = 1..3
//   d_0 omega^g                     (essential-coordinate row)
//   sum_b d_0 xi_a^b lambda[b][g]   for a = 1..3
ExprMat w0_matrix(const ReductionFrame& f);

// Solutions of W x = 0 written as x = theta y, where theta is the identity on
// the `free` rows. Pivot columns are the last independent ones, so the free
// components are the earliest possible.
struct NullSpace {
  int rank = 0;
  std::vector<int> free;    // column indices of W left free
  std::vector<int> pivots;  // column indices solved for
  std::vector<int> rows;    // rows of W forming the invertible minor
  ExprMat theta;            // cols(W) x free.size()
};

NullSpace null_space(const ExprMat& w, std::size_t cols, ZeroTester& z, std::size_t sample_points = 6);

enum class ReductionStatus { Running, SolvedFreeComponents, OnlyZeroSolution };
const char* to_string(ReductionStatus s);

struct ReductionStep {
  int k = 0;
  ExprMat w;               // constraint matrix of this step, in the current free variables
  std::vector<int> free;   // surviving components after the step (0-based)
  ExprMat theta;           // 3 x free.size(), A = theta * a
};

struct ReductionState {
  int k = 0;
  ExprMat w;
  ExprMat theta;
  std::vector<int> free;
  ReductionStatus status = ReductionStatus::Running;
  std::vector<ReductionStep> trace;
};

ReductionState reduce(const ReductionFrame& f, const ExprMat& w0, ZeroTester& z);

// X_a(a) = n[a] a on the free variables, and the coordinate form d_b a = g[b] a.
struct ResidualSystem {
  bool solved = false;
  std::array<ExprMat, kBlock> n;  // along the operators
  std::array<ExprMat, kBlock> g;  // along u1..u3
  ExprVec amplitudes;             // solved free variables, one per surviving component
  std::string note;
};

// Handles the two patterns that occur: every g vanishes (free variables are
// arbitrary functions of u0), or a single free variable with a product-form
// integrating factor. Free functions are taken from `table` by name: a0, then
// b1, b2.
ResidualSystem residual_system(const ReductionState& s, const ReductionFrame& f, ZeroTester& z);

// A_b = lambda[b][a] P_a with A_0 supplied; certified xi_a^i A_i = P_a.
Covector holonomic_potential(const ExprVec& projections, const ReductionFrame& f, const Expr& a0, ZeroTester& z);

enum class Outcome { PotentialFound, NoField, ZeroField, Unsolved };
const char* to_string(Outcome o);
std::optional<Outcome> outcome_from_string(const std::string& s);

struct PipelineResult {
  ReductionFrame frame;
  ExprMat w0;
  ReductionState state;
  ResidualSystem residual;
  std::optional<Covector> potential;
  Outcome outcome = Outcome::Unsolved;
};

PipelineResult run_pipeline(const KillingBasis& basis, ZeroTester& z);

// Whether a pipeline result is what `expected` describes. ZeroField accepts
// any result whose potential vanishes identically.
bool outcome_satisfies(const PipelineResult& r, Outcome expected, ZeroTester& z);

// d_i(xi_A^j A_j) - xi_A^j F_ij for A = 1..4, i = 0..3.
struct AdmissibilityReport {
  std::array<std::array<bool, kDim>, kOps> pass{};
  std::vector<Expr> residuals;  // index A * 4 + i
  std::optional<Witness> witness;
  int failing_operator = -1;
  int failing_component = -1;
  bool all() const;
};
AdmissibilityReport check_admissibility(const Covector& a, const KillingBasis& basis, ZeroTester& z);
std::vector<Expr> admissibility_residuals(const Covector& a, const VectorField& xi);

// xi^i p_i + gamma. In check_bracket_decomposition the momenta are the
// kinetic ones, p + A, so gamma = -xi^i A_i describes the canonical xi^i p_i.
struct LinearMomentumFunction {
  VectorField xi;
  Expr gamma;
};
// Vector part [xi, eta], scalar part xi(delta) - eta(gamma).
LinearMomentumFunction poisson_linear(const LinearMomentumFunction& f, const LinearMomentumFunction& g);

// One entry per pair a < b (lexicographic).
std::vector<bool> check_closure(const KillingBasis& basis, const StructureConstants& c, ZeroTester& z);

struct BracketDecomposition {
  ExprMat quadratic;  // coefficient of p_i p_j
  ExprVec linear;     // coefficient of p_l
  bool quadratic_zero = false;
  bool linear_zero = false;
};
BracketDecomposition check_bracket_decomposition(const ExprMat& g_inv, const Covector& a, const LinearMomentumFunction& y,
                                                 ZeroTester& z);

// Integrability of the projection equations for an admissible potential.
std::vector<Expr> compatibility_residuals(const Covector& a, const ReductionFrame& f);
// d_i omega^g P_g for i = 0..3.
std::vector<Expr> annihilation_residuals(const Covector& a, const ReductionFrame& f);

// A and B describe the same field up to a gradient and a rescaling of the
// free function by a factor independent of u1..u3.
struct GaugeComparison {
  bool equivalent = false;
  Expr ratio;
  std::string reason;
};
GaugeComparison compare_potentials(const Covector& pipeline, const Covector& reference, const KillingBasis& basis,
                                   ZeroTester& z);

bool is_zero_covector(const Covector& a, ZeroTester& z);

}  // namespace aef
