#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aef/catalog.hpp"

namespace aef {

class BlowUp : public std::runtime_error {
 public:
  explicit BlowUp(double t) : std::runtime_error("state left the bounded region at t = " + std::to_string(t)), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

class MetricDegeneration : public std::runtime_error {
 public:
  explicit MetricDegeneration(double t) : std::runtime_error("metric became degenerate at t = " + std::to_string(t)) {}
};

struct PhaseState {
  std::array<double, kDim> u{};
  std::array<double, kDim> p{};  // canonical momenta
};

// Numeric evaluators for H = g^ij (p_i + A_i)(p_j + A_j) and X_a = xi_a^i p_i,
// with parameters and free functions fixed to concrete values.
class NumericCaseInstance {
 public:
  NumericCaseInstance(const SymbolTable& table, const ExprMat& g_cov, const ExprMat& g_inv, const Covector& a,
                      const KillingBasis& basis, const std::map<std::string, double>& params,
                      const std::map<std::string, std::string>& functions);

  // Uses the case's dynamics block; defaults: a0(u0) = u0, other free functions 1.
  static NumericCaseInstance from_case(const GroupCase& c, const ExprMat& g_inv, const Covector& a);

  void derivative(const PhaseState& s, PhaseState& ds) const;
  double hamiltonian(const PhaseState& s) const;
  std::array<double, kOps> conserved(const PhaseState& s) const;
  double metric_determinant(const PhaseState& s) const;

  const std::vector<double>& parameter_values() const { return point_.params; }

 private:
  struct Eval {
    std::array<std::array<double, kDim>, kDim> gi;
    std::array<std::array<std::array<double, kDim>, kDim>, kDim> dgi;  // [k][i][j]
    std::array<double, kDim> a;
    std::array<std::array<double, kDim>, kDim> da;  // [k][j]
    std::array<std::array<double, kDim>, kOps> xi;
    double det;
  };
  bool eval(const std::array<double, kDim>& u, Eval& e) const;

  Program prog_;
  mutable Point point_;
};

enum class Method { RK4, RK4Adaptive };

struct Trajectory {
  std::vector<double> t;
  std::vector<PhaseState> states;
  std::vector<double> h;
  std::vector<std::array<double, kOps>> x;
  double dt = 0.0;
  double t_end = 0.0;
  Method method = Method::RK4;
  std::size_t steps = 0;
};

struct IntegrateOptions {
  Method method = Method::RK4;
  std::size_t record_every = 1;
  double blowup_norm = 1e8;
  double min_det = 1e-12;
  double adaptive_tol = 1e-12;  // local error target for step halving
};

Trajectory integrate(const NumericCaseInstance& inst, const PhaseState& start, double dt, double t_end,
                     const IntegrateOptions& opt = {});

struct DriftEntry {
  std::string quantity;  // "H", "X1".."X4"
  double initial = 0.0;
  double drift = 0.0;  // max |q(t) - q(0)| / (1 + |q(0)|)
  bool pass = false;
};

struct ConservationReport {
  double tol = 0.0;
  std::vector<DriftEntry> entries;
  bool all_pass() const;
  std::string first_failure() const;
};

ConservationReport conservation_report(const Trajectory& traj, double tol);

}  // namespace aef
