#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "aef/expr.hpp"
#include "aef/symbols.hpp"

namespace aef {

// Numeric assignment for every symbol kind.
struct Point {
  std::array<double, kDim> u{};
  std::vector<double> params;
  // opaque[f][k] is the value of the k-th derivative of function f.
  std::vector<std::vector<double>> opaque;
};

enum class EvalStatus { Ok, NearZeroDenominator, NonFinite };

class DivisionNearZero : public std::runtime_error {
 public:
  DivisionNearZero() : std::runtime_error("denominator below threshold") {}
};

class NonFiniteValue : public std::runtime_error {
 public:
  NonFiniteValue() : std::runtime_error("evaluation produced a non-finite value") {}
};

// Straight-line program evaluating several expressions with shared
// subexpressions computed once.
class Program {
 public:
  Program() = default;
  explicit Program(const std::vector<Expr>& outputs);

  // Evaluates all outputs. `scale`, when given, receives the largest
  // intermediate magnitude. Denominators below delta_den abort the run.
  EvalStatus run(const Point& p, double delta_den, std::vector<double>& out, double* scale = nullptr) const;

  std::size_t size() const { return code_.size(); }
  std::size_t outputs() const { return out_.size(); }
  int max_opaque_order() const { return max_order_; }

 private:
  enum class Op : std::uint8_t {
    Const, Coord, Param, Opaque, Add, Mul, Neg, Div, Inv, PowInt, PowReal,
    Exp, Log, Sin, Cos, Sinh, Cosh, Atan
  };
  struct Instr {
    Op op;
    int a = 0;
    int b = 0;
    int c = 0;
    double k = 0.0;
  };
  std::vector<Instr> code_;
  std::vector<int> out_;
  int max_order_ = 0;

  friend class ProgramBuilder;
};

// One-off evaluation; throws DivisionNearZero or NonFiniteValue.
double evaluate(const Expr& e, const Point& p, double delta_den = 0.0);

}  // namespace aef
