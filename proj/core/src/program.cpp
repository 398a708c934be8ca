#include "aef/program.hpp"

#include <cmath>
#include <unordered_map>

namespace aef {

class ProgramBuilder {
 public:
  explicit ProgramBuilder(Program& p) : p_(p) {}

  int emit(const Expr& e) {
    if (auto it = by_node_.find(e.get()); it != by_node_.end()) return it->second;
    if (auto it = by_value_.find(e); it != by_value_.end()) {
      by_node_.emplace(e.get(), it->second);
      return it->second;
    }
    int r = build(e);
    by_node_.emplace(e.get(), r);
    by_value_.emplace(e, r);
    return r;
  }

 private:
  using Op = Program::Op;
  Program& p_;
  std::unordered_map<const Node*, int> by_node_;
  std::unordered_map<Expr, int, ExprHash> by_value_;

  int push(Op op, int a = 0, int b = 0, int c = 0, double k = 0.0) {
    p_.code_.push_back({op, a, b, c, k});
    return static_cast<int>(p_.code_.size()) - 1;
  }

  int fold(Op op, const std::vector<Expr>& xs) {
    int acc = emit(xs[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) acc = push(op, acc, emit(xs[i]));
    return acc;
  }

  int build(const Expr& e) {
    switch (e.kind()) {
      case Kind::Const: return push(Op::Const, 0, 0, 0, e.value().to_double());
      case Kind::Coord: return push(Op::Coord, e.index());
      case Kind::Param: return push(Op::Param, e.index());
      case Kind::Opaque:
        if (e.order() > p_.max_order_) p_.max_order_ = e.order();
        return push(Op::Opaque, e.index(), e.order());
      case Kind::Add: return fold(Op::Add, e.args());
      case Kind::Mul: return fold(Op::Mul, e.args());
      case Kind::Neg: return push(Op::Neg, emit(e.args()[0]));
      case Kind::Div: {
        int a = emit(e.args()[0]);
        return push(Op::Div, a, emit(e.args()[1]));
      }
      case Kind::Pow: {
        const Expr& x = e.args()[1];
        int b = emit(e.args()[0]);
        if (x.kind() == Kind::Const && x.value().is_integer()) {
          auto n = x.value().num();
          if (n == -1) return push(Op::Inv, b);
          return push(Op::PowInt, b, static_cast<int>(n));
        }
        return push(Op::PowReal, b, emit(x));
      }
      case Kind::Call: {
        int a = emit(e.args()[0]);
        switch (e.fn()) {
          case Fn::Exp: return push(Op::Exp, a);
          case Fn::Log: return push(Op::Log, a);
          case Fn::Sin: return push(Op::Sin, a);
          case Fn::Cos: return push(Op::Cos, a);
          case Fn::Sinh: return push(Op::Sinh, a);
          case Fn::Cosh: return push(Op::Cosh, a);
          case Fn::Atan: return push(Op::Atan, a);
        }
      }
    }
    return push(Op::Const);
  }
};

Program::Program(const std::vector<Expr>& outputs) {
  ProgramBuilder b(*this);
  for (const auto& e : outputs) out_.push_back(b.emit(e));
}

EvalStatus Program::run(const Point& p, double delta_den, std::vector<double>& out, double* scale) const {
  std::vector<double> r(code_.size());
  double big = 0.0;
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& in = code_[i];
    double v = 0.0;
    switch (in.op) {
      case Op::Const: v = in.k; break;
      case Op::Coord: v = p.u[in.a]; break;
      case Op::Param: v = p.params.at(in.a); break;
      case Op::Opaque: v = p.opaque.at(in.a).at(in.b); break;
      case Op::Add: v = r[in.a] + r[in.b]; break;
      case Op::Mul: v = r[in.a] * r[in.b]; break;
      case Op::Neg: v = -r[in.a]; break;
      case Op::Div:
        if (std::fabs(r[in.b]) < delta_den || r[in.b] == 0.0) return EvalStatus::NearZeroDenominator;
        v = r[in.a] / r[in.b];
        break;
      case Op::Inv:
        if (std::fabs(r[in.a]) < delta_den || r[in.a] == 0.0) return EvalStatus::NearZeroDenominator;
        v = 1.0 / r[in.a];
        break;
      case Op::PowInt: {
        double b = r[in.a];
        if (in.b < 0 && (std::fabs(b) < delta_den || b == 0.0)) return EvalStatus::NearZeroDenominator;
        v = std::pow(b, in.b);
        break;
      }
      case Op::PowReal: {
        double b = r[in.a];
        if (b <= 0.0) return EvalStatus::NonFinite;
        v = std::pow(b, r[in.b]);
        break;
      }
      case Op::Exp: v = std::exp(r[in.a]); break;
      case Op::Log:
        if (r[in.a] <= 0.0) return EvalStatus::NonFinite;
        if (std::fabs(r[in.a]) < delta_den) return EvalStatus::NearZeroDenominator;
        v = std::log(r[in.a]);
        break;
      case Op::Sin: v = std::sin(r[in.a]); break;
      case Op::Cos: v = std::cos(r[in.a]); break;
      case Op::Sinh: v = std::sinh(r[in.a]); break;
      case Op::Cosh: v = std::cosh(r[in.a]); break;
      case Op::Atan: v = std::atan(r[in.a]); break;
    }
    if (!std::isfinite(v)) return EvalStatus::NonFinite;
    double m = std::fabs(v);
    if (m > big) big = m;
    r[i] = v;
  }
  out.resize(out_.size());
  for (std::size_t i = 0; i < out_.size(); ++i) out[i] = r[out_[i]];
  if (scale) *scale = big;
  return EvalStatus::Ok;
}

double evaluate(const Expr& e, const Point& p, double delta_den) {
  Program prog({e});
  std::vector<double> out;
  switch (prog.run(p, delta_den, out)) {
    case EvalStatus::Ok: return out[0];
    case EvalStatus::NearZeroDenominator: throw DivisionNearZero();
    case EvalStatus::NonFinite: throw NonFiniteValue();
  }
  return 0.0;
}

}  // namespace aef
