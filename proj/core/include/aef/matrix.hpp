#pragma once

#include <vector>

#include "aef/expr.hpp"

namespace aef {

using ExprVec = std::vector<Expr>;
using ExprMat = std::vector<ExprVec>;

ExprMat zeros(std::size_t rows, std::size_t cols);
ExprMat identity(std::size_t n);
ExprMat matmul(const ExprMat& a, const ExprMat& b);
ExprVec matvec(const ExprMat& a, const ExprVec& v);
ExprVec vecmat(const ExprVec& v, const ExprMat& a);
ExprMat transpose(const ExprMat& a);
ExprMat normalize(const ExprMat& a);
ExprVec normalize(const ExprVec& v);

// Cofactor expansion; intended for the small matrices used here.
Expr determinant(const ExprMat& a);
ExprMat adjugate(const ExprMat& a);
// adjugate / determinant; throws std::domain_error if the determinant is the literal zero.
ExprMat inverse(const ExprMat& a);

std::vector<Expr> entries(const ExprMat& a);
ExprMat difference(const ExprMat& a, const ExprMat& b);

}  // namespace aef
