#pragma once

#include <stdexcept>
#include <string>

#include "aef/matrix.hpp"
#include "aef/symbols.hpp"
#include "aef/zero_test.hpp"

namespace aef {

using VectorField = ExprVec;  // contravariant components xi^i, i = 0..3
using Covector = ExprVec;     // covariant components A_i

class SingularMetric : public std::runtime_error {
 public:
  explicit SingularMetric(const std::string& why) : std::runtime_error("singular metric: " + why) {}
};

// Covariant metric g_ij, symmetric by construction.
struct MetricSpec {
  ExprMat g;
};

// Reads g_ij off a quadratic form in the differentials du0..du3. The
// differentials are parameters `du_index[i]` of `table`; g_ij is half the
// mixed second derivative, so a cross term 2*a*du1*du3 gives g_13 = a.
MetricSpec metric_from_ds2(const Expr& ds2, const std::array<int, kDim>& du_index);

// Same, parsing `ds2` against `table` extended with du0..du3.
MetricSpec metric_from_ds2(const std::string& ds2, const SymbolTable& table);

bool is_symmetric(const ExprMat& m);

// Adjugate inverse certified by g * g^-1 - I == 0. Throws SingularMetric.
ExprMat metric_inverse(const MetricSpec& g, ZeroTester& z);

// g^il xi^j_,l + g^jl xi^i_,l - g^ij_,l xi^l
ExprMat killing_residual(const ExprMat& g_inv, const VectorField& xi);
ZeroResult is_killing(const ExprMat& g_inv, const VectorField& xi, ZeroTester& z);

// F_ij = d_i A_j - d_j A_i
ExprMat faraday(const Covector& a);

Covector gradient(const Expr& chi);

// xi^i A_i
Expr contract(const VectorField& xi, const Covector& a);

// xi^i d_i f
Expr directional(const VectorField& xi, const Expr& f);

}  // namespace aef
