#include <doctest.h>

#include <set>

#include "aef/admissibility.hpp"
#include "support.hpp"

using namespace aef;
using aeftest::P;
using aeftest::PM;
using aeftest::PV;

namespace {

bool rows_match_up_to_sign(const ExprVec& row, const ExprVec& want, ZeroTester& z) {
  std::vector<Expr> plus, minus;
  for (std::size_t i = 0; i < row.size(); ++i) {
    plus.push_back(normalize(row[i] - want[i]));
    minus.push_back(normalize(row[i] + want[i]));
  }
  return z.test_all(plus).zero || z.test_all(minus).zero;
}

bool same_covector(const Covector& a, const Covector& b, ZeroTester& z) {
  std::vector<Expr> d;
  for (int i = 0; i < kDim; ++i) d.push_back(normalize(a[i] - b[i]));
  return z.test_all(d).zero;
}

}  // namespace

TEST_SUITE("constraint matrix") {
  TEST_CASE("first case rows") {
    auto c = aeftest::load("3.1.1");
    ZeroTester z(c.table);
    auto f = make_frame(c.killing, z);
    ExprMat w = w0_matrix(f);
    std::vector<ExprVec> want{PV({"0", "0", "0"}, c.table), PV({"u3", "-1", "0"}, c.table), PV({"-u2", "0", "1"}, c.table)};
    // Each printed row appears among the computed rows.
    for (const auto& target : want) {
      bool found = false;
      for (const auto& row : w) found = found || rows_match_up_to_sign(row, target, z);
      CHECK(found);
    }
  }

  TEST_CASE("null space of the first case") {
    auto c = aeftest::load("3.1.1");
    ZeroTester z(c.table);
    auto f = make_frame(c.killing, z);
    NullSpace ns = null_space(w0_matrix(f), kBlock, z);
    CHECK(ns.rank == 2);
    REQUIRE(ns.free == std::vector<int>{0});
    CHECK(z.is_zero(ns.theta[0][0] - Expr(1)));
    CHECK(z.is_zero(ns.theta[1][0] - P("u3", c.table)));
    CHECK(z.is_zero(ns.theta[2][0] - P("u2", c.table)));
  }

  TEST_CASE("null space of the fourth case keeps the last component") {
    auto c = aeftest::load("3.1.4");
    ZeroTester z(c.table);
    auto f = make_frame(c.killing, z);
    NullSpace ns = null_space(w0_matrix(f), kBlock, z);
    REQUIRE(ns.free == std::vector<int>{2});
    CHECK(z.is_zero(ns.theta[0][0]));
    CHECK(z.is_zero(ns.theta[1][0]));
  }

  TEST_CASE("zero matrix leaves everything free") {
    auto t = aeftest::standard_table();
    ZeroTester z(t);
    NullSpace ns = null_space(zeros(4, 3), kBlock, z);
    CHECK(ns.rank == 0);
    CHECK(ns.free == std::vector<int>{0, 1, 2});
    CHECK(z.test_all(entries(difference(ns.theta, identity(3)))).zero);
  }

  TEST_CASE("null space vectors annihilate the matrix") {
    auto t = aeftest::standard_table();
    ZeroTester z(t);
    ExprMat w = PM({{"u1", "u2", "u3"}, {"2*u1", "2*u2", "2*u3"}, {"1", "0", "exp(u2)"}}, t);
    NullSpace ns = null_space(w, 3, z);
    CHECK(ns.rank == 2);
    REQUIRE(ns.free.size() == 1);
    CHECK(z.test_all(entries(matmul(w, ns.theta))).zero);
  }
}

TEST_SUITE("reduction") {
  TEST_CASE("first case solves with one free component") {
    auto c = aeftest::load("3.1.1");
    ZeroTester z(c.table);
    auto f = make_frame(c.killing, z);
    auto s = reduce(f, w0_matrix(f), z);
    CHECK(s.status == ReductionStatus::SolvedFreeComponents);
    CHECK(s.free == std::vector<int>{0});
    CHECK(s.k == 1);
  }

  TEST_CASE("no constraints means immediate success") {
    auto t = aeftest::standard_table();
    ZeroTester z(t);
    KillingBasis b;
    b.xi = {PV({"0", "1", "0", "0"}, t), PV({"0", "0", "1", "0"}, t), PV({"0", "0", "0", "1"}, t), PV({"0", "1", "0", "0"}, t)};
    auto f = make_frame(b, z);
    ExprMat w0 = w0_matrix(f);
    CHECK(z.test_all(entries(w0)).zero);
    auto s = reduce(f, w0, z);
    CHECK(s.status == ReductionStatus::SolvedFreeComponents);
    CHECK(s.free == std::vector<int>{0, 1, 2});
  }

  TEST_CASE("fourth case residual system") {
    auto c = aeftest::load("3.1.4");
    ZeroTester z(c.table);
    auto f = make_frame(c.killing, z);
    auto s = reduce(f, w0_matrix(f), z);
    auto r = residual_system(s, f, z);
    REQUIRE(r.solved);
    REQUIRE(r.amplitudes.size() == 1);
    CHECK(r.amplitudes[0] == P("a0(u0)", c.table));
    for (int b = 0; b < kBlock; ++b) CHECK(z.test_all(entries(r.g[b])).zero);
  }

  TEST_CASE("dependent operator with the trace of every step") {
    auto c = aeftest::load("3.2.3");
    ZeroTester z(c.table);
    auto f = make_frame(c.killing, z);
    auto s = reduce(f, w0_matrix(f), z);
    CHECK(s.status == ReductionStatus::SolvedFreeComponents);
    CHECK_FALSE(s.trace.empty());
    for (const auto& step : s.trace) CHECK(step.theta.size() == 3);
  }
}

TEST_SUITE("potential") {
  TEST_CASE("first case holonomic components") {
    auto c = aeftest::load("3.1.1");
    ZeroTester z(c.table);
    auto f = make_frame(c.killing, z);
    Covector a = holonomic_potential(PV({"a0(u0)", "a0(u0)*u3", "a0(u0)*u2"}, c.table), f, Expr(0), z);
    CHECK(same_covector(a, PV({"0", "a0(u0)", "a0(u0)*u3", "0"}, c.table), z));
  }

  TEST_CASE("sixth case holonomic components") {
    auto c = aeftest::load("3.1.6");
    ZeroTester z(c.table);
    auto p = run_pipeline(c.killing, z);
    REQUIRE(p.potential);
    CHECK(same_covector(*p.potential, PV({"0", "a0(u0)*cos(u3)", "a0(u0)", "0"}, c.table), z));
  }

  TEST_CASE("zero projections give a zero potential") {
    auto c = aeftest::load("3.1.1");
    ZeroTester z(c.table);
    auto f = make_frame(c.killing, z);
    Covector a = holonomic_potential(ExprVec(3, Expr(0)), f, Expr(0), z);
    CHECK(is_zero_covector(a, z));
  }

  TEST_CASE("pipeline reproduces the reference potential for every case that has one") {
    for (const auto& s : aeftest::catalog().list()) {
      auto c = aeftest::load(s.id);
      if (!c.reference_potential) continue;
      CAPTURE(s.id);
      ZeroTester z(c.table);
      auto p = run_pipeline(c.killing, z);
      REQUIRE(p.potential);
      CHECK(check_admissibility(*p.potential, c.killing, z).all());
      auto g = compare_potentials(*p.potential, *c.reference_potential, c.killing, z);
      CHECK_MESSAGE(g.equivalent, g.reason);
    }
  }
}

TEST_SUITE("admissibility") {
  TEST_CASE("printed potentials satisfy all sixteen conditions") {
    for (const auto& s : aeftest::catalog().list()) {
      auto c = aeftest::load(s.id);
      if (!c.printed.potential || c.documents("potential")) continue;
      CAPTURE(s.id);
      ZeroTester z(c.table);
      auto r = check_admissibility(*c.printed.potential, c.killing, z);
      CHECK(r.residuals.size() == 16);
      CHECK(r.all());
    }
  }

  TEST_CASE("zero potential is admissible") {
    auto c = aeftest::load("3.2.3");
    ZeroTester z(c.table);
    CHECK(check_admissibility(Covector(4, Expr(0)), c.killing, z).all());
  }

  TEST_CASE("a perturbed potential fails with a witness") {
    auto c = aeftest::load("3.1.1");
    ZeroTester z(c.table);
    Covector a = PV({"0", "a0(u0)", "a0(u0)*u3 + u1", "0"}, c.table);
    auto r = check_admissibility(a, c.killing, z);
    REQUIRE_FALSE(r.all());
    REQUIRE(r.witness);
    REQUIRE(r.failing_operator >= 0);
    // Independent evaluation of the failing residual, written out by hand.
    const auto& xi = c.killing.xi[r.failing_operator];
    int i = r.failing_component;
    Expr proj = contract(xi, a);
    Expr res = diff(proj, i);
    for (int j = 0; j < kDim; ++j) res -= xi[j] * (diff(a[j], i) - diff(a[i], j));
    CHECK(std::fabs(evaluate(res, r.witness->point)) > 1e-6);
  }

  TEST_CASE("a gradient along the essential coordinate keeps admissibility") {
    auto c = aeftest::load("3.1.1");
    ZeroTester z(c.table);
    // A_0 = a1(u0) is the gradient of a primitive of a1.
    Covector a = PV({"a1(u0)", "a0(u0)", "a0(u0)*u3", "0"}, c.table);
    CHECK(check_admissibility(a, c.killing, z).all());
  }
}

TEST_SUITE("poisson") {
  TEST_CASE("brackets of linear momentum functions") {
    auto c = aeftest::load("3.1.1");
    ZeroTester z(c.table);
    const auto& x = c.killing.xi;
    LinearMomentumFunction f{x[1], Expr(0)}, g{x[2], Expr(0)};
    auto h = poisson_linear(f, f);
    for (const auto& e : h.xi) CHECK(z.is_zero(e));
    CHECK(z.is_zero(h.gamma));
    auto k = poisson_linear(f, g);
    for (int i = 0; i < kDim; ++i) CHECK(z.is_zero(k.xi[i] - x[0][i]));
    CHECK(z.is_zero(k.gamma));
    LinearMomentumFunction s{VectorField(kDim, Expr(0)), P("u2*u3", c.table)};
    auto m = poisson_linear(LinearMomentumFunction{x[2], Expr(0)}, s);
    for (const auto& e : m.xi) CHECK(z.is_zero(e));
    CHECK(z.is_zero(m.gamma - directional(x[2], P("u2*u3", c.table))));
  }

  TEST_CASE("closure per pair") {
    auto c = aeftest::load("3.1.1");
    ZeroTester z(c.table);
    auto f = make_frame(c.killing, z);
    auto ok = check_closure(c.killing, f.c, z);
    REQUIRE(ok.size() == 6);
    for (bool b : ok) CHECK(b);
    StructureConstants bad = f.c;
    bad.set(0, 1, 2, Expr(2));
    bad.set(0, 2, 1, Expr(-2));
    auto r = check_closure(c.killing, bad, z);
    // Pairs in order (1,2) (1,3) (1,4) (2,3) (2,4) (3,4).
    CHECK_FALSE(r[3]);
    CHECK(r[0]);
    CHECK(r[5]);
  }

  TEST_CASE("bracket with the Hamiltonian against a brute-force expansion") {
    auto c = aeftest::load("3.1.1");
    // Momenta as extra symbols so that the bracket can be expanded directly.
    SymbolTable t = c.table;
    std::array<int, kDim> pidx{};
    for (int i = 0; i < kDim; ++i) pidx[i] = t.add_parameter("p" + std::to_string(i), ParamDomain::interval(0.5, 1.5));
    ZeroTester z(t);
    ExprMat gi = metric_inverse(c.metric, z);
    Covector a = *c.reference_potential;
    const VectorField& xi = c.killing.xi[0];
    Expr gamma = normalize(-contract(xi, a));
    LinearMomentumFunction y{xi, gamma};
    auto d = check_bracket_decomposition(gi, a, y, z);
    CHECK(d.quadratic_zero);
    CHECK(d.linear_zero);

    // The decomposition is written in kinetic momenta p + A.
    Expr h(0), yv = gamma;
    for (int i = 0; i < kDim; ++i) {
      yv += xi[i] * (Expr::param(pidx[i]) + a[i]);
      for (int j = 0; j < kDim; ++j) h += gi[i][j] * (Expr::param(pidx[i]) + a[i]) * (Expr::param(pidx[j]) + a[j]);
    }
    Expr br(0);
    for (int i = 0; i < kDim; ++i)
      br += differentiate(h, Var::param(pidx[i])) * diff(yv, i) - diff(h, i) * differentiate(yv, Var::param(pidx[i]));
    std::mt19937_64 rng(5);
    for (int k = 0; k < 5; ++k) {
      Point pt = aeftest::random_point(t, rng);
      CHECK(std::fabs(evaluate(br, pt)) < 1e-9);
    }
  }

  TEST_CASE("free motion and non-Killing fields") {
    auto c = aeftest::load("3.1.1");
    ZeroTester z(c.table);
    ExprMat gi = metric_inverse(c.metric, z);
    Covector zero(kDim, Expr(0));
    auto d = check_bracket_decomposition(gi, zero, LinearMomentumFunction{c.killing.xi[3], Expr(0)}, z);
    CHECK(d.quadratic_zero);
    CHECK(d.linear_zero);
    auto e = check_bracket_decomposition(gi, zero, LinearMomentumFunction{PV({"0", "u1", "0", "0"}, c.table), Expr(0)}, z);
    CHECK_FALSE(e.quadratic_zero);
  }
}

TEST_SUITE("identities") {
  TEST_CASE("compatibility and annihilation for reference potentials") {
    for (const auto& s : aeftest::catalog().list()) {
      auto c = aeftest::load(s.id);
      if (!c.reference_potential) continue;
      CAPTURE(s.id);
      ZeroTester z(c.table);
      auto f = make_frame(c.killing, z);
      CHECK(z.test_all(compatibility_residuals(*c.reference_potential, f)).zero);
      CHECK(z.test_all(annihilation_residuals(*c.reference_potential, f)).zero);
    }
  }
}

TEST_SUITE("gauge comparison") {
  TEST_CASE("gradients and free-function rescaling are absorbed") {
    auto c = aeftest::load("3.1.1");
    ZeroTester z(c.table);
    Covector ref = *c.reference_potential;
    Covector shifted = ref;
    // The gauge function is invariant under the group, so projections survive.
    Covector g = gradient(P("u0*sin(u0)", c.table));
    Expr k = P("-3*(2 + u0^2)", c.table);
    for (int i = 0; i < kDim; ++i) shifted[i] = normalize(k * ref[i] + g[i]);
    CHECK(compare_potentials(shifted, ref, c.killing, z).equivalent);
  }

  TEST_CASE("different fields are told apart") {
    auto c = aeftest::load("3.1.1");
    ZeroTester z(c.table);
    Covector other = PV({"0", "a0(u0)", "-a0(u0)*u3", "0"}, c.table);
    CHECK_FALSE(compare_potentials(other, *c.reference_potential, c.killing, z).equivalent);
    Covector coord_factor = PV({"0", "u1*a0(u0)", "u1*a0(u0)*u3", "0"}, c.table);
    CHECK_FALSE(compare_potentials(coord_factor, *c.reference_potential, c.killing, z).equivalent);
  }
}
