#include <doctest.h>

#include <cmath>

#include "aef/dynamics.hpp"
#include "support.hpp"

using namespace aef;
using aeftest::P;
using aeftest::PV;

namespace {

struct Setup {
  GroupCase c;
  ExprMat gi;
  PhaseState start;
};

Setup setup(const std::string& id) {
  Setup s{aeftest::load(id), {}, {}};
  ZeroTester z(s.c.table);
  s.gi = metric_inverse(s.c.metric, z);
  s.start = {s.c.dynamics->u, s.c.dynamics->p};
  return s;
}

double state_distance(const PhaseState& a, const PhaseState& b) {
  double m = 0;
  for (int i = 0; i < kDim; ++i) m = std::max({m, std::fabs(a.u[i] - b.u[i]), std::fabs(a.p[i] - b.p[i])});
  return m;
}

}  // namespace

TEST_SUITE("integrator") {
  TEST_CASE("free motion in flat space is a straight line") {
    SymbolTable t;
    KillingBasis b;
    for (int a = 0; a < kOps; ++a) {
      b.xi[a] = VectorField(kDim, Expr(0));
      b.xi[a][a] = Expr(1);
    }
    NumericCaseInstance inst(t, identity(4), identity(4), Covector(4, Expr(0)), b, {}, {});
    PhaseState s{{0.1, 0.2, 0.3, 0.4}, {0.5, -0.3, 0.7, 0.2}};
    auto tr = integrate(inst, s, 1e-2, 2.0);
    const auto& last = tr.states.back();
    for (int i = 0; i < kDim; ++i) {
      CHECK(last.p[i] == doctest::Approx(s.p[i]).epsilon(1e-14));
      // u' = 2 p with H = |p|^2.
      CHECK(last.u[i] == doctest::Approx(s.u[i] + 2.0 * 2.0 * s.p[i]).epsilon(1e-12));
    }
    CHECK(tr.steps == 200);
    CHECK(tr.t.size() == 201);
  }

  TEST_CASE("rejects bad step sizes") {
    auto s = setup("3.1.1");
    auto inst = NumericCaseInstance::from_case(s.c, s.gi, *s.c.reference_potential);
    CHECK_THROWS_AS(integrate(inst, s.start, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(inst, s.start, -1e-3, 1.0), std::invalid_argument);
  }

  TEST_CASE("global error is fourth order") {
    auto s = setup("3.1.1");
    auto inst = NumericCaseInstance::from_case(s.c, s.gi, *s.c.reference_potential);
    auto end = [&](double dt) { return integrate(inst, s.start, dt, 2.0).states.back(); };
    PhaseState ref = end(1e-3);
    double e1 = state_distance(end(0.1), ref), e2 = state_distance(end(0.05), ref);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
  }

  TEST_CASE("adaptive halving agrees with fixed steps") {
    auto s = setup("3.1.4");
    auto inst = NumericCaseInstance::from_case(s.c, s.gi, *s.c.reference_potential);
    IntegrateOptions opt;
    opt.method = Method::RK4Adaptive;
    auto a = integrate(inst, s.start, 0.1, 1.0, opt);
    auto b = integrate(inst, s.start, 1e-3, 1.0);
    CHECK(state_distance(a.states.back(), b.states.back()) < 1e-9);
  }

  TEST_CASE("leaving the bounded region") {
    auto s = setup("3.1.1");
    auto inst = NumericCaseInstance::from_case(s.c, s.gi, *s.c.reference_potential);
    IntegrateOptions opt;
    opt.blowup_norm = 1.0;
    CHECK_THROWS_AS(integrate(inst, s.start, 1e-2, 10.0, opt), BlowUp);
  }

  TEST_CASE("a path that runs into a degenerate metric") {
    // With c = 0.5 this start point reaches the asymptotic region in finite time.
    auto s = setup("3.2.3");
    auto inst = NumericCaseInstance(s.c.table, s.c.metric.g, s.gi, *s.c.reference_potential, s.c.killing,
                                    {{"e0", 1.0}, {"c", 0.5}}, s.c.dynamics->functions);
    CHECK_THROWS_AS(integrate(inst, s.start, 1e-3, 10.0), MetricDegeneration);
  }

  TEST_CASE("record stride keeps the endpoints") {
    auto s = setup("3.1.1");
    auto inst = NumericCaseInstance::from_case(s.c, s.gi, *s.c.reference_potential);
    IntegrateOptions opt;
    opt.record_every = 7;
    auto tr = integrate(inst, s.start, 1e-2, 1.0, opt);
    CHECK(tr.t.front() == 0.0);
    CHECK(tr.t.back() == doctest::Approx(1.0));
    CHECK(tr.t.size() == 1 + 100 / 7 + 1);
  }
}

TEST_SUITE("conservation") {
  TEST_CASE("charged motion conserves the Hamiltonian and all four operators") {
    for (const char* id : {"3.1.1", "3.1.4"}) {
      CAPTURE(id);
      auto s = setup(id);
      auto inst = NumericCaseInstance::from_case(s.c, s.gi, *s.c.reference_potential);
      auto rep = conservation_report(integrate(inst, s.start, 1e-3, 10.0), 1e-8);
      CHECK(rep.entries.size() == 5);
      for (const auto& e : rep.entries) {
        CAPTURE(e.quantity);
        CHECK(e.drift < 1e-8);
      }
      CHECK(rep.all_pass());
    }
  }

  TEST_CASE("free motion on the same metric conserves the same operators") {
    auto s = setup("3.1.1");
    auto inst = NumericCaseInstance::from_case(s.c, s.gi, Covector(4, Expr(0)));
    CHECK(conservation_report(integrate(inst, s.start, 1e-3, 10.0), 1e-8).all_pass());
  }

  TEST_CASE("a perturbed potential breaks conservation, as the bracket predicts") {
    auto s = setup("3.1.1");
    Covector a = *s.c.reference_potential;
    a[2] = normalize(a[2] + Expr::coord(1));
    auto inst = NumericCaseInstance::from_case(s.c, s.gi, a);
    auto rep = conservation_report(integrate(inst, s.start, 1e-3, 10.0), 1e-8);
    CHECK_FALSE(rep.all_pass());
    double worst = 0;
    for (const auto& e : rep.entries)
      if (e.quantity != "H") worst = std::max(worst, e.drift);
    CHECK(worst > 1e-3);
    CHECK(rep.first_failure() != "H");

    // Along the flow dX/dt = -2 g^kj pi_j (L_xi A)_k with pi = p + A; the
    // right side is assembled symbolically and compared with the numeric flow.
    PhaseState ds;
    inst.derivative(s.start, ds);
    Point pt;
    pt.u = s.start.u;
    pt.params = inst.parameter_values();
    pt.opaque = {{s.start.u[0], 1.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    std::array<double, kDim> pi{};
    for (int i = 0; i < kDim; ++i) pi[i] = s.start.p[i] + evaluate(a[i], pt);
    double largest = 0;
    for (int op = 0; op < kOps; ++op) {
      CAPTURE(op);
      const VectorField& xi = s.c.killing.xi[op];
      double rate = 0;
      for (int i = 0; i < kDim; ++i) {
        rate += evaluate(xi[i], pt) * ds.p[i];
        for (int k = 0; k < kDim; ++k) rate += evaluate(diff(xi[i], k), pt) * ds.u[k] * s.start.p[i];
      }
      double predicted = 0;
      for (int k = 0; k < kDim; ++k) {
        Expr lie(0);
        for (int i = 0; i < kDim; ++i) lie = lie + xi[i] * diff(a[k], i) + a[i] * diff(xi[i], k);
        double lk = evaluate(lie, pt);
        for (int j = 0; j < kDim; ++j) predicted -= 2.0 * evaluate(s.gi[k][j], pt) * pi[j] * lk;
      }
      CHECK(rate == doctest::Approx(predicted).epsilon(1e-10));
      largest = std::max(largest, std::fabs(rate));
    }
    CHECK(largest > 1e-3);
  }

  TEST_CASE("exactly constant series have no drift") {
    Trajectory tr;
    for (int k = 0; k < 5; ++k) {
      tr.t.push_back(k);
      tr.states.push_back({});
      tr.h.push_back(2.5);
      tr.x.push_back({1.0, -2.0, 0.0, 3.0});
    }
    auto rep = conservation_report(tr, 1e-12);
    for (const auto& e : rep.entries) CHECK(e.drift == 0.0);
    CHECK(rep.all_pass());
    tr.x[3][2] = 0.5;
    auto bad = conservation_report(tr, 1e-12);
    CHECK(bad.first_failure() == "X3");
  }

  TEST_CASE("gauge shift of potential and momenta leaves the path unchanged") {
    auto s = setup("3.1.1");
    Covector a = *s.c.reference_potential;
    Expr chi = P("u1*u2 + sin(u3)", s.c.table);
    Covector g = gradient(chi);
    Covector shifted(kDim);
    for (int i = 0; i < kDim; ++i) shifted[i] = normalize(a[i] + g[i]);
    auto i1 = NumericCaseInstance::from_case(s.c, s.gi, a);
    auto i2 = NumericCaseInstance::from_case(s.c, s.gi, shifted);
    PhaseState s2 = s.start;
    Point pt;
    pt.u = s.start.u;
    for (int i = 0; i < kDim; ++i) s2.p[i] -= evaluate(g[i], pt);
    auto t1 = integrate(i1, s.start, 1e-3, 5.0), t2 = integrate(i2, s2, 1e-3, 5.0);
    double worst = 0;
    for (std::size_t k = 0; k < t1.states.size(); ++k)
      for (int i = 0; i < kDim; ++i) worst = std::max(worst, std::fabs(t1.states[k].u[i] - t2.states[k].u[i]));
    // Equal up to truncation error, which is not itself gauge invariant.
    CHECK(worst < 1e-7);
  }

  TEST_CASE("closed forms for free functions") {
    auto s = setup("3.1.1");
    CHECK_THROWS_AS(NumericCaseInstance(s.c.table, s.c.metric.g, s.gi, *s.c.reference_potential, s.c.killing, {},
                                        {{"a0", "u1"}}),
                    std::invalid_argument);
    auto inst = NumericCaseInstance(s.c.table, s.c.metric.g, s.gi, *s.c.reference_potential, s.c.killing, {{"e0", -1.0}},
                                    {{"a0", "exp(u0)"}, {"a1", "2"}, {"a2", "1 + u0^2"}});
    CHECK(inst.parameter_values() == std::vector<double>{-1.0});
    CHECK(std::isfinite(inst.hamiltonian(s.start)));
  }
}
