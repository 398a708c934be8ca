#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "aef/catalog.hpp"
#include "aef/report.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace aef;
using nlohmann::json;

namespace {

json raw_case(const std::string& id) {
  std::ifstream in(aeftest::catalog().dir() / ("case_" + id + ".json"));
  return json::parse(in);
}

}  // namespace

TEST_SUITE("catalog listing") {
  TEST_CASE("every subsection and branch is present") {
    auto all = aeftest::catalog().list();
    CHECK(all.size() >= 16);
    std::set<std::string> ids;
    for (const auto& s : all) ids.insert(s.id);
    CHECK(ids.size() == all.size());
    for (const char* id : {"3.1.1", "3.1.2", "3.1.3", "3.1.4", "3.1.5", "3.1.6", "3.2.1", "3.2.2", "3.2.3", "3.3.1", "3.3.2",
                           "3.3.3-eps0", "3.3.3-eps1", "3.3.4-eps0", "3.3.4-eps1", "3.2.4-e+"})
      CHECK(ids.count(id) == 1);
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(case_id_less(all[i - 1].id, all[i].id));
  }

  TEST_CASE("glob filters") {
    auto sub = aeftest::catalog().list("3.2.*");
    CHECK(sub.size() >= 4);
    for (const auto& s : sub) CHECK(s.id.rfind("3.2.", 0) == 0);
    CHECK(aeftest::catalog().list("").size() == aeftest::catalog().list().size());
    CHECK(aeftest::catalog().list("3.1.1").size() == 1);
    CHECK(glob_match("3.?.1", "3.2.1"));
    CHECK_FALSE(glob_match("3.1.*", "3.2.1"));
  }

  TEST_CASE("ids order numerically") {
    CHECK(case_id_less("3.1.2", "3.1.10"));
    CHECK(case_id_less("3.3.3-eps0", "3.3.3-eps1"));
    CHECK(case_id_less("3.2.4", "3.2.4-e+"));
    CHECK_FALSE(case_id_less("3.2.1", "3.2.1"));
  }

  TEST_CASE("unknown ids") { CHECK_THROWS_AS(aeftest::load("9.9.9"), UnknownCase); }
}

TEST_SUITE("catalog content") {
  TEST_CASE("first case") {
    auto c = aeftest::load("3.1.1");
    CHECK(c.bianchi_label == "G4(I)");
    CHECK(c.transitivity == Transitivity::NonNullV3);
    ZeroTester z(c.table);
    ExprVec x4 = aeftest::PV({"0", "0", "u2", "-u3"}, c.table);
    for (int i = 0; i < kDim; ++i) CHECK(z.is_zero(c.killing.xi[3][i] - x4[i]));
  }

  TEST_CASE("trigonometric branch") {
    // st = sin and ct = cos: the metric carries cos(u2)^2, the operators tan(u2) = sin/cos.
    auto c = aeftest::load("3.2.4-e+");
    CHECK(c.ds2.find("cos(u2)^2") != std::string::npos);
    std::string x1 = render(c.killing.xi[0][1], c.table);
    CHECK(x1.find("sin(u2)") != std::string::npos);
    CHECK(x1.find("cos(u2)") != std::string::npos);
    CHECK(aeftest::load("3.2.4-e-").ds2.find("cosh(u2)^2") != std::string::npos);
  }

  TEST_CASE("section determines transitivity") {
    for (const auto& s : aeftest::catalog().list()) {
      CAPTURE(s.id);
      Transitivity want = s.id.rfind("3.1.", 0) == 0   ? Transitivity::NonNullV3
                          : s.id.rfind("3.2.", 0) == 0 ? Transitivity::SubgroupV2
                                                       : Transitivity::NullV3star;
      CHECK(s.transitivity == want);
    }
  }

  TEST_CASE("unlabelled group") { CHECK(aeftest::load("3.3.2").bianchi_label == "G4(unlabeled)"); }

  TEST_CASE("expected outcomes") {
    for (const auto& s : aeftest::catalog().list()) {
      CAPTURE(s.id);
      if (s.id == "3.3.3-eps1") CHECK(s.expected_outcome == Outcome::NoField);
      else if (s.id == "3.3.4-eps0") CHECK(s.expected_outcome == Outcome::ZeroField);
      else CHECK(s.expected_outcome == Outcome::PotentialFound);
      auto c = aeftest::load(s.id);
      CHECK(c.reference_potential.has_value() == (s.expected_outcome == Outcome::PotentialFound));
    }
  }

  TEST_CASE("operators satisfy the Killing equation in every case") {
    for (const auto& s : aeftest::catalog().list()) {
      CAPTURE(s.id);
      auto c = aeftest::load(s.id);
      ZeroTester z(c.table);
      ExprMat gi = metric_inverse(c.metric, z);
      for (int a = 0; a < kOps; ++a) CHECK(is_killing(gi, c.killing.xi[a], z).zero);
    }
  }
}

TEST_SUITE("catalog schema") {
  TEST_CASE("serialization round-trips") {
    for (const auto& s : aeftest::catalog().list()) {
      CAPTURE(s.id);
      auto c = aeftest::load(s.id);
      std::string text = case_to_json_text(c);
      auto back = case_from_json_text(text);
      CHECK(back == c);
      CHECK(case_to_json_text(back) == text);
    }
  }

  TEST_CASE("missing operator") {
    json j = raw_case("3.1.1");
    j["operators"].erase(3);
    CHECK_THROWS_AS(case_from_json_text(j.dump()), SchemaError);
  }

  TEST_CASE("non-symmetric component table") {
    json j = raw_case("3.1.1");
    j["metric"] = {{"components", {{"e0", "0", "0", "0"}, {"0", "a2(u0)", "0", "0"}, {"0", "u3", "a2(u0)", "a1(u0)"}, {"0", "0", "a1(u0)", "0"}}}};
    CHECK_THROWS_AS(case_from_json_text(j.dump()), SchemaError);
    j["metric"]["components"][1][2] = "u3";
    CHECK_NOTHROW(case_from_json_text(j.dump()));
  }

  TEST_CASE("undeclared parameter") {
    json j = raw_case("3.1.1");
    j["metric"]["ds2"] = "q*du0^2 + du1^2 + du2^2 + du3^2";
    CHECK_THROWS_AS(case_from_json_text(j.dump()), SchemaError);
    json k = raw_case("3.1.1");
    k["reference_potential"][1] = "b7(u0)";
    CHECK_THROWS_AS(case_from_json_text(k.dump()), SchemaError);
  }

  TEST_CASE("wrong schema version and bad outcome") {
    json j = raw_case("3.1.1");
    j["schema"] = "aef-case/0";
    CHECK_THROWS_AS(case_from_json_text(j.dump()), SchemaError);
    json k = raw_case("3.1.1");
    k["expected_outcome"] = "Maybe";
    CHECK_THROWS_AS(case_from_json_text(k.dump()), SchemaError);
    CHECK_THROWS_AS(case_from_json_text("{not json"), SchemaError);
  }
}

TEST_SUITE("case verification") {
  TEST_CASE("second case passes with its printed potential") {
    auto r = verify_case(aeftest::load("3.1.2"));
    CHECK(r.passes());
    CHECK(r.unexplained_failures() == 0);
    CHECK(r.trace.summary == "A_1 = a_0, A_2 = -a_0*u3; A = (0,a_0,-a_0*u3,0)");
  }

  TEST_CASE("a corrupted metric fails the Killing check with a usable witness") {
    json j = raw_case("3.1.1");
    j["metric"]["ds2"] = "2*a1(u0)*du2*du3 + a2(u0)*(du1 + u3*du2)^2 + e0*du0^2 + u1*du3^2";
    auto c = case_from_json_text(j.dump());
    auto r = verify_case(c);
    CHECK_FALSE(r.passes());
    const CheckResult* k = r.find("killing");
    REQUIRE(k != nullptr);
    CHECK(k->status == CheckStatus::Fail);
    CHECK(k->detail.find("not a Killing vector") != std::string::npos);
    // Recompute: the translation along u1 no longer preserves the metric.
    ZeroTester z(c.table);
    ExprMat gi = metric_inverse(c.metric, z);
    auto zr = is_killing(gi, c.killing.xi[0], z);
    REQUIRE_FALSE(zr.zero);
    ExprMat res = killing_residual(gi, c.killing.xi[0]);
    double worst = 0;
    for (const auto& row : res)
      for (const auto& e : row) worst = std::max(worst, std::fabs(evaluate(e, zr.witness->point)));
    CHECK(worst > 1e-6);
  }

  TEST_CASE("undocumented printed mismatches fail the case") {
    json j = raw_case("3.1.1");
    j["printed"]["omega"][0] = "u2*u3";
    auto r = verify_case(case_from_json_text(j.dump()));
    CHECK_FALSE(r.passes());
    REQUIRE(r.find("omega") != nullptr);
    CHECK(r.find("omega")->status == CheckStatus::Fail);
  }

  TEST_CASE("documented mismatches are explained") {
    auto r = verify_case(aeftest::load("3.2.3"));
    CHECK(r.passes());
    bool explained = false;
    for (const auto& d : r.discrepancies) explained = explained || (d.documented && d.recomputed_passes);
    CHECK(explained);
  }
}
