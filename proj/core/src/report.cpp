#include "aef/report.hpp"

#include <cstdio>
#include <regex>
#include <sstream>

#include "aef/parse.hpp"
#include "json.hpp"
#include "numeric.hpp"

namespace aef {

using ordered_json = nlohmann::ordered_json;

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Explained: return "explained";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

bool CaseReport::passes() const { return unexplained_failures() == 0 && error.empty(); }

int CaseReport::unexplained_failures() const {
  int n = 0;
  for (const auto& c : checks) n += c.status == CheckStatus::Fail;
  return n;
}

const CheckResult* CaseReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string describe(const Witness& w, const SymbolTable& t) {
  std::ostringstream os;
  os << "at u=(";
  for (int i = 0; i < kDim; ++i) os << (i ? "," : "") << fmt(w.point.u[i]);
  os << ")";
  for (std::size_t k = 0; k < t.parameters().size() && k < w.point.params.size(); ++k)
    os << " " << t.parameters()[k].name << "=" << fmt(w.point.params[k]);
  os << " value " << fmt(w.value);
  return os.str();
}

std::vector<std::string> render_all(const ExprVec& v, const SymbolTable& t) {
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(render(e, t));
  return out;
}

std::vector<std::vector<std::string>> render_all(const ExprMat& m, const SymbolTable& t) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : m) out.push_back(render_all(r, t));
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string tuple(const std::vector<std::string>& v) { return "(" + join(v, ", ") + ")"; }

std::string label(const char* kind, int up, int a, int b) {
  return std::string(kind) + "^" + std::to_string(up + 1) + "_" + std::to_string(a + 1) + std::to_string(b + 1);
}

void fill_trace(PipelineTrace& tr, const PipelineResult& r, const SymbolTable& t) {
  const auto& f = r.frame;
  for (int d = 0; d < kOps; ++d)
    for (int a = 0; a < kOps; ++a)
      for (int b = a + 1; b < kOps; ++b)
        if (!f.c(d, a, b).is_zero_literal()) tr.structure_constants.push_back(label("C", d, a, b) + " = " + render(f.c(d, a, b), t));
  tr.lambda = render_all(f.lambda, t);
  tr.omega = render_all(f.omega, t);
  for (int g = 0; g < kBlock; ++g)
    for (int a = 0; a < kOps; ++a)
      for (int b = a + 1; b < kOps; ++b)
        if (!f.ct[g][a][b].is_zero_literal()) tr.c_tilde.push_back(label("Ct", g, a, b) + " = " + render(f.ct[g][a][b], t));
  tr.w0 = render_all(r.w0, t);
  for (const auto& s : r.state.trace) {
    std::vector<std::string> fr;
    for (int i : s.free) fr.push_back("A" + std::to_string(i + 1));
    tr.steps.push_back("step " + std::to_string(s.k) + ": " + std::to_string(s.w.size()) + " constraint rows, free {" + join(fr, ", ") + "}");
  }
  tr.status = to_string(r.state.status);
  for (int i : r.state.free) tr.free_components.push_back("A" + std::to_string(i + 1));
  tr.theta = render_all(r.state.theta, t);
  tr.residual = r.residual.note;
  for (int b = 0; b < kBlock; ++b)
    for (std::size_t i = 0; i < r.residual.g[b].size(); ++i)
      for (std::size_t j = 0; j < r.residual.g[b][i].size(); ++j)
        tr.residual_equations.push_back("d_" + std::to_string(b + 1) + " a" + std::to_string(i + 1) + " = (" +
                                        render(r.residual.g[b][i][j], t) + ") * a" + std::to_string(j + 1));
  tr.outcome = to_string(r.outcome);
  if (r.state.status == ReductionStatus::OnlyZeroSolution) {
    tr.potential = render_all(Covector(kDim, Expr(0)), t);
    tr.summary = "no admissible field";
  } else if (r.potential) {
    tr.potential = render_all(*r.potential, t);
    tr.summary = render_potential_summary(*r.potential, t);
  } else {
    tr.summary = "residual system unsolved";
  }
}

struct Battery {
  const GroupCase& c;
  ZeroTester& z;
  CaseReport& rep;

  CheckResult& add(const std::string& name) {
    rep.checks.push_back({name, CheckStatus::Pass, ""});
    return rep.checks.back();
  }

  void note(CheckResult& r, const std::string& s) { r.detail += (r.detail.empty() ? "" : "; ") + s; }

  // Records a mismatch and downgrades the check accordingly.
  void mismatch(CheckResult& r, const std::string& field, const std::string& printed, const std::string& recomputed,
                const std::string& witness, bool recomputed_passes) {
    DiscrepancyRecord d{field, printed, recomputed, witness, c.documents(field), recomputed_passes, ""};
    for (const auto& doc : c.discrepancies)
      if (doc.field == field) d.note = doc.note;
    rep.discrepancies.push_back(d);
    bool explained = d.documented && recomputed_passes;
    if (!explained) r.status = CheckStatus::Fail;
    else if (r.status == CheckStatus::Pass) r.status = CheckStatus::Explained;
    note(r, field + (explained ? " differs (documented)" : " differs"));
  }
};

std::string witness_text(const ZeroResult& zr, const SymbolTable& t) { return zr.witness ? describe(*zr.witness, t) : ""; }

}  // namespace

std::string display_form(const std::string& rendered) {
  // a0(u0) -> a_0, a0'(u0) -> a_0'
  static const std::regex fn(R"(\b([A-Za-z])(\d+)('*)\(u\d\))");
  return std::regex_replace(rendered, fn, "$1_$2$3");
}

std::string render_potential_summary(const Covector& a, const SymbolTable& t) {
  std::vector<std::string> parts, all;
  for (int i = 0; i < kDim; ++i) {
    std::string r = display_form(render(a[i], t));
    all.push_back(r);
    if (!a[i].is_zero_literal()) parts.push_back("A_" + std::to_string(i) + " = " + r);
  }
  if (parts.empty()) return "A = 0";
  return join(parts, ", ") + "; A = (" + join(all, ",") + ")";
}

PipelineTrace classify_case(const GroupCase& c, const VerifyOptions& opt) {
  ZeroTester z(c.table, opt.zero);
  PipelineTrace tr;
  PipelineResult r = run_pipeline(c.killing, z);
  fill_trace(tr, r, c.table);
  return tr;
}

CaseReport verify_case(const GroupCase& c, const VerifyOptions& opt) {
  CaseReport rep;
  rep.id = c.id;
  rep.title = c.title;
  rep.bianchi_label = c.bianchi_label;
  rep.expected_outcome = to_string(c.expected_outcome);
  rep.checks.reserve(32);  // check references stay valid across add()
  ZeroTester z(c.table, opt.zero);
  Battery B{c, z, rep};
  const SymbolTable& t = c.table;

  // Geometry.
  ExprMat ginv;
  {
    auto& r = B.add("metric_inverse");
    try {
      ginv = metric_inverse(c.metric, z);
    } catch (const std::exception& e) {
      r.status = CheckStatus::Fail;
      r.detail = e.what();
      rep.error = e.what();
      return rep;
    }
  }
  std::array<bool, kOps> working_killing{};
  {
    auto& r = B.add("killing");
    for (int a = 0; a < kOps; ++a) {
      auto zr = is_killing(ginv, c.killing.xi[a], z);
      working_killing[a] = zr.zero;
      if (!zr.zero) {
        r.status = CheckStatus::Fail;
        B.note(r, "X" + std::to_string(a + 1) + " is not a Killing vector " + witness_text(zr, t));
      }
    }
  }
  {
    auto& r = B.add("killing_printed");
    bool any = false;
    for (int a = 0; a < kOps; ++a) {
      const auto& p = c.printed.operators[a];
      if (!p) continue;
      any = true;
      auto zr = is_killing(ginv, *p, z);
      // A vanishing printed operator satisfies the equation but spans nothing.
      bool null_field = zr.zero && z.test_all(*p).zero;
      if (!zr.zero || null_field)
        B.mismatch(r, "operators.X" + std::to_string(a + 1), tuple(render_all(*p, t)), tuple(render_all(c.killing.xi[a], t)),
                   null_field ? "identically zero" : witness_text(zr, t), working_killing[a]);
    }
    if (!any) r.status = CheckStatus::Skipped;
  }

  // Algebra and frame.
  PipelineResult pr;
  bool have_frame = false;
  {
    auto& r = B.add("structure_constants");
    try {
      pr.frame = make_frame(c.killing, z);
      have_frame = true;
    } catch (const std::exception& e) {
      r.status = CheckStatus::Fail;
      r.detail = e.what();
      rep.error = e.what();
      return rep;
    }
    const auto& C = pr.frame.c;
    auto closure = check_closure(c.killing, C, z);
    bool closes = std::all_of(closure.begin(), closure.end(), [](bool b) { return b; });
    bool jacobi = z.test_all(jacobi_residuals(C)).zero;
    if (!closes || !jacobi) {
      r.status = CheckStatus::Fail;
      B.note(r, std::string(closes ? "" : "closure fails ") + (jacobi ? "" : "Jacobi fails"));
    }
    if (c.printed.structure_constants) {
      StructureConstants printed;
      for (const auto& pc : *c.printed.structure_constants) printed.set(pc.upper - 1, pc.lower[0] - 1, pc.lower[1] - 1, normalize(pc.value));
      std::vector<std::string> pd, rd;
      for (int d = 0; d < kOps; ++d)
        for (int a = 0; a < kOps; ++a)
          for (int b = a + 1; b < kOps; ++b)
            if (!z.is_zero(normalize(printed(d, a, b) - C(d, a, b)))) {
              pd.push_back(label("C", d, a, b) + " = " + render(printed(d, a, b), t));
              rd.push_back(label("C", d, a, b) + " = " + render(C(d, a, b), t));
            }
      if (!pd.empty()) B.mismatch(r, "structure_constants", join(pd, ", "), join(rd, ", "), "", closes && jacobi);
    } else {
      B.note(r, "no printed constants");
    }
  }
  {
    auto& r = B.add("closure");
    auto closure = check_closure(c.killing, pr.frame.c, z);
    for (std::size_t k = 0; k < closure.size(); ++k)
      if (!closure[k]) r.status = CheckStatus::Fail;
    if (r.status == CheckStatus::Fail) r.detail = "Poisson brackets of the operators leave the algebra";
  }
  {
    auto& r = B.add("lambda");
    if (c.printed.lambda) {
      std::vector<Expr> diffs = entries(normalize(difference(*c.printed.lambda, pr.frame.lambda)));
      auto zr = z.test_all(diffs);
      if (!zr.zero) {
        std::vector<std::string> prow, rrow;
        for (const auto& row : render_all(*c.printed.lambda, t)) prow.push_back(tuple(row));
        for (const auto& row : render_all(pr.frame.lambda, t)) rrow.push_back(tuple(row));
        B.mismatch(r, "lambda", join(prow, ", "), join(rrow, ", "), witness_text(zr, t), true);
      }
    } else {
      r.status = CheckStatus::Skipped;
    }
  }
  {
    auto& r = B.add("omega");
    if (c.printed.omega) {
      std::vector<Expr> diffs;
      for (int g = 0; g < kBlock; ++g) diffs.push_back(normalize((*c.printed.omega)[g] - pr.frame.omega[g]));
      auto zr = z.test_all(diffs);
      if (!zr.zero)
        B.mismatch(r, "omega", tuple(render_all(*c.printed.omega, t)), tuple(render_all(pr.frame.omega, t)), witness_text(zr, t), true);
    } else {
      r.status = CheckStatus::Skipped;
    }
  }
  {
    auto& r = B.add("identities");
    struct Item {
      const char* name;
      std::vector<Expr> res;
    };
    std::vector<Item> items{{"lambda identity", lambda_identity_residuals(c.killing, pr.frame.lambda, pr.frame.ct)},
                            {"omega derivative identity", omega_identity_residuals(c.killing, pr.frame.omega, pr.frame.ct)},
                            {"Jacobi", jacobi_residuals(pr.frame.c)}};
    for (auto& it : items) {
      auto zr = z.test_all(it.res);
      if (!zr.zero) {
        r.status = CheckStatus::Fail;
        B.note(r, std::string(it.name) + " fails " + witness_text(zr, t));
      }
    }
  }

  // Pipeline.
  pr.w0 = w0_matrix(pr.frame);
  {
    auto& r = B.add("w_nullspace");
    try {
      NullSpace ns = null_space(pr.w0, kBlock, z);
      B.note(r, "rank " + std::to_string(ns.rank));
      if (c.printed.w) {
        const ExprMat& pw = *c.printed.w;
        bool agree = true;
        std::string wit;
        if (!ns.free.empty()) {
          auto zr = z.test_all(entries(normalize(matmul(pw, ns.theta))));
          if (!zr.zero) {
            agree = false;
            wit = witness_text(zr, t);
          }
        }
        if (agree) {
          NullSpace pns = null_space(pw, kBlock, z);
          agree = pns.rank == ns.rank;
        }
        if (!agree) {
          std::vector<std::string> prow, rrow;
          for (const auto& row : render_all(pw, t)) prow.push_back(tuple(row));
          for (const auto& row : render_all(pr.w0, t)) rrow.push_back(tuple(row));
          B.mismatch(r, "W", join(prow, ", "), join(rrow, ", "), wit, true);
        }
      } else {
        B.note(r, "no printed matrix");
      }
    } catch (const std::exception& e) {
      r.status = CheckStatus::Fail;
      B.note(r, e.what());
    }
  }
  bool pipeline_ok = false;
  {
    auto& r = B.add("reduction");
    try {
      pr.state = reduce(pr.frame, pr.w0, z);
      if (pr.state.status == ReductionStatus::OnlyZeroSolution) {
        pr.potential = Covector(kDim, Expr(0));
        pr.outcome = Outcome::NoField;
      } else {
        pr.residual = residual_system(pr.state, pr.frame, z);
        if (pr.residual.solved) {
          ExprVec proj = normalize(matvec(pr.state.theta, pr.residual.amplitudes));
          pr.potential = holonomic_potential(proj, pr.frame, Expr(0), z);
          pr.outcome = is_zero_covector(*pr.potential, z) ? Outcome::ZeroField : Outcome::PotentialFound;
        } else {
          pr.outcome = Outcome::Unsolved;
        }
      }
      pipeline_ok = true;
      fill_trace(rep.trace, pr, t);
      B.note(r, std::string(to_string(pr.state.status)) + ", outcome " + to_string(pr.outcome));
      if (!outcome_satisfies(pr, c.expected_outcome, z)) {
        bool admissible = pr.potential && check_admissibility(*pr.potential, c.killing, z).all();
        B.mismatch(r, "expected_outcome", to_string(c.expected_outcome), std::string(to_string(pr.outcome)) + ": " + rep.trace.summary, "",
                   admissible);
      }
    } catch (const std::exception& e) {
      r.status = CheckStatus::Fail;
      B.note(r, e.what());
      rep.error = e.what();
    }
  }
  {
    auto& r = B.add("admissibility_pipeline");
    if (pipeline_ok && pr.potential) {
      auto ar = check_admissibility(*pr.potential, c.killing, z);
      if (!ar.all()) {
        r.status = CheckStatus::Fail;
        B.note(r, "X" + std::to_string(ar.failing_operator + 1) + " component " + std::to_string(ar.failing_component) + " " +
                      (ar.witness ? describe(*ar.witness, t) : ""));
      }
    } else {
      r.status = CheckStatus::Skipped;
    }
  }
  bool reference_ok = false;
  {
    auto& r = B.add("admissibility_reference");
    if (c.reference_potential) {
      auto ar = check_admissibility(*c.reference_potential, c.killing, z);
      reference_ok = ar.all();
      if (!reference_ok) {
        r.status = CheckStatus::Fail;
        B.note(r, "X" + std::to_string(ar.failing_operator + 1) + " component " + std::to_string(ar.failing_component) + " " +
                      (ar.witness ? describe(*ar.witness, t) : ""));
      }
    } else {
      r.status = CheckStatus::Skipped;
    }
  }
  {
    auto& r = B.add("admissibility_printed");
    if (c.printed.potential) {
      auto ar = check_admissibility(*c.printed.potential, c.killing, z);
      if (!ar.all())
        B.mismatch(r, "potential", tuple(render_all(*c.printed.potential, t)),
                   c.reference_potential ? tuple(render_all(*c.reference_potential, t)) : "none",
                   ar.witness ? describe(*ar.witness, t) : "", reference_ok || !c.reference_potential);
    } else {
      r.status = CheckStatus::Skipped;
    }
  }
  {
    auto& r = B.add("pipeline_vs_reference");
    if (!pipeline_ok || !pr.potential) {
      r.status = pipeline_ok ? CheckStatus::Fail : CheckStatus::Skipped;
      B.note(r, "no pipeline potential");
    } else if (c.reference_potential) {
      auto g = compare_potentials(*pr.potential, *c.reference_potential, c.killing, z);
      if (!g.equivalent) {
        r.status = CheckStatus::Fail;
        B.note(r, g.reason);
      } else {
        B.note(r, "gauge-equivalent, free-function factor " + render(g.ratio, t));
      }
    } else {
      r.status = CheckStatus::Skipped;
      B.note(r, "no reference potential");
    }
  }
  {
    const Covector* a = c.reference_potential ? &*c.reference_potential : (pr.potential ? &*pr.potential : nullptr);
    auto& r1 = B.add("compatibility");
    if (a && have_frame) {
      auto zr = z.test_all(compatibility_residuals(*a, pr.frame));
      if (!zr.zero) {
        r1.status = CheckStatus::Fail;
        r1.detail = witness_text(zr, t);
      }
    } else {
      r1.status = CheckStatus::Skipped;
    }
    auto& r3 = B.add("annihilation");
    if (a && have_frame) {
      auto zr = z.test_all(annihilation_residuals(*a, pr.frame));
      if (!zr.zero) {
        r3.status = CheckStatus::Fail;
        r3.detail = witness_text(zr, t);
      }
    } else {
      r3.status = CheckStatus::Skipped;
    }
    auto& r4 = B.add("bracket_decomposition");
    if (a) {
      for (int op = 0; op < kOps; ++op) {
        LinearMomentumFunction y{c.killing.xi[op], normalize(-contract(c.killing.xi[op], *a))};
        auto d = check_bracket_decomposition(ginv, *a, y, z);
        if (!d.quadratic_zero || !d.linear_zero) {
          r4.status = CheckStatus::Fail;
          B.note(r4, "X" + std::to_string(op + 1) + (d.quadratic_zero ? " linear" : " quadratic") + " coefficient nonzero");
        }
      }
    } else {
      r4.status = CheckStatus::Skipped;
    }
  }
  return rep;
}

namespace {

ordered_json trace_to_json(const PipelineTrace& t) {
  ordered_json j;
  j["structure_constants"] = t.structure_constants;
  j["lambda"] = t.lambda;
  j["omega"] = t.omega;
  j["c_tilde"] = t.c_tilde;
  j["W0"] = t.w0;
  j["steps"] = t.steps;
  j["status"] = t.status;
  j["free_components"] = t.free_components;
  j["theta"] = t.theta;
  j["residual"] = t.residual;
  j["residual_equations"] = t.residual_equations;
  j["potential"] = t.potential;
  j["outcome"] = t.outcome;
  j["summary"] = t.summary;
  return j;
}

ordered_json report_to_json(const CaseReport& r) {
  ordered_json j;
  j["id"] = r.id;
  j["title"] = r.title;
  j["bianchi_label"] = r.bianchi_label;
  j["expected_outcome"] = r.expected_outcome;
  j["passes"] = r.passes();
  if (!r.error.empty()) j["error"] = r.error;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
  j["checks"] = checks;
  ordered_json ds = ordered_json::array();
  for (const auto& d : r.discrepancies)
    ds.push_back({{"field", d.field},
                  {"printed", d.printed},
                  {"recomputed", d.recomputed},
                  {"witness", d.witness},
                  {"documented", d.documented},
                  {"recomputed_passes", d.recomputed_passes},
                  {"note", d.note}});
  j["discrepancies"] = ds;
  j["pipeline"] = trace_to_json(r.trace);
  return j;
}

std::string md_matrix(const std::vector<std::vector<std::string>>& m) {
  std::string s;
  for (const auto& row : m) s += "    (" + join(row, ", ") + ")\n";
  return s;
}

std::string trace_md_body(const PipelineTrace& t) {
  std::ostringstream os;
  os << "### Structure constants\n\n";
  for (const auto& s : t.structure_constants) os << "- `" << s << "`\n";
  if (t.structure_constants.empty()) os << "- abelian\n";
  os << "\n### lambda\n\n" << md_matrix(t.lambda) << "\n### omega\n\n    (" << join(t.omega, ", ") << ")\n";
  os << "\n### C-tilde (nonzero)\n\n";
  for (const auto& s : t.c_tilde) os << "- `" << s << "`\n";
  os << "\n### W(0)\n\n" << md_matrix(t.w0) << "\n### Reduction\n\n";
  for (const auto& s : t.steps) os << "- " << s << "\n";
  os << "- status: " << t.status << ", free {" << join(t.free_components, ", ") << "}\n\n";
  if (!t.theta.empty() && !t.theta[0].empty()) os << "theta:\n\n" << md_matrix(t.theta) << "\n";
  os << "### Residual system\n\n" << (t.residual.empty() ? "none" : t.residual) << "\n\n";
  for (const auto& s : t.residual_equations) os << "    " << s << "\n";
  os << "\n### Potential\n\n" << t.summary << "\n";
  return os.str();
}

}  // namespace

std::string report_json(const CaseReport& r) { return report_to_json(r).dump(2) + "\n"; }

std::string report_markdown(const CaseReport& r) {
  std::ostringstream os;
  os << "# Case " << r.id << (r.title.empty() ? "" : " - " + r.title) << "\n\n";
  os << "Group " << r.bianchi_label << ", expected outcome " << r.expected_outcome << ". Result: **" << (r.passes() ? "PASS" : "FAIL")
     << "**\n\n";
  if (!r.error.empty()) os << "Error: " << r.error << "\n\n";
  os << "## Checks\n\n| check | status | detail |\n|---|---|---|\n";
  for (const auto& c : r.checks) os << "| " << c.name << " | " << to_string(c.status) << " | " << c.detail << " |\n";
  if (!r.discrepancies.empty()) {
    os << "\n## Discrepancies\n\n";
    for (const auto& d : r.discrepancies) {
      os << "### " << d.field << (d.documented ? " (documented)" : " (UNDOCUMENTED)") << "\n\n";
      os << "- printed: `" << d.printed << "`\n- recomputed: `" << d.recomputed << "`\n";
      if (!d.witness.empty()) os << "- witness: " << d.witness << "\n";
      os << "- recomputed value passes its checks: " << (d.recomputed_passes ? "yes" : "no") << "\n";
      if (!d.note.empty()) os << "- note: " << d.note << "\n";
      os << "\n";
    }
  }
  os << "\n## Pipeline\n\n" << trace_md_body(r.trace);
  return os.str();
}

std::string summary_json(const std::vector<CaseReport>& rs) {
  ordered_json j;
  int pass = 0;
  ordered_json cases = ordered_json::array();
  for (const auto& r : rs) {
    pass += r.passes();
    ordered_json failing = ordered_json::array();
    for (const auto& c : r.checks)
      if (c.status == CheckStatus::Fail) failing.push_back(c.name);
    int explained = 0;
    for (const auto& c : r.checks) explained += c.status == CheckStatus::Explained;
    cases.push_back({{"id", r.id}, {"passes", r.passes()}, {"failing_checks", failing}, {"explained_checks", explained},
                     {"potential", r.trace.summary}});
  }
  j["total"] = rs.size();
  j["passing"] = pass;
  j["cases"] = cases;
  return j.dump(2) + "\n";
}

std::string summary_markdown(const std::vector<CaseReport>& rs) {
  std::ostringstream os;
  int pass = 0;
  for (const auto& r : rs) pass += r.passes();
  os << "# Verification summary\n\n" << pass << " of " << rs.size() << " cases pass.\n\n";
  os << "| case | result | explained | potential |\n|---|---|---|---|\n";
  for (const auto& r : rs) {
    int explained = 0;
    std::vector<std::string> failing;
    for (const auto& c : r.checks) {
      explained += c.status == CheckStatus::Explained;
      if (c.status == CheckStatus::Fail) failing.push_back(c.name);
    }
    os << "| " << r.id << " | " << (r.passes() ? "pass" : "FAIL: " + join(failing, ", ")) << " | " << explained << " | `"
       << r.trace.summary << "` |\n";
  }
  return os.str();
}

std::string trace_markdown(const std::string& id, const PipelineTrace& t) {
  return "# Classification of case " + id + "\n\n" + trace_md_body(t);
}

std::string trace_json(const std::string& id, const PipelineTrace& t) {
  ordered_json j;
  j["id"] = id;
  j["pipeline"] = trace_to_json(t);
  return j.dump(2) + "\n";
}

}  // namespace aef
