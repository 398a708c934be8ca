#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aef/catalog.hpp"

namespace aef {

enum class CheckStatus { Pass, Fail, Explained, Skipped };
const char* to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

// A printed table entry that disagrees with recomputation.
struct DiscrepancyRecord {
  std::string field;
  std::string printed;
  std::string recomputed;
  std::string witness;
  bool documented = false;
  bool recomputed_passes = false;
  std::string note;
};

// Rendered pipeline stages, for reports and the classify command.
struct PipelineTrace {
  std::vector<std::string> structure_constants;  // "C^1_23 = 1"
  std::vector<std::vector<std::string>> lambda;
  std::vector<std::string> omega;
  std::vector<std::string> c_tilde;              // nonzero entries only
  std::vector<std::vector<std::string>> w0;
  std::vector<std::string> steps;                // one line per reduction step
  std::string status;
  std::vector<std::string> free_components;      // 1-based names
  std::vector<std::vector<std::string>> theta;
  std::string residual;
  std::vector<std::string> residual_equations;
  std::vector<std::string> potential;            // A_0..A_3
  std::string outcome;
  std::string summary;                           // "A_1 = a0(u0), A_2 = ..." or "no admissible field"
};

struct CaseReport {
  std::string id;
  std::string title;
  std::string bianchi_label;
  std::string expected_outcome;
  std::vector<CheckResult> checks;
  std::vector<DiscrepancyRecord> discrepancies;
  PipelineTrace trace;
  std::string error;  // set when a stage threw

  bool passes() const;
  const CheckResult* find(const std::string& name) const;
  int unexplained_failures() const;
};

struct VerifyOptions {
  ZeroTestConfig zero;
};

CaseReport verify_case(const GroupCase& c, const VerifyOptions& opt = {});

// Pipeline trace only, without the check battery.
PipelineTrace classify_case(const GroupCase& c, const VerifyOptions& opt = {});

// "A_1 = a_0, A_2 = a_0*u3; A = (0,a_0,a_0*u3,0)"; free functions shown as a_0.
std::string render_potential_summary(const Covector& a, const SymbolTable& t);
std::string display_form(const std::string& rendered);

std::string report_json(const CaseReport& r);
std::string report_markdown(const CaseReport& r);
std::string summary_json(const std::vector<CaseReport>& rs);
std::string summary_markdown(const std::vector<CaseReport>& rs);
std::string trace_markdown(const std::string& id, const PipelineTrace& t);
std::string trace_json(const std::string& id, const PipelineTrace& t);

}  // namespace aef
