#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aef/admissibility.hpp"

namespace aef {

inline constexpr const char* kCaseSchema = "aef-case/1";

class UnknownCase : public std::runtime_error {
 public:
  explicit UnknownCase(const std::string& id) : std::runtime_error("unknown case '" + id + "'"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& source, const std::string& msg) : std::runtime_error(source + ": " + msg) {}
};

enum class Transitivity { NonNullV3, SubgroupV2, NullV3star };
const char* to_string(Transitivity t);

// One printed structure constant C^upper_{lower[0] lower[1]}, indices 1-based.
struct PrintedConstant {
  int upper = 0;
  std::array<int, 2> lower{};
  Expr value;
};

// Tables as they appear in print. Any of them may be missing.
struct PrintedTables {
  std::string metric_text;
  std::array<std::optional<VectorField>, kOps> operators;
  std::optional<std::vector<PrintedConstant>> structure_constants;
  std::optional<ExprMat> lambda;
  std::optional<ExprVec> omega;
  std::optional<ExprMat> w;
  std::optional<Covector> potential;
};

struct Discrepancy {
  std::string field;
  std::string printed;
  std::string corrected;
  std::string note;
};

// Concrete values for a trajectory run.
struct DynamicsSetup {
  std::map<std::string, double> parameters;
  std::map<std::string, std::string> functions;  // closed forms in u0
  std::array<double, kDim> u{};
  std::array<double, kDim> p{};
};

struct GroupCase {
  std::string id;
  std::string title;
  std::string bianchi_label;
  Transitivity transitivity = Transitivity::NonNullV3;
  SymbolTable table;
  std::string ds2;  // empty when the metric is given by components
  MetricSpec metric;
  KillingBasis killing;
  PrintedTables printed;
  std::optional<Covector> reference_potential;
  Outcome expected_outcome = Outcome::PotentialFound;
  std::vector<Discrepancy> discrepancies;
  std::optional<DynamicsSetup> dynamics;

  bool documents(const std::string& field) const;
};

bool operator==(const GroupCase& a, const GroupCase& b);

// Parse and validate one case document. Throws SchemaError or ParseError
// (rethrown as SchemaError naming the field).
GroupCase case_from_json_text(const std::string& text, const std::string& source = "<memory>");
std::string case_to_json_text(const GroupCase& c);
GroupCase load_case_file(const std::filesystem::path& path);

struct CaseSummary {
  std::string id;
  std::string title;
  std::string bianchi_label;
  Transitivity transitivity;
  Outcome expected_outcome;
  std::filesystem::path path;
};

// Directory of case files: AEF_CATALOG_DIR if set, else the source tree
// catalog when present, else the installed one.
std::filesystem::path default_catalog_dir();

class Catalog {
 public:
  explicit Catalog(std::filesystem::path dir = default_catalog_dir());
  // Sorted by id; `pattern` is a shell glob, empty means all.
  std::vector<CaseSummary> list(const std::string& pattern = "") const;
  GroupCase load(const std::string& id) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<CaseSummary> cases_;
};

bool glob_match(const std::string& pattern, const std::string& text);

// Case ids compare numerically by dotted components, then by suffix.
bool case_id_less(const std::string& a, const std::string& b);

}  // namespace aef
