#include "aef/catalog.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aef/parse.hpp"
#include "json.hpp"

namespace aef {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char* to_string(Transitivity t) {
  switch (t) {
    case Transitivity::NonNullV3: return "NonNullV3";
    case Transitivity::SubgroupV2: return "SubgroupV2";
    case Transitivity::NullV3star: return "NullV3star";
  }
  return "?";
}

bool GroupCase::documents(const std::string& field) const {
  return std::any_of(discrepancies.begin(), discrepancies.end(), [&](const Discrepancy& d) { return d.field == field; });
}

namespace {

bool same(const std::optional<ExprMat>& a, const std::optional<ExprMat>& b) { return a == b; }

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& msg) const { throw SchemaError(source_, msg); }

  const json& need(const json& j, const char* key, const std::string& where) const {
    if (!j.is_object() || !j.contains(key)) fail("missing field '" + where + key + "'");
    return j.at(key);
  }

  std::string str(const json& j, const std::string& field) const {
    if (!j.is_string()) fail("field '" + field + "' must be a string");
    return j.get<std::string>();
  }

  Expr expr(const json& j, const SymbolTable& t, const std::string& field) const {
    std::string text = str(j, field);
    try {
      return parse(text, t);
    } catch (const ParseError& e) {
      fail("field '" + field + "': " + e.what());
    }
  }

  ExprVec vec(const json& j, const SymbolTable& t, std::size_t n, const std::string& field) const {
    if (!j.is_array() || j.size() != n) fail("field '" + field + "' must be an array of " + std::to_string(n) + " expressions");
    ExprVec v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(expr(j[i], t, field + "[" + std::to_string(i) + "]"));
    return v;
  }

  ExprMat mat(const json& j, const SymbolTable& t, std::size_t rows, std::size_t cols, const std::string& field) const {
    if (!j.is_array() || (rows && j.size() != rows)) fail("field '" + field + "' has the wrong number of rows");
    ExprMat m;
    for (std::size_t i = 0; i < j.size(); ++i) m.push_back(vec(j[i], t, cols, field + "[" + std::to_string(i) + "]"));
    return m;
  }

  Rational rational(const json& j, const std::string& field) const {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) {
      std::string s = j.get<std::string>();
      auto slash = s.find('/');
      try {
        if (slash == std::string::npos) return Rational::from_decimal(s);
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
      } catch (const std::exception&) {
        fail("field '" + field + "' is not a rational literal");
      }
    }
    fail("field '" + field + "' must be an integer or a rational string");
  }

 private:
  std::string source_;
};

SymbolTable read_symbols(const Reader& r, const json& j) {
  SymbolTable t;
  if (!j.is_object()) r.fail("field 'symbols' must be an object");
  if (j.contains("coordinates")) {
    const auto& c = j.at("coordinates");
    if (!c.is_array() || c.size() != kDim) r.fail("field 'symbols.coordinates' must list u0..u3");
    for (int i = 0; i < kDim; ++i)
      if (!c[i].is_string() || c[i].get<std::string>() != t.coordinates()[i]) r.fail("field 'symbols.coordinates' must be exactly u0, u1, u2, u3");
  }
  if (j.contains("parameters")) {
    for (const auto& p : j.at("parameters")) {
      std::string name = r.str(r.need(p, "name", "symbols.parameters[]."), "symbols.parameters[].name");
      ParamDomain d;
      if (p.contains("values")) {
        std::vector<Rational> vals;
        for (const auto& v : p.at("values")) vals.push_back(r.rational(v, "symbols.parameters." + name + ".values"));
        d = ParamDomain::finite(vals);
      } else if (p.contains("interval")) {
        const auto& iv = p.at("interval");
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number() || iv[0].get<double>() >= iv[1].get<double>())
          r.fail("parameter '" + name + "' has a malformed interval");
        d = ParamDomain::interval(iv[0].get<double>(), iv[1].get<double>());
      } else {
        r.fail("parameter '" + name + "' declares no sampling set");
      }
      try {
        t.add_parameter(name, d);
      } catch (const std::exception& e) {
        r.fail(e.what());
      }
    }
  }
  if (j.contains("functions")) {
    for (const auto& f : j.at("functions")) {
      std::string name = r.str(r.need(f, "name", "symbols.functions[]."), "symbols.functions[].name");
      std::string arg = r.str(r.need(f, "argument", "symbols.functions[]."), "symbols.functions[].argument");
      auto ci = t.coordinate_index(arg);
      if (!ci) r.fail("function '" + name + "' has an unknown argument '" + arg + "'");
      try {
        t.add_function(name, *ci);
      } catch (const std::exception& e) {
        r.fail(e.what());
      }
    }
  }
  if (j.contains("coordinate_domains")) {
    for (const auto& [name, ivs] : j.at("coordinate_domains").items()) {
      auto ci = t.coordinate_index(name);
      if (!ci) r.fail("coordinate_domains names unknown coordinate '" + name + "'");
      std::vector<std::pair<double, double>> d;
      for (const auto& iv : ivs) {
        if (!iv.is_array() || iv.size() != 2 || iv[0].get<double>() >= iv[1].get<double>()) r.fail("malformed domain for " + name);
        d.emplace_back(iv[0].get<double>(), iv[1].get<double>());
      }
      if (d.empty()) r.fail("empty domain for " + name);
      t.set_coordinate_domain(*ci, d);
    }
  }
  return t;
}

std::optional<Covector> read_potential(const Reader& r, const json& j, const SymbolTable& t, const std::string& field) {
  if (j.is_null()) return std::nullopt;
  return r.vec(j, t, kDim, field);
}

}  // namespace

GroupCase case_from_json_text(const std::string& text, const std::string& source) {
  Reader r(source);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    r.fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) r.fail("document must be an object");
  if (r.str(r.need(j, "schema", ""), "schema") != kCaseSchema) r.fail(std::string("schema must be ") + kCaseSchema);

  GroupCase c;
  c.id = r.str(r.need(j, "id", ""), "id");
  if (c.id.empty()) r.fail("empty id");
  c.title = j.value("title", "");
  c.bianchi_label = r.str(r.need(j, "bianchi_label", ""), "bianchi_label");
  std::string tr = r.str(r.need(j, "transitivity", ""), "transitivity");
  bool ok = false;
  for (Transitivity t : {Transitivity::NonNullV3, Transitivity::SubgroupV2, Transitivity::NullV3star})
    if (tr == to_string(t)) {
      c.transitivity = t;
      ok = true;
    }
  if (!ok) r.fail("unknown transitivity '" + tr + "'");
  c.table = read_symbols(r, r.need(j, "symbols", ""));

  const json& m = r.need(j, "metric", "");
  if (m.contains("ds2") == m.contains("components")) r.fail("metric needs exactly one of 'ds2' or 'components'");
  if (m.contains("ds2")) {
    c.ds2 = r.str(m.at("ds2"), "metric.ds2");
    try {
      c.metric = metric_from_ds2(c.ds2, c.table);
    } catch (const ParseError& e) {
      r.fail(std::string("field 'metric.ds2': ") + e.what());
    } catch (const std::invalid_argument& e) {
      r.fail(std::string("field 'metric.ds2': ") + e.what());
    }
  } else {
    c.metric.g = r.mat(m.at("components"), c.table, kDim, kDim, "metric.components");
    if (!is_symmetric(c.metric.g)) r.fail("metric components are not symmetric");
  }

  const json& ops = r.need(j, "operators", "");
  if (!ops.is_array() || ops.size() != kOps) r.fail("field 'operators' must hold exactly four operators");
  for (int a = 0; a < kOps; ++a) c.killing.xi[a] = r.vec(ops[a], c.table, kDim, "operators[" + std::to_string(a) + "]");

  if (j.contains("printed")) {
    const json& p = j.at("printed");
    c.printed.metric_text = p.value("metric", "");
    if (p.contains("operators")) {
      const json& po = p.at("operators");
      if (!po.is_array() || po.size() != kOps) r.fail("field 'printed.operators' must have four entries");
      for (int a = 0; a < kOps; ++a)
        if (!po[a].is_null()) c.printed.operators[a] = r.vec(po[a], c.table, kDim, "printed.operators[" + std::to_string(a) + "]");
    }
    if (p.contains("structure_constants") && !p.at("structure_constants").is_null()) {
      std::vector<PrintedConstant> pcs;
      for (const auto& e : p.at("structure_constants")) {
        PrintedConstant pc;
        pc.upper = r.need(e, "upper", "printed.structure_constants[].").get<int>();
        const json& lo = r.need(e, "lower", "printed.structure_constants[].");
        if (!lo.is_array() || lo.size() != 2) r.fail("structure constant needs two lower indices");
        pc.lower = {lo[0].get<int>(), lo[1].get<int>()};
        for (int x : {pc.upper, pc.lower[0], pc.lower[1]})
          if (x < 1 || x > kOps) r.fail("structure constant index out of range");
        if (pc.lower[0] == pc.lower[1]) r.fail("structure constant with equal lower indices");
        pc.value = r.expr(r.need(e, "value", "printed.structure_constants[]."), c.table, "printed.structure_constants[].value");
        pcs.push_back(pc);
      }
      c.printed.structure_constants = pcs;
    }
    if (p.contains("lambda") && !p.at("lambda").is_null()) c.printed.lambda = r.mat(p.at("lambda"), c.table, kBlock, kBlock, "printed.lambda");
    if (p.contains("omega") && !p.at("omega").is_null()) c.printed.omega = r.vec(p.at("omega"), c.table, kBlock, "printed.omega");
    if (p.contains("W") && !p.at("W").is_null()) c.printed.w = r.mat(p.at("W"), c.table, 0, kBlock, "printed.W");
    if (p.contains("potential")) c.printed.potential = read_potential(r, p.at("potential"), c.table, "printed.potential");
  }
  if (j.contains("reference_potential"))
    c.reference_potential = read_potential(r, j.at("reference_potential"), c.table, "reference_potential");

  std::string oc = r.str(r.need(j, "expected_outcome", ""), "expected_outcome");
  auto o = outcome_from_string(oc);
  if (!o || *o == Outcome::Unsolved) r.fail("unknown expected_outcome '" + oc + "'");
  c.expected_outcome = *o;
  if (c.expected_outcome == Outcome::PotentialFound && !c.reference_potential)
    r.fail("a case expecting a potential must give reference_potential");

  if (j.contains("discrepancies")) {
    for (const auto& d : j.at("discrepancies"))
      c.discrepancies.push_back({r.str(r.need(d, "field", "discrepancies[]."), "discrepancies[].field"), d.value("printed", ""),
                                 d.value("corrected", ""), d.value("note", "")});
  }
  if (j.contains("dynamics") && !j.at("dynamics").is_null()) {
    const json& d = j.at("dynamics");
    DynamicsSetup ds;
    if (d.contains("parameters"))
      for (const auto& [k, v] : d.at("parameters").items()) {
        auto pi = c.table.parameter_index(k);
        if (!pi) r.fail("dynamics sets undeclared parameter '" + k + "'");
        if (!c.table.parameters()[*pi].domain.contains(v.get<double>()))
          r.fail("dynamics value for '" + k + "' lies outside its sampling set");
        ds.parameters[k] = v.get<double>();
      }
    if (d.contains("functions"))
      for (const auto& [k, v] : d.at("functions").items()) {
        if (!c.table.function_index(k)) r.fail("dynamics sets undeclared function '" + k + "'");
        ds.functions[k] = r.str(v, "dynamics.functions." + k);
      }
    for (const char* key : {"u", "p"}) {
      const json& a = r.need(d, key, "dynamics.");
      if (!a.is_array() || a.size() != kDim) r.fail(std::string("dynamics.") + key + " must have four numbers");
      for (int i = 0; i < kDim; ++i) (key[0] == 'u' ? ds.u : ds.p)[i] = a[i].get<double>();
    }
    c.dynamics = ds;
  }
  return c;
}

namespace {

ordered_json render_vec(const ExprVec& v, const SymbolTable& t) {
  ordered_json a = ordered_json::array();
  for (const auto& e : v) a.push_back(render(e, t));
  return a;
}

ordered_json render_mat(const ExprMat& m, const SymbolTable& t) {
  ordered_json a = ordered_json::array();
  for (const auto& row : m) a.push_back(render_vec(row, t));
  return a;
}

ordered_json rational_json(const Rational& r) {
  if (r.is_integer()) return r.num();
  return r.str();
}

}  // namespace

std::string case_to_json_text(const GroupCase& c) {
  const SymbolTable& t = c.table;
  ordered_json j;
  j["schema"] = kCaseSchema;
  j["id"] = c.id;
  j["title"] = c.title;
  j["bianchi_label"] = c.bianchi_label;
  j["transitivity"] = to_string(c.transitivity);
  ordered_json sym;
  sym["coordinates"] = t.coordinates();
  ordered_json params = ordered_json::array();
  for (const auto& p : t.parameters()) {
    ordered_json pj;
    pj["name"] = p.name;
    if (p.domain.is_finite()) {
      ordered_json vals = ordered_json::array();
      for (const auto& v : p.domain.values) vals.push_back(rational_json(v));
      pj["values"] = vals;
    } else {
      pj["interval"] = {p.domain.intervals.front().first, p.domain.intervals.front().second};
    }
    params.push_back(pj);
  }
  sym["parameters"] = params;
  ordered_json fns = ordered_json::array();
  for (const auto& f : t.functions()) fns.push_back({{"name", f.name}, {"argument", t.coordinates()[f.coord]}});
  sym["functions"] = fns;
  SymbolTable defaults;
  ordered_json doms = ordered_json::object();
  for (int i = 0; i < kDim; ++i)
    if (t.coordinate_domain(i) != defaults.coordinate_domain(i)) {
      ordered_json d = ordered_json::array();
      for (const auto& [lo, hi] : t.coordinate_domain(i)) d.push_back({lo, hi});
      doms[t.coordinates()[i]] = d;
    }
  if (!doms.empty()) sym["coordinate_domains"] = doms;
  j["symbols"] = sym;
  if (!c.ds2.empty()) j["metric"] = {{"ds2", c.ds2}};
  else j["metric"] = {{"components", render_mat(c.metric.g, t)}};
  ordered_json ops = ordered_json::array();
  for (const auto& x : c.killing.xi) ops.push_back(render_vec(x, t));
  j["operators"] = ops;

  ordered_json p;
  p["metric"] = c.printed.metric_text;
  ordered_json po = ordered_json::array();
  for (const auto& x : c.printed.operators) po.push_back(x ? render_vec(*x, t) : ordered_json(nullptr));
  p["operators"] = po;
  if (c.printed.structure_constants) {
    ordered_json sc = ordered_json::array();
    for (const auto& pc : *c.printed.structure_constants)
      sc.push_back({{"upper", pc.upper}, {"lower", {pc.lower[0], pc.lower[1]}}, {"value", render(pc.value, t)}});
    p["structure_constants"] = sc;
  } else {
    p["structure_constants"] = nullptr;
  }
  p["lambda"] = c.printed.lambda ? render_mat(*c.printed.lambda, t) : ordered_json(nullptr);
  p["omega"] = c.printed.omega ? render_vec(*c.printed.omega, t) : ordered_json(nullptr);
  p["W"] = c.printed.w ? render_mat(*c.printed.w, t) : ordered_json(nullptr);
  p["potential"] = c.printed.potential ? render_vec(*c.printed.potential, t) : ordered_json(nullptr);
  j["printed"] = p;
  j["reference_potential"] = c.reference_potential ? render_vec(*c.reference_potential, t) : ordered_json(nullptr);
  j["expected_outcome"] = to_string(c.expected_outcome);
  ordered_json ds = ordered_json::array();
  for (const auto& d : c.discrepancies)
    ds.push_back({{"field", d.field}, {"printed", d.printed}, {"corrected", d.corrected}, {"note", d.note}});
  j["discrepancies"] = ds;
  if (c.dynamics) {
    ordered_json d;
    d["parameters"] = c.dynamics->parameters;
    d["functions"] = c.dynamics->functions;
    d["u"] = c.dynamics->u;
    d["p"] = c.dynamics->p;
    j["dynamics"] = d;
  } else {
    j["dynamics"] = nullptr;
  }
  return j.dump(2) + "\n";
}

bool operator==(const GroupCase& a, const GroupCase& b) {
  auto pc_eq = [](const std::optional<std::vector<PrintedConstant>>& x, const std::optional<std::vector<PrintedConstant>>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    if (x->size() != y->size()) return false;
    for (std::size_t i = 0; i < x->size(); ++i)
      if ((*x)[i].upper != (*y)[i].upper || (*x)[i].lower != (*y)[i].lower || (*x)[i].value != (*y)[i].value) return false;
    return true;
  };
  auto disc_eq = [](const std::vector<Discrepancy>& x, const std::vector<Discrepancy>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].field != y[i].field || x[i].printed != y[i].printed || x[i].corrected != y[i].corrected || x[i].note != y[i].note)
        return false;
    return true;
  };
  auto dyn_eq = [](const std::optional<DynamicsSetup>& x, const std::optional<DynamicsSetup>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->parameters == y->parameters && x->functions == y->functions && x->u == y->u && x->p == y->p;
  };
  return a.id == b.id && a.title == b.title && a.bianchi_label == b.bianchi_label && a.transitivity == b.transitivity &&
         a.table == b.table && a.ds2 == b.ds2 && a.metric.g == b.metric.g && a.killing.xi == b.killing.xi &&
         a.printed.metric_text == b.printed.metric_text && a.printed.operators == b.printed.operators &&
         pc_eq(a.printed.structure_constants, b.printed.structure_constants) && same(a.printed.lambda, b.printed.lambda) &&
         a.printed.omega == b.printed.omega && same(a.printed.w, b.printed.w) && a.printed.potential == b.printed.potential &&
         a.reference_potential == b.reference_potential && a.expected_outcome == b.expected_outcome &&
         disc_eq(a.discrepancies, b.discrepancies) && dyn_eq(a.dynamics, b.dynamics);
}

GroupCase load_case_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return case_from_json_text(ss.str(), path.string());
}

std::filesystem::path default_catalog_dir() {
  if (const char* env = std::getenv("AEF_CATALOG_DIR"); env && *env) return env;
#ifdef AEF_CATALOG_BUILD_DIR
  if (std::filesystem::is_directory(AEF_CATALOG_BUILD_DIR)) return AEF_CATALOG_BUILD_DIR;
#endif
#ifdef AEF_CATALOG_INSTALL_DIR
  return AEF_CATALOG_INSTALL_DIR;
#else
  return "catalog";
#endif
}

bool glob_match(const std::string& pattern, const std::string& text) {
  return pattern.empty() || ::fnmatch(pattern.c_str(), text.c_str(), 0) == 0;
}

bool case_id_less(const std::string& a, const std::string& b) {
  // Split "3.10.2-eps1" into numeric parts and the suffix.
  auto split = [](const std::string& s) {
    std::vector<long> nums;
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      long v = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) v = v * 10 + (s[i++] - '0');
      nums.push_back(v);
      if (i < s.size() && s[i] == '.') ++i;
      else break;
    }
    return std::make_pair(nums, s.substr(i));
  };
  return split(a) < split(b);
}

Catalog::Catalog(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!std::filesystem::is_directory(dir_)) throw SchemaError(dir_.string(), "catalog directory not found");
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw SchemaError(entry.path().string(), std::string("invalid JSON: ") + e.what());
    }
    CaseSummary s;
    s.id = j.value("id", "");
    s.title = j.value("title", "");
    s.bianchi_label = j.value("bianchi_label", "");
    std::string tr = j.value("transitivity", "");
    s.transitivity = tr == "NullV3star" ? Transitivity::NullV3star : tr == "SubgroupV2" ? Transitivity::SubgroupV2 : Transitivity::NonNullV3;
    s.expected_outcome = outcome_from_string(j.value("expected_outcome", "")).value_or(Outcome::PotentialFound);
    s.path = entry.path();
    if (s.id.empty()) throw SchemaError(entry.path().string(), "missing id");
    for (const auto& other : cases_)
      if (other.id == s.id) throw SchemaError(entry.path().string(), "duplicate case id '" + s.id + "'");
    cases_.push_back(std::move(s));
  }
  std::sort(cases_.begin(), cases_.end(), [](const CaseSummary& a, const CaseSummary& b) { return case_id_less(a.id, b.id); });
}

std::vector<CaseSummary> Catalog::list(const std::string& pattern) const {
  std::vector<CaseSummary> out;
  for (const auto& c : cases_)
    if (glob_match(pattern, c.id)) out.push_back(c);
  return out;
}

GroupCase Catalog::load(const std::string& id) const {
  for (const auto& c : cases_)
    if (c.id == id) return load_case_file(c.path);
  throw UnknownCase(id);
}

}  // namespace aef
