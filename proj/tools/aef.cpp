// aef: verify, classify and integrate the catalogued group cases.
#include <atomic>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "aef/admissibility.hpp"
#include "aef/catalog.hpp"
#include "aef/dynamics.hpp"
#include "aef/geometry.hpp"
#include "aef/report.hpp"
#include "json.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string case_id;
  bool all = false;
  std::string format = "md";
  std::uint64_t seed = aef::ZeroTestConfig{}.seed;
  double tol = -1.0;  // command-specific default
  int trials = aef::ZeroTestConfig{}.trials;
  double dt = 1e-3;
  double t_end = 10.0;
  unsigned jobs = 1;
  bool free = false;
  std::string out;
};

aef::VerifyOptions verify_options(const Options& o) {
  aef::VerifyOptions v;
  v.zero.seed = o.seed;
  v.zero.trials = o.trials;
  if (o.tol > 0) v.zero.tol = o.tol;
  return v;
}

std::vector<std::string> selected_ids(const aef::Catalog& cat, const Options& o) {
  if (o.all == !o.case_id.empty()) throw UsageError("give exactly one of --case <id> or --all");
  std::vector<std::string> ids;
  for (const auto& s : cat.list(o.all ? "" : o.case_id)) ids.push_back(s.id);
  if (ids.empty()) throw UsageError("unknown case '" + o.case_id + "'");
  return ids;
}

// Loaded up front so that a malformed case file is a usage error, not a check failure.
std::vector<aef::GroupCase> load_all(const aef::Catalog& cat, const std::vector<std::string>& ids) {
  std::vector<aef::GroupCase> cases;
  for (const auto& id : ids) cases.push_back(cat.load(id));
  return cases;
}

// Runs work(i) for i in [0, n) on up to `jobs` threads; results land by index.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& work) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) work(i);
    });
  for (auto& t : pool) t.join();
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + o.out + "'");
  f << text;
}

int cmd_list(const aef::Catalog& cat, const Options& o) {
  auto cases = cat.list(o.case_id);
  std::ostringstream os;
  if (o.format == "json") {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& c : cases)
      a.push_back({{"id", c.id},
                   {"bianchi_label", c.bianchi_label},
                   {"transitivity", aef::to_string(c.transitivity)},
                   {"expected_outcome", aef::to_string(c.expected_outcome)},
                   {"title", c.title}});
    os << a.dump(2) << "\n";
  } else {
    os << "| id | group | transitivity | expected | title |\n|---|---|---|---|---|\n";
    for (const auto& c : cases)
      os << "| " << c.id << " | " << c.bianchi_label << " | " << aef::to_string(c.transitivity) << " | "
         << aef::to_string(c.expected_outcome) << " | " << c.title << " |\n";
  }
  emit(o, os.str());
  return kExitPass;
}

int cmd_verify(const aef::Catalog& cat, const Options& o) {
  auto ids = selected_ids(cat, o);
  auto cases = load_all(cat, ids);
  std::vector<aef::CaseReport> reports(ids.size());
  auto vo = verify_options(o);
  parallel_for(ids.size(), o.jobs, [&](std::size_t i) {
    try {
      reports[i] = aef::verify_case(cases[i], vo);
    } catch (const std::exception& e) {
      reports[i].id = ids[i];
      reports[i].error = e.what();
    }
  });
  std::string text;
  bool json = o.format == "json";
  if (reports.size() == 1) {
    text = json ? aef::report_json(reports[0]) : aef::report_markdown(reports[0]);
  } else if (json) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(aef::summary_json(reports));
    nlohmann::ordered_json full = nlohmann::ordered_json::array();
    for (const auto& r : reports) full.push_back(nlohmann::ordered_json::parse(aef::report_json(r)));
    j["reports"] = full;
    text = j.dump(2) + "\n";
  } else {
    text = aef::summary_markdown(reports);
    for (const auto& r : reports) text += "\n" + aef::report_markdown(r);
  }
  emit(o, text);
  for (const auto& r : reports)
    if (!r.passes()) return kExitFail;
  return kExitPass;
}

int cmd_classify(const aef::Catalog& cat, const Options& o) {
  auto ids = selected_ids(cat, o);
  auto cases = load_all(cat, ids);
  std::vector<aef::PipelineTrace> traces(ids.size());
  std::vector<std::string> errors(ids.size());
  auto vo = verify_options(o);
  parallel_for(ids.size(), o.jobs, [&](std::size_t i) {
    try {
      traces[i] = aef::classify_case(cases[i], vo);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  std::string text;
  bool failed = false;
  if (o.format == "json") {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!errors[i].empty()) {
        a.push_back({{"id", ids[i]}, {"error", errors[i]}});
        failed = true;
      } else {
        a.push_back(nlohmann::ordered_json::parse(aef::trace_json(ids[i], traces[i])));
      }
    }
    text = (ids.size() == 1 ? a[0] : a).dump(2) + "\n";
  } else {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) text += "\n";
      if (!errors[i].empty()) {
        text += "## " + ids[i] + "\n\nerror: " + errors[i] + "\n";
        failed = true;
      } else {
        text += aef::trace_markdown(ids[i], traces[i]);
      }
    }
  }
  emit(o, text);
  return failed ? kExitFail : kExitPass;
}

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

int cmd_trajectory(const aef::Catalog& cat, const Options& o) {
  auto ids = selected_ids(cat, o);
  const double drift_tol = o.tol > 0 ? o.tol : 1e-8;
  struct Run {
    std::string id;
    std::string error;
    bool usage = false;
    aef::Trajectory traj;
    aef::ConservationReport cons;
  };
  std::vector<Run> runs(ids.size());
  auto vo = verify_options(o);
  parallel_for(ids.size(), o.jobs, [&](std::size_t i) {
    Run& r = runs[i];
    r.id = ids[i];
    try {
      auto c = cat.load(ids[i]);
      if (!c.dynamics) {
        r.usage = true;
        throw std::runtime_error("case has no dynamics setup");
      }
      aef::Covector a(aef::kDim, aef::Expr(0));
      if (!o.free) {
        if (c.reference_potential) a = *c.reference_potential;
        else if (c.expected_outcome != aef::Outcome::ZeroField) {
          r.usage = true;
          throw std::runtime_error("no admissible field for this case; pass --free to integrate with A = 0");
        }
      }
      aef::ZeroTester z(c.table, vo.zero);
      auto gi = aef::metric_inverse(c.metric, z);
      auto inst = aef::NumericCaseInstance::from_case(c, gi, a);
      aef::PhaseState s{c.dynamics->u, c.dynamics->p};
      r.traj = aef::integrate(inst, s, o.dt, o.t_end);
      r.cons = aef::conservation_report(r.traj, drift_tol);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });
  for (const auto& r : runs)
    if (r.usage) throw UsageError(r.id + ": " + r.error);

  std::string text;
  if (o.format == "json") {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& r : runs) {
      nlohmann::ordered_json j;
      j["id"] = r.id;
      j["dt"] = o.dt;
      j["t_end"] = o.t_end;
      j["free"] = o.free;
      if (!r.error.empty()) {
        j["error"] = r.error;
      } else {
        j["steps"] = r.traj.steps;
        const auto& last = r.traj.states.back();
        j["final"] = {{"u", last.u}, {"p", last.p}};
        j["drift_tol"] = drift_tol;
        nlohmann::ordered_json d = nlohmann::ordered_json::array();
        for (const auto& e : r.cons.entries)
          d.push_back({{"quantity", e.quantity}, {"initial", e.initial}, {"drift", e.drift}, {"pass", e.pass}});
        j["drift"] = d;
        j["pass"] = r.cons.all_pass();
      }
      a.push_back(j);
    }
    text = (runs.size() == 1 ? a[0] : a).dump(2) + "\n";
  } else {
    std::ostringstream os;
    for (const auto& r : runs) {
      os << "## Trajectory " << r.id << (o.free ? " (free motion)" : "") << "\n\n";
      if (!r.error.empty()) {
        os << "error: " << r.error << "\n\n";
        continue;
      }
      os << "dt = " << num(o.dt) << ", t_end = " << num(o.t_end) << ", steps = " << r.traj.steps << "\n\n";
      os << "| quantity | initial | max relative drift | result |\n|---|---|---|---|\n";
      for (const auto& e : r.cons.entries)
        os << "| " << e.quantity << " | " << num(e.initial) << " | " << num(e.drift) << " | " << (e.pass ? "pass" : "FAIL") << " |\n";
      os << "\n";
    }
    text = os.str();
  }
  emit(o, text);
  for (const auto& r : runs)
    if (!r.error.empty() || !r.cons.all_pass()) return kExitFail;
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Admissible electromagnetic fields in spaces with groups of motions"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* c, bool selection) {
    if (selection) {
      c->add_option("--case", o.case_id, "Case id or shell glob, e.g. 3.1.1 or '3.2.*'");
      c->add_flag("--all", o.all, "All catalogued cases");
    }
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "md"}));
    c->add_option("--out", o.out, "Write output to this file instead of stdout");
  };
  auto add_zero = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Seed for sample points");
    c->add_option("--tol", o.tol, "Zero-test tolerance")->check(CLI::PositiveNumber);
    c->add_option("--trials", o.trials, "Zero-test trials")->check(CLI::PositiveNumber);
    c->add_option("--jobs", o.jobs, "Cases processed in parallel")->check(CLI::PositiveNumber);
  };

  auto* list = app.add_subcommand("list", "List catalogued cases");
  list->add_option("--case", o.case_id, "Filter by id glob");
  list->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "md"}));
  list->add_option("--out", o.out, "Write output to this file instead of stdout");

  auto* verify = app.add_subcommand("verify", "Recompute and check every printed table of a case");
  add_common(verify, true);
  add_zero(verify);

  auto* classify = app.add_subcommand("classify", "Run the admissibility pipeline and show each stage");
  add_common(classify, true);
  add_zero(classify);

  auto* traj = app.add_subcommand("trajectory", "Integrate charged-particle motion and report conserved-quantity drift");
  add_common(traj, true);
  traj->add_option("--seed", o.seed, "Seed for sample points");
  traj->add_option("--trials", o.trials, "Zero-test trials")->check(CLI::PositiveNumber);
  traj->add_option("--tol", o.tol, "Drift tolerance (default 1e-8)")->check(CLI::PositiveNumber);
  traj->add_option("--dt", o.dt, "Step size")->check(CLI::PositiveNumber);
  traj->add_option("--t-end", o.t_end, "Final time")->check(CLI::NonNegativeNumber);
  traj->add_option("--jobs", o.jobs, "Cases processed in parallel")->check(CLI::PositiveNumber);
  traj->add_flag("--free", o.free, "Integrate with A = 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    aef::Catalog cat;
    if (list->parsed()) return cmd_list(cat, o);
    if (verify->parsed()) return cmd_verify(cat, o);
    if (classify->parsed()) return cmd_classify(cat, o);
    return cmd_trajectory(cat, o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const aef::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const aef::UnknownCase& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
