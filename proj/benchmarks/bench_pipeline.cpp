#include <benchmark/benchmark.h>

#include "aef/catalog.hpp"
#include "aef/dynamics.hpp"
#include "aef/report.hpp"

namespace {

const aef::Catalog& catalog() {
  static const aef::Catalog c;
  return c;
}

const std::vector<std::string>& ids() {
  static const std::vector<std::string> v = [] {
    std::vector<std::string> out;
    for (const auto& s : catalog().list()) out.push_back(s.id);
    return out;
  }();
  return v;
}

void BM_Pipeline(benchmark::State& s) {
  if (static_cast<std::size_t>(s.range(0)) >= ids().size()) {
    s.SkipWithError("no such catalogue entry");
    return;
  }
  auto c = catalog().load(ids()[s.range(0)]);
  s.SetLabel(c.id);
  for (auto _ : s) {
    aef::ZeroTester z(c.table);
    benchmark::DoNotOptimize(aef::run_pipeline(c.killing, z));
  }
}
BENCHMARK(BM_Pipeline)->DenseRange(0, 18)->Unit(benchmark::kMillisecond);

void BM_VerifyCase(benchmark::State& s) {
  auto c = catalog().load("3.2.3");
  for (auto _ : s) benchmark::DoNotOptimize(aef::verify_case(c));
}
BENCHMARK(BM_VerifyCase)->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& s) {
  auto c = catalog().load("3.1.1");
  aef::ZeroTester z(c.table);
  auto inst = aef::NumericCaseInstance::from_case(c, aef::metric_inverse(c.metric, z), *c.reference_potential);
  aef::PhaseState start{c.dynamics->u, c.dynamics->p};
  for (auto _ : s) benchmark::DoNotOptimize(aef::integrate(inst, start, 1e-3, 1.0));
  s.SetItemsProcessed(s.iterations() * 1000);
}
BENCHMARK(BM_Trajectory)->Unit(benchmark::kMillisecond);

}  // namespace
