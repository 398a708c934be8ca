#include <benchmark/benchmark.h>

#include "aef/catalog.hpp"
#include "aef/parse.hpp"
#include "aef/program.hpp"
#include "aef/zero_test.hpp"

namespace {

aef::SymbolTable table() {
  aef::SymbolTable t;
  t.add_parameter("c", aef::ParamDomain::interval(0.2, 1.2));
  t.add_function("a0", 0);
  return t;
}

const char* kSample = "(4*u1*sin(c) + u2^2)/(2*(u3^2 + 2*u3*sin(c) + 1)) - a0(u0)*exp(-u3)/2 + u2*u3*cos(u1)";

void BM_Parse(benchmark::State& s) {
  auto t = table();
  for (auto _ : s) benchmark::DoNotOptimize(aef::parse(kSample, t));
}
BENCHMARK(BM_Parse);

void BM_Normalize(benchmark::State& s) {
  auto t = table();
  aef::Expr e = aef::parse(kSample, t);
  for (auto _ : s) benchmark::DoNotOptimize(aef::normalize(e));
}
BENCHMARK(BM_Normalize);

void BM_Differentiate(benchmark::State& s) {
  auto t = table();
  aef::Expr e = aef::parse_canonical(kSample, t);
  for (auto _ : s) benchmark::DoNotOptimize(aef::diff(aef::diff(e, 3), 2));
}
BENCHMARK(BM_Differentiate);

void BM_ProgramRun(benchmark::State& s) {
  auto t = table();
  aef::Program p({aef::parse_canonical(kSample, t)});
  aef::Point pt;
  pt.u = {0.3, 0.5, 0.7, 0.9};
  pt.params = {0.6};
  pt.opaque = {{1.1}};
  std::vector<double> out;
  for (auto _ : s) {
    p.run(pt, 0.0, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ProgramRun);

// Zero test of an identity that does not simplify structurally.
void BM_ZeroTestIdentity(benchmark::State& s) {
  auto t = table();
  aef::Expr e = aef::parse_canonical("sin(u1 + u2)^2 + cos(u1 + u2)^2 - 1", t);
  for (auto _ : s) {
    aef::ZeroTester z(t);
    benchmark::DoNotOptimize(z.is_zero(e));
  }
}
BENCHMARK(BM_ZeroTestIdentity);

}  // namespace
