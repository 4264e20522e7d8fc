#include <benchmark/benchmark.h>

#include "nncpdf/instantiate.hpp"
#include "nncpdf/optimizer.hpp"
#include "nncpdf/pipeline.hpp"
#include "nncpdf/rate_bound.hpp"
#include "nncpdf/unfolding.hpp"
#include "support.hpp"

using namespace nncpdf;
namespace ts = testing_support;

namespace {

std::pair<Network, SchemeDistribution> instance(int N, std::uint64_t seed) {
  ts::Rng rng(seed);
  std::vector<int> dests;
  for (int k = 2; k <= N; ++k) dests.push_back(k);
  auto net = ts::random_network(rng, N, dests);
  auto s = ts::random_scheme(rng, net, {2, 2, 2}, true);
  return {std::move(net), std::move(s)};
}

void BM_MutualInformation(benchmark::State& state) {
  ts::Rng rng(1);
  const auto d = validate_pmf(ts::random_joint(rng, 5, 3));
  const InfoAtom a{{"A0", "A1"}, {"A2"}, {"A3", "A4"}};
  for (auto _ : state) benchmark::DoNotOptimize(mutual_information(d, a));
}
BENCHMARK(BM_MutualInformation);

void BM_AssembleJoint(benchmark::State& state) {
  const auto [net, s] = instance(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_joint(net, s));
}
BENCHMARK(BM_AssembleJoint)->Arg(3)->Arg(4);

void BM_Bound(benchmark::State& state) {
  const auto [net, s] = instance(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(nncpdf_bound(net, s).bound);
  state.SetLabel(std::to_string(enumerate_cuts(net.N, net.N).size() * net.destinations.size()) + " cuts");
}
BENCHMARK(BM_Bound)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_CutsetGrid(benchmark::State& state) {
  const auto [net, s] = instance(3, 4);
  for (auto _ : state) benchmark::DoNotOptimize(cutset_grid_max(net, static_cast<int>(state.range(0))).value);
}
BENCHMARK(BM_CutsetGrid)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Derive(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  std::vector<int> dests;
  for (int k = 2; k <= N; ++k) dests.push_back(k);
  for (auto _ : state) benchmark::DoNotOptimize(derive_nncpdf(N, dests).projected.inequalities.size());
}
BENCHMARK(BM_Derive)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_EvaluateRegion(benchmark::State& state) {
  const auto d = derive_nncpdf(3, {2, 3});
  const auto [net, s] = instance(3, 5);
  const auto v = atom_values(d.projected, assemble_joint(net, s));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_region(d.projected, v));
}
BENCHMARK(BM_EvaluateRegion)->Unit(benchmark::kMicrosecond);

void BM_InstantiateUnfolded(benchmark::State& state) {
  const auto [net, s] = instance(3, 6);
  const LabelSet labels{kMessage, VariableLabel("Y3", 2), VariableLabel("Yhat2", 1), VariableLabel("X1", 2)};
  for (auto _ : state) benchmark::DoNotOptimize(instantiate_unfolded_joint(net, s, 2, labels));
}
BENCHMARK(BM_InstantiateUnfolded)->Unit(benchmark::kMillisecond);

void BM_AscentSweep(benchmark::State& state) {
  const auto net = load_network_file(ts::fixture("n3_binary_relay.network.json"));
  SearchConfig cfg;
  cfg.aux = {AuxSizes{1, 1, 2}};
  cfg.max_iterations = 1;
  const auto start = uniform_scheme(net, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(coordinate_ascent(net, cfg, start).rate);
}
BENCHMARK(BM_AscentSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
