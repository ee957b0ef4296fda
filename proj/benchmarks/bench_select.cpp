#include <random>

#include <benchmark/benchmark.h>

#include "bayesnid/feature_select.hpp"

namespace {

using namespace bayesnid;

CleanDataset make_table(std::size_t rows, std::size_t features) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  CleanDataset d;
  d.features = Matrix(rows, features);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t c = r % 6;
    d.labels.push_back(c);
    for (std::size_t j = 0; j < features; ++j) {
      d.features(r, j) = g(rng) + (j % 2 == 0 ? static_cast<double>(c) : 0.0);
    }
  }
  for (std::size_t c = 0; c < 6; ++c) d.class_names.push_back("c" + std::to_string(c));
  for (std::size_t j = 0; j < features; ++j) d.column_names.push_back("f" + std::to_string(j));
  return d;
}

void BM_SelectChi2(benchmark::State& state) {
  const auto data = make_table(static_cast<std::size_t>(state.range(0)), 78);
  for (auto _ : state) benchmark::DoNotOptimize(select_top_k_chi2(data, 10, 10));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SelectCorrelation(benchmark::State& state) {
  const auto data = make_table(static_cast<std::size_t>(state.range(0)), 78);
  for (auto _ : state) benchmark::DoNotOptimize(select_by_correlation(data, 0.5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SelectChi2)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SelectCorrelation)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
