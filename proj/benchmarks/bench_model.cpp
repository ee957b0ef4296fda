#include <random>

#include <benchmark/benchmark.h>

#include "bayesnid/naive_bayes.hpp"
#include "bayesnid/preprocess.hpp"

namespace {

using namespace bayesnid;

CleanDataset make_clouds(std::size_t rows, std::size_t features, std::size_t classes) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  CleanDataset d;
  d.features = Matrix(rows, features);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t c = r % classes;
    d.labels.push_back(c);
    for (std::size_t j = 0; j < features; ++j) d.features(r, j) = 10.0 + static_cast<double>(c) + g(rng);
  }
  for (std::size_t c = 0; c < classes; ++c) d.class_names.push_back("c" + std::to_string(c));
  for (std::size_t j = 0; j < features; ++j) d.column_names.push_back("f" + std::to_string(j));
  return d;
}

CleanDataset for_variant(const CleanDataset& d, Variant v) {
  switch (v) {
    case Variant::gaussian: return d;
    case Variant::multinomial: return to_counts(d);
    case Variant::bernoulli: return binarize(d);
  }
  return d;
}

void BM_Fit(benchmark::State& state) {
  const auto variant = static_cast<Variant>(state.range(0));
  const auto data = for_variant(make_clouds(static_cast<std::size_t>(state.range(1)), 20, 6), variant);
  for (auto _ : state) benchmark::DoNotOptimize(fit(variant, data));
  state.SetItemsProcessed(state.iterations() * state.range(1));
  state.SetLabel(std::string(to_string(variant)));
}

void BM_PredictAll(benchmark::State& state) {
  const auto variant = static_cast<Variant>(state.range(0));
  const auto data = for_variant(make_clouds(static_cast<std::size_t>(state.range(1)), 20, 6), variant);
  const auto model = fit(variant, data);
  for (auto _ : state) benchmark::DoNotOptimize(predict_all(model, data.features));
  state.SetItemsProcessed(state.iterations() * state.range(1));
  state.SetLabel(std::string(to_string(variant)));
}

void variant_args(benchmark::internal::Benchmark* b) {
  for (int v = 0; v < 3; ++v) {
    for (int rows : {1'000, 100'000}) b->Args({v, rows});
  }
}

}  // namespace

BENCHMARK(BM_Fit)->Apply(variant_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictAll)->Apply(variant_args)->Unit(benchmark::kMillisecond);
