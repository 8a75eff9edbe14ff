// Copyright 2026 The DoGEN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <string>
#include <string_view>
#include <vector>

#include "dogen/corpus.hpp"
#include "dogen/kernels.hpp"
#include "dogen/pipeline.hpp"

namespace dogen {
namespace {

struct Fixture {
  std::vector<Document> docs;
  std::vector<std::string_view> texts;
  FeaturizerConfig fc;
  EnsembleModel ensemble;

  Fixture() {
    SynthRequest req;
    req.num_domains = 8;
    req.docs_per_class = 500;
    req.doc_length = 120;
    req.seed = 1;
    docs = synthesize_corpus(synth_spec(req));
    for (const auto& d : docs) texts.push_back(d.text);
    std::vector<ExpertModel> experts;
    const auto domains = domains_in_order(docs);
    for (std::size_t i = 0; i < domains.size(); ++i) {
      auto e = zero_expert(domains[i], fc);
      for (std::size_t j = 0; j < e.weights.size(); ++j) e.weights[j] = 1e-3 * static_cast<double>((i + j) % 7);
      experts.push_back(std::move(e));
    }
    auto router = zero_router(domains, fc);
    for (std::size_t j = 0; j < router.weight_matrix.data().size(); ++j) {
      router.weight_matrix.data()[j] = 1e-3 * static_cast<double>(j % 5);
    }
    ensemble = make_ensemble(std::move(experts), std::move(router), 2);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_FeaturizeSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(featurize_batch_serial(f.texts, f.fc));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.texts.size()));
}

void BM_FeaturizeParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(featurize_batch(f.texts, f.fc));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.texts.size()));
  state.counters["threads"] = kernel_threads();
}

void BM_EnsembleSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(ensemble_outputs_serial(f.ensemble, f.texts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.texts.size()));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(ensemble_outputs(f.ensemble, f.texts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.texts.size()));
  state.counters["threads"] = kernel_threads();
}

BENCHMARK(BM_FeaturizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FeaturizeParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnsembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace dogen

BENCHMARK_MAIN();
