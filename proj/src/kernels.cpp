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

#include "dogen/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdint>

namespace dogen {
namespace {

// Distinct featurizer configs among router and experts, with the index each
// component uses.
struct ConfigPlan {
  std::vector<FeaturizerConfig> configs;
  std::size_t router = 0;
  std::vector<std::size_t> experts;
};

ConfigPlan plan_configs(const EnsembleModel& ensemble) {
  ConfigPlan plan;
  auto slot = [&](const FeaturizerConfig& fc) {
    for (std::size_t i = 0; i < plan.configs.size(); ++i) {
      if (plan.configs[i] == fc) return i;
    }
    plan.configs.push_back(fc);
    return plan.configs.size() - 1;
  };
  plan.router = slot(ensemble.router.featurizer);
  for (const auto& e : ensemble.experts) plan.experts.push_back(slot(e.featurizer));
  return plan;
}

void fill_row(const EnsembleModel& ensemble, const ConfigPlan& plan, std::string_view text,
              std::size_t row, EnsembleOutputs& out) {
  std::vector<FeatureVector> fvs;
  fvs.reserve(plan.configs.size());
  for (const auto& fc : plan.configs) fvs.push_back(featurize(text, fc));
  const auto p = router_probs(ensemble.router, fvs[plan.router]);
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    out.probs(row, i) = p[i];
    out.scores(row, i) = expert_score(ensemble.experts[i], fvs[plan.experts[i]]);
  }
}

}  // namespace

std::vector<FeatureVector> featurize_batch_serial(std::span<const std::string_view> texts,
                                                  const FeaturizerConfig& config) {
  config.validate();
  std::vector<FeatureVector> out(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) out[i] = featurize(texts[i], config);
  return out;
}

std::vector<FeatureVector> featurize_batch(std::span<const std::string_view> texts,
                                           const FeaturizerConfig& config) {
  config.validate();
  std::vector<FeatureVector> out(texts.size());
  const auto n = static_cast<std::int64_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = featurize(texts[static_cast<std::size_t>(i)], config);
  }
  return out;
}

EnsembleOutputs ensemble_outputs_serial(const EnsembleModel& ensemble,
                                        std::span<const std::string_view> texts) {
  ensemble.validate();
  const auto plan = plan_configs(ensemble);
  EnsembleOutputs out{Matrix(texts.size(), ensemble.size()), Matrix(texts.size(), ensemble.size())};
  for (std::size_t i = 0; i < texts.size(); ++i) fill_row(ensemble, plan, texts[i], i, out);
  return out;
}

EnsembleOutputs ensemble_outputs(const EnsembleModel& ensemble,
                                 std::span<const std::string_view> texts) {
  ensemble.validate();
  const auto plan = plan_configs(ensemble);
  EnsembleOutputs out{Matrix(texts.size(), ensemble.size()), Matrix(texts.size(), ensemble.size())};
  const auto n = static_cast<std::int64_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(i);
    fill_row(ensemble, plan, texts[row], row, out);
  }
  return out;
}

std::vector<double> gated_scores(const EnsembleOutputs& outputs, std::size_t k) {
  std::vector<double> s(outputs.probs.rows());
  for (std::size_t r = 0; r < s.size(); ++r) {
    s[r] = dogen_score(outputs.probs.row(r), outputs.scores.row(r), k);
  }
  return s;
}

std::vector<double> equal_vote_scores(const Matrix& scores) {
  std::vector<double> s(scores.rows());
  for (std::size_t r = 0; r < s.size(); ++r) s[r] = equal_vote(scores.row(r));
  return s;
}

std::vector<double> expert_scores_batch(const ExpertModel& expert,
                                        std::span<const std::string_view> texts) {
  const auto x = featurize_batch(texts, expert.featurizer);
  std::vector<double> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = expert_score(expert, x[i]);
  return s;
}

int kernel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace dogen
