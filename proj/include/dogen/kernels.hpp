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

#pragma once

// Batch kernels over documents. Each kernel has a serial reference version
// and an OpenMP version; both write per-document slots only, so their
// outputs are bit-identical regardless of thread count.

#include <span>
#include <string_view>
#include <vector>

#include "dogen/common.hpp"
#include "dogen/ensemble.hpp"
#include "dogen/features.hpp"

namespace dogen {

std::vector<FeatureVector> featurize_batch_serial(std::span<const std::string_view> texts,
                                                  const FeaturizerConfig& config);
std::vector<FeatureVector> featurize_batch(std::span<const std::string_view> texts,
                                           const FeaturizerConfig& config);

// Router distribution and expert scores for every document (rows).
struct EnsembleOutputs {
  Matrix probs;   // M x N
  Matrix scores;  // M x N
};

EnsembleOutputs ensemble_outputs_serial(const EnsembleModel& ensemble,
                                        std::span<const std::string_view> texts);
EnsembleOutputs ensemble_outputs(const EnsembleModel& ensemble,
                                 std::span<const std::string_view> texts);

// dogen_score per row at the given k.
std::vector<double> gated_scores(const EnsembleOutputs& outputs, std::size_t k);
std::vector<double> equal_vote_scores(const Matrix& scores);

// Scores one expert over every text.
std::vector<double> expert_scores_batch(const ExpertModel& expert,
                                        std::span<const std::string_view> texts);

// Threads available to the parallel kernels (1 without OpenMP).
int kernel_threads();

}  // namespace dogen
