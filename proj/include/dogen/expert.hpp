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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dogen/common.hpp"
#include "dogen/corpus.hpp"
#include "dogen/features.hpp"

namespace dogen {

// Shared optimizer settings for experts, router and joint training.
// learning_rate defaults suit linear models over normalized hashed features;
// transformer backbones were tuned at 5e-6.
struct TrainConfig {
  double learning_rate = 0.05;
  std::size_t batch_size = 8;
  std::size_t max_epochs = 3;
  std::size_t eval_every_steps = 100;
  std::size_t early_stopping_patience = 10;
  std::uint64_t seed = 0;
  double l2_penalty = 1e-6;

  void validate() const;
};

// One validation checkpoint. `val_metric` is AUROC for detectors and
// accuracy for the router; it is logged, never monitored.
struct EvalPoint {
  std::size_t step = 0;
  std::size_t epoch = 0;
  double val_loss = 0.0;
  std::optional<double> val_metric;
};

struct TrainHistory {
  std::vector<EvalPoint> evals;
  std::size_t epochs_run = 0;
  std::size_t steps_run = 0;
  std::size_t best_step = 0;
  double best_val_loss = 0.0;
  bool early_stopped = false;
};

struct TrainMeta {
  std::size_t epochs_run = 0;
  double best_val_loss = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const TrainMeta&, const TrainMeta&) = default;
};

struct ExpertModel {
  DomainId domain;
  std::vector<double> weights;  // dims + 1, bias last
  FeaturizerConfig featurizer;
  TrainMeta train_meta;

  // Throws on non-finite weights or a length that disagrees with the featurizer.
  void validate() const;

  friend bool operator==(const ExpertModel&, const ExpertModel&) = default;
};

// Zero-weight model (scores 0.5 everywhere).
ExpertModel zero_expert(const DomainId& domain, const FeaturizerConfig& fc);

// -(1/n) sum [y ln s + (1-y) ln(1-s)], scores clamped to [eps, 1-eps].
double bce_loss(std::span<const double> scores, std::span<const ClassLabel> labels);

// Mean BCE of the batch plus l2 * |w|^2 over non-bias weights.
double bce_objective(std::span<const double> weights, std::span<const FeatureVector> batch,
                     std::span<const ClassLabel> labels, double l2_penalty);

// Analytic gradient of bce_objective.
std::vector<double> bce_gradient(std::span<const double> weights,
                                 std::span<const FeatureVector> batch,
                                 std::span<const ClassLabel> labels, double l2_penalty);

double expert_margin(const ExpertModel& model, const FeatureVector& fv);
double expert_score(const ExpertModel& model, const FeatureVector& fv);
double expert_score(const ExpertModel& model, std::string_view text);

// Trains a single-domain detector. Every document in train and val must
// belong to `domain`, and each split needs both classes.
ExpertModel train_expert(const std::vector<Document>& train, const std::vector<Document>& val,
                         const DomainId& domain, const TrainConfig& tc,
                         const FeaturizerConfig& fc, TrainHistory* history = nullptr);

// Same optimizer without the single-domain precondition; used for the
// pooled global-expert baseline. `name` becomes the model's domain field.
ExpertModel train_detector(const std::vector<Document>& train, const std::vector<Document>& val,
                           const DomainId& name, const TrainConfig& tc,
                           const FeaturizerConfig& fc, TrainHistory* history = nullptr);

}  // namespace dogen
