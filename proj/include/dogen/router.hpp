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

#include <string_view>
#include <vector>

#include "dogen/common.hpp"
#include "dogen/corpus.hpp"
#include "dogen/expert.hpp"
#include "dogen/features.hpp"

namespace dogen {

// Softmax domain classifier. Row i of weight_matrix scores domains[i];
// the last column is that row's bias.
struct RouterModel {
  std::vector<DomainId> domains;
  Matrix weight_matrix;
  FeaturizerConfig featurizer;

  std::size_t size() const { return domains.size(); }
  // Index of `domain` in `domains`; throws if unknown.
  std::size_t index_of(const DomainId& domain) const;
  // Trained routers need N >= 2; a one-domain router only appears inside
  // degenerate single-expert ensembles.
  void validate() const;

  friend bool operator==(const RouterModel&, const RouterModel&) = default;
};

using DomainDistribution = std::vector<double>;

RouterModel zero_router(std::vector<DomainId> domains, const FeaturizerConfig& fc);

// Numerically stable softmax (max-logit subtraction).
std::vector<double> softmax(std::span<const double> logits);

std::vector<double> router_logits(const RouterModel& model, const FeatureVector& fv);
DomainDistribution router_probs(const RouterModel& model, const FeatureVector& fv);
DomainDistribution router_probs(const RouterModel& model, std::string_view text);

// Mean -ln p_{d_m}(x_m), probabilities clamped at 1e-12.
double gate_loss(const RouterModel& model, const std::vector<Document>& batch);
double gate_loss(const RouterModel& model, std::span<const FeatureVector> batch,
                 std::span<const std::size_t> domain_index);

// gate_loss plus l2 * |W|^2 over non-bias columns.
double gate_objective(const RouterModel& model, std::span<const FeatureVector> batch,
                      std::span<const std::size_t> domain_index, double l2_penalty);

// Row i: (1/M) sum_m (p_i(x_m) - 1{d_m = i}) * [phi(x_m), 1], plus 2*l2*w on
// non-bias columns.
Matrix gate_loss_gradient(const RouterModel& model, std::span<const FeatureVector> batch,
                          std::span<const std::size_t> domain_index, double l2_penalty = 0.0);
Matrix gate_loss_gradient(const RouterModel& model, const std::vector<Document>& batch);

// Domain order is the sorted set of train domains. Needs >= 2 domains and
// every val domain present in train.
RouterModel train_router(const std::vector<Document>& train, const std::vector<Document>& val,
                         const TrainConfig& tc, const FeaturizerConfig& fc,
                         TrainHistory* history = nullptr);

// Fraction of documents whose argmax domain (lowest index on ties) is correct.
double router_accuracy(const RouterModel& model, const std::vector<Document>& docs);

}  // namespace dogen
