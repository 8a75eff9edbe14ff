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

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "dogen/common.hpp"
#include "dogen/corpus.hpp"
#include "dogen/expert.hpp"
#include "dogen/router.hpp"

namespace dogen {

// N experts gated by a router. experts[i].domain == router.domains[i].
struct EnsembleModel {
  std::vector<ExpertModel> experts;
  RouterModel router;
  std::size_t k = 2;

  std::size_t size() const { return experts.size(); }
  void validate() const;

  friend bool operator==(const EnsembleModel&, const EnsembleModel&) = default;
};

// Orders `experts` to match router.domains. k is clamped to N.
EnsembleModel make_ensemble(std::vector<ExpertModel> experts, RouterModel router, std::size_t k = 2);

using ScoreVector = std::vector<double>;

// Featurizes once per distinct FeaturizerConfig among the experts.
ScoreVector expert_scores(const EnsembleModel& ensemble, std::string_view text);

// Indices of the k largest probabilities, lowest index first among ties,
// returned in selection order.
std::vector<std::size_t> top_k_indices(std::span<const double> probs, std::size_t k);

// Top-k gated score: sum over the k most probable domains of
// (p_i / selected mass) * y_i. Zero selected mass falls back to uniform weights.
double dogen_score(std::span<const double> probs, std::span<const double> scores, std::size_t k);

double score_document(const EnsembleModel& ensemble, std::string_view text);

double equal_vote(std::span<const double> scores);

// Static logistic-regression layer over standardized expert scores.
struct StackerModel {
  std::vector<double> coefficients;
  double intercept = 0.0;
  std::vector<double> means;
  std::vector<double> stds;

  void validate() const;

  friend bool operator==(const StackerModel&, const StackerModel&) = default;
};

struct StackerFit {
  StackerModel model;
  double loss = 0.0;  // class-weighted mean BCE at the solution
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
};

struct StackerStart {
  std::vector<double> coefficients;
  double intercept = 0.0;
};

enum class ClassWeighting { balanced, none };

inline constexpr double kStackerTolerance = 1e-8;
inline constexpr std::size_t kStackerMaxIterations = 10000;

// Rows are documents, columns experts. Balanced class weights
// M / (2 * class_count); no penalty; full-batch gradient descent with step
// halving on non-decrease until the gradient norm drops below 1e-8 or
// 10,000 iterations.
StackerModel fit_stacker(const Matrix& scores, std::span<const ClassLabel> labels);
StackerFit fit_stacker_from(const Matrix& scores, std::span<const ClassLabel> labels,
                            const std::optional<StackerStart>& start,
                            ClassWeighting weighting = ClassWeighting::balanced);

double stacker_score(const StackerModel& stacker, std::span<const double> scores);

// |coef_i| / sum_j |coef_j|.
std::vector<double> normalized_weights(const StackerModel& stacker);

// --- Joint end-to-end training ----------------------------------------------

struct JointScratch {
  std::vector<DomainId> domains;  // empty: sorted distinct train domains
  FeaturizerConfig featurizer;
};

using JointInit = std::variant<JointScratch, EnsembleModel>;

struct JointGradient {
  std::vector<std::vector<double>> experts;
  Matrix router;
};

// Full soft gating s = sum_i p_i(x) * sigmoid(w_i . phi(x)).
double soft_gated_score(const EnsembleModel& model, const FeatureVector& fv);

// Mean BCE of soft_gated_score plus l2 * |w|^2 over all non-bias weights.
double joint_objective(const EnsembleModel& model, std::span<const FeatureVector> batch,
                       std::span<const ClassLabel> labels, double l2_penalty);

JointGradient joint_gradient(const EnsembleModel& model, std::span<const FeatureVector> batch,
                             std::span<const ClassLabel> labels, double l2_penalty);

// Optimizes every expert and the router together on BCE of the k = N score.
// All components must share one FeaturizerConfig. The result has k = min(2, N).
EnsembleModel joint_train(const JointInit& init, const std::vector<Document>& train,
                          const std::vector<Document>& val, const TrainConfig& tc,
                          TrainHistory* history = nullptr);

}  // namespace dogen
