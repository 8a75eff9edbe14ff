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

#include "dogen/expert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "descent.hpp"
#include "dogen/kernels.hpp"
#include "dogen/metrics.hpp"

namespace dogen {
namespace {

struct LabeledSet {
  std::vector<FeatureVector> x;
  std::vector<ClassLabel> y;
};

// Documents in canonical id order, featurized.
LabeledSet prepare(const std::vector<Document>& docs, const FeaturizerConfig& fc) {
  std::vector<const Document*> sorted;
  sorted.reserve(docs.size());
  for (const auto& d : docs) sorted.push_back(&d);
  std::sort(sorted.begin(), sorted.end(),
            [](const Document* a, const Document* b) { return a->id < b->id; });
  std::vector<std::string_view> texts;
  LabeledSet set;
  for (const auto* d : sorted) {
    texts.emplace_back(d->text);
    set.y.push_back(d->label);
  }
  set.x = featurize_batch(texts, fc);
  return set;
}

void require_both_classes(const std::vector<Document>& docs, const char* split,
                          const DomainId& name) {
  const bool human = std::any_of(docs.begin(), docs.end(),
                                 [](const Document& d) { return d.label == ClassLabel::human; });
  const bool machine = std::any_of(docs.begin(), docs.end(),
                                   [](const Document& d) { return d.label == ClassLabel::machine; });
  if (!human || !machine) {
    throw Error(std::string(split) + " split for \"" + name + "\" must contain both classes");
  }
}

void check_finite(std::span<const double> w, const char* what) {
  for (double v : w) {
    if (!std::isfinite(v)) throw Error(std::string(what) + " contains non-finite weights");
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error("learning_rate must be positive");
  }
  if (batch_size == 0 || max_epochs == 0 || eval_every_steps == 0 || early_stopping_patience == 0) {
    throw Error("batch_size, max_epochs, eval_every_steps and early_stopping_patience must be positive");
  }
  if (!(l2_penalty >= 0.0) || !std::isfinite(l2_penalty)) {
    throw Error("l2_penalty must be nonnegative");
  }
}

void ExpertModel::validate() const {
  featurizer.validate();
  if (weights.size() != static_cast<std::size_t>(featurizer.dims) + 1) {
    throw Error("expert \"" + domain + "\" has " + std::to_string(weights.size()) +
                " weights, featurizer expects " + std::to_string(featurizer.dims + 1ull));
  }
  check_finite(weights, "expert");
}

ExpertModel zero_expert(const DomainId& domain, const FeaturizerConfig& fc) {
  fc.validate();
  ExpertModel m;
  m.domain = domain;
  m.featurizer = fc;
  m.weights.assign(static_cast<std::size_t>(fc.dims) + 1, 0.0);
  return m;
}

double bce_loss(std::span<const double> scores, std::span<const ClassLabel> labels) {
  if (scores.empty()) throw Error("bce_loss: empty input");
  if (scores.size() != labels.size()) throw Error("bce_loss: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = std::clamp(scores[i], kLogEpsilon, 1.0 - kLogEpsilon);
    sum += labels[i] == ClassLabel::machine ? std::log(s) : std::log(1.0 - s);
  }
  return -sum / static_cast<double>(scores.size());
}

double bce_objective(std::span<const double> weights, std::span<const FeatureVector> batch,
                     std::span<const ClassLabel> labels, double l2_penalty) {
  if (batch.empty()) throw Error("bce_objective: empty batch");
  std::vector<double> scores;
  scores.reserve(batch.size());
  for (const auto& fv : batch) scores.push_back(sigmoid(dot(fv, weights)));
  double reg = 0.0;
  for (std::size_t j = 0; j + 1 < weights.size(); ++j) reg += weights[j] * weights[j];
  return bce_loss(scores, labels) + l2_penalty * reg;
}

std::vector<double> bce_gradient(std::span<const double> weights,
                                 std::span<const FeatureVector> batch,
                                 std::span<const ClassLabel> labels, double l2_penalty) {
  if (batch.empty()) throw Error("bce_gradient: empty batch");
  if (batch.size() != labels.size()) throw Error("bce_gradient: length mismatch");
  std::vector<double> grad(weights.size(), 0.0);
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double residual = sigmoid(dot(batch[i], weights)) - label_target(labels[i]);
    axpy(residual * inv, batch[i], grad);
  }
  for (std::size_t j = 0; j + 1 < weights.size(); ++j) grad[j] += 2.0 * l2_penalty * weights[j];
  return grad;
}

double expert_margin(const ExpertModel& model, const FeatureVector& fv) {
  return dot(fv, model.weights);
}

double expert_score(const ExpertModel& model, const FeatureVector& fv) {
  return sigmoid(expert_margin(model, fv));
}

double expert_score(const ExpertModel& model, std::string_view text) {
  return expert_score(model, featurize(text, model.featurizer));
}

ExpertModel train_detector(const std::vector<Document>& train, const std::vector<Document>& val,
                           const DomainId& name, const TrainConfig& tc,
                           const FeaturizerConfig& fc, TrainHistory* history) {
  tc.validate();
  fc.validate();
  require_both_classes(train, "train", name);
  require_both_classes(val, "val", name);
  const LabeledSet tr = prepare(train, fc);
  const LabeledSet va = prepare(val, fc);

  const double decay = 1.0 - 2.0 * tc.learning_rate * tc.l2_penalty;
  auto step = [&](std::vector<double>& w, std::span<const std::size_t> batch) {
    // Residuals use the pre-update weights, so this is one exact gradient step.
    std::vector<double> residual(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) {
      residual[b] = sigmoid(dot(tr.x[batch[b]], w)) - label_target(tr.y[batch[b]]);
    }
    if (tc.l2_penalty > 0.0) {
      for (std::size_t j = 0; j + 1 < w.size(); ++j) w[j] *= decay;
    }
    const double scale = -tc.learning_rate / static_cast<double>(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) axpy(scale * residual[b], tr.x[batch[b]], w);
  };
  auto evaluate = [&](const std::vector<double>& w) {
    std::vector<double> scores;
    scores.reserve(va.x.size());
    for (const auto& fv : va.x) {
      const double margin = dot(fv, w);
      if (!std::isfinite(margin)) return detail::Evaluation{std::nan(""), std::nullopt};
      scores.push_back(sigmoid(margin));
    }
    return detail::Evaluation{bce_loss(scores, va.y), auroc(scores, va.y)};
  };

  TrainHistory local;
  TrainHistory& hist = history ? *history : local;
  ExpertModel model = zero_expert(name, fc);
  model.weights = detail::run_descent(std::move(model.weights), tr.x.size(), tc, step, evaluate, hist);
  model.train_meta = {hist.epochs_run, hist.best_val_loss, tc.seed};
  return model;
}

ExpertModel train_expert(const std::vector<Document>& train, const std::vector<Document>& val,
                         const DomainId& domain, const TrainConfig& tc,
                         const FeaturizerConfig& fc, TrainHistory* history) {
  for (const auto* split : {&train, &val}) {
    for (const auto& d : *split) {
      if (d.domain != domain) {
        throw Error("document \"" + d.id + "\" belongs to domain \"" + d.domain +
                    "\", not to expert domain \"" + domain + "\"");
      }
    }
  }
  return train_detector(train, val, domain, tc, fc, history);
}

}  // namespace dogen
