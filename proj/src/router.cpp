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

#include "dogen/router.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "descent.hpp"
#include "dogen/kernels.hpp"

namespace dogen {
namespace {

struct DomainSet {
  std::vector<FeatureVector> x;
  std::vector<std::size_t> d;
};

DomainSet prepare(const std::vector<Document>& docs, const RouterModel& model) {
  std::vector<const Document*> sorted;
  for (const auto& doc : docs) sorted.push_back(&doc);
  std::sort(sorted.begin(), sorted.end(),
            [](const Document* a, const Document* b) { return a->id < b->id; });
  std::vector<std::string_view> texts;
  DomainSet set;
  for (const auto* doc : sorted) {
    texts.emplace_back(doc->text);
    set.d.push_back(model.index_of(doc->domain));
  }
  set.x = featurize_batch(texts, model.featurizer);
  return set;
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::size_t RouterModel::index_of(const DomainId& domain) const {
  const auto it = std::find(domains.begin(), domains.end(), domain);
  if (it == domains.end()) throw Error("unknown domain \"" + domain + "\" for router");
  return static_cast<std::size_t>(it - domains.begin());
}

void RouterModel::validate() const {
  featurizer.validate();
  if (domains.empty()) throw Error("router has no domains");
  if (std::set<DomainId>(domains.begin(), domains.end()).size() != domains.size()) {
    throw Error("router domains must be unique");
  }
  if (weight_matrix.rows() != domains.size() ||
      weight_matrix.cols() != static_cast<std::size_t>(featurizer.dims) + 1) {
    throw Error("router weight matrix shape does not match domains x (dims + 1)");
  }
  for (double v : weight_matrix.data()) {
    if (!std::isfinite(v)) throw Error("router contains non-finite weights");
  }
}

RouterModel zero_router(std::vector<DomainId> domains, const FeaturizerConfig& fc) {
  fc.validate();
  RouterModel m;
  m.weight_matrix = Matrix(domains.size(), static_cast<std::size_t>(fc.dims) + 1);
  m.domains = std::move(domains);
  m.featurizer = fc;
  return m;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) return {};
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - top);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

std::vector<double> router_logits(const RouterModel& model, const FeatureVector& fv) {
  std::vector<double> logits(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) logits[i] = dot(fv, model.weight_matrix.row(i));
  return logits;
}

DomainDistribution router_probs(const RouterModel& model, const FeatureVector& fv) {
  return softmax(router_logits(model, fv));
}

DomainDistribution router_probs(const RouterModel& model, std::string_view text) {
  return router_probs(model, featurize(text, model.featurizer));
}

double gate_loss(const RouterModel& model, std::span<const FeatureVector> batch,
                 std::span<const std::size_t> domain_index) {
  if (batch.empty()) throw Error("gate_loss: empty batch");
  if (batch.size() != domain_index.size()) throw Error("gate_loss: length mismatch");
  double sum = 0.0;
  for (std::size_t m = 0; m < batch.size(); ++m) {
    if (domain_index[m] >= model.size()) throw Error("gate_loss: domain index out of range");
    const auto p = router_probs(model, batch[m]);
    sum -= std::log(std::max(p[domain_index[m]], kLogEpsilon));
  }
  return sum / static_cast<double>(batch.size());
}

double gate_loss(const RouterModel& model, const std::vector<Document>& batch) {
  std::vector<FeatureVector> x;
  std::vector<std::size_t> d;
  for (const auto& doc : batch) {
    d.push_back(model.index_of(doc.domain));
    x.push_back(featurize(doc.text, model.featurizer));
  }
  return gate_loss(model, x, d);
}

double gate_objective(const RouterModel& model, std::span<const FeatureVector> batch,
                      std::span<const std::size_t> domain_index, double l2_penalty) {
  double reg = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto row = model.weight_matrix.row(i);
    for (std::size_t j = 0; j + 1 < row.size(); ++j) reg += row[j] * row[j];
  }
  return gate_loss(model, batch, domain_index) + l2_penalty * reg;
}

Matrix gate_loss_gradient(const RouterModel& model, std::span<const FeatureVector> batch,
                          std::span<const std::size_t> domain_index, double l2_penalty) {
  if (batch.empty()) throw Error("gate_loss_gradient: empty batch");
  if (batch.size() != domain_index.size()) throw Error("gate_loss_gradient: length mismatch");
  Matrix grad(model.size(), model.weight_matrix.cols());
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t m = 0; m < batch.size(); ++m) {
    const auto p = router_probs(model, batch[m]);
    for (std::size_t i = 0; i < model.size(); ++i) {
      const double coeff = p[i] - (domain_index[m] == i ? 1.0 : 0.0);
      axpy(coeff * inv, batch[m], grad.row(i));
    }
  }
  if (l2_penalty > 0.0) {
    for (std::size_t i = 0; i < model.size(); ++i) {
      auto g = grad.row(i);
      const auto w = model.weight_matrix.row(i);
      for (std::size_t j = 0; j + 1 < g.size(); ++j) g[j] += 2.0 * l2_penalty * w[j];
    }
  }
  return grad;
}

Matrix gate_loss_gradient(const RouterModel& model, const std::vector<Document>& batch) {
  std::vector<FeatureVector> x;
  std::vector<std::size_t> d;
  for (const auto& doc : batch) {
    d.push_back(model.index_of(doc.domain));
    x.push_back(featurize(doc.text, model.featurizer));
  }
  return gate_loss_gradient(model, x, d);
}

RouterModel train_router(const std::vector<Document>& train, const std::vector<Document>& val,
                         const TrainConfig& tc, const FeaturizerConfig& fc,
                         TrainHistory* history) {
  tc.validate();
  fc.validate();
  std::set<DomainId> train_domains;
  for (const auto& d : train) train_domains.insert(d.domain);
  if (train_domains.size() < 2) throw Error("router training needs at least 2 domains");
  std::set<DomainId> val_domains;
  for (const auto& d : val) val_domains.insert(d.domain);
  if (val.empty()) throw Error("router validation split is empty");
  if (val_domains.size() < 2) throw Error("router validation split needs at least 2 domains");
  for (const auto& d : val_domains) {
    if (!train_domains.count(d)) {
      throw Error("validation domain \"" + d + "\" does not appear in the training split");
    }
  }

  RouterModel model = zero_router({train_domains.begin(), train_domains.end()}, fc);
  const DomainSet tr = prepare(train, model);
  const DomainSet va = prepare(val, model);
  const std::size_t n = model.size();
  const double decay = 1.0 - 2.0 * tc.learning_rate * tc.l2_penalty;

  auto step = [&](Matrix& w, std::span<const std::size_t> batch) {
    std::vector<std::vector<double>> probs(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) {
      std::vector<double> logits(n);
      for (std::size_t i = 0; i < n; ++i) logits[i] = dot(tr.x[batch[b]], w.row(i));
      probs[b] = softmax(logits);
    }
    if (tc.l2_penalty > 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        auto row = w.row(i);
        for (std::size_t j = 0; j + 1 < row.size(); ++j) row[j] *= decay;
      }
    }
    const double scale = -tc.learning_rate / static_cast<double>(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const auto target = tr.d[batch[b]];
      for (std::size_t i = 0; i < n; ++i) {
        const double coeff = probs[b][i] - (target == i ? 1.0 : 0.0);
        axpy(scale * coeff, tr.x[batch[b]], w.row(i));
      }
    }
  };
  auto evaluate = [&](const Matrix& w) {
    double loss = 0.0;
    std::size_t correct = 0;
    for (std::size_t m = 0; m < va.x.size(); ++m) {
      std::vector<double> logits(n);
      for (std::size_t i = 0; i < n; ++i) {
        logits[i] = dot(va.x[m], w.row(i));
        if (!std::isfinite(logits[i])) return detail::Evaluation{std::nan(""), std::nullopt};
      }
      const auto p = softmax(logits);
      loss -= std::log(std::max(p[va.d[m]], kLogEpsilon));
      if (argmax(p) == va.d[m]) ++correct;
    }
    const auto count = static_cast<double>(va.x.size());
    return detail::Evaluation{loss / count, static_cast<double>(correct) / count};
  };

  TrainHistory local;
  TrainHistory& hist = history ? *history : local;
  model.weight_matrix =
      detail::run_descent(std::move(model.weight_matrix), tr.x.size(), tc, step, evaluate, hist);
  return model;
}

double router_accuracy(const RouterModel& model, const std::vector<Document>& docs) {
  if (docs.empty()) throw Error("router_accuracy: no documents");
  std::vector<std::string_view> texts;
  for (const auto& d : docs) texts.emplace_back(d.text);
  const auto x = featurize_batch(texts, model.featurizer);
  std::size_t correct = 0;
  for (std::size_t m = 0; m < docs.size(); ++m) {
    const auto p = router_probs(model, x[m]);
    if (model.domains[argmax(p)] == docs[m].domain) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(docs.size());
}

}  // namespace dogen
