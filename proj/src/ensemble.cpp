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

#include "dogen/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "descent.hpp"
#include "dogen/kernels.hpp"
#include "dogen/metrics.hpp"

namespace dogen {
namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

void EnsembleModel::validate() const {
  router.validate();
  if (experts.size() != router.size()) {
    throw Error("ensemble has " + std::to_string(experts.size()) + " experts but the router has " +
                std::to_string(router.size()) + " domains");
  }
  for (std::size_t i = 0; i < experts.size(); ++i) {
    experts[i].validate();
    if (experts[i].domain != router.domains[i]) {
      throw Error("expert " + std::to_string(i) + " is for domain \"" + experts[i].domain +
                  "\" but router slot is \"" + router.domains[i] + "\"");
    }
  }
  if (k < 1 || k > experts.size()) throw Error("ensemble k must lie in [1, N]");
}

EnsembleModel make_ensemble(std::vector<ExpertModel> experts, RouterModel router, std::size_t k) {
  EnsembleModel e;
  for (const auto& domain : router.domains) {
    auto it = std::find_if(experts.begin(), experts.end(),
                           [&](const ExpertModel& m) { return m.domain == domain; });
    if (it == experts.end()) throw Error("no expert for router domain \"" + domain + "\"");
    e.experts.push_back(std::move(*it));
    experts.erase(it);
  }
  if (!experts.empty()) {
    throw Error("expert for domain \"" + experts.front().domain + "\" has no router slot");
  }
  e.router = std::move(router);
  e.k = std::clamp<std::size_t>(k, 1, e.experts.size());
  e.validate();
  return e;
}

ScoreVector expert_scores(const EnsembleModel& ensemble, std::string_view text) {
  std::vector<std::pair<const FeaturizerConfig*, FeatureVector>> cache;
  ScoreVector y;
  y.reserve(ensemble.size());
  for (const auto& expert : ensemble.experts) {
    auto it = std::find_if(cache.begin(), cache.end(),
                           [&](const auto& c) { return *c.first == expert.featurizer; });
    if (it == cache.end()) {
      cache.emplace_back(&expert.featurizer, featurize(text, expert.featurizer));
      it = std::prev(cache.end());
    }
    y.push_back(expert_score(expert, it->second));
  }
  return y;
}

std::vector<std::size_t> top_k_indices(std::span<const double> probs, std::size_t k) {
  if (k < 1 || k > probs.size()) throw Error("k must lie in [1, N]");
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  order.resize(k);
  return order;
}

double dogen_score(std::span<const double> probs, std::span<const double> scores, std::size_t k) {
  if (probs.size() != scores.size()) throw Error("dogen_score: length mismatch");
  const auto selected = top_k_indices(probs, k);
  double mass = 0.0;
  for (auto i : selected) mass += probs[i];
  double s = 0.0;
  if (mass > 0.0) {
    for (auto i : selected) s += probs[i] / mass * scores[i];
  } else {
    for (auto i : selected) s += scores[i] / static_cast<double>(selected.size());
  }
  return s;
}

double score_document(const EnsembleModel& ensemble, std::string_view text) {
  return dogen_score(router_probs(ensemble.router, text), expert_scores(ensemble, text), ensemble.k);
}

double equal_vote(std::span<const double> scores) {
  if (scores.empty()) throw Error("equal_vote: no scores");
  double s = 0.0;
  for (double y : scores) s += y;
  return s / static_cast<double>(scores.size());
}

// --- Stacker -----------------------------------------------------------------

void StackerModel::validate() const {
  const auto n = coefficients.size();
  if (n == 0 || means.size() != n || stds.size() != n) {
    throw Error("stacker coefficient, mean and std vectors must share a nonzero length");
  }
  for (double s : stds) {
    if (!(s > 0.0)) throw Error("stacker stds must be strictly positive");
  }
}

StackerFit fit_stacker_from(const Matrix& scores, std::span<const ClassLabel> labels,
                            const std::optional<StackerStart>& start,
                            ClassWeighting weighting) {
  const std::size_t m = scores.rows();
  const std::size_t n = scores.cols();
  if (m != labels.size()) throw Error("fit_stacker: score rows and labels differ in length");
  if (m < 2 || n < 1) throw Error("fit_stacker: need at least 2 rows and 1 column");
  for (double v : scores.data()) {
    if (!std::isfinite(v)) throw Error("fit_stacker: non-finite score");
  }
  const auto n_machine = static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), ClassLabel::machine));
  const std::size_t n_human = m - n_machine;
  if (n_machine == 0 || n_human == 0) throw Error("fit_stacker: labels contain a single class");

  StackerFit fit;
  StackerModel& st = fit.model;
  st.means.assign(n, 0.0);
  st.stds.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < m; ++r) mean += scores(r, j);
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t r = 0; r < m; ++r) var += (scores(r, j) - mean) * (scores(r, j) - mean);
    const double sd = std::sqrt(var / static_cast<double>(m));
    st.means[j] = mean;
    st.stds[j] = sd > 0.0 ? sd : 1.0;
  }
  Matrix z(m, n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) z(r, j) = (scores(r, j) - st.means[j]) / st.stds[j];
  }
  const bool balanced = weighting == ClassWeighting::balanced;
  const double weight_machine =
      balanced ? static_cast<double>(m) / (2.0 * static_cast<double>(n_machine)) : 1.0;
  const double weight_human =
      balanced ? static_cast<double>(m) / (2.0 * static_cast<double>(n_human)) : 1.0;

  // theta = (coefficients..., intercept)
  std::vector<double> theta(n + 1, 0.0);
  if (start) {
    if (start->coefficients.size() != n) throw Error("fit_stacker: start has wrong length");
    std::copy(start->coefficients.begin(), start->coefficients.end(), theta.begin());
    theta[n] = start->intercept;
  }
  auto loss_and_grad = [&](std::span<const double> th, std::vector<double>* grad) {
    if (grad) grad->assign(n + 1, 0.0);
    double loss = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      double margin = th[n];
      for (std::size_t j = 0; j < n; ++j) margin += th[j] * z(r, j);
      const bool machine = labels[r] == ClassLabel::machine;
      const double c = machine ? weight_machine : weight_human;
      loss += c * (softplus(margin) - (machine ? margin : 0.0));
      if (grad) {
        const double residual = c * (sigmoid(margin) - (machine ? 1.0 : 0.0));
        for (std::size_t j = 0; j < n; ++j) (*grad)[j] += residual * z(r, j);
        (*grad)[n] += residual;
      }
    }
    const double inv = 1.0 / static_cast<double>(m);
    if (grad) {
      for (auto& g : *grad) g *= inv;
    }
    return loss * inv;
  };

  std::vector<double> grad;
  std::vector<double> trial(n + 1);
  double loss = loss_and_grad(theta, &grad);
  double step = 1.0;
  std::size_t iter = 0;
  for (; iter < kStackerMaxIterations; ++iter) {
    if (norm2(grad) < kStackerTolerance) break;
    bool accepted = false;
    while (step > 1e-30) {
      for (std::size_t j = 0; j <= n; ++j) trial[j] = theta[j] - step * grad[j];
      const double trial_loss = loss_and_grad(trial, nullptr);
      if (trial_loss < loss) {
        theta.swap(trial);
        loss = trial_loss;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no representable descent step remains
    loss = loss_and_grad(theta, &grad);
    step *= 2.0;
  }
  st.coefficients.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(n));
  st.intercept = theta[n];
  fit.loss = loss;
  fit.gradient_norm = norm2(grad);
  fit.iterations = iter;
  return fit;
}

StackerModel fit_stacker(const Matrix& scores, std::span<const ClassLabel> labels) {
  return fit_stacker_from(scores, labels, std::nullopt).model;
}

double stacker_score(const StackerModel& stacker, std::span<const double> scores) {
  if (scores.size() != stacker.coefficients.size()) throw Error("stacker_score: length mismatch");
  double margin = stacker.intercept;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    margin += stacker.coefficients[i] * (scores[i] - stacker.means[i]) / stacker.stds[i];
  }
  return sigmoid(margin);
}

std::vector<double> normalized_weights(const StackerModel& stacker) {
  double total = 0.0;
  for (double c : stacker.coefficients) total += std::abs(c);
  if (!(total > 0.0)) throw Error("normalized_weights: all coefficients are zero");
  std::vector<double> w;
  w.reserve(stacker.coefficients.size());
  for (double c : stacker.coefficients) w.push_back(std::abs(c) / total);
  return w;
}

// --- Joint training ------------------------------------------------------------

namespace {

struct GateTerms {
  std::vector<double> probs;
  std::vector<double> expert;      // sigmoid(margin_i)
  std::vector<double> complement;  // sigmoid(-margin_i)
  double score = 0.0;
  double one_minus_score = 0.0;
};

template <typename ExpertWeights, typename RouterWeights>
GateTerms gate_terms(const ExpertWeights& experts, const RouterWeights& router, std::size_t n,
                     const FeatureVector& fv) {
  GateTerms t;
  std::vector<double> logits(n);
  for (std::size_t i = 0; i < n; ++i) logits[i] = dot(fv, router.row(i));
  t.probs = softmax(logits);
  t.expert.resize(n);
  t.complement.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double margin = dot(fv, experts[i]);
    t.expert[i] = sigmoid(margin);
    t.complement[i] = sigmoid(-margin);
    t.score += t.probs[i] * t.expert[i];
    t.one_minus_score += t.probs[i] * t.complement[i];
  }
  return t;
}

double terms_bce(const GateTerms& t, ClassLabel label) {
  return label == ClassLabel::machine ? -std::log(std::max(t.score, kLogEpsilon))
                                      : -std::log(std::max(t.one_minus_score, kLogEpsilon));
}

struct JointParams {
  std::vector<std::vector<double>> experts;
  Matrix router;
};

// Adds scale * d(BCE)/d(params) for one example into the given accumulators.
template <typename ExpertAcc, typename RouterAcc>
void accumulate_joint(const GateTerms& t, ClassLabel label, const FeatureVector& fv, double scale,
                      ExpertAcc&& expert_row, RouterAcc&& router_row) {
  const double y = label_target(label);
  // dL/ds = (s - y) / (s (1 - s)), with 1 - s formed from complements.
  const double denom = std::max(t.score * t.one_minus_score, kLogEpsilon * kLogEpsilon);
  const double dl_ds = (t.score - y) / denom;
  for (std::size_t i = 0; i < t.probs.size(); ++i) {
    const double de = dl_ds * t.probs[i] * t.expert[i] * t.complement[i];
    axpy(scale * de, fv, expert_row(i));
    const double dr = dl_ds * t.probs[i] * (t.expert[i] - t.score);
    axpy(scale * dr, fv, router_row(i));
  }
}

double l2_sum(std::span<const double> w) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < w.size(); ++j) s += w[j] * w[j];
  return s;
}

}  // namespace

double soft_gated_score(const EnsembleModel& model, const FeatureVector& fv) {
  std::vector<std::span<const double>> experts;
  for (const auto& e : model.experts) experts.emplace_back(e.weights);
  return gate_terms(experts, model.router.weight_matrix, model.size(), fv).score;
}

double joint_objective(const EnsembleModel& model, std::span<const FeatureVector> batch,
                       std::span<const ClassLabel> labels, double l2_penalty) {
  if (batch.empty()) throw Error("joint_objective: empty batch");
  if (batch.size() != labels.size()) throw Error("joint_objective: length mismatch");
  std::vector<std::span<const double>> experts;
  for (const auto& e : model.experts) experts.emplace_back(e.weights);
  double loss = 0.0;
  for (std::size_t m = 0; m < batch.size(); ++m) {
    loss += terms_bce(gate_terms(experts, model.router.weight_matrix, model.size(), batch[m]), labels[m]);
  }
  double reg = 0.0;
  for (const auto& e : model.experts) reg += l2_sum(e.weights);
  for (std::size_t i = 0; i < model.size(); ++i) reg += l2_sum(model.router.weight_matrix.row(i));
  return loss / static_cast<double>(batch.size()) + l2_penalty * reg;
}

JointGradient joint_gradient(const EnsembleModel& model, std::span<const FeatureVector> batch,
                             std::span<const ClassLabel> labels, double l2_penalty) {
  if (batch.empty()) throw Error("joint_gradient: empty batch");
  if (batch.size() != labels.size()) throw Error("joint_gradient: length mismatch");
  const std::size_t n = model.size();
  std::vector<std::span<const double>> experts;
  for (const auto& e : model.experts) experts.emplace_back(e.weights);
  JointGradient g;
  g.experts.assign(n, std::vector<double>(model.experts.front().weights.size(), 0.0));
  g.router = Matrix(n, model.router.weight_matrix.cols());
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t m = 0; m < batch.size(); ++m) {
    const auto t = gate_terms(experts, model.router.weight_matrix, n, batch[m]);
    accumulate_joint(
        t, labels[m], batch[m], inv, [&](std::size_t i) { return std::span<double>(g.experts[i]); },
        [&](std::size_t i) { return g.router.row(i); });
  }
  if (l2_penalty > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j + 1 < g.experts[i].size(); ++j) {
        g.experts[i][j] += 2.0 * l2_penalty * model.experts[i].weights[j];
      }
      auto row = g.router.row(i);
      const auto w = model.router.weight_matrix.row(i);
      for (std::size_t j = 0; j + 1 < row.size(); ++j) row[j] += 2.0 * l2_penalty * w[j];
    }
  }
  return g;
}

EnsembleModel joint_train(const JointInit& init, const std::vector<Document>& train,
                          const std::vector<Document>& val, const TrainConfig& tc,
                          TrainHistory* history) {
  tc.validate();
  EnsembleModel model;
  if (const auto* scratch = std::get_if<JointScratch>(&init)) {
    std::vector<DomainId> domains = scratch->domains;
    if (domains.empty()) {
      std::set<DomainId> seen;
      for (const auto& d : train) seen.insert(d.domain);
      domains.assign(seen.begin(), seen.end());
    }
    if (domains.empty()) throw Error("joint training needs at least one domain");
    for (const auto& d : domains) model.experts.push_back(zero_expert(d, scratch->featurizer));
    model.router = zero_router(domains, scratch->featurizer);
    model.k = domains.size();
  } else {
    model = std::get<EnsembleModel>(init);
  }
  model.validate();
  const FeaturizerConfig fc = model.router.featurizer;
  for (const auto& e : model.experts) {
    if (!(e.featurizer == fc)) throw Error("joint training needs one featurizer shared by all components");
  }
  for (const auto* split : {&train, &val}) {
    if (split->empty()) throw Error("joint training needs nonempty train and val splits");
    for (const auto& d : *split) model.router.index_of(d.domain);
    const bool human = std::any_of(split->begin(), split->end(),
                                   [](const Document& d) { return d.label == ClassLabel::human; });
    const bool machine = std::any_of(split->begin(), split->end(),
                                     [](const Document& d) { return d.label == ClassLabel::machine; });
    if (!human || !machine) throw Error("joint training splits must contain both classes");
  }

  auto prepare = [&](const std::vector<Document>& docs) {
    std::vector<const Document*> sorted;
    for (const auto& d : docs) sorted.push_back(&d);
    std::sort(sorted.begin(), sorted.end(),
              [](const Document* a, const Document* b) { return a->id < b->id; });
    std::vector<std::string_view> texts;
    std::vector<ClassLabel> labels;
    for (const auto* d : sorted) {
      texts.emplace_back(d->text);
      labels.push_back(d->label);
    }
    return std::pair{featurize_batch(texts, fc), labels};
  };
  const auto [tr_x, tr_y] = prepare(train);
  const auto [va_x, va_y] = prepare(val);
  const std::size_t n = model.size();
  const double decay = 1.0 - 2.0 * tc.learning_rate * tc.l2_penalty;

  JointParams params;
  for (auto& e : model.experts) params.experts.push_back(std::move(e.weights));
  params.router = std::move(model.router.weight_matrix);

  auto step = [&](JointParams& p, std::span<const std::size_t> batch) {
    std::vector<GateTerms> terms;
    terms.reserve(batch.size());
    for (auto idx : batch) terms.push_back(gate_terms(p.experts, p.router, n, tr_x[idx]));
    if (tc.l2_penalty > 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j + 1 < p.experts[i].size(); ++j) p.experts[i][j] *= decay;
        auto row = p.router.row(i);
        for (std::size_t j = 0; j + 1 < row.size(); ++j) row[j] *= decay;
      }
    }
    const double scale = -tc.learning_rate / static_cast<double>(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) {
      accumulate_joint(
          terms[b], tr_y[batch[b]], tr_x[batch[b]], scale,
          [&](std::size_t i) { return std::span<double>(p.experts[i]); },
          [&](std::size_t i) { return p.router.row(i); });
    }
  };
  auto evaluate = [&](const JointParams& p) {
    std::vector<double> scores;
    double loss = 0.0;
    for (std::size_t m = 0; m < va_x.size(); ++m) {
      const auto t = gate_terms(p.experts, p.router, n, va_x[m]);
      if (!std::isfinite(t.score)) return detail::Evaluation{std::nan(""), std::nullopt};
      loss += terms_bce(t, va_y[m]);
      scores.push_back(t.score);
    }
    return detail::Evaluation{loss / static_cast<double>(va_x.size()), auroc(scores, va_y)};
  };

  TrainHistory local;
  TrainHistory& hist = history ? *history : local;
  params = detail::run_descent(std::move(params), tr_x.size(), tc, step, evaluate, hist);
  for (std::size_t i = 0; i < n; ++i) {
    model.experts[i].weights = std::move(params.experts[i]);
    model.experts[i].train_meta = {hist.epochs_run, hist.best_val_loss, tc.seed};
  }
  model.router.weight_matrix = std::move(params.router);
  model.k = std::min<std::size_t>(2, n);
  return model;
}

}  // namespace dogen
