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


#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "dogen/router.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace dogen {
namespace {

FeaturizerConfig tiny_features(std::uint32_t dims = 16) {
  FeaturizerConfig fc;
  fc.dims = dims;
  return fc;
}

RouterModel random_router(std::mt19937_64& gen, std::size_t n, std::uint32_t dims, double scale) {
  std::vector<DomainId> domains;
  for (std::size_t i = 0; i < n; ++i) domains.push_back("d" + std::to_string(i));
  auto r = zero_router(domains, tiny_features(dims));
  for (auto& v : r.weight_matrix.data()) v = test::random_vector(gen, 1, scale)[0];
  return r;
}

TEST(RouterProbs, ZeroWeightsAreUniform) {
  for (std::size_t n : {2u, 3u, 10u}) {
    std::vector<DomainId> domains;
    for (std::size_t i = 0; i < n; ++i) domains.push_back(std::to_string(i));
    const auto r = zero_router(domains, tiny_features());
    for (double p : router_probs(r, "some text")) EXPECT_EQ(p, 1.0 / static_cast<double>(n));
  }
}

TEST(RouterProbs, ClosedFormTwoDomains) {
  auto r = zero_router({"a", "b"}, tiny_features());
  r.weight_matrix(0, 16) = std::log(2.0);
  const auto p = router_probs(r, "");
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
}

TEST(RouterProbs, ShiftInvariance) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 100; ++trial) {
    auto r = random_router(gen, 2 + gen() % 6, 16, 2.0);
    const auto fv = test::random_feature_vector(gen, 16, 5);
    const auto before = router_probs(r, fv);
    const double c = test::random_vector(gen, 1, 50.0)[0];
    for (std::size_t i = 0; i < r.size(); ++i) r.weight_matrix(i, 16) += c;
    const auto after = router_probs(r, fv);
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(before[i], after[i], 1e-12);
  }
}

TEST(RouterProbs, SimplexProperty) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = random_router(gen, 2 + gen() % 9, 16, 5.0);
    const auto p = router_probs(r, test::random_feature_vector(gen, 16, 8));
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    for (double v : p) {
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
}

TEST(Softmax, StableForLargeLogits) {
  const auto p = softmax(std::vector<double>{1000.0, 1000.0, -1000.0});
  EXPECT_EQ(p[0], 0.5);
  EXPECT_EQ(p[1], 0.5);
  EXPECT_EQ(p[2], 0.0);
}

Document doc(const std::string& domain, const std::string& text = "t") {
  Document d;
  d.id = domain + text;
  d.text = text;
  d.domain = domain;
  return d;
}

TEST(GateLoss, Examples) {
  const auto uniform = zero_router({"a", "b", "c"}, tiny_features());
  EXPECT_EQ(gate_loss(uniform, {doc("a"), doc("c", "x y")}), std::log(3.0));

  auto sharp = zero_router({"a", "b"}, tiny_features());
  sharp.weight_matrix(0, 16) = 40.0;
  EXPECT_NEAR(gate_loss(sharp, {doc("a")}), 0.0, 1e-15);

  auto half = zero_router({"a", "b", "c"}, tiny_features());
  half.weight_matrix(0, 16) = std::log(2.0);  // logits (ln 2, 0, 0) -> (1/2, 1/4, 1/4)
  EXPECT_NEAR(gate_loss(half, {doc("a")}), std::log(2.0), 1e-15);

  DOGEN_EXPECT_ERROR(gate_loss(uniform, {doc("zzz")}), "unknown domain");
  DOGEN_EXPECT_ERROR(gate_loss(uniform, std::vector<Document>{}), "empty");
}

TEST(GateLoss, ClampsAtEpsilon) {
  auto r = zero_router({"a", "b"}, tiny_features());
  r.weight_matrix(1, 16) = 1e4;
  EXPECT_NEAR(gate_loss(r, {doc("a")}), -std::log(1e-12), 1e-9);
}

TEST(GateLossGradient, HandDerivedTwoDomains) {
  const auto r = zero_router({"a", "b"}, tiny_features());
  const FeatureVector fv{16, {{3, 0.6}, {9, 0.8}}};
  const std::vector<FeatureVector> batch{fv};
  const std::vector<std::size_t> idx{0};
  const auto g = gate_loss_gradient(r, batch, idx);
  for (std::size_t c = 0; c <= 16; ++c) {
    const double phi = c == 3 ? 0.6 : c == 9 ? 0.8 : c == 16 ? 1.0 : 0.0;
    EXPECT_NEAR(g(0, c), -0.5 * phi, 1e-15);
    EXPECT_NEAR(g(1, c), 0.5 * phi, 1e-15);
  }
}

TEST(GateLossGradient, VanishesWhenConfidentlyCorrect) {
  auto r = zero_router({"a", "b", "c"}, tiny_features());
  r.weight_matrix(1, 16) = 60.0;
  const auto g = gate_loss_gradient(r, {doc("b", "p q r")});
  double norm = 0.0;
  for (double v : g.data()) norm += v * v;
  EXPECT_LT(std::sqrt(norm), 1e-20);
}

TEST(GateLossGradient, MatchesFiniteDifferences) {
  std::mt19937_64 gen(6);
  const std::uint32_t dims = 16;
  for (int point = 0; point < 20; ++point) {
    const std::size_t n = 2 + gen() % 4;
    auto r = random_router(gen, n, dims, 1.0);
    std::vector<FeatureVector> batch;
    std::vector<std::size_t> idx;
    const auto m = 1 + gen() % 6;
    for (std::size_t i = 0; i < m; ++i) {
      batch.push_back(test::random_feature_vector(gen, dims, 1 + gen() % 8));
      idx.push_back(gen() % n);
    }
    const double l2 = point % 2 ? 0.03 : 0.0;
    const auto g = gate_loss_gradient(r, batch, idx, l2);
    const std::vector<double> w = r.weight_matrix.data();
    auto f = [&](std::span<const double> x) {
      RouterModel probe = r;
      std::copy(x.begin(), x.end(), probe.weight_matrix.data().begin());
      return gate_objective(probe, batch, idx, l2);
    };
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double numeric = oracle::central_difference(f, w, i);
      EXPECT_LT(oracle::relative_error(g.data()[i], numeric), 1e-4)
          << "point " << point << " coord " << i;
    }
  }
}

TEST(GateLoss, NonNegative) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 5;
    const auto r = random_router(gen, n, 16, 3.0);
    std::vector<FeatureVector> batch{test::random_feature_vector(gen, 16, 4)};
    std::vector<std::size_t> idx{gen() % n};
    EXPECT_GE(gate_loss(r, batch, idx), 0.0);
  }
}

// --- training -------------------------------------------------------------------

TrainConfig router_config() {
  TrainConfig tc;
  tc.learning_rate = 0.5;
  tc.max_epochs = 3;
  tc.eval_every_steps = 10;
  tc.seed = 1;
  return tc;
}

TEST(TrainRouter, SeparatesDisjointVocabularies) {
  const auto docs = test::synthetic(3, 40, 0.5, 11, 60, 20);
  const auto split = split_train_val(docs, {0.8, 11});
  TrainHistory h;
  const auto r = train_router(split.train, split.val, router_config(), tiny_features(1u << 12), &h);
  EXPECT_GE(router_accuracy(r, split.val), 0.95);
  EXPECT_NEAR(h.evals.front().val_loss, std::log(3.0), 1e-15);
  EXPECT_LE(h.best_val_loss, std::log(3.0));
  EXPECT_EQ(gate_loss(r, split.val), h.best_val_loss);
  EXPECT_EQ(r.domains, (std::vector<DomainId>{"d0", "d1", "d2"}));
}

TEST(TrainRouter, DeterministicAndSortedDomains) {
  auto docs = test::synthetic(3, 20, 0.5, 12, 60, 20);
  for (auto& d : docs) d.domain = d.domain == "d0" ? "zeta" : d.domain == "d1" ? "alpha" : "mid";
  const auto split = split_train_val(docs, {0.8, 12});
  const auto a = train_router(split.train, split.val, router_config(), tiny_features(256));
  const auto b = train_router(split.train, split.val, router_config(), tiny_features(256));
  EXPECT_EQ(a.weight_matrix, b.weight_matrix);
  EXPECT_EQ(a.domains, (std::vector<DomainId>{"alpha", "mid", "zeta"}));
  auto reversed = split.train;
  std::reverse(reversed.begin(), reversed.end());
  EXPECT_EQ(train_router(reversed, split.val, router_config(), tiny_features(256)).weight_matrix,
            a.weight_matrix);
}

TEST(TrainRouter, Errors) {
  const auto docs = test::synthetic(2, 10, 0.5, 13, 20, 10);
  const auto split = split_train_val(docs, {0.8, 13});
  DOGEN_EXPECT_ERROR(train_router(filter_domain(split.train, "d0"), split.val, router_config(),
                                  tiny_features()),
                     "at least 2 domains");
  auto val = split.val;
  val.front().domain = "unseen";
  DOGEN_EXPECT_ERROR(train_router(split.train, val, router_config(), tiny_features()),
                     "\"unseen\"");
}

TEST(RouterModel, ValidateAndIndex) {
  auto r = zero_router({"a", "b"}, tiny_features());
  EXPECT_EQ(r.index_of("b"), 1u);
  DOGEN_EXPECT_ERROR(r.index_of("c"), "unknown domain");
  r.weight_matrix(0, 0) = std::nan("");
  EXPECT_THROW(r.validate(), Error);
  r = zero_router({"a", "a"}, tiny_features());
  DOGEN_EXPECT_ERROR(r.validate(), "unique");
}

}  // namespace
}  // namespace dogen
