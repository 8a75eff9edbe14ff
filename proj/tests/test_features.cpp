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
#include <random>

#include "dogen/features.hpp"
#include "support.hpp"

namespace dogen {
namespace {

using Tokens = std::vector<std::string>;

TEST(Fnv1a64, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 14695981039346656037ULL);
  EXPECT_EQ(fnv1a64("a"), 0xAF63DC4C8601EC8CULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171F73967E8ULL);
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Hello, world!", true), (Tokens{"hello", "world"}));
  EXPECT_EQ(tokenize("", true), Tokens{});
  EXPECT_EQ(tokenize("Person1: Hello.", true), (Tokens{"person1", "hello"}));
  EXPECT_EQ(tokenize("Hello, world!", false), (Tokens{"Hello", "world"}));
}

TEST(Tokenize, PunctuationOnlyPiecesDrop) {
  EXPECT_EQ(tokenize(" -- ... a ?! ", true), (Tokens{"a"}));
  EXPECT_EQ(tokenize("don't (stop)", true), (Tokens{"don't", "stop"}));
}

TEST(Tokenize, UnicodeWhitespaceAndCase) {
  // No-break, ideographic and em spaces all separate tokens.
  EXPECT_EQ(tokenize("a\xC2\xA0" "b\xE3\x80\x80" "c\xE2\x80\x83" "d", true),
            (Tokens{"a", "b", "c", "d"}));
  EXPECT_EQ(tokenize("\xC3\x89" "COLE \xCE\xA3\xCE\x99\xCE\x93\xCE\x9C\xCE\x91", true),
            (Tokens{"\xC3\xA9" "cole", "\xCF\x83\xCE\xB9\xCE\xB3\xCE\xBC\xCE\xB1"}));
  // Interior punctuation survives, only the edges are trimmed.
  EXPECT_EQ(tokenize("\xC2\xBFna\xC3\xAFve\xE2\x80\x94test?", true),
            (Tokens{"na\xC3\xAFve\xE2\x80\x94test"}));
}

TEST(Tokenize, InvalidUtf8DoesNotThrow) {
  EXPECT_NO_THROW(tokenize("ab\xFF\xFE cd", true));
  EXPECT_EQ(tokenize("ab\xFF\xFE cd", true).back(), "cd");
}

TEST(NgramCounts, UnigramCounts) {
  FeaturizerConfig fc;
  fc.ngram_orders = {1};
  fc.tf_scaling = TfScaling::raw_count;
  const auto toks = tokenize("a b a", true);
  const auto fv = ngram_counts(toks, fc);
  const auto mask = fc.dims - 1;
  const auto ha = static_cast<std::uint32_t>(fnv1a64("a") & mask);
  const auto hb = static_cast<std::uint32_t>(fnv1a64("b") & mask);
  ASSERT_EQ(fv.entries.size(), 2u);
  for (const auto& e : fv.entries) {
    if (e.index == ha) EXPECT_EQ(e.value, 2.0);
    else if (e.index == hb) EXPECT_EQ(e.value, 1.0);
    else ADD_FAILURE() << "unexpected index " << e.index;
  }
}

TEST(NgramCounts, BigramsJoinWithUnitSeparator) {
  FeaturizerConfig fc;
  fc.ngram_orders = {2};
  const auto toks = tokenize("x y z", true);
  const auto fv = ngram_counts(toks, fc);
  std::vector<std::uint32_t> expected{
      static_cast<std::uint32_t>(fnv1a64("x\x1Fy") & (fc.dims - 1)),
      static_cast<std::uint32_t>(fnv1a64("y\x1Fz") & (fc.dims - 1))};
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(fv.entries.size(), 2u);
  EXPECT_EQ(fv.entries[0].index, expected[0]);
  EXPECT_EQ(fv.entries[1].index, expected[1]);
}

TEST(Featurize, EmptyTextIsZeroVector) {
  const auto fv = featurize("", FeaturizerConfig{});
  EXPECT_TRUE(fv.entries.empty());
  EXPECT_EQ(fv.dims, FeaturizerConfig{}.dims);
  std::vector<double> dense(fv.dims + 1, 0.0);
  dense.back() = -0.3;
  EXPECT_EQ(dot(fv, dense), -0.3);
}

TEST(Featurize, LogScalingAndNormalization) {
  FeaturizerConfig fc;
  fc.ngram_orders = {1};
  const auto fv = featurize("a b a", fc);
  // Raw counts (2, 1) become (ln 3, ln 2), then unit length.
  const double n = std::sqrt(std::log(3.0) * std::log(3.0) + std::log(2.0) * std::log(2.0));
  const auto ha = static_cast<std::uint32_t>(fnv1a64("a") & (fc.dims - 1));
  for (const auto& e : fv.entries) {
    EXPECT_NEAR(e.value, (e.index == ha ? std::log(3.0) : std::log(2.0)) / n, 1e-15);
  }
}

TEST(Featurize, InvariantsOnRandomTexts) {
  std::mt19937_64 gen(8);
  const auto vocab = make_vocabulary("w", 50);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const auto len = 1 + gen() % 30;
    for (std::size_t i = 0; i < len; ++i) text += vocab[gen() % vocab.size()] + " ";
    FeaturizerConfig fc;
    fc.dims = 1u << (4 + gen() % 10);
    fc.tf_scaling = gen() % 2 ? TfScaling::raw_count : TfScaling::log1p_count;
    const auto fv = featurize(text, fc);
    EXPECT_NEAR(l2_norm(fv), 1.0, 1e-9);
    for (std::size_t i = 0; i < fv.entries.size(); ++i) {
      EXPECT_LT(fv.entries[i].index, fc.dims);
      EXPECT_GT(fv.entries[i].value, 0.0);
      if (i > 0) EXPECT_LT(fv.entries[i - 1].index, fv.entries[i].index);
    }
    EXPECT_EQ(featurize(text, fc), fv);
  }
}

TEST(Dot, Examples) {
  FeatureVector fv{8, {{0, 1.0}}};
  std::vector<double> e0(9, 0.0);
  e0[0] = 1.0;
  EXPECT_EQ(dot(fv, e0), 1.0);

  FeatureVector two{8, {{2, 0.5}, {7, 2.0}}};
  std::vector<double> dense(9, 0.0);
  dense[2] = 1.0;
  dense[7] = 0.25;
  dense[8] = 0.1;
  EXPECT_NEAR(dot(two, dense), 0.5 * 1.0 + 2.0 * 0.25 + 0.1, 1e-15);

  DOGEN_EXPECT_ERROR(dot(two, std::vector<double>(8, 0.0)), "length");
}

TEST(Dot, IsLinear) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto fv = test::random_feature_vector(gen, 64, 1 + gen() % 20);
    const auto u = test::random_vector(gen, 65, 1.0);
    const auto v = test::random_vector(gen, 65, 1.0);
    const double a = test::random_vector(gen, 1, 3.0)[0];
    const double b = test::random_vector(gen, 1, 3.0)[0];
    std::vector<double> w(65);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = a * u[i] + b * v[i];
    EXPECT_NEAR(dot(fv, w), a * dot(fv, u) + b * dot(fv, v), 1e-9);
  }
}

TEST(Axpy, AddsScaledEntriesAndBias) {
  FeatureVector fv{4, {{1, 2.0}, {3, 0.5}}};
  std::vector<double> dense(5, 1.0);
  axpy(2.0, fv, dense);
  EXPECT_EQ(dense, (std::vector<double>{1.0, 5.0, 1.0, 2.0, 3.0}));
}

TEST(FeaturizerConfig, Validation) {
  FeaturizerConfig fc;
  fc.dims = 1000;
  DOGEN_EXPECT_ERROR(fc.validate(), "power of two");
  fc.dims = 1024;
  fc.ngram_orders = {};
  EXPECT_THROW(fc.validate(), Error);
  fc.ngram_orders = {1, 0};
  EXPECT_THROW(fc.validate(), Error);
}

TEST(Featurize, IndependentOfOtherDocuments) {
  // No corpus-level state: features are the same before and after
  // featurizing other texts, in any order.
  const auto docs = test::synthetic(2, 10, 0.5, 3);
  std::vector<FeatureVector> first;
  for (const auto& d : docs) first.push_back(featurize(d.text, {}));
  for (std::size_t i = docs.size(); i-- > 0;) EXPECT_EQ(featurize(docs[i].text, {}), first[i]);
}

}  // namespace
}  // namespace dogen
