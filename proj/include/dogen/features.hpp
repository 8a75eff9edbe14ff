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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dogen/common.hpp"

namespace dogen {

enum class TfScaling { raw_count, log1p_count };

struct FeaturizerConfig {
  std::vector<int> ngram_orders{1, 2};
  std::uint32_t dims = 1u << 18;
  bool lowercase = true;
  TfScaling tf_scaling = TfScaling::log1p_count;

  // Throws unless dims is a power of two and every order is >= 1.
  void validate() const;

  friend bool operator==(const FeaturizerConfig&, const FeaturizerConfig&) = default;
};

// Sparse nonnegative vector. Every classifier also sees an implicit bias
// coordinate of value 1 at index `dims`, so dense weight vectors have
// length dims + 1.
struct FeatureVector {
  struct Entry {
    std::uint32_t index;
    double value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::uint32_t dims = 0;
  std::vector<Entry> entries;  // strictly increasing index, value > 0

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes);

// Whitespace split, trim non-alphanumerics at both ends of each piece, drop
// empties, optional Unicode simple lowercasing. Input is UTF-8.
std::vector<std::string> tokenize(std::string_view text, bool lowercase);

// Hashed n-gram counts before tf scaling and normalization, sorted by index.
// n-gram tokens are joined with the unit separator byte 0x1F.
FeatureVector ngram_counts(std::span<const std::string> tokens, const FeaturizerConfig& config);

FeatureVector featurize(std::string_view text, const FeaturizerConfig& config);

// Sum of value * dense[index] plus the bias dense[dims].
double dot(const FeatureVector& fv, std::span<const double> dense);

// dense[index] += scale * value for each entry, and dense[dims] += scale.
void axpy(double scale, const FeatureVector& fv, std::span<double> dense);

double l2_norm(const FeatureVector& fv);

}  // namespace dogen
