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

#include "dogen/features.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cmath>

namespace dogen {
namespace {

struct CodePoint {
  UChar32 value;
  std::size_t begin;  // byte offsets into the source
  std::size_t end;
};

std::vector<CodePoint> decode_utf8(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    // Ill-formed sequences decode to U+FFFD so they behave as a symbol.
    if (c < 0) c = 0xFFFD;
    out.push_back({c, static_cast<std::size_t>(start), static_cast<std::size_t>(i)});
  }
  return out;
}

void append_utf8(std::string& out, UChar32 c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, c, error);
  if (!error) out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

}  // namespace

void FeaturizerConfig::validate() const {
  if (dims == 0 || (dims & (dims - 1)) != 0) throw Error("featurizer dims must be a power of two");
  if (ngram_orders.empty()) throw Error("featurizer needs at least one n-gram order");
  for (int n : ngram_orders) {
    if (n < 1) throw Error("n-gram orders must be >= 1");
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::string> tokenize(std::string_view text, bool lowercase) {
  const auto cps = decode_utf8(text);
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && u_isUWhiteSpace(cps[i].value)) ++i;
    std::size_t j = i;
    while (j < cps.size() && !u_isUWhiteSpace(cps[j].value)) ++j;
    std::size_t lo = i, hi = j;
    while (lo < hi && !u_isalnum(cps[lo].value)) ++lo;
    while (hi > lo && !u_isalnum(cps[hi - 1].value)) --hi;
    if (lo < hi) {
      std::string token;
      if (lowercase) {
        for (std::size_t k = lo; k < hi; ++k) append_utf8(token, u_tolower(cps[k].value));
      } else {
        token.assign(text.substr(cps[lo].begin, cps[hi - 1].end - cps[lo].begin));
      }
      tokens.push_back(std::move(token));
    }
    i = j;
  }
  return tokens;
}

FeatureVector ngram_counts(std::span<const std::string> tokens, const FeaturizerConfig& config) {
  config.validate();
  const std::uint64_t mask = config.dims - 1;
  std::vector<std::uint32_t> hashed;
  std::string gram;
  for (int order : config.ngram_orders) {
    const auto n = static_cast<std::size_t>(order);
    if (tokens.size() < n) continue;
    for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
      gram.clear();
      for (std::size_t k = 0; k < n; ++k) {
        if (k) gram.push_back('\x1f');
        gram += tokens[start + k];
      }
      hashed.push_back(static_cast<std::uint32_t>(fnv1a64(gram) & mask));
    }
  }
  std::sort(hashed.begin(), hashed.end());

  FeatureVector fv;
  fv.dims = config.dims;
  for (std::size_t i = 0; i < hashed.size();) {
    std::size_t j = i;
    while (j < hashed.size() && hashed[j] == hashed[i]) ++j;
    fv.entries.push_back({hashed[i], static_cast<double>(j - i)});
    i = j;
  }
  return fv;
}

FeatureVector featurize(std::string_view text, const FeaturizerConfig& config) {
  const auto tokens = tokenize(text, config.lowercase);
  FeatureVector fv = ngram_counts(tokens, config);
  if (config.tf_scaling == TfScaling::log1p_count) {
    for (auto& e : fv.entries) e.value = std::log1p(e.value);
  }
  const double norm = l2_norm(fv);
  if (norm > 0.0) {
    for (auto& e : fv.entries) e.value /= norm;
  }
  return fv;
}

double dot(const FeatureVector& fv, std::span<const double> dense) {
  if (dense.size() != static_cast<std::size_t>(fv.dims) + 1) {
    throw Error("dot: dense vector has length " + std::to_string(dense.size()) + ", expected " +
                std::to_string(static_cast<std::size_t>(fv.dims) + 1));
  }
  double sum = 0.0;
  for (const auto& e : fv.entries) sum += e.value * dense[e.index];
  return sum + dense[fv.dims];
}

void axpy(double scale, const FeatureVector& fv, std::span<double> dense) {
  if (dense.size() != static_cast<std::size_t>(fv.dims) + 1) {
    throw Error("axpy: dense vector length does not match feature dims");
  }
  for (const auto& e : fv.entries) dense[e.index] += scale * e.value;
  dense[fv.dims] += scale;
}

double l2_norm(const FeatureVector& fv) {
  double sq = 0.0;
  for (const auto& e : fv.entries) sq += e.value * e.value;
  return std::sqrt(sq);
}

}  // namespace dogen
