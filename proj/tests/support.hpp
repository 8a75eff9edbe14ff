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

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dogen/corpus.hpp"
#include "dogen/features.hpp"
#include "dogen/io.hpp"
#include "dogen/pipeline.hpp"
#include "json.hpp"

// Asserts that `stmt` throws dogen::Error whose message contains `needle`.
#define DOGEN_EXPECT_ERROR(stmt, needle)                                       \
  do {                                                                         \
    try {                                                                      \
      stmt;                                                                    \
      ADD_FAILURE() << "expected dogen::Error from: " #stmt;                   \
    } catch (const ::dogen::Error& e) {                                        \
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos)         \
          << "message: " << e.what();                                          \
    }                                                                          \
  } while (0)

namespace dogen::test {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(DOGEN_TEST_DATA) / name;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "dogen") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline void write_docs(const std::filesystem::path& path, const std::vector<Document>& docs) {
  std::ostringstream out;
  write_jsonl(out, docs);
  write_text(path, out.str());
}

struct BalanceCounts {
  CorpusManifest before;
  CorpusManifest balanced;
};

inline CorpusManifest manifest_from_counts(const nlohmann::json& j) {
  CorpusManifest m;
  for (const auto& [domain, c] : j.items()) {
    ClassCounts counts{c.at("human").get<std::size_t>(), c.at("machine").get<std::size_t>()};
    m.domains[domain] = counts;
    m.total += counts.human + counts.machine;
  }
  return m;
}

inline BalanceCounts load_balance_counts() {
  std::ifstream in(data_path("balance_counts.json"));
  const auto j = nlohmann::json::parse(in);
  return {manifest_from_counts(j.at("before")), manifest_from_counts(j.at("balanced"))};
}

// Id-only stub documents with the given per-domain counts, classes
// interleaved so that balancing has to pick across the whole domain.
inline std::vector<Document> stub_corpus(const CorpusManifest& m) {
  std::vector<Document> docs;
  docs.reserve(m.total);
  for (const auto& [domain, c] : m.domains) {
    std::size_t h = 0, k = 0;
    while (h < c.human || k < c.machine) {
      const bool take_machine = k < c.machine && (h >= c.human || (h + k) % 3 == 2);
      Document d;
      d.domain = domain;
      d.text = "x";
      if (take_machine) {
        d.id = domain + "/m" + std::to_string(k++);
        d.label = ClassLabel::machine;
      } else {
        d.id = domain + "/h" + std::to_string(h++);
        d.label = ClassLabel::human;
      }
      docs.push_back(std::move(d));
    }
  }
  return docs;
}

// Synthetic corpus with disjoint per-domain vocabularies.
inline std::vector<Document> synthetic(std::size_t domains, std::size_t docs_per_class,
                                       double shift, std::uint64_t seed,
                                       std::size_t vocab = 200, std::size_t length = 40,
                                       const std::string& prefix = "") {
  SynthRequest req;
  req.num_domains = domains;
  req.docs_per_class = docs_per_class;
  req.machine_shift = shift;
  req.seed = seed;
  req.vocab_size = vocab;
  req.doc_length = length;
  req.id_prefix = prefix;
  return synthesize_corpus(synth_spec(req));
}

// Random sparse vector with `nnz` distinct indices and positive values.
inline FeatureVector random_feature_vector(std::mt19937_64& rng, std::uint32_t dims,
                                           std::size_t nnz) {
  std::vector<std::uint32_t> idx(dims);
  for (std::uint32_t i = 0; i < dims; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(std::min<std::size_t>(nnz, dims));
  std::sort(idx.begin(), idx.end());
  std::uniform_real_distribution<double> value(0.05, 1.0);
  FeatureVector fv;
  fv.dims = dims;
  for (auto i : idx) fv.entries.push_back({i, value(rng)});
  return fv;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

}  // namespace dogen::test
