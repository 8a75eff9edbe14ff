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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dogen/common.hpp"

namespace dogen {

struct Document {
  std::string id;
  std::string text;
  ClassLabel label = ClassLabel::human;
  DomainId domain;
  std::optional<std::string> generator;

  friend bool operator==(const Document&, const Document&) = default;
};

struct ClassCounts {
  std::size_t human = 0;
  std::size_t machine = 0;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct CorpusManifest {
  std::map<DomainId, ClassCounts> domains;
  std::size_t total = 0;

  friend bool operator==(const CorpusManifest&, const CorpusManifest&) = default;
};

struct SplitSpec {
  double train_fraction = 0.9;
  std::uint64_t seed = 0;
};

struct SyntheticDomain {
  DomainId id;
  std::vector<std::string> vocabulary;
  std::size_t doc_length = 0;
  std::size_t docs_per_class = 0;
};

struct SyntheticSpec {
  std::vector<SyntheticDomain> domains;
  // Probability mass moved onto the class's preferred half of the vocabulary:
  // a token falls in the preferred half with probability (1 + shift) / 2.
  double machine_shift = 0.5;
  std::uint64_t seed = 0;
  // Prepended to generated document ids; lets test corpora avoid id clashes.
  std::string id_prefix;
};

// A scoring input: only id and text are required.
struct TextRecord {
  std::string id;
  std::string text;
};

// --- JSONL ---------------------------------------------------------------

// Reads one Document per non-blank line. Errors name the source and line.
std::vector<Document> parse_jsonl(std::istream& in, const std::string& source = "<stream>");
std::vector<Document> load_jsonl(const std::filesystem::path& path);

std::vector<TextRecord> parse_text_records(std::istream& in, const std::string& source = "<stream>");
std::vector<TextRecord> load_text_records(const std::filesystem::path& path);

// Canonical single-line serialization: keys id, text, label, domain[, generator].
std::string to_jsonl_line(const Document& doc);
void write_jsonl(std::ostream& out, const std::vector<Document>& docs);

// --- Balancing and splitting ---------------------------------------------

// Down-samples the majority class of every domain to the minority count.
// Output is grouped by domain in first-appearance order; retained documents
// keep their original relative order.
std::vector<Document> balance_per_domain(const std::vector<Document>& docs, std::uint64_t seed);

// Down-samples the globally larger class to the global minority count,
// ignoring domains. Output keeps original relative order.
std::vector<Document> balance_global(const std::vector<Document>& docs, std::uint64_t seed);

struct TrainValSplit {
  std::vector<Document> train;
  std::vector<Document> val;
};

// Per domain: seeded permutation, first floor(fraction * n) to train.
TrainValSplit split_train_val(const std::vector<Document>& docs, const SplitSpec& spec);

std::vector<Document> synthesize_corpus(const SyntheticSpec& spec);

// Vocabulary of `size` tokens "<prefix>0", "<prefix>1", ...
std::vector<std::string> make_vocabulary(const std::string& prefix, std::size_t size);

// Vocabulary whose first half is the union of both parents' first halves and
// whose second half is the union of their second halves, so a synthetic
// domain built on it draws half its tokens from each parent while keeping
// each class's preferred half aligned with the parents'.
std::vector<std::string> mixed_vocabulary(const std::vector<std::string>& a,
                                          const std::vector<std::string>& b);

CorpusManifest manifest(const std::vector<Document>& docs);

// {"domains": {<domain>: {"human": n, "machine": n}}, "total": n}
std::string manifest_to_json(const CorpusManifest& m);

// Distinct domains in first-appearance order.
std::vector<DomainId> domains_in_order(const std::vector<Document>& docs);

std::vector<Document> filter_domain(const std::vector<Document>& docs, const DomainId& domain);

}  // namespace dogen
