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

#include "dogen/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "dogen/rng.hpp"
#include "json.hpp"

namespace dogen {
namespace {

using nlohmann::json;

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; });
}

[[noreturn]] void fail_at(const std::string& source, std::size_t line, const std::string& what) {
  throw Error(source + ":" + std::to_string(line) + ": " + what);
}

std::string required_string(const json& obj, const char* key, const std::string& source,
                            std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail_at(source, line, std::string("missing required key \"") + key + "\"");
  if (!it->is_string()) fail_at(source, line, std::string("key \"") + key + "\" must be a string");
  auto value = it->get<std::string>();
  if (value.empty()) fail_at(source, line, std::string("empty ") + key);
  return value;
}

json parse_object(const std::string& text, const std::string& source, std::size_t line) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    fail_at(source, line, std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) fail_at(source, line, "expected a JSON object");
  return obj;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

std::vector<Document> parse_jsonl(std::istream& in, const std::string& source) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    const json obj = parse_object(text, source, line);
    Document doc;
    doc.id = required_string(obj, "id", source, line);
    doc.text = required_string(obj, "text", source, line);
    const auto label = required_string(obj, "label", source, line);
    if (label != "human" && label != "machine") {
      fail_at(source, line, "label must be \"human\" or \"machine\", got \"" + label + "\"");
    }
    doc.label = parse_label(label);
    doc.domain = required_string(obj, "domain", source, line);
    if (const auto it = obj.find("generator"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) fail_at(source, line, "key \"generator\" must be a string");
      doc.generator = it->get<std::string>();
    }
    if (!seen.insert(doc.id).second) fail_at(source, line, "duplicate id \"" + doc.id + "\"");
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> load_jsonl(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_jsonl(in, path.string());
}

std::vector<TextRecord> parse_text_records(std::istream& in, const std::string& source) {
  std::vector<TextRecord> records;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    const json obj = parse_object(text, source, line);
    TextRecord rec;
    rec.id = required_string(obj, "id", source, line);
    const auto it = obj.find("text");
    if (it == obj.end() || !it->is_string()) fail_at(source, line, "missing required key \"text\"");
    rec.text = it->get<std::string>();
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<TextRecord> load_text_records(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_text_records(in, path.string());
}

std::string to_jsonl_line(const Document& doc) {
  nlohmann::ordered_json obj;
  obj["id"] = doc.id;
  obj["text"] = doc.text;
  obj["label"] = to_string(doc.label);
  obj["domain"] = doc.domain;
  if (doc.generator) obj["generator"] = *doc.generator;
  return obj.dump();
}

void write_jsonl(std::ostream& out, const std::vector<Document>& docs) {
  for (const auto& doc : docs) out << to_jsonl_line(doc) << '\n';
}

std::vector<DomainId> domains_in_order(const std::vector<Document>& docs) {
  std::vector<DomainId> order;
  std::unordered_set<DomainId> seen;
  for (const auto& doc : docs) {
    if (seen.insert(doc.domain).second) order.push_back(doc.domain);
  }
  return order;
}

std::vector<Document> filter_domain(const std::vector<Document>& docs, const DomainId& domain) {
  std::vector<Document> out;
  for (const auto& doc : docs) {
    if (doc.domain == domain) out.push_back(doc);
  }
  return out;
}

std::vector<Document> balance_per_domain(const std::vector<Document>& docs, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Document> out;
  out.reserve(docs.size());
  for (const auto& domain : domains_in_order(docs)) {
    std::vector<std::size_t> human, machine;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (docs[i].domain != domain) continue;
      (docs[i].label == ClassLabel::machine ? machine : human).push_back(i);
    }
    if (human.empty() || machine.empty()) {
      throw Error("cannot balance domain \"" + domain + "\": it has no " +
                  (human.empty() ? "human" : "machine") + " documents");
    }
    std::vector<std::size_t> keep;
    if (human.size() == machine.size()) {
      keep = human;
      keep.insert(keep.end(), machine.begin(), machine.end());
    } else {
      auto& major = human.size() > machine.size() ? human : machine;
      auto& minor = human.size() > machine.size() ? machine : human;
      for (auto pick : sample_without_replacement(major.size(), minor.size(), rng)) {
        keep.push_back(major[pick]);
      }
      keep.insert(keep.end(), minor.begin(), minor.end());
    }
    std::sort(keep.begin(), keep.end());
    for (auto i : keep) out.push_back(docs[i]);
  }
  return out;
}

std::vector<Document> balance_global(const std::vector<Document>& docs, std::uint64_t seed) {
  std::vector<std::size_t> human, machine;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    (docs[i].label == ClassLabel::machine ? machine : human).push_back(i);
  }
  if (human.empty() || machine.empty()) {
    throw Error(std::string("cannot balance globally: corpus has no ") +
                (human.empty() ? "human" : "machine") + " documents");
  }
  if (human.size() == machine.size()) return docs;
  SplitMix64 rng(seed);
  auto& major = human.size() > machine.size() ? human : machine;
  auto& minor = human.size() > machine.size() ? machine : human;
  std::vector<std::size_t> keep = minor;
  for (auto pick : sample_without_replacement(major.size(), minor.size(), rng)) {
    keep.push_back(major[pick]);
  }
  std::sort(keep.begin(), keep.end());
  std::vector<Document> out;
  out.reserve(keep.size());
  for (auto i : keep) out.push_back(docs[i]);
  return out;
}

TrainValSplit split_train_val(const std::vector<Document>& docs, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw Error("train_fraction must lie strictly between 0 and 1");
  }
  if (docs.empty()) throw Error("cannot split an empty corpus");
  SplitMix64 rng(spec.seed);
  std::vector<char> to_train(docs.size(), 0);
  for (const auto& domain : domains_in_order(docs)) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (docs[i].domain == domain) members.push_back(i);
    }
    if (members.size() < 2) {
      throw Error("cannot split domain \"" + domain + "\": fewer than 2 documents");
    }
    // The small slack keeps exact products such as 0.29 * 100 from flooring low.
    const auto n = static_cast<double>(members.size());
    const auto n_train = static_cast<std::size_t>(std::floor(spec.train_fraction * n + 1e-9));
    if (n_train == 0) {
      throw Error("cannot split domain \"" + domain + "\": train split would be empty");
    }
    const auto order = permutation(members.size(), rng);
    for (std::size_t j = 0; j < n_train; ++j) to_train[members[order[j]]] = 1;
  }
  TrainValSplit split;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    (to_train[i] ? split.train : split.val).push_back(docs[i]);
  }
  return split;
}

std::vector<std::string> make_vocabulary(const std::string& prefix, std::size_t size) {
  std::vector<std::string> vocab;
  vocab.reserve(size);
  for (std::size_t i = 0; i < size; ++i) vocab.push_back(prefix + std::to_string(i));
  return vocab;
}

std::vector<std::string> mixed_vocabulary(const std::vector<std::string>& a,
                                          const std::vector<std::string>& b) {
  const auto half_a = a.size() / 2;
  const auto half_b = b.size() / 2;
  std::vector<std::string> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.begin() + half_a);
  out.insert(out.end(), b.begin(), b.begin() + half_b);
  out.insert(out.end(), a.begin() + half_a, a.end());
  out.insert(out.end(), b.begin() + half_b, b.end());
  return out;
}

std::vector<Document> synthesize_corpus(const SyntheticSpec& spec) {
  if (spec.domains.size() < 2) throw Error("synthetic corpus needs at least 2 domains");
  if (!(spec.machine_shift > 0.0 && spec.machine_shift <= 1.0)) {
    throw Error("machine_shift must lie in (0, 1]");
  }
  std::set<DomainId> ids;
  for (const auto& d : spec.domains) {
    if (d.id.empty()) throw Error("synthetic domain id must be nonempty");
    if (!ids.insert(d.id).second) throw Error("duplicate synthetic domain \"" + d.id + "\"");
    if (d.vocabulary.empty()) throw Error("synthetic domain \"" + d.id + "\" has an empty vocabulary");
    if (d.doc_length == 0 || d.docs_per_class == 0) {
      throw Error("synthetic domain \"" + d.id + "\" needs positive doc_length and docs_per_class");
    }
  }

  SplitMix64 rng(spec.seed);
  const double preferred = (1.0 + spec.machine_shift) / 2.0;
  std::vector<Document> docs;
  for (const auto& d : spec.domains) {
    const std::size_t half = d.vocabulary.size() / 2;
    for (const ClassLabel label : {ClassLabel::human, ClassLabel::machine}) {
      // Machine prefers [0, half), human prefers [half, V).
      const bool machine = label == ClassLabel::machine;
      for (std::size_t n = 0; n < d.docs_per_class; ++n) {
        std::string text;
        for (std::size_t t = 0; t < d.doc_length; ++t) {
          const bool in_preferred = rng.next_double() < preferred;
          bool first_half = machine == in_preferred;
          if (half == 0) first_half = false;
          const std::size_t lo = first_half ? 0 : half;
          const std::size_t width = first_half ? half : d.vocabulary.size() - half;
          const auto token = lo + static_cast<std::size_t>(rng.uniform_index(width));
          if (t) text += ' ';
          text += d.vocabulary[token];
        }
        Document doc;
        doc.id = spec.id_prefix + d.id + (machine ? "-m-" : "-h-") + std::to_string(n);
        doc.text = std::move(text);
        doc.label = label;
        doc.domain = d.id;
        docs.push_back(std::move(doc));
      }
    }
  }
  return docs;
}

CorpusManifest manifest(const std::vector<Document>& docs) {
  CorpusManifest m;
  for (const auto& doc : docs) {
    auto& counts = m.domains[doc.domain];
    (doc.label == ClassLabel::machine ? counts.machine : counts.human) += 1;
  }
  m.total = docs.size();
  return m;
}

std::string manifest_to_json(const CorpusManifest& m) {
  nlohmann::ordered_json domains = nlohmann::ordered_json::object();
  for (const auto& [domain, counts] : m.domains) {
    nlohmann::ordered_json cell;
    cell["human"] = counts.human;
    cell["machine"] = counts.machine;
    domains[domain] = cell;
  }
  nlohmann::ordered_json out;
  out["domains"] = domains;
  out["total"] = m.total;
  return out.dump(2);
}

}  // namespace dogen
