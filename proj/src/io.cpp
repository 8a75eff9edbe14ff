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

#include "dogen/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace dogen {
namespace {

void expect_schema(const Json& j, const char* schema) {
  if (!j.is_object()) throw Error(std::string("expected a ") + schema + " document");
  const auto it = j.find("schema");
  if (it == j.end() || !it->is_string() || it->get<std::string>() != schema) {
    throw Error(std::string("schema mismatch: expected \"") + schema + "\", got " +
                (it == j.end() ? std::string("none") : it->dump()));
  }
}

const Json& field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw Error(std::string("model file is missing \"") + key + "\"");
  return *it;
}

std::vector<double> doubles(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw Error(std::string(what) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Json featurizer_to_json(const FeaturizerConfig& fc) {
  Json j;
  j["ngram_orders"] = fc.ngram_orders;
  j["dims"] = fc.dims;
  j["lowercase"] = fc.lowercase;
  j["tf_scaling"] = fc.tf_scaling == TfScaling::raw_count ? "raw_count" : "log1p_count";
  return j;
}

FeaturizerConfig featurizer_from_json(const Json& j) {
  FeaturizerConfig fc;
  if (!j.is_object()) throw Error("featurizer must be an object");
  if (j.contains("ngram_orders")) fc.ngram_orders = j.at("ngram_orders").get<std::vector<int>>();
  if (j.contains("dims")) fc.dims = j.at("dims").get<std::uint32_t>();
  if (j.contains("lowercase")) fc.lowercase = j.at("lowercase").get<bool>();
  if (j.contains("tf_scaling")) {
    const auto s = j.at("tf_scaling").get<std::string>();
    if (s == "raw_count") {
      fc.tf_scaling = TfScaling::raw_count;
    } else if (s == "log1p_count") {
      fc.tf_scaling = TfScaling::log1p_count;
    } else {
      throw Error("unknown tf_scaling \"" + s + "\"");
    }
  }
  fc.validate();
  return fc;
}

Json train_config_to_json(const TrainConfig& tc) {
  Json j;
  j["learning_rate"] = tc.learning_rate;
  j["batch_size"] = tc.batch_size;
  j["max_epochs"] = tc.max_epochs;
  j["eval_every_steps"] = tc.eval_every_steps;
  j["early_stopping_patience"] = tc.early_stopping_patience;
  j["seed"] = tc.seed;
  j["l2_penalty"] = tc.l2_penalty;
  return j;
}

TrainConfig train_config_from_json(const Json& j, TrainConfig tc) {
  if (!j.is_object()) throw Error("training config must be an object");
  if (j.contains("learning_rate")) tc.learning_rate = j.at("learning_rate").get<double>();
  if (j.contains("batch_size")) tc.batch_size = j.at("batch_size").get<std::size_t>();
  if (j.contains("max_epochs")) tc.max_epochs = j.at("max_epochs").get<std::size_t>();
  if (j.contains("eval_every_steps")) tc.eval_every_steps = j.at("eval_every_steps").get<std::size_t>();
  if (j.contains("early_stopping_patience")) {
    tc.early_stopping_patience = j.at("early_stopping_patience").get<std::size_t>();
  }
  if (j.contains("seed")) tc.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("l2_penalty")) tc.l2_penalty = j.at("l2_penalty").get<double>();
  tc.validate();
  return tc;
}

Json expert_to_json(const ExpertModel& m) {
  Json j;
  j["schema"] = kExpertSchema;
  j["domain"] = m.domain;
  j["featurizer"] = featurizer_to_json(m.featurizer);
  j["weights"] = m.weights;
  Json meta;
  meta["epochs_run"] = m.train_meta.epochs_run;
  meta["best_val_loss"] = m.train_meta.best_val_loss;
  meta["seed"] = m.train_meta.seed;
  j["train_meta"] = meta;
  return j;
}

ExpertModel expert_from_json(const Json& j) {
  expect_schema(j, kExpertSchema);
  ExpertModel m;
  m.domain = field(j, "domain").get<std::string>();
  m.featurizer = featurizer_from_json(field(j, "featurizer"));
  m.weights = doubles(field(j, "weights"), "weights");
  if (const auto it = j.find("train_meta"); it != j.end()) {
    m.train_meta.epochs_run = it->value("epochs_run", std::size_t{0});
    m.train_meta.best_val_loss = it->value("best_val_loss", 0.0);
    m.train_meta.seed = it->value("seed", std::uint64_t{0});
  }
  m.validate();
  return m;
}

Json router_to_json(const RouterModel& m) {
  Json j;
  j["schema"] = kRouterSchema;
  j["domains"] = m.domains;
  j["featurizer"] = featurizer_to_json(m.featurizer);
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.weight_matrix.rows(); ++i) {
    const auto row = m.weight_matrix.row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["weight_matrix"] = std::move(rows);
  return j;
}

RouterModel router_from_json(const Json& j) {
  expect_schema(j, kRouterSchema);
  RouterModel m;
  m.domains = field(j, "domains").get<std::vector<std::string>>();
  m.featurizer = featurizer_from_json(field(j, "featurizer"));
  const auto& rows = field(j, "weight_matrix");
  if (!rows.is_array() || rows.size() != m.domains.size()) {
    throw Error("router weight_matrix must have one row per domain");
  }
  m.weight_matrix = Matrix(m.domains.size(), static_cast<std::size_t>(m.featurizer.dims) + 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = doubles(rows[i], "weight_matrix row");
    if (row.size() != m.weight_matrix.cols()) throw Error("router row length does not match dims + 1");
    std::copy(row.begin(), row.end(), m.weight_matrix.row(i).begin());
  }
  m.validate();
  return m;
}

Json ensemble_to_json(const EnsembleModel& m) {
  Json j;
  j["schema"] = kEnsembleSchema;
  j["k"] = m.k;
  j["router"] = router_to_json(m.router);
  Json experts = Json::array();
  for (const auto& e : m.experts) experts.push_back(expert_to_json(e));
  j["experts"] = std::move(experts);
  return j;
}

EnsembleModel ensemble_from_json(const Json& j) {
  expect_schema(j, kEnsembleSchema);
  EnsembleModel m;
  m.k = field(j, "k").get<std::size_t>();
  m.router = router_from_json(field(j, "router"));
  for (const auto& e : field(j, "experts")) m.experts.push_back(expert_from_json(e));
  m.validate();
  return m;
}

Json stacker_to_json(const StackerModel& m, const std::vector<DomainId>& experts) {
  Json j;
  j["schema"] = kStackerSchema;
  j["experts"] = experts;
  j["coefficients"] = m.coefficients;
  j["intercept"] = m.intercept;
  j["means"] = m.means;
  j["stds"] = m.stds;
  j["class_weighting"] = "balanced";
  return j;
}

StackerModel stacker_from_json(const Json& j, std::vector<DomainId>* experts) {
  expect_schema(j, kStackerSchema);
  StackerModel m;
  m.coefficients = doubles(field(j, "coefficients"), "coefficients");
  m.intercept = field(j, "intercept").get<double>();
  m.means = doubles(field(j, "means"), "means");
  m.stds = doubles(field(j, "stds"), "stds");
  m.validate();
  if (experts) {
    *experts = j.contains("experts") ? j.at("experts").get<std::vector<std::string>>()
                                     : std::vector<std::string>{};
  }
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void write_json(const std::filesystem::path& path, const Json& j, int indent) {
  write_file_atomic(path, j.dump(indent) + "\n");
}

ExpertModel load_expert(const std::filesystem::path& path) {
  try {
    return expert_from_json(read_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

RouterModel load_router(const std::filesystem::path& path) {
  try {
    return router_from_json(read_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

EnsembleModel load_ensemble(const std::filesystem::path& path) {
  try {
    return ensemble_from_json(read_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace dogen
