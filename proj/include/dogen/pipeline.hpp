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

// Command implementations behind the `dogen` CLI. Each command reads and
// writes files under RunConfig::out_dir; all outputs are deterministic
// given the config and seed, and are written atomically.
//
// Layout of out_dir:
//   prepared/{balanced,train,val}.jsonl, prepared/manifest*.json,
//   prepared/splits/<domain>.{train,val}.jsonl
//   experts/<domain>.json, experts_summary.json, global_expert.json
//   router.json, router_summary.json
//   stacker.json, stacker_weights.{md,csv}
//   jt_scratch.json, jt_domain.json, joint_<mode>_summary.json
//   scores/<strategy>.jsonl, report.{md,csv,json}, router_analysis.{md,csv,json}

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dogen/corpus.hpp"
#include "dogen/ensemble.hpp"
#include "dogen/expert.hpp"
#include "dogen/features.hpp"
#include "dogen/metrics.hpp"

namespace dogen {

enum class BalanceMode { per_domain, global, unbalanced };

inline constexpr const char* kConfigSchema = "dogen-config/1";

struct RunConfig {
  std::filesystem::path train_corpus;
  std::filesystem::path test_corpus;
  BalanceMode balancing = BalanceMode::per_domain;
  double train_fraction = 0.9;
  FeaturizerConfig featurizer;
  TrainConfig expert_train;
  TrainConfig router_train;
  TrainConfig joint_train;
  std::size_t k = 2;
  std::filesystem::path out_dir = "out";
  std::vector<std::string> strategies{"dogen",    "equal_vote", "weighted_vote",
                                      "jt_scratch", "jt_domain", "global_expert"};
  // Drives balancing, splitting and every training shuffle.
  std::uint64_t seed = 0;

  // Copies `seed` into the per-component training configs.
  void apply_seed(std::uint64_t s);
  void validate() const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& config);

// --- prepare -------------------------------------------------------------------

struct PrepareResult {
  CorpusManifest before;
  CorpusManifest after;
  std::size_t n_train = 0;
  std::size_t n_val = 0;
};

PrepareResult cmd_prepare(const RunConfig& config);

// --- train-experts -------------------------------------------------------------

struct ExpertReport {
  DomainId domain;
  bool ok = false;
  std::string error;
  double val_loss = 0.0;
  std::optional<double> val_auroc;
  std::size_t epochs_run = 0;
  // Expert AUROC on each val domain (diagonal dominance check).
  std::vector<std::pair<DomainId, std::optional<double>>> cross_domain_auroc;
};

// Trains one expert per domain (independent jobs, failures isolated per
// domain) and, when "global_expert" is a configured strategy, the pooled
// baseline.
std::vector<ExpertReport> cmd_train_experts(const RunConfig& config);

// --- train-router ----------------------------------------------------------------

struct RouterReport {
  double initial_val_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  std::size_t epochs_run = 0;
};

RouterReport cmd_train_router(const RunConfig& config);

// --- fit-stacker ----------------------------------------------------------------

StackerModel cmd_fit_stacker(const RunConfig& config);

// Table rows (expert, normalized weight), heaviest first.
std::vector<std::pair<DomainId, double>> stacker_weight_table(const StackerModel& stacker,
                                                              const std::vector<DomainId>& experts);

// --- joint-train ------------------------------------------------------------------

enum class JointMode { scratch, domain };

EnsembleModel cmd_joint_train(const RunConfig& config, JointMode mode);

// --- score -----------------------------------------------------------------------

struct ScoreRequest {
  // dogen | equal_vote | weighted_vote | jt_scratch | jt_domain |
  // global_expert | expert:<domain>
  std::string strategy = "dogen";
  std::filesystem::path input;
  std::optional<std::filesystem::path> output;    // default out_dir/scores/<strategy>.jsonl
  std::optional<std::size_t> k;                   // overrides the model's k
  std::optional<std::filesystem::path> ensemble;  // explicit ensemble file
};

std::filesystem::path cmd_score(const RunConfig& config, const ScoreRequest& request);

// Assembles experts/ and router.json into the DoGEN ensemble at config.k.
EnsembleModel load_dogen_ensemble(const RunConfig& config);

// --- evaluate ----------------------------------------------------------------------

struct EvaluateRequest {
  std::vector<std::filesystem::path> score_files;
  std::filesystem::path records;
  GroupBy group_by = GroupBy::domain;
  std::optional<double> tpr_target = 0.05;
};

EvalReport cmd_evaluate(const RunConfig& config, const EvaluateRequest& request);

// --- analyze-router ----------------------------------------------------------------

struct AnalyzeRequest {
  std::filesystem::path records;
  std::optional<std::filesystem::path> ensemble;  // default: DoGEN from out_dir
};

RouterAnalysis cmd_analyze_router(const RunConfig& config, const AnalyzeRequest& request);

// --- synth ---------------------------------------------------------------------------

struct SynthRequest {
  std::size_t num_domains = 4;
  std::size_t vocab_size = 200;
  std::size_t doc_length = 40;
  std::size_t docs_per_class = 400;
  double machine_shift = 0.8;
  std::uint64_t seed = 42;
  std::string id_prefix;
  // Adds a domain whose vocabulary mixes these two generated domains.
  std::optional<std::pair<std::size_t, std::size_t>> mix;
  bool only_mix = false;  // emit only the mixed domain's documents
  std::filesystem::path output;
};

SyntheticSpec synth_spec(const SynthRequest& request);
std::filesystem::path cmd_synth(const SynthRequest& request);

// Filesystem-safe form of a domain id.
std::string file_stem_for(const DomainId& domain);

}  // namespace dogen
