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

// dogen: command-line driver for data preparation, training, scoring,
// evaluation and router analysis.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dogen/pipeline.hpp"

namespace {

dogen::GroupBy parse_group_by(const std::string& s) {
  if (s == "domain") return dogen::GroupBy::domain;
  if (s == "generator") return dogen::GroupBy::generator;
  if (s == "none") return dogen::GroupBy::none;
  throw dogen::Error("--group-by must be domain, generator or none");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DoGEN: domain-gated ensembles of machine-text detectors"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  app.add_option("--config", config_path, "Run configuration (dogen-config/1 JSON)");
  app.add_option("--seed", seed, "Seed for balancing, splitting and training");
  app.add_option("--out", out_dir, "Output directory");

  auto* prepare = app.add_subcommand("prepare", "Balance the training corpus and write train/val splits");
  std::string corpus;
  std::string balancing;
  prepare->add_option("--corpus", corpus, "Training corpus JSONL (overrides config)");
  prepare->add_option("--balancing", balancing, "per_domain | global | unbalanced");

  auto* train_experts = app.add_subcommand("train-experts", "Train one expert per domain");
  auto* train_router = app.add_subcommand("train-router", "Train the domain router");
  auto* fit_stacker = app.add_subcommand("fit-stacker", "Fit the weighted-vote stacker");

  auto* joint = app.add_subcommand("joint-train", "Train experts and router end to end");
  std::string init_mode = "scratch";
  joint->add_option("--init", init_mode, "scratch | domain")->check(CLI::IsMember({"scratch", "domain"}));

  auto* score = app.add_subcommand("score", "Score a JSONL file with one strategy");
  dogen::ScoreRequest score_req;
  std::string score_input, score_output, score_ensemble;
  std::optional<std::size_t> score_k;
  score->add_option("--strategy", score_req.strategy,
                    "dogen | equal_vote | weighted_vote | jt_scratch | jt_domain | global_expert | "
                    "expert:<domain>");
  score->add_option("--input", score_input, "Documents to score (JSONL with id and text)")->required();
  score->add_option("--output", score_output, "Output scores JSONL");
  score->add_option("--k", score_k, "Override the gating k");
  score->add_option("--ensemble", score_ensemble, "Score with this ensemble file");

  auto* evaluate = app.add_subcommand("evaluate", "AUROC / TPR@FPR report over score files");
  dogen::EvaluateRequest eval_req;
  std::vector<std::string> score_files;
  std::string records, group_by = "domain";
  double tpr_target = 0.05;
  bool no_tpr = false;
  evaluate->add_option("--scores", score_files, "Score JSONL files")->required();
  evaluate->add_option("--records", records, "Labeled corpus JSONL")->required();
  evaluate->add_option("--group-by", group_by, "domain | generator | none");
  evaluate->add_option("--tpr-fpr", tpr_target, "Target FPR for the TPR column");
  evaluate->add_flag("--no-tpr", no_tpr, "Report AUROC only");

  auto* analyze = app.add_subcommand("analyze-router", "Gate weight vs. expert AUROC analysis");
  std::string analyze_records, analyze_ensemble;
  analyze->add_option("--records", analyze_records, "Labeled corpus JSONL")->required();
  analyze->add_option("--ensemble", analyze_ensemble, "Ensemble file (default: DoGEN from --out)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic multi-domain corpus");
  dogen::SynthRequest synth_req;
  std::string synth_output;
  std::vector<std::size_t> mix;
  synth->add_option("--domains", synth_req.num_domains, "Number of domains");
  synth->add_option("--vocab-size", synth_req.vocab_size, "Tokens per domain vocabulary");
  synth->add_option("--doc-length", synth_req.doc_length, "Tokens per document");
  synth->add_option("--docs-per-class", synth_req.docs_per_class, "Documents per class per domain");
  synth->add_option("--shift", synth_req.machine_shift, "Class tilt in (0, 1]");
  synth->add_option("--id-prefix", synth_req.id_prefix, "Prefix for document ids");
  synth->add_option("--mix", mix, "Two domain indices to mix into an extra domain")->expected(2);
  synth->add_flag("--only-mix", synth_req.only_mix, "Emit only the mixed domain");
  synth->add_option("--output", synth_output, "Output JSONL")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    dogen::RunConfig config =
        config_path.empty() ? dogen::RunConfig{} : dogen::load_run_config(config_path);
    if (seed) config.apply_seed(*seed);
    if (!out_dir.empty()) config.out_dir = out_dir;

    if (prepare->parsed()) {
      if (!corpus.empty()) config.train_corpus = corpus;
      if (balancing == "per_domain") config.balancing = dogen::BalanceMode::per_domain;
      else if (balancing == "global") config.balancing = dogen::BalanceMode::global;
      else if (balancing == "unbalanced") config.balancing = dogen::BalanceMode::unbalanced;
      else if (!balancing.empty()) throw dogen::Error("unknown balancing mode " + balancing);
      const auto r = dogen::cmd_prepare(config);
      std::cout << "prepared " << r.after.total << " documents (" << r.n_train << " train, "
                << r.n_val << " val) from " << r.before.total << "\n";
    } else if (train_experts->parsed()) {
      int failed = 0;
      for (const auto& r : dogen::cmd_train_experts(config)) {
        if (r.ok) {
          std::cout << r.domain << ": val loss " << r.val_loss << ", val AUROC "
                    << (r.val_auroc ? std::to_string(*r.val_auroc) : "n/a") << "\n";
        } else {
          std::cerr << r.domain << ": FAILED: " << r.error << "\n";
          ++failed;
        }
      }
      return failed == 0 ? 0 : 1;
    } else if (train_router->parsed()) {
      const auto r = dogen::cmd_train_router(config);
      std::cout << "router: val loss " << r.val_loss << " (initial " << r.initial_val_loss
                << "), val accuracy " << r.val_accuracy << "\n";
    } else if (fit_stacker->parsed()) {
      dogen::cmd_fit_stacker(config);
      std::cout << "wrote " << (config.out_dir / "stacker.json").string() << "\n";
    } else if (joint->parsed()) {
      const auto mode = init_mode == "domain" ? dogen::JointMode::domain : dogen::JointMode::scratch;
      dogen::cmd_joint_train(config, mode);
      std::cout << "wrote " << (config.out_dir / ("jt_" + init_mode + ".json")).string() << "\n";
    } else if (score->parsed()) {
      score_req.input = score_input;
      if (!score_output.empty()) score_req.output = score_output;
      if (!score_ensemble.empty()) score_req.ensemble = score_ensemble;
      score_req.k = score_k;
      std::cout << dogen::cmd_score(config, score_req).string() << "\n";
    } else if (evaluate->parsed()) {
      for (const auto& f : score_files) eval_req.score_files.emplace_back(f);
      eval_req.records = records;
      eval_req.group_by = parse_group_by(group_by);
      eval_req.tpr_target = no_tpr ? std::nullopt : std::optional<double>(tpr_target);
      std::cout << dogen::report_markdown(dogen::cmd_evaluate(config, eval_req));
    } else if (analyze->parsed()) {
      dogen::AnalyzeRequest req{analyze_records, std::nullopt};
      if (!analyze_ensemble.empty()) req.ensemble = analyze_ensemble;
      std::cout << dogen::analysis_markdown(dogen::cmd_analyze_router(config, req));
    } else if (synth->parsed()) {
      if (seed) synth_req.seed = *seed;
      if (mix.size() == 2) synth_req.mix = std::pair{mix[0], mix[1]};
      synth_req.output = synth_output;
      std::cout << dogen::cmd_synth(synth_req).string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "dogen: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
