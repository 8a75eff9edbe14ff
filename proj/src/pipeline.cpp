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

#include "dogen/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dogen/io.hpp"
#include "dogen/kernels.hpp"

namespace fs = std::filesystem;

namespace dogen {
namespace {

const std::set<std::string> kStrategies{"dogen",      "equal_vote", "weighted_vote",
                                        "jt_scratch", "jt_domain",  "global_expert"};

fs::path prepared(const RunConfig& c, const std::string& name) { return c.out_dir / "prepared" / name; }
fs::path experts_dir(const RunConfig& c) { return c.out_dir / "experts"; }
fs::path expert_path(const RunConfig& c, const DomainId& d) {
  return experts_dir(c) / (file_stem_for(d) + ".json");
}

std::string jsonl_text(const std::vector<Document>& docs) {
  std::ostringstream out;
  write_jsonl(out, docs);
  return out.str();
}

std::vector<Document> load_split(const RunConfig& c, const char* name) {
  const auto path = prepared(c, name);
  if (!fs::exists(path)) throw Error(path.string() + " not found; run `prepare` first");
  return load_jsonl(path);
}

bool wants(const RunConfig& c, const std::string& strategy) {
  return std::find(c.strategies.begin(), c.strategies.end(), strategy) != c.strategies.end();
}

std::vector<std::string_view> texts_of(const std::vector<Document>& docs) {
  std::vector<std::string_view> t;
  t.reserve(docs.size());
  for (const auto& d : docs) t.emplace_back(d.text);
  return t;
}

std::vector<ClassLabel> labels_of(const std::vector<Document>& docs) {
  std::vector<ClassLabel> l;
  l.reserve(docs.size());
  for (const auto& d : docs) l.push_back(d.label);
  return l;
}

std::optional<double> auroc_or_absent(std::span<const double> s, std::span<const ClassLabel> l) {
  const bool machine = std::find(l.begin(), l.end(), ClassLabel::machine) != l.end();
  const bool human = std::find(l.begin(), l.end(), ClassLabel::human) != l.end();
  if (!machine || !human) return std::nullopt;
  return auroc(s, l);
}

Json optional_to_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json history_to_json(const TrainHistory& h) {
  Json evals = Json::array();
  for (const auto& e : h.evals) {
    Json p;
    p["step"] = e.step;
    p["epoch"] = e.epoch;
    p["val_loss"] = e.val_loss;
    p["val_metric"] = optional_to_json(e.val_metric);
    evals.push_back(p);
  }
  Json j;
  j["epochs_run"] = h.epochs_run;
  j["steps_run"] = h.steps_run;
  j["best_step"] = h.best_step;
  j["best_val_loss"] = h.best_val_loss;
  j["early_stopped"] = h.early_stopped;
  j["evals"] = std::move(evals);
  return j;
}

// Experts found in experts/, sorted by domain.
std::vector<ExpertModel> load_all_experts(const RunConfig& c) {
  if (!fs::is_directory(experts_dir(c))) {
    throw Error(experts_dir(c).string() + " not found; run `train-experts` first");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(experts_dir(c))) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::vector<ExpertModel> experts;
  for (const auto& f : files) experts.push_back(load_expert(f));
  std::sort(experts.begin(), experts.end(),
            [](const ExpertModel& a, const ExpertModel& b) { return a.domain < b.domain; });
  if (experts.empty()) throw Error("no expert models in " + experts_dir(c).string());
  return experts;
}

void require_same_dims(const std::vector<const FeaturizerConfig*>& configs) {
  for (const auto* fc : configs) {
    if (fc->dims != configs.front()->dims) {
      throw Error("model files disagree on featurizer dims (" + std::to_string(configs.front()->dims) +
                  " vs " + std::to_string(fc->dims) + ")");
    }
  }
}

std::vector<std::string_view> record_texts(const std::vector<TextRecord>& recs) {
  std::vector<std::string_view> t;
  t.reserve(recs.size());
  for (const auto& r : recs) t.emplace_back(r.text);
  return t;
}

BalanceMode parse_balance(const std::string& s) {
  if (s == "per_domain") return BalanceMode::per_domain;
  if (s == "global") return BalanceMode::global;
  if (s == "unbalanced") return BalanceMode::unbalanced;
  throw Error("unknown balancing mode \"" + s + "\"");
}

const char* balance_name(BalanceMode m) {
  switch (m) {
    case BalanceMode::per_domain: return "per_domain";
    case BalanceMode::global: return "global";
    case BalanceMode::unbalanced: return "unbalanced";
  }
  return "per_domain";
}

}  // namespace

std::string file_stem_for(const DomainId& domain) {
  std::string out;
  for (unsigned char c : domain) {
    const bool keep = std::isalnum(c) || c == '_' || c == '-' || c == '.';
    out.push_back(keep ? static_cast<char>(c) : '_');
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

// --- config --------------------------------------------------------------------

void RunConfig::apply_seed(std::uint64_t s) {
  seed = s;
  expert_train.seed = s;
  router_train.seed = s;
  joint_train.seed = s;
}

void RunConfig::validate() const {
  featurizer.validate();
  expert_train.validate();
  router_train.validate();
  joint_train.validate();
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw Error("train_fraction must lie in (0, 1)");
  if (k < 1) throw Error("k must be at least 1");
  for (const auto& s : strategies) {
    if (!kStrategies.count(s)) throw Error("unknown strategy \"" + s + "\"");
  }
}

RunConfig parse_run_config(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  if (!j.is_object() || j.value("schema", std::string()) != kConfigSchema) {
    throw Error(std::string("config schema must be \"") + kConfigSchema + "\"");
  }
  RunConfig c;
  try {
    if (j.contains("corpus")) {
      const auto& corpus = j.at("corpus");
      if (corpus.contains("train")) c.train_corpus = corpus.at("train").get<std::string>();
      if (corpus.contains("test")) c.test_corpus = corpus.at("test").get<std::string>();
    }
    if (j.contains("balancing")) c.balancing = parse_balance(j.at("balancing").get<std::string>());
    if (j.contains("train_fraction")) c.train_fraction = j.at("train_fraction").get<double>();
    if (j.contains("featurizer")) c.featurizer = featurizer_from_json(j.at("featurizer"));
    if (j.contains("train")) {
      const auto& t = j.at("train");
      if (t.contains("expert")) c.expert_train = train_config_from_json(t.at("expert"));
      if (t.contains("router")) c.router_train = train_config_from_json(t.at("router"));
      if (t.contains("joint")) c.joint_train = train_config_from_json(t.at("joint"));
    }
    if (j.contains("k")) c.k = j.at("k").get<std::size_t>();
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    if (j.contains("strategies")) c.strategies = j.at("strategies").get<std::vector<std::string>>();
    c.apply_seed(j.value("seed", std::uint64_t{0}));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const fs::path& path) { return parse_run_config(read_file(path)); }

std::string run_config_to_json(const RunConfig& c) {
  Json j;
  j["schema"] = kConfigSchema;
  j["corpus"] = {{"train", c.train_corpus.string()}, {"test", c.test_corpus.string()}};
  j["balancing"] = balance_name(c.balancing);
  j["train_fraction"] = c.train_fraction;
  j["featurizer"] = featurizer_to_json(c.featurizer);
  Json train;
  for (const auto& [name, tc] : {std::pair{"expert", &c.expert_train},
                                 std::pair{"router", &c.router_train},
                                 std::pair{"joint", &c.joint_train}}) {
    Json t = train_config_to_json(*tc);
    t.erase("seed");
    train[name] = t;
  }
  j["train"] = train;
  j["k"] = c.k;
  j["out"] = c.out_dir.string();
  j["strategies"] = c.strategies;
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

// --- prepare ---------------------------------------------------------------------

PrepareResult cmd_prepare(const RunConfig& config) {
  config.validate();
  if (config.train_corpus.empty()) throw Error("config has no training corpus path");
  const auto docs = load_jsonl(config.train_corpus);
  PrepareResult result;
  result.before = manifest(docs);

  std::vector<Document> balanced;
  switch (config.balancing) {
    case BalanceMode::per_domain: balanced = balance_per_domain(docs, config.seed); break;
    case BalanceMode::global: balanced = balance_global(docs, config.seed); break;
    case BalanceMode::unbalanced: balanced = docs; break;
  }
  result.after = manifest(balanced);
  if (config.balancing == BalanceMode::unbalanced) {
    write_file_atomic(prepared(config, "balanced.jsonl"), read_file(config.train_corpus));
  } else {
    write_file_atomic(prepared(config, "balanced.jsonl"), jsonl_text(balanced));
  }
  write_file_atomic(prepared(config, "manifest_before.json"), manifest_to_json(result.before) + "\n");
  write_file_atomic(prepared(config, "manifest.json"), manifest_to_json(result.after) + "\n");

  const auto split = split_train_val(balanced, SplitSpec{config.train_fraction, config.seed});
  write_file_atomic(prepared(config, "train.jsonl"), jsonl_text(split.train));
  write_file_atomic(prepared(config, "val.jsonl"), jsonl_text(split.val));
  for (const auto& domain : domains_in_order(balanced)) {
    const auto stem = file_stem_for(domain);
    write_file_atomic(config.out_dir / "prepared" / "splits" / (stem + ".train.jsonl"),
                      jsonl_text(filter_domain(split.train, domain)));
    write_file_atomic(config.out_dir / "prepared" / "splits" / (stem + ".val.jsonl"),
                      jsonl_text(filter_domain(split.val, domain)));
  }
  result.n_train = split.train.size();
  result.n_val = split.val.size();
  return result;
}

// --- train-experts -----------------------------------------------------------------

std::vector<ExpertReport> cmd_train_experts(const RunConfig& config) {
  config.validate();
  const auto train = load_split(config, "train.jsonl");
  const auto val = load_split(config, "val.jsonl");
  std::vector<DomainId> domains = domains_in_order(train);
  std::sort(domains.begin(), domains.end());
  std::vector<DomainId> val_domains = domains_in_order(val);
  std::sort(val_domains.begin(), val_domains.end());

  std::vector<ExpertReport> reports(domains.size());
  std::vector<std::optional<ExpertModel>> models(domains.size());
  const auto n = static_cast<std::int64_t>(domains.size());
  // Independent jobs; each writes only its own slot.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < n; ++t) {
    const auto i = static_cast<std::size_t>(t);
    auto& rep = reports[i];
    rep.domain = domains[i];
    try {
      TrainHistory hist;
      models[i] = train_expert(filter_domain(train, domains[i]), filter_domain(val, domains[i]),
                               domains[i], config.expert_train, config.featurizer, &hist);
      rep.ok = true;
      rep.val_loss = hist.best_val_loss;
      rep.epochs_run = hist.epochs_run;
    } catch (const std::exception& e) {
      rep.error = e.what();
    }
  }

  Json summary = Json::array();
  for (std::size_t i = 0; i < domains.size(); ++i) {
    auto& rep = reports[i];
    if (rep.ok) {
      const auto& model = *models[i];
      write_json(expert_path(config, rep.domain), expert_to_json(model));
      for (const auto& vd : val_domains) {
        const auto docs = filter_domain(val, vd);
        const auto scores = expert_scores_batch(model, texts_of(docs));
        const auto a = auroc_or_absent(scores, labels_of(docs));
        rep.cross_domain_auroc.emplace_back(vd, a);
        if (vd == rep.domain) rep.val_auroc = a;
      }
    }
    Json s;
    s["domain"] = rep.domain;
    s["ok"] = rep.ok;
    if (!rep.ok) s["error"] = rep.error;
    s["val_loss"] = rep.val_loss;
    s["val_auroc"] = optional_to_json(rep.val_auroc);
    s["epochs_run"] = rep.epochs_run;
    Json cross = Json::object();
    for (const auto& [d, a] : rep.cross_domain_auroc) cross[d] = optional_to_json(a);
    s["cross_domain_val_auroc"] = cross;
    summary.push_back(s);
  }

  Json out;
  out["experts"] = summary;
  if (wants(config, "global_expert")) {
    Json g;
    try {
      TrainHistory hist;
      const auto model =
          train_detector(train, val, "global", config.expert_train, config.featurizer, &hist);
      write_json(config.out_dir / "global_expert.json", expert_to_json(model));
      g["ok"] = true;
      g["history"] = history_to_json(hist);
    } catch (const std::exception& e) {
      g["ok"] = false;
      g["error"] = e.what();
    }
    out["global_expert"] = g;
  }
  write_json(config.out_dir / "experts_summary.json", out, 2);
  return reports;
}

// --- train-router ------------------------------------------------------------------

RouterReport cmd_train_router(const RunConfig& config) {
  config.validate();
  const auto train = load_split(config, "train.jsonl");
  const auto val = load_split(config, "val.jsonl");
  TrainHistory hist;
  const auto router = train_router(train, val, config.router_train, config.featurizer, &hist);
  write_json(config.out_dir / "router.json", router_to_json(router));
  RouterReport rep;
  rep.initial_val_loss = hist.evals.front().val_loss;
  rep.val_loss = hist.best_val_loss;
  rep.val_accuracy = router_accuracy(router, val);
  rep.epochs_run = hist.epochs_run;
  Json s;
  s["domains"] = router.domains;
  s["initial_val_loss"] = rep.initial_val_loss;
  s["val_loss"] = rep.val_loss;
  s["val_accuracy"] = rep.val_accuracy;
  s["history"] = history_to_json(hist);
  write_json(config.out_dir / "router_summary.json", s, 2);
  return rep;
}

// --- fit-stacker ---------------------------------------------------------------------

std::vector<std::pair<DomainId, double>> stacker_weight_table(const StackerModel& stacker,
                                                              const std::vector<DomainId>& experts) {
  const auto w = normalized_weights(stacker);
  std::vector<std::pair<DomainId, double>> rows;
  for (std::size_t i = 0; i < w.size(); ++i) rows.emplace_back(experts.at(i), w[i]);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return rows;
}

StackerModel cmd_fit_stacker(const RunConfig& config) {
  config.validate();
  const auto experts = load_all_experts(config);
  const auto train = load_split(config, "train.jsonl");
  const auto texts = texts_of(train);
  Matrix scores(train.size(), experts.size());
  std::vector<DomainId> names;
  for (std::size_t j = 0; j < experts.size(); ++j) {
    names.push_back(experts[j].domain);
    const auto col = expert_scores_batch(experts[j], texts);
    for (std::size_t r = 0; r < col.size(); ++r) scores(r, j) = col[r];
  }
  const auto stacker = fit_stacker(scores, labels_of(train));
  write_json(config.out_dir / "stacker.json", stacker_to_json(stacker, names));

  const auto table = stacker_weight_table(stacker, names);
  std::ostringstream md, csv;
  md << "| Expert | Ensemble weight |\n|---|---:|\n";
  csv << "expert,weight\n";
  for (const auto& [name, w] : table) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", w);
    md << "| " << name << " | " << buf << " |\n";
    csv << name << ',' << format_double(w) << '\n';
  }
  write_file_atomic(config.out_dir / "stacker_weights.md", md.str());
  write_file_atomic(config.out_dir / "stacker_weights.csv", csv.str());
  return stacker;
}

// --- joint-train ------------------------------------------------------------------------

EnsembleModel load_dogen_ensemble(const RunConfig& config) {
  const auto router_file = config.out_dir / "router.json";
  if (!fs::exists(router_file)) throw Error(router_file.string() + " not found; run `train-router` first");
  auto router = load_router(router_file);
  std::vector<ExpertModel> experts;
  std::vector<const FeaturizerConfig*> configs{&router.featurizer};
  for (const auto& d : router.domains) {
    const auto path = expert_path(config, d);
    if (!fs::exists(path)) throw Error("missing expert model " + path.string());
    experts.push_back(load_expert(path));
  }
  for (const auto& e : experts) configs.push_back(&e.featurizer);
  require_same_dims(configs);
  const auto k = std::min(config.k, router.size());
  return make_ensemble(std::move(experts), std::move(router), k);
}

EnsembleModel cmd_joint_train(const RunConfig& config, JointMode mode) {
  config.validate();
  const auto train = load_split(config, "train.jsonl");
  const auto val = load_split(config, "val.jsonl");
  JointInit init = JointScratch{{}, config.featurizer};
  if (mode == JointMode::domain) {
    auto start = load_dogen_ensemble(config);
    start.k = start.size();
    init = std::move(start);
  }
  TrainHistory hist;
  const auto model = joint_train(init, train, val, config.joint_train, &hist);
  const std::string name = mode == JointMode::scratch ? "jt_scratch" : "jt_domain";
  write_json(config.out_dir / (name + ".json"), ensemble_to_json(model));
  Json s;
  s["mode"] = name;
  s["initial_val_loss"] = hist.evals.front().val_loss;
  s["history"] = history_to_json(hist);
  write_json(config.out_dir / ("joint_" + std::string(mode == JointMode::scratch ? "scratch" : "domain") +
                               "_summary.json"),
             s, 2);
  return model;
}

// --- score ---------------------------------------------------------------------------------

fs::path cmd_score(const RunConfig& config, const ScoreRequest& req) {
  const auto records = load_text_records(req.input);
  const auto texts = record_texts(records);
  std::vector<double> scores;
  const std::string& strategy = req.strategy;

  auto gated = [&](EnsembleModel ensemble) {
    if (req.k) {
      if (*req.k < 1 || *req.k > ensemble.size()) throw Error("--k must lie in [1, N]");
      ensemble.k = *req.k;
    }
    std::vector<const FeaturizerConfig*> configs{&ensemble.router.featurizer};
    for (const auto& e : ensemble.experts) configs.push_back(&e.featurizer);
    require_same_dims(configs);
    return gated_scores(ensemble_outputs(ensemble, texts), ensemble.k);
  };

  if (req.ensemble) {
    scores = gated(load_ensemble(*req.ensemble));
  } else if (strategy == "dogen") {
    scores = gated(load_dogen_ensemble(config));
  } else if (strategy == "jt_scratch" || strategy == "jt_domain") {
    scores = gated(load_ensemble(config.out_dir / (strategy + ".json")));
  } else if (strategy == "equal_vote") {
    const auto experts = load_all_experts(config);
    Matrix y(records.size(), experts.size());
    for (std::size_t j = 0; j < experts.size(); ++j) {
      const auto col = expert_scores_batch(experts[j], texts);
      for (std::size_t r = 0; r < col.size(); ++r) y(r, j) = col[r];
    }
    scores = equal_vote_scores(y);
  } else if (strategy == "weighted_vote") {
    std::vector<DomainId> names;
    const auto stacker = stacker_from_json(read_json(config.out_dir / "stacker.json"), &names);
    if (names.size() != stacker.coefficients.size()) throw Error("stacker file lists the wrong number of experts");
    Matrix y(records.size(), names.size());
    for (std::size_t j = 0; j < names.size(); ++j) {
      const auto col = expert_scores_batch(load_expert(expert_path(config, names[j])), texts);
      for (std::size_t r = 0; r < col.size(); ++r) y(r, j) = col[r];
    }
    scores.resize(records.size());
    for (std::size_t r = 0; r < records.size(); ++r) scores[r] = stacker_score(stacker, y.row(r));
  } else if (strategy == "global_expert") {
    scores = expert_scores_batch(load_expert(config.out_dir / "global_expert.json"), texts);
  } else if (strategy.rfind("expert:", 0) == 0) {
    scores = expert_scores_batch(load_expert(expert_path(config, strategy.substr(7))), texts);
  } else {
    throw Error("unknown strategy \"" + strategy + "\"");
  }

  std::ostringstream out;
  for (std::size_t r = 0; r < records.size(); ++r) {
    Json line;
    line["id"] = records[r].id;
    line["score"] = scores[r];
    line["strategy"] = strategy;
    out << line.dump() << '\n';
  }
  const fs::path path =
      req.output ? *req.output : config.out_dir / "scores" / (file_stem_for(strategy) + ".jsonl");
  write_file_atomic(path, out.str());
  return path;
}

// --- evaluate -------------------------------------------------------------------------------

EvalReport cmd_evaluate(const RunConfig& config, const EvaluateRequest& req) {
  const auto docs = load_jsonl(req.records);
  std::map<std::string, std::size_t> index;
  std::vector<EvalRecord> records;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    index[docs[i].id] = i;
    records.push_back({0.0, docs[i].label, docs[i].domain, docs[i].generator});
  }
  std::vector<StrategyScores> strategies;
  for (const auto& file : req.score_files) {
    StrategyScores s;
    s.strategy = file.stem().string();
    s.scores.assign(docs.size(), 0.0);
    std::vector<char> seen(docs.size(), 0);
    std::ifstream in(file);
    if (!in) throw Error("cannot open " + file.string());
    std::string text;
    std::size_t line = 0, count = 0;
    while (std::getline(in, text)) {
      ++line;
      if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
      Json j;
      try {
        j = Json::parse(text);
        const auto id = j.at("id").get<std::string>();
        const auto it = index.find(id);
        if (it == index.end()) {
          throw Error(file.string() + ":" + std::to_string(line) + ": id \"" + id + "\" not in records");
        }
        if (seen[it->second]) {
          throw Error(file.string() + ":" + std::to_string(line) + ": duplicate id \"" + id + "\"");
        }
        seen[it->second] = 1;
        s.scores[it->second] = j.at("score").get<double>();
        if (j.contains("strategy")) s.strategy = j.at("strategy").get<std::string>();
        ++count;
      } catch (const nlohmann::json::exception& e) {
        throw Error(file.string() + ":" + std::to_string(line) + ": " + e.what());
      }
    }
    if (count != docs.size()) {
      throw Error(file.string() + " scores " + std::to_string(count) + " of " +
                  std::to_string(docs.size()) + " records");
    }
    strategies.push_back(std::move(s));
  }
  const auto report = evaluate(strategies, records, EvalOptions{req.group_by, req.tpr_target});
  write_file_atomic(config.out_dir / "report.md", report_markdown(report));
  write_file_atomic(config.out_dir / "report.csv", report_csv(report));
  write_file_atomic(config.out_dir / "report.json", report_json(report));
  return report;
}

// --- analyze-router ---------------------------------------------------------------------------

RouterAnalysis cmd_analyze_router(const RunConfig& config, const AnalyzeRequest& req) {
  const auto ensemble = req.ensemble ? load_ensemble(*req.ensemble) : load_dogen_ensemble(config);
  const auto docs = load_jsonl(req.records);
  const auto analysis = router_auroc_correlation(ensemble, docs);
  write_file_atomic(config.out_dir / "router_analysis.csv", analysis_csv(analysis));
  write_file_atomic(config.out_dir / "router_analysis.md", analysis_markdown(analysis));
  write_file_atomic(config.out_dir / "router_analysis.json", analysis_json(analysis));
  return analysis;
}

// --- synth -----------------------------------------------------------------------------------

SyntheticSpec synth_spec(const SynthRequest& req) {
  if (req.num_domains < 2) throw Error("synth needs at least 2 domains");
  SyntheticSpec spec;
  spec.machine_shift = req.machine_shift;
  spec.seed = req.seed;
  spec.id_prefix = req.id_prefix;
  for (std::size_t d = 0; d < req.num_domains; ++d) {
    const std::string name = "d" + std::to_string(d);
    spec.domains.push_back(
        {name, make_vocabulary(name + "w", req.vocab_size), req.doc_length, req.docs_per_class});
  }
  if (req.mix) {
    const auto [a, b] = *req.mix;
    if (a >= req.num_domains || b >= req.num_domains || a == b) {
      throw Error("--mix needs two distinct generated domain indices");
    }
    const auto& da = spec.domains[a];
    const auto& db = spec.domains[b];
    spec.domains.push_back({"mix_" + da.id + "_" + db.id, mixed_vocabulary(da.vocabulary, db.vocabulary),
                            req.doc_length, req.docs_per_class});
  }
  return spec;
}

fs::path cmd_synth(const SynthRequest& req) {
  if (req.output.empty()) throw Error("synth needs an output path");
  if (req.only_mix && !req.mix) throw Error("--only-mix requires --mix");
  const auto spec = synth_spec(req);
  auto docs = synthesize_corpus(spec);
  if (req.only_mix) docs = filter_domain(docs, spec.domains.back().id);
  write_file_atomic(req.output, jsonl_text(docs));
  return req.output;
}

}  // namespace dogen
