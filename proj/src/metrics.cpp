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

#include "dogen/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "dogen/ensemble.hpp"
#include "dogen/kernels.hpp"
#include "json.hpp"

namespace dogen {
namespace {

void check_inputs(std::span<const double> scores, std::span<const ClassLabel> labels,
                  const char* what) {
  if (scores.size() != labels.size()) throw Error(std::string(what) + ": length mismatch");
  for (double s : scores) {
    if (!std::isfinite(s)) throw Error(std::string(what) + ": non-finite score");
  }
  const bool machine = std::find(labels.begin(), labels.end(), ClassLabel::machine) != labels.end();
  const bool human = std::find(labels.begin(), labels.end(), ClassLabel::human) != labels.end();
  if (!machine || !human) throw Error(std::string(what) + ": needs both human and machine records");
}

void split_records(std::span<const EvalRecord> records, std::vector<double>& scores,
                   std::vector<ClassLabel>& labels) {
  scores.reserve(records.size());
  labels.reserve(records.size());
  for (const auto& r : records) {
    scores.push_back(r.score);
    labels.push_back(r.label);
  }
}

std::optional<double> try_pearson(std::span<const double> xs, std::span<const double> ys) {
  try {
    return pearson(xs, ys);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string cell_text(const std::optional<double>& v) { return v ? fixed4(*v) : "n/a"; }

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double auroc(std::span<const double> scores, std::span<const ClassLabel> labels) {
  check_inputs(scores, labels, "auroc");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

  // Twice the Mann-Whitney U: each machine record earns 2 per lower human
  // and 1 per tied human.
  std::uint64_t doubled = 0;
  std::uint64_t humans_below = 0;
  std::uint64_t n_machine = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::uint64_t group_human = 0, group_machine = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == ClassLabel::machine ? group_machine : group_human) += 1;
      ++j;
    }
    doubled += group_machine * (2 * humans_below + group_human);
    humans_below += group_human;
    n_machine += group_machine;
    i = j;
  }
  const double pairs = static_cast<double>(n_machine) * static_cast<double>(humans_below);
  return static_cast<double>(doubled) / (2.0 * pairs);
}

double auroc(std::span<const EvalRecord> records) {
  std::vector<double> scores;
  std::vector<ClassLabel> labels;
  split_records(records, scores, labels);
  return auroc(scores, labels);
}

TprAtFpr tpr_at_fpr(std::span<const double> scores, std::span<const ClassLabel> labels,
                    double target_fpr) {
  check_inputs(scores, labels, "tpr_at_fpr");
  if (!(target_fpr > 0.0 && target_fpr < 1.0)) throw Error("tpr_at_fpr: target must lie in (0, 1)");
  std::vector<double> human, machine;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    (labels[i] == ClassLabel::machine ? machine : human).push_back(scores[i]);
  }
  std::sort(human.begin(), human.end());
  std::sort(machine.begin(), machine.end());
  auto at_or_above = [](const std::vector<double>& sorted, double t) {
    return static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), t));
  };
  const auto n_human = static_cast<double>(human.size());
  const auto n_machine = static_cast<double>(machine.size());

  std::vector<double> candidates(scores.begin(), scores.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  candidates.push_back(std::numeric_limits<double>::infinity());

  // Human exceedance is non-increasing in the threshold, so the first
  // satisfying candidate is the minimal one.
  const auto it = std::partition_point(candidates.begin(), candidates.end(), [&](double t) {
    return static_cast<double>(at_or_above(human, t)) / n_human > target_fpr;
  });
  const double t = *it;  // +inf always satisfies the constraint
  TprAtFpr out;
  out.threshold = t;
  out.fpr = static_cast<double>(at_or_above(human, t)) / n_human;
  out.tpr = static_cast<double>(at_or_above(machine, t)) / n_machine;
  return out;
}

TprAtFpr tpr_at_fpr(std::span<const EvalRecord> records, double target_fpr) {
  std::vector<double> scores;
  std::vector<ClassLabel> labels;
  split_records(records, scores, labels);
  return tpr_at_fpr(scores, labels, target_fpr);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("pearson: length mismatch");
  if (xs.size() < 2) throw Error("pearson: need at least 2 points");
  // Constant inputs are caught exactly; rounding in the mean would otherwise
  // leave a spurious nonzero variance.
  auto constant = [](std::span<const double> v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo == *hi;
  };
  if (constant(xs) || constant(ys)) throw Error("pearson: zero variance");
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

RouterAnalysis router_auroc_correlation(const EnsembleModel& ensemble,
                                        const std::vector<Document>& docs) {
  std::vector<std::string_view> texts;
  std::vector<ClassLabel> labels;
  for (const auto& d : docs) {
    texts.emplace_back(d.text);
    labels.push_back(d.label);
  }
  const auto outputs = ensemble_outputs(ensemble, texts);
  const std::size_t n = ensemble.size();
  const std::size_t m = docs.size();

  RouterAnalysis analysis;
  std::vector<double> aurocs, gate;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> y(m), p(m), correct(m);
    for (std::size_t r = 0; r < m; ++r) {
      y[r] = outputs.scores(r, i);
      p[r] = outputs.probs(r, i);
      const bool says_machine = y[r] >= 0.5;
      correct[r] = says_machine == (labels[r] == ClassLabel::machine) ? 1.0 : 0.0;
    }
    ExpertGateStats stats;
    stats.domain = ensemble.experts[i].domain;
    stats.auroc = auroc(y, labels);
    stats.mean_gate_weight = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(m);
    stats.correctness_corr = try_pearson(p, correct);
    aurocs.push_back(*stats.auroc);
    gate.push_back(stats.mean_gate_weight);
    analysis.experts.push_back(std::move(stats));
  }
  analysis.rho = try_pearson(aurocs, gate);
  return analysis;
}

std::string analysis_csv(const RouterAnalysis& analysis) {
  std::ostringstream out;
  out << "expert,auroc,mean_gate_weight,correctness_corr\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& e : analysis.experts) {
    out << e.domain << ',' << opt(e.auroc) << ',' << format_double(e.mean_gate_weight) << ','
        << opt(e.correctness_corr) << '\n';
  }
  out << "rho," << opt(analysis.rho) << ",,\n";
  return out.str();
}

std::string analysis_markdown(const RouterAnalysis& analysis) {
  std::ostringstream out;
  out << "| Expert | AUROC | Avg. gate weight | r_i |\n";
  out << "|---|---:|---:|---:|\n";
  for (const auto& e : analysis.experts) {
    out << "| " << e.domain << " | " << cell_text(e.auroc) << " | " << fixed4(e.mean_gate_weight)
        << " | " << cell_text(e.correctness_corr) << " |\n";
  }
  out << "\nPearson rho (AUROC vs. avg. gate weight): " << cell_text(analysis.rho) << "\n";
  return out.str();
}

std::string analysis_json(const RouterAnalysis& analysis) {
  nlohmann::ordered_json out;
  out["experts"] = nlohmann::ordered_json::array();
  for (const auto& e : analysis.experts) {
    nlohmann::ordered_json row;
    row["expert"] = e.domain;
    row["auroc"] = optional_json(e.auroc);
    row["mean_gate_weight"] = e.mean_gate_weight;
    row["correctness_corr"] = optional_json(e.correctness_corr);
    out["experts"].push_back(row);
  }
  out["rho"] = optional_json(analysis.rho);
  return out.dump(2) + "\n";
}

// --- Tabular evaluation ------------------------------------------------------

EvalReport evaluate(std::span<const StrategyScores> strategies, std::span<const EvalRecord> records,
                    const EvalOptions& options) {
  if (records.empty()) throw Error("evaluate: no records");
  std::map<std::string, std::vector<std::size_t>> groups;
  if (options.group_by != GroupBy::none) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      const std::string key =
          options.group_by == GroupBy::domain ? r.domain : r.generator.value_or("(none)");
      groups[key].push_back(i);
    }
  }
  std::vector<std::size_t> all(records.size());
  std::iota(all.begin(), all.end(), std::size_t{0});

  EvalReport report;
  report.tpr_target = options.tpr_target;
  std::vector<const std::vector<std::size_t>*> members;
  for (const auto& [name, idx] : groups) {
    report.columns.push_back(name);
    members.push_back(&idx);
  }
  report.columns.push_back("all");
  members.push_back(&all);

  for (const auto& strat : strategies) {
    if (strat.scores.size() != records.size()) {
      throw Error("evaluate: strategy \"" + strat.strategy + "\" has " +
                  std::to_string(strat.scores.size()) + " scores for " +
                  std::to_string(records.size()) + " records");
    }
    EvalRow row;
    row.strategy = strat.strategy;
    for (const auto* idx : members) {
      std::vector<double> s;
      std::vector<ClassLabel> l;
      for (auto i : *idx) {
        s.push_back(strat.scores[i]);
        l.push_back(records[i].label);
      }
      EvalCell cell;
      cell.n_machine = static_cast<std::size_t>(std::count(l.begin(), l.end(), ClassLabel::machine));
      cell.n_human = l.size() - cell.n_machine;
      EvalCell tpr_cell = cell;
      if (cell.n_machine > 0 && cell.n_human > 0) {
        cell.value = auroc(s, l);
        if (options.tpr_target) tpr_cell.value = tpr_at_fpr(s, l, *options.tpr_target).tpr;
      }
      row.auroc.push_back(cell);
      if (options.tpr_target) row.tpr.push_back(tpr_cell);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

void markdown_table(std::ostringstream& out, const EvalReport& report, const std::string& title,
                    bool tpr) {
  out << "### " << title << "\n\n| Strategy |";
  for (const auto& c : report.columns) out << ' ' << c << " |";
  out << "\n|---|";
  for (std::size_t c = 0; c < report.columns.size(); ++c) out << "---:|";
  out << '\n';
  std::vector<std::optional<double>> best(report.columns.size());
  for (const auto& row : report.rows) {
    const auto& cells = tpr ? row.tpr : row.auroc;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].value && (!best[c] || *cells[c].value > *best[c])) best[c] = cells[c].value;
    }
  }
  for (const auto& row : report.rows) {
    const auto& cells = tpr ? row.tpr : row.auroc;
    out << "| " << row.strategy << " |";
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto text = cell_text(cells[c].value);
      const bool bold = cells[c].value && best[c] && *cells[c].value == *best[c];
      out << ' ' << (bold ? "**" + text + "**" : text) << " |";
    }
    out << '\n';
  }
  out << '\n';
}

}  // namespace

std::string report_markdown(const EvalReport& report) {
  std::ostringstream out;
  markdown_table(out, report, "AUROC", false);
  if (report.tpr_target) {
    markdown_table(out, report, "TPR@FPR=" + format_double(*report.tpr_target * 100.0) + "%", true);
  }
  return out.str();
}

std::string report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "metric,strategy";
  for (const auto& c : report.columns) out << ',' << c;
  out << '\n';
  auto emit = [&](const char* metric, const EvalRow& row, const std::vector<EvalCell>& cells) {
    out << metric << ',' << row.strategy;
    for (const auto& cell : cells) out << ',' << (cell.value ? format_double(*cell.value) : "");
    out << '\n';
  };
  for (const auto& row : report.rows) emit("auroc", row, row.auroc);
  if (report.tpr_target) {
    for (const auto& row : report.rows) emit("tpr_at_fpr", row, row.tpr);
  }
  return out.str();
}

std::string report_json(const EvalReport& report) {
  nlohmann::ordered_json out;
  out["columns"] = report.columns;
  out["tpr_target"] = optional_json(report.tpr_target);
  out["rows"] = nlohmann::ordered_json::array();
  auto cells_json = [](const std::vector<EvalCell>& cells) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : cells) {
      nlohmann::ordered_json j;
      j["value"] = optional_json(c.value);
      j["human"] = c.n_human;
      j["machine"] = c.n_machine;
      arr.push_back(j);
    }
    return arr;
  };
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["strategy"] = row.strategy;
    r["auroc"] = cells_json(row.auroc);
    if (report.tpr_target) r["tpr_at_fpr"] = cells_json(row.tpr);
    out["rows"].push_back(r);
  }
  return out.dump(2) + "\n";
}

}  // namespace dogen
