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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dogen/common.hpp"
#include "dogen/corpus.hpp"

namespace dogen {

struct EnsembleModel;

struct EvalRecord {
  double score = 0.0;
  ClassLabel label = ClassLabel::human;
  DomainId domain;
  std::optional<std::string> generator;
};

// Probability that a random machine record outscores a random human record,
// ties counted as one half. O(n log n) via sorted tie groups; the result is
// bit-identical to the pairwise definition. Throws if either class is absent.
double auroc(std::span<const double> scores, std::span<const ClassLabel> labels);
double auroc(std::span<const EvalRecord> records);

struct TprAtFpr {
  double tpr = 0.0;
  // Smallest observed score (or +inf) whose human exceedance rate
  // P(score >= threshold | human) is at most the target.
  double threshold = 0.0;
  double fpr = 0.0;
};

TprAtFpr tpr_at_fpr(std::span<const double> scores, std::span<const ClassLabel> labels,
                    double target_fpr = 0.05);
TprAtFpr tpr_at_fpr(std::span<const EvalRecord> records, double target_fpr = 0.05);

// Sample Pearson correlation. Throws on length mismatch, n < 2 or zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct ExpertGateStats {
  DomainId domain;
  std::optional<double> auroc;             // standalone expert AUROC on the corpus
  double mean_gate_weight = 0.0;           // mean of p_i(x)
  std::optional<double> correctness_corr;  // corr(p_i, 1{expert i correct at 0.5})
};

struct RouterAnalysis {
  std::vector<ExpertGateStats> experts;  // router domain order
  std::optional<double> rho;             // pearson(auroc, mean_gate_weight)
};

RouterAnalysis router_auroc_correlation(const EnsembleModel& ensemble,
                                        const std::vector<Document>& docs);

std::string analysis_csv(const RouterAnalysis& analysis);
std::string analysis_markdown(const RouterAnalysis& analysis);
std::string analysis_json(const RouterAnalysis& analysis);

// --- Tabular evaluation ----------------------------------------------------

enum class GroupBy { none, domain, generator };

struct StrategyScores {
  std::string strategy;
  std::vector<double> scores;  // aligned with the records
};

struct EvalOptions {
  GroupBy group_by = GroupBy::domain;
  std::optional<double> tpr_target;  // set to also report TPR@FPR
};

struct EvalCell {
  std::optional<double> value;  // absent when the cell holds a single class
  std::size_t n_human = 0;
  std::size_t n_machine = 0;
};

struct EvalRow {
  std::string strategy;
  std::vector<EvalCell> auroc;
  std::vector<EvalCell> tpr;  // empty unless tpr_target was set
};

struct EvalReport {
  std::vector<std::string> columns;  // groups in lexicographic order, then "all"
  std::vector<EvalRow> rows;
  std::optional<double> tpr_target;
};

// The "all" column pools every record; it is not an average of group cells.
EvalReport evaluate(std::span<const StrategyScores> strategies, std::span<const EvalRecord> records,
                    const EvalOptions& options = {});

// Markdown bolds the best value in each column.
std::string report_markdown(const EvalReport& report);
std::string report_csv(const EvalReport& report);
std::string report_json(const EvalReport& report);

// Shortest decimal representation that round-trips the double.
std::string format_double(double value);

}  // namespace dogen
