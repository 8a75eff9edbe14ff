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

// Independent reference computations. None of these call the library
// routine they are used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <vector>

#include "dogen/common.hpp"

namespace dogen::oracle {

// Pairwise definition: one point per machine record above a human record,
// half a point per tie.
inline double auroc(std::span<const double> scores, std::span<const ClassLabel> labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != ClassLabel::machine) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != ClassLabel::human) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

struct TprScan {
  double tpr;
  double threshold;
  double fpr;
};

// Tries every candidate threshold in ascending order and keeps the first
// whose human exceedance rate is within the target.
inline TprScan tpr_at_fpr(std::span<const double> scores, std::span<const ClassLabel> labels,
                          double target) {
  std::set<double> candidates(scores.begin(), scores.end());
  candidates.insert(std::numeric_limits<double>::infinity());
  for (double t : candidates) {
    std::size_t h_hit = 0, h_n = 0, m_hit = 0, m_n = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (labels[i] == ClassLabel::human) {
        ++h_n;
        h_hit += scores[i] >= t;
      } else {
        ++m_n;
        m_hit += scores[i] >= t;
      }
    }
    const double fpr = static_cast<double>(h_hit) / static_cast<double>(h_n);
    if (fpr <= target) return {static_cast<double>(m_hit) / static_cast<double>(m_n), t, fpr};
  }
  return {0.0, std::numeric_limits<double>::infinity(), 0.0};
}

// Top-k gating by explicit sort over (probability desc, index asc).
inline double dogen_score(std::span<const double> p, std::span<const double> y, std::size_t k) {
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (p[a] != p[b]) return p[a] > p[b];
    return a < b;
  });
  idx.resize(k);
  double mass = 0.0;
  for (auto i : idx) mass += p[i];
  double s = 0.0;
  for (auto i : idx) s += (mass > 0.0 ? p[i] / mass : 1.0 / static_cast<double>(k)) * y[i];
  return s;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Central difference of f along coordinate i of x.
inline double central_difference(const std::function<double(std::span<const double>)>& f,
                                  std::vector<double> x, std::size_t i, double h = 1e-5) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double up = f(x);
  x[i] = x0 - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

inline double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-7});
  return std::abs(analytic - numeric) / scale;
}

}  // namespace dogen::oracle
