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

// Mini-batch gradient descent loop shared by every trainer: seeded per-epoch
// shuffles, periodic validation, keep-best snapshots and patience-based
// early stopping.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "dogen/expert.hpp"
#include "dogen/rng.hpp"

namespace dogen::detail {

struct Evaluation {
  double loss;
  std::optional<double> metric;
};

// `step(params, batch_indices)` applies one update in place;
// `evaluate(params)` returns the validation loss (and a logged metric).
// The initial parameters count as the first checkpoint, and a final
// checkpoint is taken after the last step if it was not already evaluated.
template <typename Params, typename StepFn, typename EvalFn>
Params run_descent(Params params, std::size_t n_train, const TrainConfig& tc, StepFn&& step,
                   EvalFn&& evaluate, TrainHistory& history) {
  tc.validate();
  if (n_train == 0) throw Error("training set is empty");
  history = TrainHistory{};

  auto checkpoint = [&](std::size_t step_no, std::size_t epoch, const Params& p) {
    const Evaluation e = evaluate(p);
    if (!std::isfinite(e.loss)) {
      throw Error("non-finite validation loss at step " + std::to_string(step_no) +
                  " (learning rate too high?)");
    }
    history.evals.push_back({step_no, epoch, e.loss, e.metric});
    return e.loss;
  };

  Params best = params;
  history.best_val_loss = checkpoint(0, 0, params);
  history.best_step = 0;
  std::size_t stale = 0;
  std::size_t steps = 0;
  bool evaluated_last = true;
  SplitMix64 rng(tc.seed);

  for (std::size_t epoch = 0; epoch < tc.max_epochs && !history.early_stopped; ++epoch) {
    const auto order = permutation(n_train, rng);
    history.epochs_run = epoch + 1;
    for (std::size_t start = 0; start < n_train; start += tc.batch_size) {
      const std::size_t len = std::min(tc.batch_size, n_train - start);
      step(params, std::span<const std::size_t>(order.data() + start, len));
      ++steps;
      evaluated_last = false;
      if (steps % tc.eval_every_steps != 0) continue;
      const double loss = checkpoint(steps, epoch + 1, params);
      evaluated_last = true;
      if (loss < history.best_val_loss) {
        history.best_val_loss = loss;
        history.best_step = steps;
        best = params;
        stale = 0;
      } else if (++stale >= tc.early_stopping_patience) {
        history.early_stopped = true;
        break;
      }
    }
  }
  if (!evaluated_last) {
    const double loss = checkpoint(steps, history.epochs_run, params);
    if (loss < history.best_val_loss) {
      history.best_val_loss = loss;
      history.best_step = steps;
      best = std::move(params);
    }
  }
  history.steps_run = steps;
  return best;
}

}  // namespace dogen::detail
