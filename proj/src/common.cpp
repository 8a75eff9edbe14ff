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

#include "dogen/common.hpp"

#include <cmath>

namespace dogen {

std::string to_string(ClassLabel label) {
  return label == ClassLabel::machine ? "machine" : "human";
}

ClassLabel parse_label(const std::string& text) {
  if (text == "machine") return ClassLabel::machine;
  if (text == "human") return ClassLabel::human;
  throw Error("label must be \"human\" or \"machine\", got \"" + text + "\"");
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace dogen
