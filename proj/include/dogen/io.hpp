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

// Versioned JSON persistence for models, plus atomic file output.

#include <filesystem>
#include <string>

#include "dogen/ensemble.hpp"
#include "dogen/expert.hpp"
#include "dogen/features.hpp"
#include "dogen/router.hpp"
#include "json.hpp"

namespace dogen {

using Json = nlohmann::ordered_json;

inline constexpr const char* kExpertSchema = "dogen-expert/1";
inline constexpr const char* kRouterSchema = "dogen-router/1";
inline constexpr const char* kEnsembleSchema = "dogen-ensemble/1";
inline constexpr const char* kStackerSchema = "dogen-stacker/1";

Json featurizer_to_json(const FeaturizerConfig& fc);
FeaturizerConfig featurizer_from_json(const Json& j);

Json train_config_to_json(const TrainConfig& tc);
// Missing keys keep their defaults from `base`.
TrainConfig train_config_from_json(const Json& j, TrainConfig base = {});

Json expert_to_json(const ExpertModel& m);
ExpertModel expert_from_json(const Json& j);

Json router_to_json(const RouterModel& m);
RouterModel router_from_json(const Json& j);

Json ensemble_to_json(const EnsembleModel& m);
EnsembleModel ensemble_from_json(const Json& j);

// `experts` records the column order the stacker expects.
Json stacker_to_json(const StackerModel& m, const std::vector<DomainId>& experts);
StackerModel stacker_from_json(const Json& j, std::vector<DomainId>* experts = nullptr);

std::string read_file(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

// Writes to a sibling temp file and renames it over `path`. Creates parent
// directories as needed.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const Json& j, int indent = -1);

ExpertModel load_expert(const std::filesystem::path& path);
RouterModel load_router(const std::filesystem::path& path);
EnsembleModel load_ensemble(const std::filesystem::path& path);

}  // namespace dogen
