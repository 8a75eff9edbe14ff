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


#include <gtest/gtest.h>

#include <random>

#include "dogen/ensemble.hpp"
#include "dogen/io.hpp"
#include "support.hpp"

namespace dogen {
namespace {

FeaturizerConfig odd_features() {
  FeaturizerConfig fc;
  fc.dims = 128;
  fc.ngram_orders = {1, 3};
  fc.lowercase = false;
  fc.tf_scaling = TfScaling::raw_count;
  return fc;
}

// Weights with awkward decimal expansions so round-tripping is exercised.
std::vector<double> awkward(std::mt19937_64& gen, std::size_t n) {
  auto v = test::random_vector(gen, n, 1.0);
  v[0] = 0.1;
  v[1] = 1.0 / 3.0;
  v[2] = -5e-324;
  v[3] = 1.7976931348623157e308;
  v[4] = 0.0;
  return v;
}

EnsembleModel sample_ensemble() {
  std::mt19937_64 gen(1);
  const auto fc = odd_features();
  std::vector<ExpertModel> experts;
  for (const auto* d : {"b", "a"}) {
    auto e = zero_expert(d, fc);
    e.weights = awkward(gen, fc.dims + 1);
    e.weights[3] = 0.25;  // keep scores finite
    e.train_meta = {3, 0.123456789, 42};
    experts.push_back(e);
  }
  auto router = zero_router({"a", "b"}, fc);
  for (auto& v : router.weight_matrix.data()) v = test::random_vector(gen, 1, 1.0)[0];
  return make_ensemble(experts, router, 1);
}

TEST(Io, FeaturizerAndTrainConfigRoundTrip) {
  const auto fc = odd_features();
  EXPECT_EQ(featurizer_from_json(featurizer_to_json(fc)), fc);
  TrainConfig tc;
  tc.learning_rate = 0.3;
  tc.seed = 18446744073709551615ULL;
  const auto back = train_config_from_json(Json::parse(train_config_to_json(tc).dump()));
  EXPECT_EQ(back.learning_rate, 0.3);
  EXPECT_EQ(back.seed, tc.seed);
  const auto partial = train_config_from_json(Json::parse(R"({"batch_size": 4})"));
  EXPECT_EQ(partial.batch_size, 4u);
  EXPECT_EQ(partial.learning_rate, TrainConfig{}.learning_rate);
  DOGEN_EXPECT_ERROR(featurizer_from_json(Json::parse(R"({"tf_scaling":"tfidf"})")), "tfidf");
}

TEST(Io, ExpertRoundTripIsExact) {
  const auto e = sample_ensemble().experts[0];
  const auto j = expert_to_json(e);
  EXPECT_EQ(j["schema"], kExpertSchema);
  const auto back = expert_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back, e);
  for (const auto& d : test::synthetic(2, 5, 0.5, 2)) {
    EXPECT_EQ(expert_score(back, d.text), expert_score(e, d.text));
  }
}

TEST(Io, RouterAndEnsembleRoundTrip) {
  const auto e = sample_ensemble();
  EXPECT_EQ(router_from_json(Json::parse(router_to_json(e.router).dump())), e.router);
  const auto j = ensemble_to_json(e);
  EXPECT_EQ(j["schema"], kEnsembleSchema);
  EXPECT_EQ(j["k"], 1);
  const auto back = ensemble_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back, e);
  for (const auto& d : test::synthetic(2, 5, 0.5, 3)) {
    EXPECT_EQ(score_document(back, d.text), score_document(e, d.text));
  }
}

TEST(Io, StackerRoundTrip) {
  const StackerModel st{{0.1, -2.5}, 1.0 / 7.0, {0.3, 0.6}, {0.2, 1.0}};
  const auto j = stacker_to_json(st, {"x", "y"});
  EXPECT_EQ(j["schema"], kStackerSchema);
  std::vector<DomainId> names;
  EXPECT_EQ(stacker_from_json(Json::parse(j.dump()), &names), st);
  EXPECT_EQ(names, (std::vector<DomainId>{"x", "y"}));
}

TEST(Io, SchemaAndShapeErrors) {
  const auto e = sample_ensemble();
  auto j = expert_to_json(e.experts[0]);
  j["schema"] = "dogen-expert/2";
  DOGEN_EXPECT_ERROR(expert_from_json(j), "schema mismatch");
  DOGEN_EXPECT_ERROR(router_from_json(expert_to_json(e.experts[0])), "schema mismatch");
  j = expert_to_json(e.experts[0]);
  j["weights"].erase(0);
  EXPECT_THROW(expert_from_json(j), Error);
  j = router_to_json(e.router);
  j["weight_matrix"].erase(0);
  DOGEN_EXPECT_ERROR(router_from_json(j), "one row per domain");
  j = expert_to_json(e.experts[0]);
  j.erase("weights");
  DOGEN_EXPECT_ERROR(expert_from_json(j), "missing \"weights\"");
}

TEST(Io, FilesWrittenAtomically) {
  test::TempDir dir;
  const auto path = dir / "nested/deeper/model.json";
  const auto e = sample_ensemble();
  write_json(path, ensemble_to_json(e));
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  EXPECT_EQ(load_ensemble(path), e);
  write_file_atomic(path, "replaced");
  EXPECT_EQ(read_file(path), "replaced");
  DOGEN_EXPECT_ERROR(read_json(path), path.string());
  DOGEN_EXPECT_ERROR(read_file(dir / "absent.json"), "cannot open");
}

TEST(Io, DumpIsByteStable) {
  const auto e = sample_ensemble();
  EXPECT_EQ(ensemble_to_json(e).dump(), ensemble_to_json(ensemble_from_json(ensemble_to_json(e))).dump());
}

}  // namespace
}  // namespace dogen
