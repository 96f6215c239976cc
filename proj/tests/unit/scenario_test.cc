// tests/unit/scenario_test.cc

// Copyright 2026  The xvalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"
#include "test_util.h"
#include "xvalign/anonymizer.h"
#include "xvalign/error.h"
#include "xvalign/linalg.h"
#include "xvalign/scenario.h"

using namespace xvalign;

namespace {

ScenarioSpec spec_for(const std::string &name, Algorithm algorithm,
                      bool oracle = false) {
  ScenarioSpec s;
  s.name = name;
  s.algorithm = algorithm;
  s.oracle = oracle;
  s.inputs = {"enroll", "enroll_anon", "trials", "trials_anon"};
  return s;
}

// Small VPC-like dataset; fast enough for unit tests.
VpcLikeDataset small_dataset(std::uint64_t seed) {
  DatasetParams p;
  p.dim = 32;
  p.pool_size = 400;
  p.seed = seed;
  return make_vpc_like_dataset(p);
}

ScenarioData data_of(const VpcLikeDataset &ds) {
  return {ds.enroll, ds.enroll_anon, ds.trials, ds.trials_anon};
}

// The clear population with a hidden rotation on both anonymized sets.
ScenarioData rotated_data(std::uint64_t seed, Rotation *hidden) {
  const VpcLikeDataset ds = small_dataset(seed);
  const RotatedSet ea = rotate_anonymize_set(ds.enroll, seed, 0.0);
  const RotatedSet ta = rotate_anonymize_set(ds.trials, seed, 0.0);
  if (hidden) *hidden = ea.rotation;
  return {ds.enroll, ea.set, ds.trials, ta.set};
}

}  // namespace

TEST_CASE("algorithm names") {
  CHECK(parse_algorithm("procrustes") == Algorithm::kProcrustes);
  CHECK(parse_algorithm("wp") == Algorithm::kWassersteinProcrustes);
  CHECK(parse_algorithm("none") == Algorithm::kNone);
  CHECK_THROWS_AS(parse_algorithm("svd"), Error);
  CHECK(to_string(Algorithm::kWassersteinProcrustes) == "wasserstein_procrustes");
}

TEST_CASE("scenario validation") {
  ScenarioSpec s = spec_for("P", Algorithm::kProcrustes);
  CHECK_NOTHROW(s.validate());
  s.inputs.enroll_anon.clear();
  CHECK_THROWS_AS(s.validate(), Error);
  s.oracle = true;
  CHECK_NOTHROW(s.validate());
  s.inputs.trials_anon.clear();
  CHECK_THROWS_AS(s.validate(), Error);
  s = spec_for("P", Algorithm::kProcrustes);
  s.pca_k = 0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = spec_for("", Algorithm::kProcrustes);
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("identity anonymization") {
  const VpcLikeDataset ds = small_dataset(1);
  const ScenarioData data{ds.enroll, ds.enroll, ds.trials, ds.trials};
  const AttackOutcome out =
      run_attack(spec_for("id", Algorithm::kProcrustes), data);
  REQUIRE(out.rotations.size() == 1);
  CHECK((out.rotations[0].matrix() - Eigen::MatrixXd::Identity(32, 32))
            .cwiseAbs()
            .maxCoeff() <= 1e-6);
  CHECK(*out.report.top1_f == 1.0);
  CHECK(*out.report.top1_m == 1.0);
  CHECK(out.report.ok());
}

TEST_CASE("oracle procrustes undoes a hidden rotation") {
  Rotation hidden = Rotation::identity(1);
  const ScenarioData data = rotated_data(2, &hidden);
  const ScenarioData clear{data.enroll, data.enroll, data.trials, data.trials};
  const AttackReport baseline =
      run_attack(spec_for("clear", Algorithm::kNone), clear).report;
  const AttackOutcome po =
      run_attack(spec_for("PO", Algorithm::kProcrustes, true), data);
  CHECK(*po.report.top1_f == 1.0);
  CHECK(*po.report.top1_m == 1.0);
  CHECK(*po.report.eer_f <= *baseline.eer_f + 1e-12);
  CHECK(*po.report.eer_m <= *baseline.eer_m + 1e-12);
  CHECK((po.rotations[0].matrix() - hidden.matrix()).cwiseAbs().maxCoeff() <=
        1e-6);
  CHECK(po.reconstructed.size() == data.trials.size());
  CHECK(po.rotations[0].provenance().rfind("PO/all:", 0) == 0);
}

TEST_CASE("supervised attack with variations beats no attack") {
  const VpcLikeDataset ds = small_dataset(3);
  const ScenarioData data = data_of(ds);
  ScenarioSpec none = spec_for("ignorant", Algorithm::kNone);
  none.length_normalize = true;
  const AttackReport before = run_attack(none, data).report;

  ScenarioSpec p = spec_for("P", Algorithm::kProcrustes);
  p.gender_dependent = true;
  p.pca_k = 20;
  p.length_normalize = true;
  const AttackOutcome out = run_attack(p, data);
  const AttackReport &r = out.report;
  REQUIRE(r.eer_f);
  REQUIRE(r.eer_m);
  REQUIRE(r.top1_f);
  REQUIRE(r.top1_m);
  CHECK(*r.eer_f < *before.eer_f);
  CHECK(*r.eer_m < *before.eer_m);
  CHECK(r.pca == 20);
  CHECK(r.gender_dependent);
  CHECK(out.rotations.size() == 2);
  CHECK(out.rotations[0].dim() == 20);
  CHECK(out.reconstructed.dim() == 20);
  CHECK(out.rotations[0].provenance().find("/F:") != std::string::npos);
  CHECK(out.rotations[1].provenance().find("/M:") != std::string::npos);

  // Oracle dominance on the same data.
  ScenarioSpec po = p;
  po.name = "PO";
  po.oracle = true;
  const AttackReport o = run_attack(po, data).report;
  CHECK(*o.top1_f >= *r.top1_f);
  CHECK(*o.top1_m >= *r.top1_m);
}

TEST_CASE("wasserstein-procrustes never reads anonymized labels") {
  const VpcLikeDataset ds = small_dataset(4);
  ScenarioSpec wp = spec_for("WP", Algorithm::kWassersteinProcrustes);
  wp.gender_dependent = true;
  wp.pca_k = 10;
  wp.length_normalize = true;
  wp.wp_config.epochs_per_level = 5;
  wp.wp_config.seed = 3;
  const AttackOutcome a = run_attack(wp, data_of(ds));

  Rng rng(8);
  const auto perm = xvalign::testing::random_permutation(ds.enroll_anon.size(), rng);
  std::vector<std::string> utt, spk;
  for (Index i = 0; i < ds.enroll_anon.size(); ++i) {
    utt.push_back("anon" + std::to_string(perm[static_cast<size_t>(i)]));
    spk.push_back("who" + std::to_string(perm[static_cast<size_t>(i)] % 7));
  }
  const EmbeddingSet relabeled(ds.enroll_anon.vectors(), utt, spk,
                               ds.enroll_anon.genders());
  const AttackOutcome b = run_attack(
      wp, ScenarioData{ds.enroll, relabeled, ds.trials, ds.trials_anon});
  CHECK(report_tsv_row(a.report) == report_tsv_row(b.report));
  for (size_t g = 0; g < a.rotations.size(); ++g)
    CHECK(a.rotations[g].matrix() == b.rotations[g].matrix());
  CHECK(report_tsv_row(run_attack(wp, data_of(ds)).report) ==
        report_tsv_row(a.report));
}

TEST_CASE("scenario errors carry the scenario name") {
  const VpcLikeDataset ds = small_dataset(5);
  ScenarioSpec p = spec_for("too-wide", Algorithm::kProcrustes);
  p.pca_k = 33;
  try {
    run_attack(p, data_of(ds));
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("too-wide") != std::string::npos);
  }
  // Supervised fitting without shared utterance ids.
  const EmbeddingSet stranger(Eigen::MatrixXd::Ones(2, 32), {"x1", "x2"},
                              {"x", "x"}, {Gender::F, Gender::M});
  CHECK_THROWS_AS(run_attack(spec_for("P", Algorithm::kProcrustes),
                             ScenarioData{ds.enroll, stranger, ds.trials,
                                          ds.trials_anon}),
                  Error);
  CHECK_THROWS_AS(run_attack(spec_for("P", Algorithm::kProcrustes),
                             ScenarioData{ds.enroll, std::nullopt, ds.trials,
                                          ds.trials_anon}),
                  Error);
}

TEST_CASE("run from files") {
  const VpcLikeDataset ds = small_dataset(6);
  const auto dir = xvalign::testing::temp_dir("scenario");
  save_embedding_set(ds.enroll, dir / "enroll.emb");
  save_embedding_set(ds.enroll_anon, dir / "enroll_anon.emb");
  save_embedding_set(ds.trials, dir / "trials.emb");
  save_embedding_set(ds.trials_anon.with_extractor(ExtractorTag::kRetrained),
                     dir / "trials_anon.emb");
  ScenarioSpec p = spec_for("P", Algorithm::kProcrustes);
  p.inputs = {dir / "enroll.emb", dir / "enroll_anon.emb", dir / "trials.emb",
              dir / "trials_anon.emb"};
  const AttackReport r = run_scenario(p);
  CHECK(r.extractor == ExtractorTag::kRetrained);
  ScenarioData in_memory = data_of(ds);
  in_memory.trials_anon =
      ds.trials_anon.with_extractor(ExtractorTag::kRetrained);
  CHECK(report_tsv_row(r) == report_tsv_row(run_attack(p, in_memory).report));

  p.inputs.trials = dir / "missing.emb";
  try {
    run_scenario(p);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("missing.emb") != std::string::npos);
  }
}
