// tests/unit/metrics_test.cc

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

#include <cmath>

#include "doctest.h"
#include "oracles.h"
#include "test_util.h"
#include "xvalign/error.h"
#include "xvalign/linalg.h"
#include "xvalign/metrics.h"

using namespace xvalign;
using xvalign::testing::random_set;

namespace {

EmbeddingSet rows(const Eigen::MatrixXd &v, std::vector<std::string> spk,
                  const std::string &prefix = "u") {
  std::vector<std::string> utt;
  for (Index i = 0; i < v.rows(); ++i) utt.push_back(prefix + std::to_string(i));
  return EmbeddingSet(v, utt, std::move(spk),
                      std::vector<Gender>(static_cast<size_t>(v.rows()),
                                          Gender::F));
}

std::vector<double> quantized_scores(size_t n, Rng &rng, double shift) {
  std::normal_distribution<double> g(shift, 1.0);
  std::vector<double> s(n);
  for (double &x : s) x = std::round(g(rng) * 1000.0) / 1000.0;
  return s;
}

}  // namespace

TEST_CASE("cosine scoring hand computations") {
  Eigen::MatrixXd enroll(3, 2), trials(3, 2);
  enroll << 1, 0, 3, 0, 0, 2;  // speaker a: two rows, speaker b: one
  trials << 1, 0, 0, 5, 1, 1;
  const EmbeddingSet e = rows(enroll, {"a", "a", "b"}, "e");
  const EmbeddingSet t = rows(trials, {"a", "b", "c"}, "t");
  const ScoreSet s = cosine_score_sets(t, e);
  REQUIRE(s.scores.size() == 6);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double expected[6] = {1.0, 0.0, 0.0, 1.0, inv_sqrt2, inv_sqrt2};
  const bool target[6] = {true, false, false, true, false, false};
  for (size_t k = 0; k < 6; ++k) {
    CHECK(s.scores[k].score == doctest::Approx(expected[k]).epsilon(1e-15));
    CHECK(s.scores[k].is_target == target[k]);
  }
  CHECK(s.scores[0].trial_utterance == "t0");
  CHECK(s.scores[1].enroll_speaker == "b");
  CHECK(s.target_scores().size() == 2);
  CHECK(s.nontarget_scores().size() == 4);

  const ScoreSet per_utt = cosine_score_sets(t, e, ScoringMode::kUtterance);
  REQUIRE(per_utt.scores.size() == 9);
  CHECK(per_utt.scores[1].enroll_id == "e1");
  CHECK(per_utt.scores[1].enroll_speaker == "a");
}

TEST_CASE("cosine scoring against a random dot-product computation") {
  Rng rng(1);
  const EmbeddingSet e = random_set(12, 5, 4, rng);
  const EmbeddingSet t = random_set(7, 5, 4, rng);
  const ScoreSet s = cosine_score_sets(t, e, ScoringMode::kUtterance);
  REQUIRE(s.scores.size() == 84);
  for (Index i = 0; i < 7; ++i)
    for (Index j = 0; j < 12; ++j) {
      double dot = 0, na = 0, nb = 0;
      for (Index c = 0; c < 5; ++c) {
        const double x = t.vectors()(i, c), y = e.vectors()(j, c);
        dot += x * y;
        na += x * x;
        nb += y * y;
      }
      const TrialScore &ts = s.scores[static_cast<size_t>(i * 12 + j)];
      CHECK(ts.score == doctest::Approx(dot / std::sqrt(na * nb)).epsilon(1e-13));
      CHECK(ts.is_target == (t.speaker_ids()[i] == e.speaker_ids()[j]));
    }
}

TEST_CASE("cosine scoring is scale invariant") {
  Rng rng(2);
  const EmbeddingSet e = random_set(15, 4, 3, rng);
  const EmbeddingSet t = random_set(9, 4, 3, rng);
  std::uniform_real_distribution<double> u(0.01, 100.0);
  Eigen::MatrixXd ev = e.vectors(), tv = t.vectors();
  for (Index i = 0; i < ev.rows(); ++i) ev.row(i) *= u(rng);
  for (Index i = 0; i < tv.rows(); ++i) tv.row(i) *= u(rng);
  const ScoreSet a = cosine_score_sets(t, e, ScoringMode::kUtterance);
  const ScoreSet b =
      cosine_score_sets(t.with_vectors(tv), e.with_vectors(ev),
                        ScoringMode::kUtterance);
  for (size_t k = 0; k < a.scores.size(); ++k)
    CHECK(a.scores[k].score == doctest::Approx(b.scores[k].score).epsilon(1e-13));
}

TEST_CASE("cosine scoring errors") {
  Eigen::MatrixXd z(2, 2);
  z << 1, 0, 0, 0;
  const EmbeddingSet bad = rows(z, {"a", "b"}, "zero");
  const EmbeddingSet ok = rows(Eigen::MatrixXd::Identity(2, 2), {"a", "b"});
  try {
    cosine_score_sets(bad, ok);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("zero1") != std::string::npos);
  }
  Eigen::MatrixXd cancel(2, 2);
  cancel << 1, 1, -1, -1;
  try {
    cosine_score_sets(ok, rows(cancel, {"x", "x"}));
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("x") != std::string::npos);
  }
  CHECK_THROWS_AS(cosine_score_sets(ok, rows(Eigen::MatrixXd::Ones(1, 3), {"a"})),
                  DimensionError);
}

TEST_CASE("eer examples") {
  const std::vector<double> tgt(5, 0.9), non(9, 0.1);
  CHECK(compute_eer(tgt, non) == 0.0);
  const std::vector<double> same{0.1, 0.4, 0.4, 0.7};
  CHECK(compute_eer(same, same) == doctest::Approx(0.5).epsilon(1e-12));
  // Perfectly inverted scores.
  CHECK(compute_eer(non, tgt) == 1.0);
  // One of four targets below both non-targets: FRR stays at 1/4 while FAR
  // falls from 1/2 to 0.
  CHECK(compute_eer(std::vector<double>{0.0, 0.8, 0.9, 1.0},
                    std::vector<double>{0.5, 0.6}) ==
        doctest::Approx(0.25).epsilon(1e-15));
  // A tied target and non-target: the last step (1/2, 1) -> (1, 0) meets
  // the diagonal at 2/3.
  CHECK(compute_eer(std::vector<double>{0.2, 0.5},
                    std::vector<double>{0.5}) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(compute_eer(std::vector<double>{}, non), Error);
  CHECK_THROWS_AS(compute_eer(tgt, std::vector<double>{}), Error);
  CHECK_THROWS_AS(compute_eer(ScoreSet{}), Error);
}

TEST_CASE("eer matches an exhaustive threshold sweep") {
  Rng rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const auto tgt = quantized_scores(50, rng, 1.0);
    const auto non = quantized_scores(200, rng, 0.0);
    CHECK(compute_eer(tgt, non) ==
          doctest::Approx(oracle::eer_threshold_sweep(tgt, non, 1e-6))
              .epsilon(1e-9));
  }
}

TEST_CASE("eer properties") {
  Rng rng(4);
  for (int rep = 0; rep < 30; ++rep) {
    const auto tgt = quantized_scores(40 + rep, rng, 0.7);
    const auto non = quantized_scores(90, rng, 0.0);
    const double eer = compute_eer(tgt, non);
    CHECK(eer >= 0.0);
    CHECK(eer <= 1.0);

    // Strictly increasing transforms.
    std::vector<double> et, en;
    for (double x : tgt) et.push_back(std::exp(3.0 * x) + 5.0);
    for (double x : non) en.push_back(std::exp(3.0 * x) + 5.0);
    CHECK(compute_eer(et, en) == doctest::Approx(eer).epsilon(1e-12));

    // Swapping the roles of the two classes and negating the scores describes
    // the same detector.
    std::vector<double> nt, nn;
    for (double x : tgt) nt.push_back(-x);
    for (double x : non) nn.push_back(-x);
    CHECK(std::abs(compute_eer(nn, nt) - eer) <= 1e-9);
    // A bare label swap with ties only at distinct scores mirrors the rate.
    CHECK(std::abs(compute_eer(non, tgt) - (1.0 - eer)) <= 2.0 / 40.0);
  }
}

TEST_CASE("top1 examples") {
  Rng rng(5);
  const EmbeddingSet ref = random_set(40, 6, 8, rng);
  CHECK(top1_speaker_accuracy(ref, ref) == 1.0);

  // Queries planted next to a row of another speaker.
  Eigen::MatrixXd q = ref.vectors();
  std::vector<std::string> spk;
  for (Index i = 0; i < q.rows(); ++i) {
    q.row(i) += Eigen::RowVectorXd::Constant(6, 1e-6);
    spk.push_back("not-" + ref.speaker_ids()[static_cast<size_t>(i)]);
  }
  CHECK(top1_speaker_accuracy(rows(q, spk, "q"), ref) == 0.0);

  Top1Options skip;
  skip.exclude_same_utterance = true;
  const auto nn = nearest_reference_rows(ref, ref, skip);
  for (size_t i = 0; i < nn.size(); ++i) CHECK(nn[i] != static_cast<Index>(i));
  const EmbeddingSet single = ref.select(std::vector<Index>{0});
  CHECK(nearest_reference_rows(single, single, skip)[0] == -1);
  CHECK(top1_speaker_accuracy(single, single, skip) == 0.0);
}

TEST_CASE("top1 ties resolve to the lowest index") {
  Eigen::MatrixXd r(3, 1), q(1, 1);
  r << 1.0, -1.0, 1.0;
  q << 0.0;
  const auto nn = nearest_reference_rows(rows(q, {"a"}, "q"),
                                         rows(r, {"a", "b", "c"}));
  CHECK(nn[0] == 0);
  Eigen::MatrixXd dup(3, 2);
  dup << 3, 4, 3, 4, 3, 4;
  const EmbeddingSet d = rows(dup, {"x", "y", "z"});
  CHECK(nearest_reference_rows(d, d) == std::vector<Index>{0, 0, 0});
}

TEST_CASE("top1 matches a brute-force scan and is rotation invariant") {
  Rng rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    const EmbeddingSet ref = random_set(120, 8, 40, rng);
    const EmbeddingSet rec =
        ref.with_vectors(ref.vectors() + 0.8 * gaussian_matrix(120, 8, rng));
    const double acc = top1_speaker_accuracy(rec, ref);
    CHECK(acc == oracle::top1_scan(rec, ref));
    const Eigen::MatrixXd w = random_orthogonal(8, rng);
    CHECK(top1_speaker_accuracy(rec.with_vectors(rec.vectors() * w),
                                ref.with_vectors(ref.vectors() * w)) == acc);
  }
}

TEST_CASE("top1 errors") {
  Rng rng(7);
  const EmbeddingSet a = random_set(5, 3, 2, rng);
  CHECK_THROWS_AS(top1_speaker_accuracy(a, random_set(5, 4, 2, rng)),
                  DimensionError);
  CHECK_THROWS_AS(top1_speaker_accuracy(a, EmbeddingSet::empty(3)), Error);
  CHECK_THROWS_AS(top1_speaker_accuracy(EmbeddingSet::empty(3), a), Error);
}

TEST_CASE("report tsv") {
  AttackReport r;
  r.scenario = "PO";
  r.algorithm = "procrustes";
  r.oracle = true;
  r.gender_dependent = true;
  r.pca = 70;
  r.eer_f = 0.12345;
  r.eer_m = 0.0;
  r.top1_f = 1.0;
  const std::string row = report_tsv_row(r);
  CHECK(row == "PO\tyes\t70\toriginal\t0.1235\t0.0000\t1.0000\t-\tprocrustes\tyes\tspeaker\t-");
  CHECK(report_tsv_header().rfind("scenario\tgender_dependent\tpca\textractor\t"
                                  "eer_f\teer_m\ttop1_f\ttop1_m",
                                  0) == 0);
  AttackReport failed;
  failed.scenario = "broken";
  failed.error = "cannot open\tfile";
  CHECK_FALSE(failed.ok());
  CHECK(report_tsv_row(failed).find("cannot open file") != std::string::npos);
  const std::vector<AttackReport> none;
  CHECK(format_report_tsv(none) == report_tsv_header() + "\n");
}
