// tests/unit/pca_test.cc

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

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "test_util.h"
#include "xvalign/error.h"
#include "xvalign/linalg.h"
#include "xvalign/pca.h"

using namespace xvalign;
using xvalign::testing::random_set;

namespace {

// Eigenvalues of the 1/(N-1) sample covariance, descending.
Eigen::VectorXd covariance_eigenvalues(const Eigen::MatrixXd &x) {
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov =
      c.transpose() * c / static_cast<double>(x.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  return es.eigenvalues().reverse();
}

Eigen::MatrixXd clustered(Index n, Index d, Index speakers, Rng &rng) {
  const Eigen::MatrixXd centroids = 2.0 * gaussian_matrix(speakers, d, rng);
  Eigen::MatrixXd x = 0.3 * gaussian_matrix(n, d, rng);
  for (Index i = 0; i < n; ++i) x.row(i) += centroids.row(i % speakers);
  return x;
}

EmbeddingSet as_set(const Eigen::MatrixXd &x) {
  std::vector<std::string> utt, spk;
  for (Index i = 0; i < x.rows(); ++i) {
    utt.push_back("u" + std::to_string(i));
    spk.push_back("s");
  }
  return EmbeddingSet(x, utt, spk,
                      std::vector<Gender>(static_cast<size_t>(x.rows()),
                                          Gender::F));
}

double mean_reconstruction_error(const Eigen::MatrixXd &x,
                                 const Eigen::MatrixXd &frame) {
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd back = c * frame.transpose() * frame;
  return (c - back).squaredNorm() / static_cast<double>(x.rows());
}

}  // namespace

TEST_CASE("rank one data") {
  Eigen::MatrixXd x(5, 3);
  for (Index i = 0; i < 5; ++i) x.row(i) << 1.0 + i, 2.0 - 2.0 * i, 0.5 * i;
  const PcaModel m = fit_pca(x, 1);
  CHECK(m.explained_variance_ratio(0) == doctest::Approx(1.0).epsilon(1e-9));
  Eigen::RowVector3d dir(1.0, -2.0, 0.5);
  dir.normalize();
  // Sign convention: the largest-magnitude entry (-2) must come out positive.
  CHECK((m.components.row(0) + dir).norm() <= 1e-12);
}

TEST_CASE("ratios agree with a dense covariance eigendecomposition") {
  Rng rng(1);
  const Eigen::MatrixXd x = clustered(200, 512, 40, rng);
  const Eigen::VectorXd oracle = covariance_eigenvalues(x);
  const double total = oracle.sum();
  const PcaModel m = fit_pca(x, 70);
  CHECK(m.components.rows() == 70);
  CHECK(m.explained_variance_ratio.sum() ==
        doctest::Approx(oracle.head(70).sum() / total).epsilon(1e-8));
  for (Index j = 0; j < 70; ++j) {
    CHECK(std::abs(m.explained_variance(j) - oracle(j)) <= 1e-8 * oracle(0));
    CHECK(std::abs(m.explained_variance_ratio(j) - oracle(j) / total) <= 1e-8);
  }
  const bool oracle_check = oracle.head(70).sum() / total >= 0.98;
  CHECK(explained_variance_check(m, 0.98) == oracle_check);
}

TEST_CASE("components are orthonormal and ordered") {
  Rng rng(2);
  for (int rep = 0; rep < 5; ++rep) {
    const Index d = 5 + 3 * rep;
    const Eigen::MatrixXd x = gaussian_matrix(40, d, rng);
    const PcaModel m = fit_pca(x, static_cast<int>(d));
    CHECK((m.components * m.components.transpose() -
           Eigen::MatrixXd::Identity(d, d))
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
    for (Index j = 1; j < d; ++j)
      CHECK(m.explained_variance_ratio(j) <= m.explained_variance_ratio(j - 1));
    CHECK(m.explained_variance_ratio.sum() ==
          doctest::Approx(1.0).epsilon(1e-9));
    for (Index j = 0; j < d; ++j) {
      Index arg;
      m.components.row(j).cwiseAbs().maxCoeff(&arg);
      CHECK(m.components(j, arg) > 0.0);
    }
  }
}

TEST_CASE("transform centres and preserves distances at full rank") {
  Rng rng(3);
  const EmbeddingSet s = random_set(30, 6, 4, rng);
  const PcaModel m = fit_pca(s, 6);
  const EmbeddingSet t = transform_pca(s, m);
  CHECK(t.dim() == 6);
  CHECK(t.utterance_ids() == s.utterance_ids());
  CHECK(t.speaker_ids() == s.speaker_ids());
  const Eigen::MatrixXd dx = squared_distances(s.vectors(), s.vectors());
  const Eigen::MatrixXd dy = squared_distances(t.vectors(), t.vectors());
  CHECK(((dx - dy).cwiseAbs().array() <= 1e-8 * (1.0 + dx.array())).all());

  const EmbeddingSet mean_row(s.vectors().colwise().mean(), {"m"}, {"s"},
                              {Gender::F});
  CHECK(transform_pca(mean_row, m).vectors().norm() <= 1e-9);

  // Coordinate variances are the covariance eigenvalues.
  const Eigen::VectorXd oracle = covariance_eigenvalues(s.vectors());
  const Eigen::MatrixXd y = t.vectors();
  for (Index j = 0; j < 6; ++j) {
    const double var =
        (y.col(j).array() - y.col(j).mean()).square().sum() / 29.0;
    CHECK(var == doctest::Approx(oracle(j)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(transform_pca(random_set(3, 5, 1, rng), m), DimensionError);
}

TEST_CASE("reconstruction beats random frames") {
  Rng rng(4);
  const Eigen::MatrixXd x = clustered(80, 12, 6, rng);
  for (int k : {1, 3, 6}) {
    const PcaModel m = fit_pca(x, k);
    const double err = mean_reconstruction_error(x, m.components);
    for (int rep = 0; rep < 20; ++rep) {
      const Eigen::MatrixXd frame =
          random_orthogonal(12, rng).topRows(k);
      CHECK(err <= mean_reconstruction_error(x, frame));
    }
  }
}

TEST_CASE("explained variance check") {
  PcaModel m;
  m.explained_variance_ratio = Eigen::Vector2d(0.6, 0.39);
  CHECK(explained_variance_check(m, 0.98));
  m.explained_variance_ratio = Eigen::Vector2d(0.6, 0.3);
  CHECK_FALSE(explained_variance_check(m, 0.98));
  CHECK(explained_variance_check(m, 0.0));
}

TEST_CASE("fit errors") {
  Rng rng(5);
  const Eigen::MatrixXd x = gaussian_matrix(10, 4, rng);
  CHECK_THROWS_AS(fit_pca(x, 0), Error);
  CHECK_THROWS_AS(fit_pca(x, 5), Error);
  CHECK_THROWS_AS(fit_pca(gaussian_matrix(3, 8, rng), 4), Error);
  bool named = false;
  try {
    fit_pca(Eigen::MatrixXd::Ones(6, 3), 2);
  } catch (const Error &e) {
    named = std::string(e.what()).find("variance") != std::string::npos;
  }
  CHECK(named);
}

TEST_CASE("model file round trip") {
  Rng rng(6);
  const PcaModel m = fit_pca(gaussian_matrix(20, 5, rng), 3);
  const PcaModel back = parse_pca_model(format_pca_model(m));
  CHECK(back.mean == m.mean);
  CHECK(back.components == m.components);
  CHECK(back.explained_variance == m.explained_variance);
  CHECK(back.explained_variance_ratio == m.explained_variance_ratio);
  const auto dir = xvalign::testing::temp_dir("pca");
  save_pca_model(m, dir / "m.txt");
  CHECK(load_pca_model(dir / "m.txt").components == m.components);
  CHECK_THROWS_AS(parse_pca_model("1 2\nmean 0 0\nratio 1\n"), FormatError);
}
