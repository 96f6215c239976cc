// tests/unit/transport_test.cc

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

#include <algorithm>
#include <limits>

#include "doctest.h"
#include "oracles.h"
#include "test_util.h"
#include "xvalign/error.h"
#include "xvalign/linalg.h"
#include "xvalign/transport.h"

using namespace xvalign;

namespace {

bool is_permutation(const Permutation &p) {
  std::vector<bool> seen(p.size(), false);
  for (Index j : p) {
    if (j < 0 || j >= static_cast<Index>(p.size()) || seen[static_cast<size_t>(j)])
      return false;
    seen[static_cast<size_t>(j)] = true;
  }
  return true;
}

Eigen::MatrixXd uniform_matrix(Index n, Index m, Rng &rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(n, m);
  for (Index i = 0; i < x.size(); ++i) x(i) = u(rng);
  return x;
}

}  // namespace

TEST_CASE("sinkhorn trivial plans") {
  const TransportPlan one =
      sinkhorn_transport(Eigen::MatrixXd::Constant(1, 1, 123.0), 0.1, 10);
  CHECK(one.matrix(0, 0) == doctest::Approx(1.0).epsilon(1e-15));

  Eigen::MatrixXd c(2, 2);
  c << 0, 1, 1, 0;
  const TransportPlan p = sinkhorn_transport(c, 0.01, 100);
  CHECK(p.matrix(0, 0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.matrix(1, 1) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.matrix(0, 1) < 1e-40);
  CHECK(p.matrix(1, 0) < 1e-40);
}

TEST_CASE("sinkhorn marginals") {
  Rng rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 2 + rep, m = 3 + (rep * 7) % 11;
    const Eigen::MatrixXd c = uniform_matrix(n, m, rng);
    const TransportPlan p = sinkhorn_transport(c, 0.05, 2000, 1e-12);
    CHECK(p.matrix.minCoeff() >= 0.0);
    CHECK(p.marginal_error() <= 1e-6);
    for (Index i = 0; i < n; ++i)
      CHECK(p.matrix.row(i).sum() ==
            doctest::Approx(1.0 / static_cast<double>(n)).epsilon(1e-6));
    for (Index j = 0; j < m; ++j)
      CHECK(p.matrix.col(j).sum() ==
            doctest::Approx(1.0 / static_cast<double>(m)).epsilon(1e-6));
  }
}

TEST_CASE("sinkhorn early stop and cost scale") {
  Rng rng(2);
  const Eigen::MatrixXd c = uniform_matrix(5, 5, rng);
  const TransportPlan p = sinkhorn_transport(c, 1.0, 10000, 1e-12);
  CHECK(p.iterations < 10000);
  // Shifting the cost by a constant does not change the plan.
  const TransportPlan q = sinkhorn_transport(
      (c.array() + 1000.0).matrix(), 1.0, 10000, 1e-12);
  CHECK((p.matrix - q.matrix).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("sinkhorn with vanishing epsilon agrees with brute force") {
  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::MatrixXd c = uniform_matrix(6, 6, rng);
    const TransportPlan p = sinkhorn_transport(c, 1e-3, 5000);
    CHECK(harden_plan(p) == oracle::best_permutation(c, false));
  }
}

TEST_CASE("sinkhorn errors") {
  CHECK_THROWS_AS(sinkhorn_transport(Eigen::MatrixXd::Ones(2, 2), 0.0, 10),
                  Error);
  CHECK_THROWS_AS(sinkhorn_transport(Eigen::MatrixXd(0, 2), 1.0, 10), Error);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 2);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(sinkhorn_transport(bad, 1.0, 10), Error);

  // Column 1 is unreachable from either row at this epsilon.
  Eigen::MatrixXd range(2, 2);
  range << 0, 1, 0, 1e4;
  bool raised = false;
  try {
    sinkhorn_transport(range, 1e-3, 50);
  } catch (const NumericalError &e) {
    raised = true;
    CHECK(e.iteration() >= 0);
    CHECK(e.iteration() < 50);
  }
  CHECK(raised);
}

TEST_CASE("harden plan examples") {
  Eigen::MatrixXd diag = Eigen::MatrixXd::Constant(4, 4, 0.01);
  diag.diagonal().setConstant(0.2);
  CHECK(harden_plan(diag) == Permutation{0, 1, 2, 3});

  Eigen::MatrixXd anti(2, 2);
  anti << 0.1, 0.9, 0.9, 0.1;
  CHECK(harden_plan(anti) == Permutation{1, 0});

  CHECK_THROWS_AS(harden_plan(Eigen::MatrixXd::Ones(2, 3)), DimensionError);
  TransportPlan rect;
  rect.matrix = Eigen::MatrixXd::Ones(3, 2);
  CHECK_THROWS_AS(harden_plan(rect), DimensionError);
}

TEST_CASE("harden plan matches exhaustive search") {
  Rng rng(4);
  for (Index n = 1; n <= 8; ++n) {
    for (int rep = 0; rep < 10; ++rep) {
      const Eigen::MatrixXd plan = uniform_matrix(n, n, rng);
      const Permutation found = harden_plan(plan);
      CHECK(is_permutation(found));
      CHECK(oracle::permutation_sum(plan, found) ==
            doctest::Approx(oracle::permutation_sum(plan, oracle::best_permutation(plan, true)))
                .epsilon(1e-14));
    }
  }
  // A tie: every permutation is optimal; the result is still deterministic.
  const Eigen::MatrixXd flat = Eigen::MatrixXd::Ones(5, 5);
  CHECK(harden_plan(flat) == harden_plan(flat));
  CHECK(is_permutation(harden_plan(flat)));
}

TEST_CASE("assignment minimises cost") {
  Rng rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const Index n = 1 + rep % 7;
    const Eigen::MatrixXd c = 100.0 * uniform_matrix(n, n, rng);
    const Permutation p = solve_assignment(c);
    CHECK(assignment_cost(c, p) ==
          doctest::Approx(assignment_cost(c, oracle::best_permutation(c, false)))
              .epsilon(1e-13));
  }
  CHECK(solve_assignment(Eigen::MatrixXd(0, 0)).empty());
}

TEST_CASE("matching accuracy") {
  Permutation id(10);
  std::iota(id.begin(), id.end(), Index{0});
  Permutation swapped = id;
  std::swap(swapped[2], swapped[7]);
  CHECK(matching_accuracy(id, id) == 1.0);
  CHECK(matching_accuracy({1, 0}, {0, 1}) == 0.0);
  CHECK(matching_accuracy(swapped, id) == doctest::Approx(0.8));
  CHECK_THROWS_AS(matching_accuracy({0, 1}, {0}), Error);
}
