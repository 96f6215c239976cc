// src/assignment.cc

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

#include <limits>
#include <string>

#include "xvalign/error.h"
#include "xvalign/transport.h"

namespace xvalign {

Permutation solve_assignment(const Eigen::MatrixXd &cost) {
  const Index n = cost.rows();
  if (cost.cols() != n)
    throw DimensionError("solve_assignment: cost matrix must be square, got " +
                         std::to_string(cost.rows()) + "x" +
                         std::to_string(cost.cols()));
  if (!cost.allFinite())
    throw Error("solve_assignment: cost matrix has non-finite entries");
  if (n == 0) return {};

  // 1-based potentials; p[j] is the row matched to column j, way[] the
  // augmenting path.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<Index> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  Permutation assignment(n);
  for (Index j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

Permutation harden_plan(const Eigen::MatrixXd &plan) {
  if (plan.rows() != plan.cols())
    throw DimensionError("harden_plan: plan must be square, got " +
                         std::to_string(plan.rows()) + "x" +
                         std::to_string(plan.cols()));
  return solve_assignment(-plan);
}

Permutation harden_plan(const TransportPlan &plan) {
  return harden_plan(plan.matrix);
}

double matching_accuracy(const Permutation &found, const Permutation &truth) {
  if (found.size() != truth.size())
    throw DimensionError("matching_accuracy: lengths " +
                         std::to_string(found.size()) + " and " +
                         std::to_string(truth.size()) + " differ");
  if (found.empty()) return 1.0;
  size_t hits = 0;
  for (size_t i = 0; i < found.size(); ++i) hits += found[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(found.size());
}

double assignment_cost(const Eigen::MatrixXd &cost, const Permutation &perm) {
  if (static_cast<Index>(perm.size()) != cost.rows())
    throw DimensionError("assignment_cost: permutation length mismatch");
  double total = 0.0;
  for (size_t i = 0; i < perm.size(); ++i)
    total += cost(static_cast<Index>(i), perm[i]);
  return total;
}

}  // namespace xvalign
