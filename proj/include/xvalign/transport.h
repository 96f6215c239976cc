// xvalign/transport.h

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

#ifndef XVALIGN_TRANSPORT_H_
#define XVALIGN_TRANSPORT_H_

#include <vector>

#include <Eigen/Dense>

namespace xvalign {

using Index = Eigen::Index;

/// Row i of the source is matched to column permutation[i] of the target.
using Permutation = std::vector<Index>;

/// A nonnegative coupling between n source and m target points.
struct TransportPlan {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd row_marginals;
  Eigen::VectorXd col_marginals;
  int iterations = 0;  // Sinkhorn scaling iterations actually run

  /// max over rows and columns of |sum - marginal|.
  double marginal_error() const;
};

/**
   Entropic optimal transport between uniform marginals 1/n and 1/m by
   Sinkhorn scaling of the kernel exp(-C / epsilon).

   Each kernel row is shifted by its minimum cost before exponentiation (the
   shift is absorbed by the row scaling), so the kernel itself cannot
   underflow row-wise.  A scaling vector that underflows to zero or
   overflows is reported as NumericalError carrying the iteration index; it
   means epsilon is too small for the cost range.

   Iteration stops after max_iterations, or earlier once every row sum is
   within tolerance * (1/n) of its marginal (column sums are exact after
   each full iteration).
*/
TransportPlan sinkhorn_transport(const Eigen::MatrixXd &cost, double epsilon,
                                 int max_iterations, double tolerance = 1e-12);

/// Minimum-cost perfect matching on a square cost matrix (Hungarian /
/// Kuhn-Munkres with potentials, O(n^3)).  Deterministic: columns are
/// scanned in increasing index and the first minimum wins.
Permutation solve_assignment(const Eigen::MatrixXd &cost);

/// Permutation maximising the sum of selected plan entries. Plan must be
/// square.
Permutation harden_plan(const TransportPlan &plan);
Permutation harden_plan(const Eigen::MatrixXd &plan);

/// Fraction of positions where found[i] == truth[i].
double matching_accuracy(const Permutation &found, const Permutation &truth);

/// Sum of cost(i, perm[i]).
double assignment_cost(const Eigen::MatrixXd &cost, const Permutation &perm);

}  // namespace xvalign

#endif  // XVALIGN_TRANSPORT_H_
