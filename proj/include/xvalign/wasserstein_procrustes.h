// xvalign/wasserstein_procrustes.h

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

#ifndef XVALIGN_WASSERSTEIN_PROCRUSTES_H_
#define XVALIGN_WASSERSTEIN_PROCRUSTES_H_

#include <cstdint>

#include "xvalign/embedding_set.h"
#include "xvalign/procrustes.h"
#include "xvalign/transport.h"

namespace xvalign {

/// Optimizer settings. Epsilons are relative to the median of the current
/// cost matrix, so results do not depend on the global scale of the data.
struct WpConfig {
  int batch_size_initial = 64;     // capped at N
  int batch_doublings = 3;         // levels = batch_doublings + 1
  int epochs_per_level = 50;
  double learning_rate = 0.5;      // step toward the batch Procrustes target
  double sinkhorn_epsilon = 0.05;  // x median batch cost
  int sinkhorn_iterations = 100;
  std::uint64_t seed = 0;
  int init_subset_size = 256;      // capped at N
  int init_restarts = 5;
  double init_epsilon_scale = 10.0;  // init uses a 10x blurrier plan
  int init_refinements = 10;       // match/solve rounds per restart

  /// Throws xvalign::Error when a count is < 1 or a rate is not positive.
  void validate() const;
};

struct WpResult {
  Rotation rotation;
  /// Source row i is matched to target row permutation[i].
  Permutation permutation;

  int init_start = 0;  // restart that seeded the stochastic phase
  double init_objective = 0.0;
  /// Full-set residual under the final matching, before and after the last
  /// exact Procrustes solve.
  double residual_before_final = 0.0;
  double residual_after_final = 0.0;
  /// Largest |W^T W - I| seen for any iterate.
  double max_orthogonality_error = 0.0;
};

/**
   Unsupervised estimate of an orthogonal W and a one-to-one matching sigma
   that (locally) minimise sum_i ||x_i W - y_sigma(i)||^2.

   1. Initialisation on a random subset of init_subset_size rows of each
      set.  Restart 0 matches points by rotation-invariant descriptors (norm
      and quantiles of the distances to the other subset points); restarts
      1.. start from seeded random orthogonal matrices.  Each restart then
      alternates a hardened, blurred (init_epsilon_scale x) Sinkhorn matching
      with an exact Procrustes solve.  The restart with the lowest subset
      residual wins.
   2. Stochastic phase: for each batch size level (doubling from
      batch_size_initial), epochs_per_level steps of: sample a batch from
      each set, Sinkhorn plan on ||x W - y||^2, Procrustes target
      polar(Xb^T P Yb), W <- polar((1 - lr) W + lr target).
   3. Exact matching of the full sets (Hungarian on ||x W - y||^2) and one
      exact Procrustes solve on the matched pairs.

   Only the vectors are read; ids and speaker labels are ignored.
   Deterministic for a fixed config.seed.
*/
WpResult solve_wasserstein_procrustes(const EmbeddingSet &source,
                                      const EmbeddingSet &target,
                                      const WpConfig &config = {});
WpResult solve_wasserstein_procrustes(const Eigen::MatrixXd &source,
                                      const Eigen::MatrixXd &target,
                                      const WpConfig &config = {});

}  // namespace xvalign

#endif  // XVALIGN_WASSERSTEIN_PROCRUSTES_H_
