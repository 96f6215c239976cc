// src/wasserstein_procrustes.cc

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

#include "xvalign/wasserstein_procrustes.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "xvalign/error.h"
#include "xvalign/linalg.h"

namespace xvalign {

void WpConfig::validate() const {
  auto positive = [](long v, const char *name) {
    if (v < 1) throw Error(std::string("WpConfig: ") + name + " must be >= 1");
  };
  positive(batch_size_initial, "batch_size_initial");
  positive(batch_doublings, "batch_doublings");
  positive(epochs_per_level, "epochs_per_level");
  positive(sinkhorn_iterations, "sinkhorn_iterations");
  positive(init_subset_size, "init_subset_size");
  positive(init_restarts, "init_restarts");
  positive(init_refinements, "init_refinements");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw Error("WpConfig: learning_rate must be > 0");
  if (!(sinkhorn_epsilon > 0.0) || !std::isfinite(sinkhorn_epsilon))
    throw Error("WpConfig: sinkhorn_epsilon must be > 0");
  if (!(init_epsilon_scale > 0.0) || !std::isfinite(init_epsilon_scale))
    throw Error("WpConfig: init_epsilon_scale must be > 0");
}

namespace {

constexpr int kDescriptorQuantiles = 10;

std::vector<Index> sample_indices(Index n, Index k, Rng &rng) {
  std::vector<Index> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(pick(rng))]);
  }
  idx.resize(static_cast<size_t>(k));
  return idx;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd &m,
                          const std::vector<Index> &rows) {
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), m.cols());
  for (size_t k = 0; k < rows.size(); ++k)
    out.row(static_cast<Index>(k)) = m.row(rows[k]);
  return out;
}

Eigen::MatrixXd permute_rows(const Eigen::MatrixXd &m, const Permutation &p) {
  return take_rows(m, p);
}

/// Per-point rotation-invariant signature: norm, then distance quantiles to
/// the other points of the same set.
Eigen::MatrixXd invariant_descriptors(const Eigen::MatrixXd &x) {
  const Index n = x.rows();
  Eigen::MatrixXd desc(n, 1 + kDescriptorQuantiles);
  desc.col(0) = x.rowwise().norm();
  if (n < 2) {
    desc.rightCols(kDescriptorQuantiles).setZero();
    return desc;
  }
  const Eigen::MatrixXd dist = squared_distances(x, x).cwiseSqrt();
  std::vector<double> row;
  for (Index i = 0; i < n; ++i) {
    row.clear();
    for (Index j = 0; j < n; ++j)
      if (j != i) row.push_back(dist(i, j));
    std::sort(row.begin(), row.end());
    for (int q = 0; q < kDescriptorQuantiles; ++q) {
      const double pos = static_cast<double>(row.size() - 1) * (q + 1) /
                         kDescriptorQuantiles;
      desc(i, 1 + q) = row[static_cast<size_t>(std::lround(pos))];
    }
  }
  return desc;
}

double epsilon_for(const Eigen::MatrixXd &cost, double relative) {
  double base = median(cost);
  if (!(base > 0.0)) base = cost.maxCoeff();
  if (!(base > 0.0)) base = 1.0;
  return relative * base;
}

TransportPlan plan_with_context(const Eigen::MatrixXd &cost, double epsilon,
                                int iterations, const std::string &stage) {
  try {
    return sinkhorn_transport(cost, epsilon, iterations);
  } catch (const NumericalError &e) {
    throw NumericalError("wasserstein_procrustes: " + stage + ": " + e.what(),
                         e.iteration());
  }
}

struct Iterate {
  Eigen::MatrixXd w;
  double worst_orthogonality = 0.0;

  void set(Eigen::MatrixXd next) {
    w = std::move(next);
    worst_orthogonality = std::max(worst_orthogonality, orthogonality_error(w));
  }
};

}  // namespace

WpResult solve_wasserstein_procrustes(const Eigen::MatrixXd &x,
                                      const Eigen::MatrixXd &y,
                                      const WpConfig &config) {
  config.validate();
  if (x.cols() != y.cols())
    throw DimensionError("wasserstein_procrustes: source dimension " +
                         std::to_string(x.cols()) + " != target dimension " +
                         std::to_string(y.cols()));
  if (x.rows() != y.rows())
    throw DimensionError("wasserstein_procrustes: source has " +
                         std::to_string(x.rows()) + " rows, target has " +
                         std::to_string(y.rows()) +
                         "; a one-to-one matching needs equal sizes");
  const Index n = x.rows(), d = x.cols();
  if (n < 1) throw Error("wasserstein_procrustes: empty sets");

  WpResult result{Rotation::identity(d), Permutation{0}};
  if (n == 1) {
    result.rotation = solve_procrustes(x, y, "wasserstein_procrustes");
    result.residual_before_final = (x - y).squaredNorm();
    result.residual_after_final =
        alignment_residual(x, y, result.rotation);
    result.max_orthogonality_error =
        orthogonality_error(result.rotation.matrix());
    return result;
  }

  Rng rng(config.seed);
  Iterate it;

  // 1. Multi-start initialisation on a subset.
  const Index n0 = std::min<Index>(n, config.init_subset_size);
  std::vector<Index> sx, sy;
  if (n0 == n) {
    sx.resize(static_cast<size_t>(n));
    std::iota(sx.begin(), sx.end(), Index{0});
    sy = sx;
  } else {
    sx = sample_indices(n, n0, rng);
    sy = sample_indices(n, n0, rng);
  }
  const Eigen::MatrixXd xs = take_rows(x, sx), ys = take_rows(y, sy);
  const double init_eps = config.init_epsilon_scale * config.sinkhorn_epsilon;

  double best = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd best_w;
  for (int start = 0; start < config.init_restarts; ++start) {
    const std::string stage = "init restart " + std::to_string(start);
    Eigen::MatrixXd cost;
    if (start == 0) {
      cost = squared_distances(invariant_descriptors(xs),
                               invariant_descriptors(ys));
    } else {
      Eigen::MatrixXd w0 = random_orthogonal(d, rng);
      it.set(w0);
      cost = squared_distances(xs * w0, ys);
    }
    Permutation perm = harden_plan(plan_with_context(
        cost, epsilon_for(cost, init_eps), config.sinkhorn_iterations, stage));
    Eigen::MatrixXd w = polar_factor(xs.transpose() * permute_rows(ys, perm))
                            .orthogonal;
    it.set(w);
    for (int r = 0; r < config.init_refinements; ++r) {
      cost = squared_distances(xs * w, ys);
      Permutation next = harden_plan(
          plan_with_context(cost, epsilon_for(cost, init_eps),
                            config.sinkhorn_iterations, stage));
      if (next == perm) break;
      perm = std::move(next);
      w = polar_factor(xs.transpose() * permute_rows(ys, perm)).orthogonal;
      it.set(w);
    }
    const double objective = (xs * w - permute_rows(ys, perm)).squaredNorm();
    if (objective < best) {
      best = objective;
      best_w = w;
      result.init_start = start;
    }
  }
  result.init_objective = best;
  it.set(best_w);

  // 2. Stochastic alternation with a growing batch.
  Index batch = std::min<Index>(n, config.batch_size_initial);
  for (int level = 0; level <= config.batch_doublings; ++level) {
    const std::string stage = "batch level " + std::to_string(level);
    for (int epoch = 0; epoch < config.epochs_per_level; ++epoch) {
      const Eigen::MatrixXd xb = take_rows(x, sample_indices(n, batch, rng));
      const Eigen::MatrixXd yb = take_rows(y, sample_indices(n, batch, rng));
      const Eigen::MatrixXd cost = squared_distances(xb * it.w, yb);
      const TransportPlan plan = plan_with_context(
          cost, epsilon_for(cost, config.sinkhorn_epsilon),
          config.sinkhorn_iterations, stage);
      const Eigen::MatrixXd target =
          polar_factor(xb.transpose() * plan.matrix * yb).orthogonal;
      it.set(polar_factor((1.0 - config.learning_rate) * it.w +
                          config.learning_rate * target)
                 .orthogonal);
    }
    batch = std::min<Index>(n, 2 * batch);
  }

  // 3. Exact full-set matching, then one exact Procrustes solve.
  const Eigen::MatrixXd cost = squared_distances(x * it.w, y);
  result.permutation = solve_assignment(cost);
  const Eigen::MatrixXd matched = permute_rows(y, result.permutation);
  result.residual_before_final = (x * it.w - matched).squaredNorm();
  result.rotation = solve_procrustes(
      x, matched,
      "wasserstein_procrustes(init=restart" + std::to_string(result.init_start) +
          ",seed=" + std::to_string(config.seed) + ")");
  it.set(result.rotation.matrix());
  result.residual_after_final =
      alignment_residual(x, matched, result.rotation);
  result.max_orthogonality_error = it.worst_orthogonality;
  return result;
}

WpResult solve_wasserstein_procrustes(const EmbeddingSet &source,
                                      const EmbeddingSet &target,
                                      const WpConfig &config) {
  return solve_wasserstein_procrustes(source.vectors(), target.vectors(),
                                      config);
}

}  // namespace xvalign
