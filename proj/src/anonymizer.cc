// src/anonymizer.cc

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

#include "xvalign/anonymizer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "xvalign/error.h"
#include "xvalign/linalg.h"

namespace xvalign {

XvectorPool::XvectorPool(Eigen::MatrixXd vectors) : vectors_(std::move(vectors)) {
  if (vectors_.rows() < 1 || vectors_.cols() < 1)
    throw Error("XvectorPool: pool must hold at least one vector");
  if (!vectors_.allFinite())
    throw Error("XvectorPool: pool has non-finite entries");
}

std::string_view to_string(PoolDistance d) {
  return d == PoolDistance::kCosine ? "cosine" : "euclidean";
}

PoolDistance parse_pool_distance(std::string_view text) {
  if (text == "cosine") return PoolDistance::kCosine;
  if (text == "euclidean") return PoolDistance::kEuclidean;
  throw Error("unknown pool distance '" + std::string(text) +
              "' (expected cosine or euclidean)");
}

namespace {

std::string padded(const char *prefix, int value, int width) {
  std::string digits_str = std::to_string(value);
  if (static_cast<int>(digits_str.size()) < width)
    digits_str.insert(0, static_cast<size_t>(width) - digits_str.size(), '0');
  return prefix + digits_str;
}

int digits(int v) {
  int n = 1;
  while (v >= 10) {
    v /= 10;
    ++n;
  }
  return n;
}

/// Speaker ids in order of first appearance, with their row lists.
std::vector<std::pair<std::string, std::vector<Index>>> group_by_speaker(
    const EmbeddingSet &set) {
  std::vector<std::pair<std::string, std::vector<Index>>> groups;
  std::unordered_map<std::string_view, size_t> slot;
  for (Index i = 0; i < set.size(); ++i) {
    const auto &spk = set.speaker_ids()[i];
    auto [it, fresh] = slot.emplace(spk, groups.size());
    if (fresh) groups.emplace_back(spk, std::vector<Index>{});
    groups[it->second].second.push_back(i);
  }
  return groups;
}

std::vector<int> distribute(int total, int count) {
  std::vector<int> out(static_cast<size_t>(count), total / count);
  for (int i = 0; i < total % count; ++i) ++out[static_cast<size_t>(i)];
  return out;
}

}  // namespace

EmbeddingSet generate_population(int speakers, int utts_per_speaker, int dim,
                                 double spread, double within,
                                 std::uint64_t seed) {
  if (speakers < 1 || utts_per_speaker < 1 || dim < 1)
    throw Error("generate_population: counts must be >= 1");
  if (!(spread > 0.0) || !(within > 0.0))
    throw Error("generate_population: spread and within must be positive");
  Rng rng(seed);
  const Index n = static_cast<Index>(speakers) * utts_per_speaker;
  Eigen::MatrixXd vectors(n, dim);
  std::vector<std::string> utt, spk;
  std::vector<Gender> gen;
  utt.reserve(static_cast<size_t>(n));
  spk.reserve(static_cast<size_t>(n));
  gen.reserve(static_cast<size_t>(n));
  const int sw = std::max(3, digits(speakers - 1));
  const int uw = std::max(3, digits(utts_per_speaker - 1));
  Index row = 0;
  for (int s = 0; s < speakers; ++s) {
    const Eigen::RowVectorXd centroid = spread * gaussian_matrix(1, dim, rng);
    const std::string sid = padded("spk", s, sw);
    const Gender g = s % 2 == 0 ? Gender::F : Gender::M;
    for (int u = 0; u < utts_per_speaker; ++u, ++row) {
      vectors.row(row) = centroid + within * gaussian_matrix(1, dim, rng);
      utt.push_back(sid + padded("-u", u, uw));
      spk.push_back(sid);
      gen.push_back(g);
    }
  }
  return EmbeddingSet(std::move(vectors), std::move(utt), std::move(spk),
                      std::move(gen));
}

double within_speaker_std(const EmbeddingSet &set) {
  if (set.is_empty()) return 0.0;
  double sq = 0.0;
  for (const auto &[spk, rows] : group_by_speaker(set)) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(set.dim());
    for (Index r : rows) mean += set.vectors().row(r);
    mean /= static_cast<double>(rows.size());
    for (Index r : rows) sq += (set.vectors().row(r) - mean).squaredNorm();
  }
  return std::sqrt(sq / static_cast<double>(set.size() * set.dim()));
}

std::vector<Index> furthest_pool_vectors(const Eigen::RowVectorXd &query,
                                         const XvectorPool &pool,
                                         int pool_select,
                                         PoolDistance distance) {
  const Eigen::MatrixXd &p = pool.vectors();
  if (query.size() != p.cols())
    throw DimensionError("anonymizer: query dimension " +
                         std::to_string(query.size()) + " != pool dimension " +
                         std::to_string(p.cols()));
  if (pool_select < 1 || pool_select > p.rows())
    throw Error("anonymizer: pool of " + std::to_string(p.rows()) +
                " vectors is smaller than pool_select = " +
                std::to_string(pool_select));
  Eigen::VectorXd dist(p.rows());
  if (distance == PoolDistance::kCosine) {
    const double qn = query.norm();
    if (qn == 0.0)
      throw Error("anonymizer: cosine distance undefined for a zero vector");
    for (Index i = 0; i < p.rows(); ++i) {
      const double pn = p.row(i).norm();
      if (pn == 0.0)
        throw Error("anonymizer: zero-norm pool vector " + std::to_string(i));
      dist(i) = 1.0 - query.dot(p.row(i)) / (qn * pn);
    }
  } else {
    dist = (p.rowwise() - query).rowwise().norm();
  }
  std::vector<Index> order(static_cast<size_t>(p.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return dist(a) > dist(b); });
  order.resize(static_cast<size_t>(pool_select));
  return order;
}

EmbeddingSet anonymize_set(const EmbeddingSet &set, const XvectorPool &pool,
                           const AnonymizerParams &params) {
  if (set.dim() != pool.dim())
    throw DimensionError("anonymize_set: set dimension " +
                         std::to_string(set.dim()) + " != pool dimension " +
                         std::to_string(pool.dim()));
  if (params.random_pick < 1 || params.random_pick > params.pool_select)
    throw Error("anonymize_set: need 1 <= random_pick <= pool_select");
  if (params.pool_select > pool.size())
    throw Error("anonymize_set: pool of " + std::to_string(pool.size()) +
                " vectors is smaller than pool_select = " +
                std::to_string(params.pool_select));
  const double sigma = params.noise_sigma ? *params.noise_sigma
                                          : 0.05 * within_speaker_std(set);
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw Error("anonymize_set: noise_sigma must be nonnegative");

  std::normal_distribution<double> normal(0.0, 1.0);
  auto make_target = [&](const Eigen::RowVectorXd &query, Rng &rng) {
    std::vector<Index> far = furthest_pool_vectors(
        query, pool, params.pool_select, params.distance);
    Eigen::RowVectorXd target = Eigen::RowVectorXd::Zero(set.dim());
    for (int k = 0; k < params.random_pick; ++k) {
      std::uniform_int_distribution<size_t> pick(static_cast<size_t>(k),
                                                 far.size() - 1);
      std::swap(far[static_cast<size_t>(k)], far[pick(rng)]);
      target += pool.vectors().row(far[static_cast<size_t>(k)]);
    }
    return Eigen::RowVectorXd(target / params.random_pick);
  };
  auto noisy = [&](const Eigen::RowVectorXd &target, Rng &rng) {
    Eigen::RowVectorXd out = target;
    if (sigma > 0.0)
      for (Index j = 0; j < out.size(); ++j) out(j) += sigma * normal(rng);
    return out;
  };

  Eigen::MatrixXd out(set.size(), set.dim());
  if (params.per_utterance) {
    for (Index i = 0; i < set.size(); ++i) {
      Rng rng(derive_seed(params.seed, set.utterance_ids()[i]));
      out.row(i) = noisy(make_target(set.vectors().row(i), rng), rng);
    }
  } else {
    for (const auto &[spk, rows] : group_by_speaker(set)) {
      Rng rng(derive_seed(params.seed, spk));
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(set.dim());
      for (Index r : rows) mean += set.vectors().row(r);
      mean /= static_cast<double>(rows.size());
      const Eigen::RowVectorXd target = make_target(mean, rng);
      for (Index r : rows) out.row(r) = noisy(target, rng);
    }
  }
  return set.with_vectors(std::move(out));
}

RotatedSet rotate_anonymize_set(const EmbeddingSet &set, std::uint64_t seed,
                                double noise_sigma) {
  if (!(noise_sigma >= 0.0))
    throw Error("rotate_anonymize_set: noise_sigma must be nonnegative");
  Rng rng(seed);
  Rotation r(random_orthogonal(set.dim(), rng),
             "rotate_anonymize(seed=" + std::to_string(seed) + ")");
  Eigen::MatrixXd v = set.vectors() * r.matrix();
  if (noise_sigma > 0.0) v += noise_sigma * gaussian_matrix(v.rows(), v.cols(), rng);
  return RotatedSet{set.with_vectors(std::move(v)), std::move(r)};
}

VpcLikeDataset make_vpc_like_dataset(const DatasetParams &params) {
  const DatasetLayout &lay = params.layout;
  if (lay.speakers < 2 || lay.enroll_f_speakers > (lay.speakers + 1) / 2 ||
      lay.enroll_m_speakers > lay.speakers / 2 || lay.enroll_f_speakers < 1 ||
      lay.enroll_m_speakers < 1)
    throw Error("make_vpc_like_dataset: inconsistent speaker layout");
  const int nf = (lay.speakers + 1) / 2, nm = lay.speakers / 2;
  const auto trial_f = distribute(lay.trial_f_utts, nf);
  const auto trial_m = distribute(lay.trial_m_utts, nm);
  const auto enroll_f = distribute(lay.enroll_f_utts, lay.enroll_f_speakers);
  const auto enroll_m = distribute(lay.enroll_m_utts, lay.enroll_m_speakers);

  // Per speaker (population order): enroll count, trial count.
  std::vector<std::pair<int, int>> counts;
  int max_total = 1;
  for (int s = 0; s < lay.speakers; ++s) {
    const int rank = s / 2;  // index within the speaker's gender
    int e, t;
    if (s % 2 == 0) {
      e = rank < lay.enroll_f_speakers ? enroll_f[static_cast<size_t>(rank)] : 0;
      t = trial_f[static_cast<size_t>(rank)];
    } else {
      e = rank < lay.enroll_m_speakers ? enroll_m[static_cast<size_t>(rank)] : 0;
      t = trial_m[static_cast<size_t>(rank)];
    }
    counts.emplace_back(e, t);
    max_total = std::max(max_total, e + t);
  }
  const EmbeddingSet population =
      generate_population(lay.speakers, max_total, params.dim, params.spread,
                          params.within, derive_seed(params.seed, "population"));
  std::vector<Index> enroll_rows, trial_rows;
  for (int s = 0; s < lay.speakers; ++s) {
    const Index base = static_cast<Index>(s) * max_total;
    const auto [e, t] = counts[static_cast<size_t>(s)];
    for (int u = 0; u < e; ++u) enroll_rows.push_back(base + u);
    for (int u = 0; u < t; ++u) trial_rows.push_back(base + e + u);
  }
  EmbeddingSet pool_set =
      generate_population(params.pool_size, 1, params.dim, params.spread,
                          params.within, derive_seed(params.seed, "pool"));
  EmbeddingSet enroll = population.select(enroll_rows);
  EmbeddingSet trials = population.select(trial_rows);
  const XvectorPool pool = XvectorPool::from_set(pool_set);

  AnonymizerParams provider = params.anonymizer;
  provider.seed = derive_seed(params.seed, "provider");
  AnonymizerParams attacker = params.anonymizer;
  attacker.seed = derive_seed(params.seed, "attacker");
  EmbeddingSet trials_anon = anonymize_set(trials, pool, provider);
  EmbeddingSet enroll_anon = anonymize_set(enroll, pool, attacker);
  return VpcLikeDataset{std::move(enroll), std::move(enroll_anon),
                        std::move(trials), std::move(trials_anon),
                        std::move(pool_set)};
}

}  // namespace xvalign
