// xvalign/anonymizer.h

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

#ifndef XVALIGN_ANONYMIZER_H_
#define XVALIGN_ANONYMIZER_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "xvalign/embedding_set.h"
#include "xvalign/procrustes.h"

namespace xvalign {

/// External speaker embeddings the pseudo-identities are drawn from.
class XvectorPool {
 public:
  explicit XvectorPool(Eigen::MatrixXd vectors);
  static XvectorPool from_set(const EmbeddingSet &set) {
    return XvectorPool(set.vectors());
  }
  const Eigen::MatrixXd &vectors() const { return vectors_; }
  Index size() const { return vectors_.rows(); }
  Index dim() const { return vectors_.cols(); }

 private:
  Eigen::MatrixXd vectors_;
};

enum class PoolDistance { kCosine, kEuclidean };
std::string_view to_string(PoolDistance d);
PoolDistance parse_pool_distance(std::string_view text);

struct AnonymizerParams {
  int pool_select = 200;   // furthest pool vectors kept
  int random_pick = 100;   // of those, averaged into the target
  PoolDistance distance = PoolDistance::kCosine;
  /// Per-utterance Gaussian noise standing in for synthesis and
  /// re-extraction. Unset: 0.05 x the input's pooled within-speaker std.
  std::optional<double> noise_sigma;
  std::uint64_t seed = 0;
  /// Draw a fresh target per utterance instead of per speaker.
  bool per_utterance = false;
};

/// Speaker centroids ~ N(0, spread^2 I), utterances ~ N(centroid, within^2
/// I).  Speakers alternate F, M, F, ...  Ids are "spkNNN" and
/// "spkNNN-uMMM".
EmbeddingSet generate_population(int speakers, int utts_per_speaker, int dim,
                                 double spread, double within,
                                 std::uint64_t seed);

/// sqrt of the mean squared per-coordinate deviation from speaker means.
double within_speaker_std(const EmbeddingSet &set);

/**
   Embedding-space identity replacement.  For each speaker (or utterance,
   with per_utterance): rank pool vectors by distance from the speaker's
   mean vector, keep the pool_select furthest (lower pool index first on
   ties), draw random_pick of them without replacement and average them
   into the target.  Every output row is target + N(0, noise_sigma^2 I).

   Random streams are derived from (seed, speaker id), so a speaker's
   target does not depend on which other speakers are in the set.
*/
EmbeddingSet anonymize_set(const EmbeddingSet &set, const XvectorPool &pool,
                           const AnonymizerParams &params = {});

/// Indices of the pool_select pool vectors furthest from `query`.
std::vector<Index> furthest_pool_vectors(const Eigen::RowVectorXd &query,
                                         const XvectorPool &pool,
                                         int pool_select,
                                         PoolDistance distance);

struct RotatedSet {
  EmbeddingSet set;
  Rotation rotation;  // hidden ground truth: set = input * rotation + noise
};

/// Ground-truth test mode: a seeded Haar-random orthogonal map plus
/// Gaussian noise.
RotatedSet rotate_anonymize_set(const EmbeddingSet &set, std::uint64_t seed,
                                double noise_sigma);

/// Sizes of a VPC-style evaluation dataset.
struct DatasetLayout {
  int speakers = 40;           // trial speakers, alternating F/M
  int enroll_f_speakers = 16;  // first F speakers also enrolled
  int enroll_m_speakers = 13;
  int trial_f_utts = 734;
  int trial_m_utts = 762;
  int enroll_f_utts = 254;
  int enroll_m_utts = 184;
};

struct DatasetParams {
  DatasetLayout layout;
  int dim = 512;
  double spread = 1.0;
  double within = 0.3;
  int pool_size = 1000;
  std::uint64_t seed = 1;  // population and pool; anonymizer seeds derive
  AnonymizerParams anonymizer;  // seed field ignored
};

/// Clear and anonymized enroll/trial sets.  enroll_anon uses a different
/// anonymizer seed from trials_anon, as an attacker re-anonymizing its own
/// enrollment data would.
struct VpcLikeDataset {
  EmbeddingSet enroll;
  EmbeddingSet enroll_anon;
  EmbeddingSet trials;
  EmbeddingSet trials_anon;
  EmbeddingSet pool;
};

VpcLikeDataset make_vpc_like_dataset(const DatasetParams &params);

}  // namespace xvalign

#endif  // XVALIGN_ANONYMIZER_H_
