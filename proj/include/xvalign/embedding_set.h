// xvalign/embedding_set.h

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

#ifndef XVALIGN_EMBEDDING_SET_H_
#define XVALIGN_EMBEDDING_SET_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace xvalign {

using Index = Eigen::Index;

enum class Gender : char { F = 'F', M = 'M' };

/// Which x-vector extractor produced a set. Carried as metadata only.
enum class ExtractorTag { kOriginal, kRetrained };

std::string_view to_string(Gender g);
std::string_view to_string(ExtractorTag tag);
ExtractorTag parse_extractor_tag(std::string_view text);

/**
   A labeled matrix of N speaker embeddings of dimension d, one per row, with
   parallel utterance / speaker / gender metadata.

   Instances are immutable once constructed; the constructor validates every
   invariant (parallel lengths, d >= 1, unique utterance ids, finite values,
   ids free of whitespace) and throws xvalign::Error otherwise.  N = 0 is
   allowed in memory so that gender splits and filters can be empty; files
   always hold at least one row.
*/
class EmbeddingSet {
 public:
  EmbeddingSet(Eigen::MatrixXd vectors, std::vector<std::string> utterance_ids,
               std::vector<std::string> speaker_ids,
               std::vector<Gender> genders,
               ExtractorTag extractor = ExtractorTag::kOriginal);

  static EmbeddingSet empty(Index dim,
                            ExtractorTag extractor = ExtractorTag::kOriginal);

  Index size() const { return vectors_.rows(); }
  Index dim() const { return vectors_.cols(); }
  bool is_empty() const { return vectors_.rows() == 0; }

  const Eigen::MatrixXd &vectors() const { return vectors_; }
  const std::vector<std::string> &utterance_ids() const {
    return utterance_ids_;
  }
  const std::vector<std::string> &speaker_ids() const { return speaker_ids_; }
  const std::vector<Gender> &genders() const { return genders_; }
  ExtractorTag extractor() const { return extractor_; }

  /// Same metadata, new coordinates. Row count must match; dim may change.
  EmbeddingSet with_vectors(Eigen::MatrixXd vectors) const;
  EmbeddingSet with_extractor(ExtractorTag extractor) const;
  /// Subset of rows, in the given order.
  EmbeddingSet select(std::span<const Index> rows) const;

  friend bool operator==(const EmbeddingSet &a, const EmbeddingSet &b);

 private:
  Eigen::MatrixXd vectors_;
  std::vector<std::string> utterance_ids_;
  std::vector<std::string> speaker_ids_;
  std::vector<Gender> genders_;
  ExtractorTag extractor_;
};

/// Two sets and a one-to-one correspondence between some of their rows.
struct PairedSets {
  EmbeddingSet source;
  EmbeddingSet target;
  std::vector<std::pair<Index, Index>> pairing;

  /// Paired source rows, in pairing order.
  Eigen::MatrixXd source_rows() const;
  /// Paired target rows, in pairing order.
  Eigen::MatrixXd target_rows() const;
};

/// Reads the plain-text embedding format:
///   "<N> <d>"
///   "extractor <original|retrained>"        (optional, default original)
///   "<utt> <spk> <F|M> <v1> ... <vd>"        (N lines)
/// Lines starting with '#' and blank lines are ignored. Errors carry the
/// 1-based physical line number.
EmbeddingSet load_embedding_set(const std::filesystem::path &path);
EmbeddingSet parse_embedding_set(std::string_view text,
                                 const std::string &source_name = "<memory>");

/// Values are written with 17 significant digits, so load(save(s)) == s.
void save_embedding_set(const EmbeddingSet &set,
                        const std::filesystem::path &path);
std::string format_embedding_set(const EmbeddingSet &set);

/// (F rows, M rows), relative order preserved.
std::pair<EmbeddingSet, EmbeddingSet> split_by_gender(const EmbeddingSet &set);
EmbeddingSet filter_gender(const EmbeddingSet &set, Gender g);

/// Pairs rows sharing an utterance id, in source row order. Throws when the
/// sets share no utterance id (supervised alignment is impossible).
PairedSets pair_by_utterance(const EmbeddingSet &source,
                             const EmbeddingSet &target);

/// Row-wise concatenation. Dimensions must agree; extractor tag from `a`.
EmbeddingSet concatenate(const EmbeddingSet &a, const EmbeddingSet &b);

/// Scales every row to unit euclidean norm. Zero rows are an error.
EmbeddingSet length_normalize(const EmbeddingSet &set);

}  // namespace xvalign

#endif  // XVALIGN_EMBEDDING_SET_H_
