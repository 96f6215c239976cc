// xvalign/metrics.h

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

#ifndef XVALIGN_METRICS_H_
#define XVALIGN_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xvalign/embedding_set.h"

namespace xvalign {

enum class ScoringMode {
  kSpeakerModel,  // one model per enroll speaker: mean of its rows
  kUtterance,     // every enroll row scored on its own
};

std::string_view to_string(ScoringMode mode);
ScoringMode parse_scoring_mode(std::string_view text);

struct TrialScore {
  std::string trial_utterance;
  std::string enroll_speaker;
  /// Enroll speaker id (speaker-model scoring) or utterance id.
  std::string enroll_id;
  double score = 0.0;
  bool is_target = false;
};

struct ScoreSet {
  std::vector<TrialScore> scores;

  std::vector<double> target_scores() const;
  std::vector<double> nontarget_scores() const;
};

/// Cosine similarity of every trial row against every enroll model, trial
/// major, models in order of first appearance.  is_target when speaker ids
/// match.  Zero-norm vectors are an error naming the utterance (or speaker,
/// for a zero speaker mean).
ScoreSet cosine_score_sets(const EmbeddingSet &trials,
                           const EmbeddingSet &enroll,
                           ScoringMode mode = ScoringMode::kSpeakerModel);

/**
   Equal error rate, as a proportion in [0, 1].

   A trial is accepted when score >= threshold.  Thresholds sweep the sorted
   unique scores plus +inf; at each the false-rejection rate (targets below)
   and false-acceptance rate (non-targets at or above) are evaluated, and the
   EER is read where the segment joining the two adjacent operating points
   that bracket FRR = FAR crosses the diagonal.
*/
double compute_eer(std::span<const double> target_scores,
                   std::span<const double> nontarget_scores);
double compute_eer(const ScoreSet &scores);

struct Top1Options {
  /// Skip reference rows whose utterance id equals the query's.  Off by
  /// default: reconstructed trials share ids with their clear counterparts.
  bool exclude_same_utterance = false;
};

/// For each reconstructed row, the euclidean-nearest reference row (lowest
/// index on ties); -1 when every candidate was excluded.
std::vector<Index> nearest_reference_rows(const EmbeddingSet &reconstructed,
                                          const EmbeddingSet &reference,
                                          const Top1Options &options = {});

/// Fraction of reconstructed rows whose nearest reference row has the same
/// speaker id.
double top1_speaker_accuracy(const EmbeddingSet &reconstructed,
                             const EmbeddingSet &reference,
                             const Top1Options &options = {});

/// One results-table row.  Metrics are absent when the corresponding gender
/// has no data; `error` is non-empty for a failed scenario.
struct AttackReport {
  std::string scenario;
  std::string algorithm;
  bool oracle = false;
  bool gender_dependent = false;
  std::optional<int> pca;
  ExtractorTag extractor = ExtractorTag::kOriginal;
  ScoringMode scoring = ScoringMode::kSpeakerModel;
  std::optional<double> eer_f, eer_m, top1_f, top1_m;
  std::string error;

  bool ok() const { return error.empty(); }
};

/// Column header line (no trailing newline).
std::string report_tsv_header();
/// One TSV line (no trailing newline); metrics with 4 decimals, "-" if absent.
std::string report_tsv_row(const AttackReport &report);
/// Header plus one line per report, LF terminated.
std::string format_report_tsv(std::span<const AttackReport> reports);

}  // namespace xvalign

#endif  // XVALIGN_METRICS_H_
