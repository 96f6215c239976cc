// src/metrics.cc

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

#include "xvalign/metrics.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <unordered_map>

#include "xvalign/error.h"

namespace xvalign {

std::string_view to_string(ScoringMode mode) {
  return mode == ScoringMode::kSpeakerModel ? "speaker" : "utterance";
}

ScoringMode parse_scoring_mode(std::string_view text) {
  if (text == "speaker") return ScoringMode::kSpeakerModel;
  if (text == "utterance") return ScoringMode::kUtterance;
  throw Error("unknown scoring mode '" + std::string(text) +
              "' (expected speaker or utterance)");
}

std::vector<double> ScoreSet::target_scores() const {
  std::vector<double> out;
  for (const auto &s : scores)
    if (s.is_target) out.push_back(s.score);
  return out;
}

std::vector<double> ScoreSet::nontarget_scores() const {
  std::vector<double> out;
  for (const auto &s : scores)
    if (!s.is_target) out.push_back(s.score);
  return out;
}

ScoreSet cosine_score_sets(const EmbeddingSet &trials,
                           const EmbeddingSet &enroll, ScoringMode mode) {
  if (trials.dim() != enroll.dim())
    throw DimensionError("cosine_score_sets: trial dimension " +
                         std::to_string(trials.dim()) +
                         " != enroll dimension " +
                         std::to_string(enroll.dim()));

  // Enroll models.
  std::vector<std::string> model_speaker, model_id;
  Eigen::MatrixXd models;
  if (mode == ScoringMode::kSpeakerModel) {
    std::unordered_map<std::string_view, Index> slot;
    std::vector<Index> counts;
    for (Index i = 0; i < enroll.size(); ++i) {
      auto [it, fresh] = slot.emplace(enroll.speaker_ids()[i],
                                      static_cast<Index>(model_speaker.size()));
      if (fresh) {
        model_speaker.push_back(enroll.speaker_ids()[i]);
        counts.push_back(0);
      }
      ++counts[static_cast<size_t>(it->second)];
    }
    models = Eigen::MatrixXd::Zero(static_cast<Index>(model_speaker.size()),
                                   enroll.dim());
    for (Index i = 0; i < enroll.size(); ++i)
      models.row(slot[enroll.speaker_ids()[i]]) += enroll.vectors().row(i);
    for (Index m = 0; m < models.rows(); ++m)
      models.row(m) /= static_cast<double>(counts[static_cast<size_t>(m)]);
    model_id = model_speaker;
  } else {
    models = enroll.vectors();
    model_speaker = enroll.speaker_ids();
    model_id = enroll.utterance_ids();
  }

  Eigen::MatrixXd model_unit = models;
  for (Index m = 0; m < model_unit.rows(); ++m) {
    const double norm = model_unit.row(m).norm();
    if (norm == 0.0)
      throw Error("cosine_score_sets: zero-norm enroll " +
                  std::string(mode == ScoringMode::kSpeakerModel
                                  ? "speaker model '"
                                  : "utterance '") +
                  model_id[static_cast<size_t>(m)] + "'");
    model_unit.row(m) /= norm;
  }
  Eigen::MatrixXd trial_unit = trials.vectors();
  for (Index t = 0; t < trial_unit.rows(); ++t) {
    const double norm = trial_unit.row(t).norm();
    if (norm == 0.0)
      throw Error("cosine_score_sets: zero-norm trial utterance '" +
                  trials.utterance_ids()[t] + "'");
    trial_unit.row(t) /= norm;
  }

  const Eigen::MatrixXd cos = trial_unit * model_unit.transpose();
  ScoreSet out;
  out.scores.reserve(static_cast<size_t>(cos.size()));
  for (Index t = 0; t < cos.rows(); ++t) {
    for (Index m = 0; m < cos.cols(); ++m) {
      const auto &spk = model_speaker[static_cast<size_t>(m)];
      out.scores.push_back(TrialScore{trials.utterance_ids()[t], spk,
                                      model_id[static_cast<size_t>(m)],
                                      cos(t, m),
                                      spk == trials.speaker_ids()[t]});
    }
  }
  return out;
}

double compute_eer(std::span<const double> target_scores,
                   std::span<const double> nontarget_scores) {
  if (target_scores.empty() || nontarget_scores.empty())
    throw Error("compute_eer: need at least one target and one non-target "
                "score (have " +
                std::to_string(target_scores.size()) + " and " +
                std::to_string(nontarget_scores.size()) + ")");
  std::vector<double> tgt(target_scores.begin(), target_scores.end());
  std::vector<double> non(nontarget_scores.begin(), nontarget_scores.end());
  std::sort(tgt.begin(), tgt.end());
  std::sort(non.begin(), non.end());
  std::vector<double> thresholds;
  thresholds.reserve(tgt.size() + non.size() + 1);
  std::merge(tgt.begin(), tgt.end(), non.begin(), non.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  const double nt = static_cast<double>(tgt.size());
  const double nn = static_cast<double>(non.size());
  size_t below_t = 0, below_n = 0;
  double prev_frr = 0.0, prev_far = 1.0;
  for (size_t k = 0; k < thresholds.size(); ++k) {
    const double th = thresholds[k];
    while (below_t < tgt.size() && tgt[below_t] < th) ++below_t;
    while (below_n < non.size() && non[below_n] < th) ++below_n;
    const double frr = static_cast<double>(below_t) / nt;
    const double far = static_cast<double>(non.size() - below_n) / nn;
    const double diff = frr - far;
    if (diff >= 0.0) {
      if (diff == 0.0 || k == 0) return frr;
      // prev_frr - prev_far < 0 <= diff: cross the diagonal on the segment.
      const double prev_diff = prev_frr - prev_far;
      const double t = -prev_diff / (diff - prev_diff);
      return prev_frr + t * (frr - prev_frr);
    }
    prev_frr = frr;
    prev_far = far;
  }
  return 1.0;  // unreachable: at +inf, FRR = 1 and FAR = 0
}

double compute_eer(const ScoreSet &scores) {
  const auto tgt = scores.target_scores();
  const auto non = scores.nontarget_scores();
  return compute_eer(tgt, non);
}

std::vector<Index> nearest_reference_rows(const EmbeddingSet &reconstructed,
                                          const EmbeddingSet &reference,
                                          const Top1Options &options) {
  if (reconstructed.dim() != reference.dim())
    throw DimensionError("top1: reconstructed dimension " +
                         std::to_string(reconstructed.dim()) +
                         " != reference dimension " +
                         std::to_string(reference.dim()));
  if (reference.is_empty()) throw Error("top1: reference set is empty");

  const Eigen::MatrixXd &q = reconstructed.vectors();
  const Eigen::MatrixXd &r = reference.vectors();
  const Eigen::RowVectorXd r_norm = r.rowwise().squaredNorm().transpose();
  const double r_norm_max = r_norm.maxCoeff();
  std::vector<Index> nearest(static_cast<size_t>(q.rows()), -1);
  // Blocked so the Gram matrix stays small for large sets.
  constexpr Index kBlock = 256;
  for (Index start = 0; start < q.rows(); start += kBlock) {
    const Index len = std::min(kBlock, q.rows() - start);
    Eigen::MatrixXd dist = -2.0 * (q.middleRows(start, len) * r.transpose());
    dist.rowwise() += r_norm;
    dist.colwise() += q.middleRows(start, len).rowwise().squaredNorm();
    for (Index i = 0; i < len; ++i) {
      const Index row = start + i;
      double best = std::numeric_limits<double>::infinity();
      Index arg = -1;
      auto allowed = [&](Index j) {
        return !options.exclude_same_utterance ||
               reference.utterance_ids()[j] != reconstructed.utterance_ids()[row];
      };
      for (Index j = 0; j < r.rows(); ++j)
        if (allowed(j)) best = std::min(best, dist(i, j));
      if (best == std::numeric_limits<double>::infinity()) continue;
      // The Gram expansion carries rounding error proportional to the
      // squared norms; candidates within that band are re-scored exactly.
      const double slack =
          1e-12 * (q.row(row).squaredNorm() + r_norm_max) + 1e-300;
      double exact_best = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < r.rows(); ++j) {
        if (!allowed(j) || dist(i, j) > best + slack) continue;
        const double d2 = (q.row(row) - r.row(j)).squaredNorm();
        if (d2 < exact_best) {
          exact_best = d2;
          arg = j;
        }
      }
      nearest[static_cast<size_t>(row)] = arg;
    }
  }
  return nearest;
}

double top1_speaker_accuracy(const EmbeddingSet &reconstructed,
                             const EmbeddingSet &reference,
                             const Top1Options &options) {
  if (reconstructed.is_empty())
    throw Error("top1_speaker_accuracy: reconstructed set is empty");
  const auto nearest = nearest_reference_rows(reconstructed, reference, options);
  size_t hits = 0;
  for (size_t i = 0; i < nearest.size(); ++i)
    if (nearest[i] >= 0 &&
        reference.speaker_ids()[nearest[i]] == reconstructed.speaker_ids()[i])
      ++hits;
  return static_cast<double>(hits) / static_cast<double>(nearest.size());
}

namespace {

std::string metric(const std::optional<double> &v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char &c : s)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

std::string report_tsv_header() {
  return "scenario\tgender_dependent\tpca\textractor\teer_f\teer_m\ttop1_f\t"
         "top1_m\talgorithm\toracle\tscoring\terror";
}

std::string report_tsv_row(const AttackReport &r) {
  std::string out = sanitize(r.scenario);
  out += '\t';
  out += r.gender_dependent ? "yes" : "no";
  out += '\t';
  out += r.pca ? std::to_string(*r.pca) : "-";
  out += '\t';
  out += to_string(r.extractor);
  for (const auto *m : {&r.eer_f, &r.eer_m, &r.top1_f, &r.top1_m}) {
    out += '\t';
    out += metric(*m);
  }
  out += '\t';
  out += r.algorithm.empty() ? "-" : sanitize(r.algorithm);
  out += '\t';
  out += r.oracle ? "yes" : "no";
  out += '\t';
  out += to_string(r.scoring);
  out += '\t';
  out += r.error.empty() ? "-" : sanitize(r.error);
  return out;
}

std::string format_report_tsv(std::span<const AttackReport> reports) {
  std::string out = report_tsv_header() + "\n";
  for (const auto &r : reports) out += report_tsv_row(r) + "\n";
  return out;
}

}  // namespace xvalign
