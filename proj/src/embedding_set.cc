// src/embedding_set.cc

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

#include "xvalign/embedding_set.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "xvalign/error.h"
#include "xvalign/text_io.h"

namespace xvalign {

std::string_view to_string(Gender g) { return g == Gender::F ? "F" : "M"; }

std::string_view to_string(ExtractorTag tag) {
  return tag == ExtractorTag::kOriginal ? "original" : "retrained";
}

ExtractorTag parse_extractor_tag(std::string_view text) {
  if (text == "original") return ExtractorTag::kOriginal;
  if (text == "retrained") return ExtractorTag::kRetrained;
  throw Error("unknown extractor tag '" + std::string(text) +
              "' (expected original or retrained)");
}

namespace {

bool valid_id(const std::string &id) {
  if (id.empty()) return false;
  for (char c : id)
    if (std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

EmbeddingSet::EmbeddingSet(Eigen::MatrixXd vectors,
                           std::vector<std::string> utterance_ids,
                           std::vector<std::string> speaker_ids,
                           std::vector<Gender> genders, ExtractorTag extractor)
    : vectors_(std::move(vectors)),
      utterance_ids_(std::move(utterance_ids)),
      speaker_ids_(std::move(speaker_ids)),
      genders_(std::move(genders)),
      extractor_(extractor) {
  const auto n = static_cast<size_t>(vectors_.rows());
  if (vectors_.cols() < 1) throw DimensionError("embedding dimension must be >= 1");
  if (utterance_ids_.size() != n || speaker_ids_.size() != n ||
      genders_.size() != n)
    throw Error("embedding set metadata length does not match row count " +
                std::to_string(n));
  std::unordered_set<std::string_view> seen;
  seen.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (!valid_id(utterance_ids_[i]) || !valid_id(speaker_ids_[i]))
      throw Error("row " + std::to_string(i) +
                  ": ids must be non-empty and contain no whitespace");
    if (!seen.insert(utterance_ids_[i]).second)
      throw Error("duplicate utterance id '" + utterance_ids_[i] + "'");
    if (genders_[i] != Gender::F && genders_[i] != Gender::M)
      throw Error("row " + std::to_string(i) + ": invalid gender");
    if (!vectors_.row(static_cast<Index>(i)).allFinite())
      throw Error("non-finite value in row of utterance '" +
                  utterance_ids_[i] + "'");
  }
}

EmbeddingSet EmbeddingSet::empty(Index dim, ExtractorTag extractor) {
  return EmbeddingSet(Eigen::MatrixXd(0, dim), {}, {}, {}, extractor);
}

EmbeddingSet EmbeddingSet::with_vectors(Eigen::MatrixXd vectors) const {
  if (vectors.rows() != size())
    throw DimensionError("with_vectors: expected " + std::to_string(size()) +
                         " rows, got " + std::to_string(vectors.rows()));
  return EmbeddingSet(std::move(vectors), utterance_ids_, speaker_ids_,
                      genders_, extractor_);
}

EmbeddingSet EmbeddingSet::with_extractor(ExtractorTag extractor) const {
  EmbeddingSet out = *this;
  out.extractor_ = extractor;
  return out;
}

EmbeddingSet EmbeddingSet::select(std::span<const Index> rows) const {
  Eigen::MatrixXd v(static_cast<Index>(rows.size()), dim());
  std::vector<std::string> utt, spk;
  std::vector<Gender> gen;
  utt.reserve(rows.size());
  spk.reserve(rows.size());
  gen.reserve(rows.size());
  for (size_t k = 0; k < rows.size(); ++k) {
    const Index r = rows[k];
    if (r < 0 || r >= size())
      throw Error("select: row index " + std::to_string(r) + " out of range");
    v.row(static_cast<Index>(k)) = vectors_.row(r);
    utt.push_back(utterance_ids_[r]);
    spk.push_back(speaker_ids_[r]);
    gen.push_back(genders_[r]);
  }
  return EmbeddingSet(std::move(v), std::move(utt), std::move(spk),
                      std::move(gen), extractor_);
}

bool operator==(const EmbeddingSet &a, const EmbeddingSet &b) {
  return a.extractor_ == b.extractor_ && a.vectors_.rows() == b.vectors_.rows() &&
         a.vectors_.cols() == b.vectors_.cols() && a.vectors_ == b.vectors_ &&
         a.utterance_ids_ == b.utterance_ids_ &&
         a.speaker_ids_ == b.speaker_ids_ && a.genders_ == b.genders_;
}

Eigen::MatrixXd PairedSets::source_rows() const {
  Eigen::MatrixXd out(static_cast<Index>(pairing.size()), source.dim());
  for (size_t k = 0; k < pairing.size(); ++k)
    out.row(static_cast<Index>(k)) = source.vectors().row(pairing[k].first);
  return out;
}

Eigen::MatrixXd PairedSets::target_rows() const {
  Eigen::MatrixXd out(static_cast<Index>(pairing.size()), target.dim());
  for (size_t k = 0; k < pairing.size(); ++k)
    out.row(static_cast<Index>(k)) = target.vectors().row(pairing[k].second);
  return out;
}

EmbeddingSet parse_embedding_set(std::string_view text,
                                 const std::string &source_name) {
  LineReader reader(text);
  std::vector<std::string_view> tokens;
  if (!reader.next(tokens))
    throw FormatError(source_name, 0, "missing '<N> <d>' header");
  if (tokens.size() != 2)
    throw FormatError(source_name, reader.line(),
                      "header must be '<N> <d>'");
  const long n = parse_integer(tokens[0], source_name, reader.line());
  const long d = parse_integer(tokens[1], source_name, reader.line());
  if (n < 1 || d < 1)
    throw FormatError(source_name, reader.line(),
                      "header values must be >= 1");

  ExtractorTag extractor = ExtractorTag::kOriginal;
  Eigen::MatrixXd vectors(n, d);
  std::vector<std::string> utt, spk;
  std::vector<Gender> gen;
  utt.reserve(n);
  spk.reserve(n);
  gen.reserve(n);
  std::unordered_set<std::string> seen;

  bool first = true;
  long row = 0;
  while (reader.next(tokens)) {
    const int line = reader.line();
    if (first && !tokens.empty() && tokens[0] == "extractor") {
      first = false;
      if (tokens.size() != 2)
        throw FormatError(source_name, line,
                          "expected 'extractor <original|retrained>'");
      try {
        extractor = parse_extractor_tag(tokens[1]);
      } catch (const Error &e) {
        throw FormatError(source_name, line, e.what());
      }
      continue;
    }
    first = false;
    if (row >= n)
      throw FormatError(source_name, line,
                        "more rows than the " + std::to_string(n) +
                            " declared in the header");
    if (static_cast<long>(tokens.size()) != d + 3)
      throw FormatError(source_name, line,
                        "dimension mismatch: expected " + std::to_string(d) +
                            " values, found " +
                            std::to_string(static_cast<long>(tokens.size()) - 3));
    std::string id(tokens[0]);
    if (!seen.insert(id).second)
      throw FormatError(source_name, line, "duplicate utterance id '" + id + "'");
    Gender g;
    if (tokens[2] == "F")
      g = Gender::F;
    else if (tokens[2] == "M")
      g = Gender::M;
    else
      throw FormatError(source_name, line,
                        "gender must be F or M, found '" +
                            std::string(tokens[2]) + "'");
    for (long j = 0; j < d; ++j) {
      const double v = parse_real(tokens[3 + j], source_name, line);
      if (!std::isfinite(v))
        throw FormatError(source_name, line, "non-finite value '" +
                                                 std::string(tokens[3 + j]) +
                                                 "'");
      vectors(row, j) = v;
    }
    utt.push_back(std::move(id));
    spk.emplace_back(tokens[1]);
    gen.push_back(g);
    ++row;
  }
  if (row != n)
    throw FormatError(source_name, reader.line(),
                      "header declares " + std::to_string(n) +
                          " rows, found " + std::to_string(row));
  return EmbeddingSet(std::move(vectors), std::move(utt), std::move(spk),
                      std::move(gen), extractor);
}

EmbeddingSet load_embedding_set(const std::filesystem::path &path) {
  return parse_embedding_set(read_text_file(path), path.string());
}

std::string format_embedding_set(const EmbeddingSet &set) {
  if (set.is_empty())
    throw Error("format_embedding_set: embedding files hold at least one row");
  std::string out;
  out.reserve(static_cast<size_t>(set.size() * (set.dim() * 24 + 32) + 64));
  out += std::to_string(set.size()) + " " + std::to_string(set.dim()) + "\n";
  out += "extractor ";
  out += to_string(set.extractor());
  out += "\n";
  for (Index i = 0; i < set.size(); ++i) {
    out += set.utterance_ids()[i];
    out += ' ';
    out += set.speaker_ids()[i];
    out += ' ';
    out += to_string(set.genders()[i]);
    for (Index j = 0; j < set.dim(); ++j) {
      out += ' ';
      out += format_real(set.vectors()(i, j));
    }
    out += '\n';
  }
  return out;
}

void save_embedding_set(const EmbeddingSet &set,
                        const std::filesystem::path &path) {
  write_text_file(path, format_embedding_set(set));
}

EmbeddingSet filter_gender(const EmbeddingSet &set, Gender g) {
  std::vector<Index> rows;
  for (Index i = 0; i < set.size(); ++i)
    if (set.genders()[i] == g) rows.push_back(i);
  return set.select(rows);
}

std::pair<EmbeddingSet, EmbeddingSet> split_by_gender(const EmbeddingSet &set) {
  return {filter_gender(set, Gender::F), filter_gender(set, Gender::M)};
}

PairedSets pair_by_utterance(const EmbeddingSet &source,
                             const EmbeddingSet &target) {
  std::unordered_map<std::string_view, Index> target_index;
  target_index.reserve(static_cast<size_t>(target.size()));
  for (Index j = 0; j < target.size(); ++j)
    target_index.emplace(target.utterance_ids()[j], j);
  std::vector<std::pair<Index, Index>> pairing;
  for (Index i = 0; i < source.size(); ++i) {
    auto it = target_index.find(source.utterance_ids()[i]);
    if (it != target_index.end()) pairing.emplace_back(i, it->second);
  }
  if (pairing.empty())
    throw Error(
        "pair_by_utterance: sets share no utterance id; supervised alignment "
        "is impossible");
  return PairedSets{source, target, std::move(pairing)};
}

EmbeddingSet concatenate(const EmbeddingSet &a, const EmbeddingSet &b) {
  if (a.dim() != b.dim())
    throw DimensionError("concatenate: dimensions " + std::to_string(a.dim()) +
                         " and " + std::to_string(b.dim()) + " differ");
  Eigen::MatrixXd v(a.size() + b.size(), a.dim());
  v << a.vectors(), b.vectors();
  auto join = [](auto x, const auto &y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  return EmbeddingSet(std::move(v), join(a.utterance_ids(), b.utterance_ids()),
                      join(a.speaker_ids(), b.speaker_ids()),
                      join(a.genders(), b.genders()), a.extractor());
}

EmbeddingSet length_normalize(const EmbeddingSet &set) {
  Eigen::MatrixXd v = set.vectors();
  for (Index i = 0; i < v.rows(); ++i) {
    const double norm = v.row(i).norm();
    if (norm == 0.0)
      throw Error("length_normalize: zero-norm vector for utterance '" +
                  set.utterance_ids()[i] + "'");
    v.row(i) /= norm;
  }
  return set.with_vectors(std::move(v));
}

}  // namespace xvalign
