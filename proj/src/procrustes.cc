// src/procrustes.cc

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

#include "xvalign/procrustes.h"

#include "xvalign/error.h"
#include "xvalign/linalg.h"
#include "xvalign/text_io.h"

namespace xvalign {

namespace {
constexpr std::string_view kWarningMarker = "[warning:";

void check_dim(Index set_dim, const Rotation &w, const char *op) {
  if (set_dim != w.dim())
    throw DimensionError(std::string(op) + ": set dimension " +
                         std::to_string(set_dim) + " != rotation dimension " +
                         std::to_string(w.dim()));
}
}  // namespace

Rotation::Rotation(Eigen::MatrixXd matrix, std::string provenance)
    : matrix_(std::move(matrix)), provenance_(std::move(provenance)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
    throw DimensionError("rotation matrix must be square and non-empty");
  const double err = orthogonality_error(matrix_);
  if (!(err <= kOrthogonalityTolerance))
    throw Error("matrix is not orthogonal: max |W^T W - I| = " +
                format_real(err));
  for (char c : provenance_)
    if (c == '\n' || c == '\r')
      throw Error("rotation provenance must be a single line");
}

Rotation Rotation::identity(Index d, std::string provenance) {
  return Rotation(Eigen::MatrixXd::Identity(d, d), std::move(provenance));
}

bool Rotation::has_warning() const {
  return provenance_.find(kWarningMarker) != std::string::npos;
}

Rotation Rotation::with_provenance(std::string provenance) const {
  return Rotation(matrix_, std::move(provenance));
}

Rotation solve_procrustes(const Eigen::MatrixXd &source,
                          const Eigen::MatrixXd &target,
                          std::string_view provenance) {
  if (source.cols() != target.cols())
    throw DimensionError("solve_procrustes: source dimension " +
                         std::to_string(source.cols()) +
                         " != target dimension " +
                         std::to_string(target.cols()));
  if (source.rows() != target.rows())
    throw DimensionError("solve_procrustes: row counts differ");
  if (source.rows() < 1)
    throw Error("solve_procrustes: at least one pair is required");
  const Index d = source.cols();
  const PolarFactor polar = polar_factor(source.transpose() * target);
  std::string prov(provenance);
  if (polar.rank < d)
    prov += " [warning: rank-deficient cross-covariance, rank " +
            std::to_string(polar.rank) + " of " + std::to_string(d) + "]";
  return Rotation(polar.orthogonal, std::move(prov));
}

Rotation solve_procrustes(const PairedSets &paired) {
  if (paired.source.dim() != paired.target.dim())
    throw DimensionError("solve_procrustes: source dimension " +
                         std::to_string(paired.source.dim()) +
                         " != target dimension " +
                         std::to_string(paired.target.dim()));
  return solve_procrustes(paired.source_rows(), paired.target_rows());
}

EmbeddingSet apply_rotation(const EmbeddingSet &set, const Rotation &w) {
  check_dim(set.dim(), w, "apply_rotation");
  return set.with_vectors(set.vectors() * w.matrix());
}

EmbeddingSet apply_inverse_rotation(const EmbeddingSet &set,
                                    const Rotation &w) {
  check_dim(set.dim(), w, "apply_inverse_rotation");
  return set.with_vectors(set.vectors() * w.matrix().transpose());
}

double alignment_residual(const Eigen::MatrixXd &source,
                          const Eigen::MatrixXd &target, const Rotation &w) {
  if (source.cols() != w.dim() || target.cols() != w.dim() ||
      source.rows() != target.rows())
    throw DimensionError("alignment_residual: inconsistent dimensions");
  return (source * w.matrix() - target).squaredNorm();
}

double alignment_residual(const PairedSets &paired, const Rotation &w) {
  return alignment_residual(paired.source_rows(), paired.target_rows(), w);
}

std::string format_rotation(const Rotation &w) {
  std::string out = std::to_string(w.dim()) + "\n";
  out += "provenance " + w.provenance() + "\n";
  for (Index i = 0; i < w.dim(); ++i) {
    for (Index j = 0; j < w.dim(); ++j) {
      if (j) out += ' ';
      out += format_real(w.matrix()(i, j));
    }
    out += '\n';
  }
  return out;
}

Rotation parse_rotation(std::string_view text, const std::string &source_name) {
  LineReader reader(text);
  std::vector<std::string_view> tokens;
  if (!reader.next(tokens) || tokens.size() != 1)
    throw FormatError(source_name, reader.line(), "expected '<d>' header");
  const long d = parse_integer(tokens[0], source_name, reader.line());
  if (d < 1) throw FormatError(source_name, reader.line(), "d must be >= 1");
  std::string_view line;
  if (!reader.next_line(line))
    throw FormatError(source_name, reader.line(), "missing provenance line");
  line = trim(line);
  if (line.substr(0, 10) != "provenance")
    throw FormatError(source_name, reader.line(),
                      "expected 'provenance <string>'");
  std::string provenance(trim(line.substr(10)));
  Eigen::MatrixXd m(d, d);
  for (long i = 0; i < d; ++i) {
    if (!reader.next(tokens))
      throw FormatError(source_name, reader.line(),
                        "expected " + std::to_string(d) + " matrix rows");
    if (static_cast<long>(tokens.size()) != d)
      throw FormatError(source_name, reader.line(),
                        "dimension mismatch: expected " + std::to_string(d) +
                            " values");
    for (long j = 0; j < d; ++j)
      m(i, j) = parse_real(tokens[j], source_name, reader.line());
  }
  if (reader.next(tokens))
    throw FormatError(source_name, reader.line(), "trailing content");
  try {
    return Rotation(std::move(m), std::move(provenance));
  } catch (const Error &e) {
    throw FormatError(source_name, 0, e.what());
  }
}

void save_rotation(const Rotation &w, const std::filesystem::path &path) {
  write_text_file(path, format_rotation(w));
}

Rotation load_rotation(const std::filesystem::path &path) {
  return parse_rotation(read_text_file(path), path.string());
}

}  // namespace xvalign
