// xvalign/procrustes.h

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

#ifndef XVALIGN_PROCRUSTES_H_
#define XVALIGN_PROCRUSTES_H_

#include <filesystem>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "xvalign/embedding_set.h"

namespace xvalign {

/// Maximum |W^T W - I| accepted for a Rotation.
inline constexpr double kOrthogonalityTolerance = 1e-8;

/**
   An orthogonal d x d matrix acting on row vectors (x -> x W), tagged with
   the algorithm or scenario that produced it.  The constructor rejects
   matrices that are not square or not orthogonal to
   kOrthogonalityTolerance.
*/
class Rotation {
 public:
  Rotation(Eigen::MatrixXd matrix, std::string provenance);
  static Rotation identity(Index d, std::string provenance = "identity");

  const Eigen::MatrixXd &matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }
  const std::string &provenance() const { return provenance_; }
  /// True when the provenance carries a solver warning.
  bool has_warning() const;
  Rotation with_provenance(std::string provenance) const;

 private:
  Eigen::MatrixXd matrix_;
  std::string provenance_;
};

/// argmin_W ||A W - B||_F^2 over orthogonal W, with A, B the rows paired in
/// pairing order: W = U V^T for U S V^T = svd(A^T B).  Rank-deficient
/// cross-covariance is accepted and noted in the provenance.
Rotation solve_procrustes(const PairedSets &paired);

/// Same solve on explicit row-aligned matrices.
Rotation solve_procrustes(const Eigen::MatrixXd &source,
                          const Eigen::MatrixXd &target,
                          std::string_view provenance = "procrustes");

/// x -> x W for every row.
EmbeddingSet apply_rotation(const EmbeddingSet &set, const Rotation &w);
/// x -> x W^T for every row; undoes apply_rotation.
EmbeddingSet apply_inverse_rotation(const EmbeddingSet &set, const Rotation &w);

/// ||A W - B||_F^2 over the paired rows.
double alignment_residual(const PairedSets &paired, const Rotation &w);
double alignment_residual(const Eigen::MatrixXd &source,
                          const Eigen::MatrixXd &target, const Rotation &w);

/// Text format: "<d>", "provenance <string>", then d rows of d values.
void save_rotation(const Rotation &w, const std::filesystem::path &path);
Rotation load_rotation(const std::filesystem::path &path);
std::string format_rotation(const Rotation &w);
Rotation parse_rotation(std::string_view text,
                        const std::string &source_name = "<memory>");

}  // namespace xvalign

#endif  // XVALIGN_PROCRUSTES_H_
