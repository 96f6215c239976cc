// xvalign/pca.h

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

#ifndef XVALIGN_PCA_H_
#define XVALIGN_PCA_H_

#include <filesystem>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "xvalign/embedding_set.h"

namespace xvalign {

/// Default number of retained components.
inline constexpr int kDefaultPcaComponents = 70;

/// A fitted projection x -> (x - mean) components^T onto k orthonormal axes
/// ordered by decreasing variance.
struct PcaModel {
  Eigen::RowVectorXd mean;                  // 1 x d
  Eigen::MatrixXd components;               // k x d, orthonormal rows
  Eigen::VectorXd explained_variance;       // k eigenvalues, 1/(N-1) scaling
  Eigen::VectorXd explained_variance_ratio; // k, non-increasing, sum <= 1

  Index input_dim() const { return components.cols(); }
  Index output_dim() const { return components.rows(); }
};

/// Top-k right singular vectors of the centred data.  Each component is
/// sign-flipped so that its largest-magnitude entry is positive (first such
/// entry on exact ties).  Requires 1 <= k <= min(N, d) and data that is not
/// constant.
PcaModel fit_pca(const EmbeddingSet &set, int k = kDefaultPcaComponents);
PcaModel fit_pca(const Eigen::MatrixXd &data, int k = kDefaultPcaComponents);

EmbeddingSet transform_pca(const EmbeddingSet &set, const PcaModel &model);

/// sum(explained_variance_ratio) >= threshold.
bool explained_variance_check(const PcaModel &model, double threshold);

/// Text format:
///   "<k> <d>"
///   "mean <d values>"
///   "ratio <k values>"
///   "variance <k values>"
///   k rows of d values
void save_pca_model(const PcaModel &model, const std::filesystem::path &path);
PcaModel load_pca_model(const std::filesystem::path &path);
std::string format_pca_model(const PcaModel &model);
PcaModel parse_pca_model(std::string_view text,
                         const std::string &source_name = "<memory>");

}  // namespace xvalign

#endif  // XVALIGN_PCA_H_
