// xvalign/linalg.h

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

#ifndef XVALIGN_LINALG_H_
#define XVALIGN_LINALG_H_

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace xvalign {

using Index = Eigen::Index;
using Rng = std::mt19937_64;

/// Stable 64-bit substream seed for (seed, key); FNV-1a over the key mixed
/// with splitmix64, so per-speaker streams do not depend on iteration order.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key);

Eigen::MatrixXd gaussian_matrix(Index rows, Index cols, Rng &rng);

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q.
Eigen::MatrixXd random_orthogonal(Index d, Rng &rng);

struct PolarFactor {
  Eigen::MatrixXd orthogonal;  // U V^T
  Index rank = 0;              // numerical rank of the input
};

/// Nearest orthogonal matrix (Frobenius) to a square matrix, U V^T from its
/// SVD. No determinant correction.
PolarFactor polar_factor(const Eigen::MatrixXd &m);

/// max |W^T W - I|.
double orthogonality_error(const Eigen::MatrixXd &w);

/// C(i, j) = ||a_i - b_j||^2, clamped at zero.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd &a,
                                  const Eigen::MatrixXd &b);

/// Median of all entries (mean of the two middle values for even counts).
double median(const Eigen::MatrixXd &m);

}  // namespace xvalign

#endif  // XVALIGN_LINALG_H_
