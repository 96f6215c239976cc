// src/linalg.cc

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

#include "xvalign/linalg.h"

#include <algorithm>
#include <limits>
#include <vector>

#include "xvalign/error.h"

namespace xvalign {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ splitmix64(h));
}

Eigen::MatrixXd gaussian_matrix(Index rows, Index cols, Rng &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  // Row-major fill order so that a set's rows are generated one after another.
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

Eigen::MatrixXd random_orthogonal(Index d, Rng &rng) {
  const Eigen::MatrixXd g = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  // Re-orthogonalise to full precision.
  return polar_factor(q).orthogonal;
}

PolarFactor polar_factor(const Eigen::MatrixXd &m) {
  if (m.rows() != m.cols())
    throw DimensionError("polar_factor: matrix must be square");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU |
                                            Eigen::ComputeFullV);
  const auto &s = svd.singularValues();
  PolarFactor out;
  out.orthogonal = svd.matrixU() * svd.matrixV().transpose();
  const double tol = (s.size() > 0 ? s(0) : 0.0) *
                     static_cast<double>(m.rows()) *
                     std::numeric_limits<double>::epsilon() * 16;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++out.rank;
  return out;
}

double orthogonality_error(const Eigen::MatrixXd &w) {
  if (w.rows() != w.cols()) return std::numeric_limits<double>::infinity();
  return (w.transpose() * w - Eigen::MatrixXd::Identity(w.rows(), w.cols()))
      .cwiseAbs()
      .maxCoeff();
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd &a,
                                  const Eigen::MatrixXd &b) {
  if (a.cols() != b.cols())
    throw DimensionError("squared_distances: dimensions differ");
  const Eigen::VectorXd an = a.rowwise().squaredNorm();
  const Eigen::RowVectorXd bn = b.rowwise().squaredNorm().transpose();
  Eigen::MatrixXd c = -2.0 * (a * b.transpose());
  c.colwise() += an;
  c.rowwise() += bn;
  return c.cwiseMax(0.0);
}

double median(const Eigen::MatrixXd &m) {
  if (m.size() == 0) throw Error("median of an empty matrix");
  std::vector<double> v(m.data(), m.data() + m.size());
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace xvalign
