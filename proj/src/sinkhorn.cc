// src/sinkhorn.cc

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

#include <cmath>
#include <string>

#include "xvalign/error.h"
#include "xvalign/transport.h"

namespace xvalign {

double TransportPlan::marginal_error() const {
  const double rows =
      (matrix.rowwise().sum() - row_marginals).cwiseAbs().maxCoeff();
  const double cols =
      (matrix.colwise().sum().transpose() - col_marginals).cwiseAbs().maxCoeff();
  return std::max(rows, cols);
}

TransportPlan sinkhorn_transport(const Eigen::MatrixXd &cost, double epsilon,
                                 int max_iterations, double tolerance) {
  const Index n = cost.rows(), m = cost.cols();
  if (n < 1 || m < 1) throw Error("sinkhorn_transport: empty cost matrix");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error("sinkhorn_transport: epsilon must be positive and finite");
  if (max_iterations < 1)
    throw Error("sinkhorn_transport: at least one iteration is required");
  if (!cost.allFinite())
    throw Error("sinkhorn_transport: cost matrix has non-finite entries");

  const Eigen::VectorXd a = Eigen::VectorXd::Constant(n, 1.0 / n);
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(m, 1.0 / m);

  const Eigen::VectorXd row_min = cost.rowwise().minCoeff();
  Eigen::MatrixXd kernel = cost;
  kernel.colwise() -= row_min;
  // Scalar exp: the vectorised one clamps tiny results instead of returning
  // zero, which would hide underflow.
  kernel = kernel.unaryExpr(
      [epsilon](double c) { return std::exp(-c / epsilon); });

  Eigen::VectorXd u(n), v = Eigen::VectorXd::Ones(m);
  auto bad = [](const Eigen::VectorXd &x) {
    return !x.allFinite() || (x.array() <= 0.0).any();
  };

  int it = 0;
  for (; it < max_iterations; ++it) {
    const Eigen::VectorXd kv = kernel * v;
    if (bad(kv))
      throw NumericalError(
          "sinkhorn_transport: row scaling underflow, epsilon " +
              std::to_string(epsilon) + " is too small for the cost range",
          it);
    u = a.cwiseQuotient(kv);
    const Eigen::VectorXd ktu = kernel.transpose() * u;
    if (bad(ktu) || bad(u))
      throw NumericalError(
          "sinkhorn_transport: column scaling underflow, epsilon " +
              std::to_string(epsilon) + " is too small for the cost range",
          it);
    v = b.cwiseQuotient(ktu);
    if (bad(v))
      throw NumericalError("sinkhorn_transport: scaling vector overflow", it);
    if (tolerance > 0.0) {
      const Eigen::VectorXd rows = u.cwiseProduct(kernel * v);
      if (((rows - a).cwiseAbs().array() <= tolerance * a.array()).all()) {
        ++it;
        break;
      }
    }
  }

  TransportPlan plan;
  plan.matrix = u.asDiagonal() * kernel * v.asDiagonal();
  plan.row_marginals = a;
  plan.col_marginals = b;
  plan.iterations = it;
  return plan;
}

}  // namespace xvalign
