// src/pca.cc

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

#include "xvalign/pca.h"

#include "xvalign/error.h"
#include "xvalign/text_io.h"

namespace xvalign {

PcaModel fit_pca(const Eigen::MatrixXd &data, int k) {
  const Index n = data.rows(), d = data.cols();
  if (k < 1 || k > std::min(n, d))
    throw Error("fit_pca: k = " + std::to_string(k) +
                " out of range [1, min(N, d) = " +
                std::to_string(std::min(n, d)) + "]");
  PcaModel model;
  model.mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - model.mean;
  const double total = centered.squaredNorm();
  if (!(total > 0.0))
    throw Error("fit_pca: zero-variance data (all rows identical)");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  model.components = svd.matrixV().leftCols(k).transpose();
  for (Index c = 0; c < k; ++c) {
    Index arg = 0;
    model.components.row(c).cwiseAbs().maxCoeff(&arg);
    if (model.components(c, arg) < 0) model.components.row(c) *= -1.0;
  }
  const double scale = n > 1 ? 1.0 / static_cast<double>(n - 1) : 1.0;
  model.explained_variance = s.head(k).array().square() * scale;
  model.explained_variance_ratio = s.head(k).array().square() / total;
  return model;
}

PcaModel fit_pca(const EmbeddingSet &set, int k) {
  return fit_pca(set.vectors(), k);
}

EmbeddingSet transform_pca(const EmbeddingSet &set, const PcaModel &model) {
  if (set.dim() != model.input_dim())
    throw DimensionError("transform_pca: set dimension " +
                         std::to_string(set.dim()) + " != model dimension " +
                         std::to_string(model.input_dim()));
  Eigen::MatrixXd out =
      (set.vectors().rowwise() - model.mean) * model.components.transpose();
  return set.with_vectors(std::move(out));
}

bool explained_variance_check(const PcaModel &model, double threshold) {
  return model.explained_variance_ratio.sum() >= threshold;
}

namespace {
void append_row(std::string &out, const char *label, const auto &v) {
  out += label;
  for (Index i = 0; i < v.size(); ++i) {
    out += ' ';
    out += format_real(v(i));
  }
  out += '\n';
}
}  // namespace

std::string format_pca_model(const PcaModel &model) {
  std::string out = std::to_string(model.output_dim()) + " " +
                    std::to_string(model.input_dim()) + "\n";
  append_row(out, "mean", model.mean);
  append_row(out, "ratio", model.explained_variance_ratio);
  append_row(out, "variance", model.explained_variance);
  for (Index c = 0; c < model.output_dim(); ++c) {
    for (Index j = 0; j < model.input_dim(); ++j) {
      if (j) out += ' ';
      out += format_real(model.components(c, j));
    }
    out += '\n';
  }
  return out;
}

PcaModel parse_pca_model(std::string_view text, const std::string &source_name) {
  LineReader reader(text);
  std::vector<std::string_view> tokens;
  if (!reader.next(tokens) || tokens.size() != 2)
    throw FormatError(source_name, reader.line(), "expected '<k> <d>' header");
  const long k = parse_integer(tokens[0], source_name, reader.line());
  const long d = parse_integer(tokens[1], source_name, reader.line());
  if (k < 1 || d < 1 || k > d)
    throw FormatError(source_name, reader.line(), "need 1 <= k <= d");

  auto labeled = [&](const char *label, long count) {
    if (!reader.next(tokens) || tokens.empty() || tokens[0] != label)
      throw FormatError(source_name, reader.line(),
                        std::string("expected '") + label + " ...' line");
    if (static_cast<long>(tokens.size()) != count + 1)
      throw FormatError(source_name, reader.line(),
                        "dimension mismatch: expected " +
                            std::to_string(count) + " values");
    Eigen::VectorXd v(count);
    for (long i = 0; i < count; ++i)
      v(i) = parse_real(tokens[1 + i], source_name, reader.line());
    return v;
  };
  PcaModel model;
  model.mean = labeled("mean", d).transpose();
  model.explained_variance_ratio = labeled("ratio", k);
  model.explained_variance = labeled("variance", k);
  model.components.resize(k, d);
  for (long c = 0; c < k; ++c) {
    if (!reader.next(tokens) || static_cast<long>(tokens.size()) != d)
      throw FormatError(source_name, reader.line(),
                        "expected a component row of " + std::to_string(d) +
                            " values");
    for (long j = 0; j < d; ++j)
      model.components(c, j) = parse_real(tokens[j], source_name, reader.line());
  }
  return model;
}

void save_pca_model(const PcaModel &model, const std::filesystem::path &path) {
  write_text_file(path, format_pca_model(model));
}

PcaModel load_pca_model(const std::filesystem::path &path) {
  return parse_pca_model(read_text_file(path), path.string());
}

}  // namespace xvalign
