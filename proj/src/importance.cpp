// Copyright 2026 The modebench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "modebench/importance.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "modebench/errors.hpp"

namespace modebench {

GaussianFit fit_gaussian_mle(const Eigen::Ref<const Eigen::MatrixXd>& samples) {
  const Eigen::Index d = samples.rows();
  const Eigen::Index n = samples.cols();
  if (d < 1 || n <= d) {
    throw DomainError("fit_gaussian_mle: need more samples than dimensions");
  }
  const Eigen::VectorXd mean = samples.rowwise().mean();
  const Eigen::MatrixXd centered = samples.colwise() - mean;
  Eigen::MatrixXd cov = (centered * centered.transpose()) / static_cast<double>(n);

  const double trace = cov.trace();
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  bool ok = llt.info() == Eigen::Success;
  if (ok) {
    // a numerically singular matrix can factor with vanishing pivots
    const double min_pivot = llt.matrixL().toDenseMatrix().diagonal().minCoeff();
    ok = min_pivot * min_pivot > 1e-14 * (trace / static_cast<double>(d));
  }
  GaussianFit fit{GaussianParams::diagonal(mean, Eigen::VectorXd::Ones(d)), false};
  if (!ok) {
    const double eps = trace > 0.0 ? 1e-8 * trace / static_cast<double>(d) : 1e-8;
    cov.diagonal().array() += eps;
    fit.regularized = true;
  }
  fit.params = GaussianParams::from_covariance(mean, cov);
  return fit;
}

Eigen::VectorXd normalize_log_weights(const Eigen::Ref<const Eigen::VectorXd>& log_weights) {
  const double lse = logsumexp(log_weights);
  return (log_weights.array() - lse).exp().matrix();
}

double ess(const Eigen::Ref<const Eigen::VectorXd>& log_weights) {
  if (log_weights.size() == 0 || !(log_weights.maxCoeff() > -std::numeric_limits<double>::infinity())) {
    throw DegeneracyError("ess: all log weights are -inf");
  }
  const double lse1 = logsumexp(log_weights);
  const Eigen::VectorXd doubled = 2.0 * log_weights;
  const double lse2 = logsumexp(doubled);
  const double value = std::exp(2.0 * lse1 - lse2);
  return std::clamp(value, 1.0, static_cast<double>(log_weights.size()));
}

ISResult is_estimate(const LogDensity& target, const GaussianParams& proposal, const TestFunction& f,
                     Eigen::Index n, RngStream& stream) {
  if (n < 2) {
    throw DomainError("is_estimate: need N >= 2");
  }
  if (proposal.dim() != target.dim()) {
    throw ShapeError("is_estimate: proposal and target dimensions differ");
  }
  ISResult result;
  result.samples = gaussian_sample(stream, proposal, n);
  Eigen::VectorXd log_w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto x = result.samples.col(i);
    log_w[i] = target.log_density(x) - gaussian_logpdf(x, proposal);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isnan(log_w[i])) {
      log_w[i] = -std::numeric_limits<double>::infinity();
    }
  }
  if (!(log_w.maxCoeff() > -std::numeric_limits<double>::infinity())) {
    throw DegeneracyError("is_estimate: every importance weight vanished");
  }
  result.normalized_weights = normalize_log_weights(log_w);
  result.weight_ess = ess(log_w);
  // dividing by the realized weight sum makes f == 1 return exactly 1
  double acc = 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double wi = result.normalized_weights[i];
    if (wi != 0.0) {
      acc += wi * f(result.samples.col(i));
      total += wi;
    }
  }
  result.estimate = acc / total;
  return result;
}

}  // namespace modebench
