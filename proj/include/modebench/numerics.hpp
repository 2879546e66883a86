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

#ifndef MODEBENCH_NUMERICS_HPP
#define MODEBENCH_NUMERICS_HPP

#include <Eigen/Core>
#include <functional>
#include <span>

#include "modebench/rng.hpp"

namespace modebench {

inline constexpr double kDefaultBrentTolerance = 1e-10;

/// log(sum(exp(values))) evaluated after subtracting the maximum.
/// Throws DomainError when `values` is empty or every entry is -inf.
double logsumexp(std::span<const double> values);
double logsumexp(const Eigen::Ref<const Eigen::VectorXd>& values);

/// Brent-Dekker root finder on a sign-changing bracket.
///
/// The bracket [lo, hi] is kept around the root at every iteration and `f`
/// is never evaluated outside it. Stops when |f(x)| <= tol or the bracket
/// is narrower than tol. Throws BracketError when f(lo) and f(hi) share a
/// sign, NumericError on a non-finite evaluation.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double tol = kDefaultBrentTolerance);

/// Multivariate normal parameters, diagonal or full (stored as a Cholesky factor).
class GaussianParams {
 public:
  static GaussianParams diagonal(Eigen::VectorXd mean, Eigen::VectorXd variances);
  /// Factors `covariance` once; throws NumericError if it is not positive definite.
  static GaussianParams from_covariance(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance);
  static GaussianParams from_factor(Eigen::VectorXd mean, Eigen::MatrixXd lower_factor);

  [[nodiscard]] Eigen::Index dim() const { return mean_.size(); }
  [[nodiscard]] bool is_diagonal() const { return diagonal_; }
  [[nodiscard]] const Eigen::VectorXd& mean() const { return mean_; }
  /// Diagonal variances; only meaningful when is_diagonal().
  [[nodiscard]] const Eigen::VectorXd& variances() const { return variances_; }
  /// Lower Cholesky factor; only meaningful when !is_diagonal().
  [[nodiscard]] const Eigen::MatrixXd& factor() const { return factor_; }
  [[nodiscard]] Eigen::MatrixXd covariance() const;
  /// -0.5 * log det(2 pi Sigma).
  [[nodiscard]] double log_normalizer() const { return log_normalizer_; }

 private:
  GaussianParams() = default;
  void finalize();

  Eigen::VectorXd mean_;
  Eigen::VectorXd variances_;
  Eigen::MatrixXd factor_;
  bool diagonal_ = true;
  double log_normalizer_ = 0.0;
};

/// Exact log-density of N(params.mean, params.covariance) at x.
double gaussian_logpdf(const Eigen::Ref<const Eigen::VectorXd>& x, const GaussianParams& params);

/// Fills `out` with independent standard normal draws.
void fill_standard_normal(RngStream& stream, Eigen::Ref<Eigen::VectorXd> out);

/// n i.i.d. draws, one per column (d x n).
Eigen::MatrixXd gaussian_sample(RngStream& stream, const GaussianParams& params, Eigen::Index n);

}  // namespace modebench

#endif  // MODEBENCH_NUMERICS_HPP
