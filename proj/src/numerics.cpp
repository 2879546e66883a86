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

#include "modebench/numerics.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "modebench/errors.hpp"

namespace modebench {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double logsumexp(std::span<const double> values) {
  if (values.empty()) {
    throw DomainError("logsumexp: empty input");
  }
  if (std::any_of(values.begin(), values.end(), [](double v) { return std::isnan(v) || v == kInf; })) {
    throw DomainError("logsumexp: NaN or +inf entry");
  }
  const double hi = *std::max_element(values.begin(), values.end());
  if (hi == -kInf) {
    throw DomainError("logsumexp: all entries are -inf");
  }
  double acc = 0.0;
  for (double v : values) {
    acc += std::exp(v - hi);
  }
  return hi + std::log(acc);
}

double logsumexp(const Eigen::Ref<const Eigen::VectorXd>& values) {
  return logsumexp(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

// Port of the classic zeroin routine (Brent 1973, ch. 4).
double brent_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo <= hi)) {
    throw BracketError("brent_root: empty bracket");
  }
  auto eval = [&f](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
      throw NumericError("brent_root: non-finite function value at x = " + std::to_string(x));
    }
    return v;
  };

  double a = lo;
  double b = hi;
  double fa = eval(a);
  double fb = eval(b);
  if (fa == 0.0) {
    return a;
  }
  if (fb == 0.0) {
    return b;
  }
  if ((fa > 0.0) == (fb > 0.0)) {
    throw BracketError("brent_root: f(lo) and f(hi) have the same sign");
  }
  double c = a;
  double fc = fa;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (;;) {
    const double prev_step = b - a;
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol_act = 2.0 * eps * std::abs(b) + 0.5 * tol;
    double new_step = 0.5 * (c - b);
    if (std::abs(new_step) <= tol_act || std::abs(fb) <= tol) {
      return b;
    }
    if (std::abs(prev_step) >= tol_act && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double cb = c - b;
      if (a == c) {
        // secant
        const double t1 = fb / fa;
        p = cb * t1;
        q = 1.0 - t1;
      } else {
        // inverse quadratic interpolation
        q = fa / fc;
        const double t1 = fb / fc;
        const double t2 = fb / fa;
        p = t2 * (cb * q * (q - t1) - (b - a) * (t1 - 1.0));
        q = (q - 1.0) * (t1 - 1.0) * (t2 - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (p < (0.75 * cb * q - 0.5 * std::abs(tol_act * q)) && p < std::abs(0.5 * prev_step * q)) {
        new_step = p / q;
      }
    }
    if (std::abs(new_step) < tol_act) {
      new_step = new_step > 0.0 ? tol_act : -tol_act;
    }
    a = b;
    fa = fb;
    b += new_step;
    fb = eval(b);
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
    }
  }
}

GaussianParams GaussianParams::diagonal(Eigen::VectorXd mean, Eigen::VectorXd variances) {
  if (mean.size() != variances.size()) {
    throw ShapeError("GaussianParams: mean and variances differ in length");
  }
  if (!(variances.array() > 0.0).all() || !variances.allFinite()) {
    throw ValidationError("GaussianParams: variances must be positive and finite");
  }
  GaussianParams g;
  g.mean_ = std::move(mean);
  g.variances_ = std::move(variances);
  g.diagonal_ = true;
  g.finalize();
  return g;
}

GaussianParams GaussianParams::from_covariance(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance) {
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size()) {
    throw ShapeError("GaussianParams: covariance shape does not match the mean");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw NumericError("GaussianParams: covariance is not positive definite");
  }
  return from_factor(std::move(mean), llt.matrixL());
}

GaussianParams GaussianParams::from_factor(Eigen::VectorXd mean, Eigen::MatrixXd lower_factor) {
  if (lower_factor.rows() != mean.size() || lower_factor.cols() != mean.size()) {
    throw ShapeError("GaussianParams: factor shape does not match the mean");
  }
  if (!(lower_factor.diagonal().array() > 0.0).all()) {
    throw ValidationError("GaussianParams: factor must have a strictly positive diagonal");
  }
  GaussianParams g;
  g.mean_ = std::move(mean);
  g.factor_ = lower_factor.triangularView<Eigen::Lower>();
  g.diagonal_ = false;
  g.finalize();
  return g;
}

void GaussianParams::finalize() {
  const double d = static_cast<double>(mean_.size());
  const double log_det = diagonal_ ? variances_.array().log().sum()
                                   : 2.0 * factor_.diagonal().array().log().sum();
  log_normalizer_ = -0.5 * (d * kLog2Pi + log_det);
}

Eigen::MatrixXd GaussianParams::covariance() const {
  if (diagonal_) {
    return variances_.asDiagonal();
  }
  return factor_ * factor_.transpose();
}

double gaussian_logpdf(const Eigen::Ref<const Eigen::VectorXd>& x, const GaussianParams& params) {
  if (x.size() != params.dim()) {
    throw ShapeError("gaussian_logpdf: dimension mismatch");
  }
  double quad;
  if (params.is_diagonal()) {
    quad = ((x - params.mean()).array().square() / params.variances().array()).sum();
  } else {
    const Eigen::VectorXd white =
        params.factor().triangularView<Eigen::Lower>().solve(x - params.mean());
    quad = white.squaredNorm();
  }
  return params.log_normalizer() - 0.5 * quad;
}

void fill_standard_normal(RngStream& stream, Eigen::Ref<Eigen::VectorXd> out) {
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] = stream.normal();
  }
}

Eigen::MatrixXd gaussian_sample(RngStream& stream, const GaussianParams& params, Eigen::Index n) {
  if (n < 1) {
    throw DomainError("gaussian_sample: n must be positive");
  }
  const Eigen::Index d = params.dim();
  Eigen::MatrixXd out(d, n);
  Eigen::VectorXd z(d);
  const Eigen::VectorXd sd = params.is_diagonal() ? params.variances().cwiseSqrt() : Eigen::VectorXd();
  for (Eigen::Index j = 0; j < n; ++j) {
    fill_standard_normal(stream, z);
    if (params.is_diagonal()) {
      out.col(j) = params.mean() + sd.cwiseProduct(z);
    } else {
      out.col(j) = params.mean() + params.factor().triangularView<Eigen::Lower>() * z;
    }
  }
  return out;
}

}  // namespace modebench
