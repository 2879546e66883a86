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


#include "modebench/validate.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>

#include "modebench/harness.hpp"
#include "modebench/importance.hpp"
#include "modebench/numerics.hpp"
#include "modebench/replica.hpp"
#include "modebench/slips.hpp"
#include "modebench/smc.hpp"
#include "modebench/target.hpp"
#include "modebench/variational.hpp"

namespace modebench {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// max over inputs of ||g - fd|| / max(1, ||fd||), central differences
template <typename F>
double fd_relative_error(const F& f, const Eigen::VectorXd& x, const Eigen::VectorXd& grad, double h) {
  Eigen::VectorXd fd(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + h;
    const double up = f(xp);
    xp[i] = xi - h;
    const double dn = f(xp);
    xp[i] = xi;
    fd[i] = (up - dn) / (2.0 * h);
  }
  return (grad - fd).norm() / std::max(1.0, fd.norm());
}

class Battery {
 public:
  explicit Battery(const std::function<void(const CheckResult&)>& sink) : sink_(sink) {}

  template <typename Fn>
  void run(const std::string& name, Fn&& fn) {
    CheckResult r;
    r.name = name;
    try {
      std::string detail;
      r.passed = fn(detail);
      r.detail = detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (sink_) {
      sink_(r);
    }
    results_.push_back(std::move(r));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  const std::function<void(const CheckResult&)>& sink_;
  std::vector<CheckResult> results_;
};

MixtureTarget bench_target(double a, int d) {
  TargetSpec s;
  s.a = a;
  s.d = d;
  return build_target(s);
}

}  // namespace

DriftCheck drift_oracle_check(double a, int d, int n_configs, std::uint64_t seed, int inner_steps, int burn_in,
                              double tolerance) {
  const MixtureTarget target = bench_target(a, d);
  SlipsConfig config;
  config.sigma = default_sigma(moments(target));
  config.inner_steps = inner_steps;
  SlipsConfig burn = config;
  burn.inner_steps = burn_in;
  DriftCheck out;
  out.n_total = n_configs;
  for (int i = 0; i < n_configs; ++i) {
    RngStream s(seed, {static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(i)});
    const double t = config.t0 + (config.t1 - config.t0) * s.uniform();
    const AlphaGeom ag = alpha_geom(t);
    const Eigen::VectorXd x = exact_sample(target, 1, s).col(0);
    Eigen::VectorXd z(d);
    fill_standard_normal(s, z);
    const Eigen::VectorXd y = ag.alpha * x + config.sigma * std::sqrt(t) * z;
    const Eigen::VectorXd u = posterior_mean_oracle(target, y, t, ag.alpha, config.sigma);

    ObservationState state;
    state.y = y;
    state.t = t;
    const PosteriorDensity q(target, y, t, ag.alpha, config.sigma);
    state.warm_chain = ChainState::start(q, y / ag.alpha, config.inner_lambda_init);
    RngStream inner = s.child(1);
    if (burn_in > 0) {
      estimate_drift(target, state, burn, inner);
    }
    const Eigen::VectorXd u_hat = estimate_drift(target, state, config, inner);
    const double err = (u_hat - u).norm() / (1.0 + u.norm());
    out.worst = std::max(out.worst, err);
    if (err <= tolerance) {
      ++out.n_within;
    }
  }
  return out;
}

double resampling_uniformity_pvalue(int n, int replications, std::uint64_t seed) {
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
  std::vector<double> counts(static_cast<std::size_t>(n), 0.0);
  RngStream stream(seed, {});
  for (int r = 0; r < replications; ++r) {
    RngStream rs = stream.child(static_cast<std::uint64_t>(r));
    for (Eigen::Index idx : multinomial_ancestors(w, n, rs)) {
      counts[static_cast<std::size_t>(idx)] += 1.0;
    }
  }
  const double expected = static_cast<double>(replications);
  double chi2 = 0.0;
  for (double c : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
  }
  const boost::math::chi_squared dist(n - 1);
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

std::vector<CheckResult> run_validation(const std::function<void(const CheckResult&)>& on_result) {
  Battery b(on_result);

  // numerics
  b.run("logsumexp shift invariance", [](std::string& detail) {
    RngStream s(11, {});
    Eigen::VectorXd v(64);
    fill_standard_normal(s, v);
    v *= 30.0;
    double worst = 0.0;
    for (double c : {-700.0, -3.5, 0.25, 41.0, 700.0}) {
      const Eigen::VectorXd shifted = (v.array() + c).matrix();
      worst = std::max(worst, std::abs(logsumexp(shifted) - (logsumexp(v) + c)));
    }
    detail = "max deviation " + fmt(worst);
    return worst <= 1e-12;
  });
  b.run("logsumexp of equal entries", [](std::string& detail) {
    const Eigen::VectorXd v = Eigen::VectorXd::Constant(8, -1234.5);
    const double err = std::abs(logsumexp(v) - (-1234.5 + std::log(8.0)));
    detail = "deviation " + fmt(err);
    return err <= 1e-12;
  });
  b.run("brent root of x^2 - 2", [](std::string& detail) {
    const double r = brent_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
    detail = "root " + fmt(r);
    return std::abs(r - std::sqrt(2.0)) <= 1e-12;
  });

  // target
  b.run("log gamma gradient vs finite differences", [](std::string& detail) {
    double worst = 0.0;
    for (int d : {2, 8, 16}) {
      const MixtureTarget t = bench_target(5.25, d);
      RngStream s(12, {static_cast<std::uint64_t>(d)});
      const Eigen::MatrixXd xs = exact_sample(t, 10, s);
      for (Eigen::Index j = 0; j < xs.cols(); ++j) {
        const Eigen::VectorXd x = xs.col(j);
        const auto f = [&t](const Eigen::VectorXd& p) { return t.log_density(p); };
        worst = std::max(worst, fd_relative_error(f, x, grad_log_gamma(t, x), 1e-6));
      }
    }
    detail = "max relative error " + fmt(worst);
    return worst <= 1e-5;
  });
  b.run("mode partition at the means", [](std::string& detail) {
    const MixtureTarget t = bench_target(2.875, 8);
    const bool ok = t.mode_of(t.mean(1)) == ModeLabel::kFirst && t.mode_of(t.mean(2)) == ModeLabel::kSecond;
    detail = ok ? "means labelled 1 and 2" : "mislabelled mean";
    return ok;
  });
  b.run("covariance layout", [](std::string& detail) {
    const MixtureTarget t = bench_target(1.0, 4);
    const Eigen::VectorXd v1 = t.variances(1);
    const Eigen::VectorXd v2 = t.variances(2);
    double err = 0.0;
    for (int i = 1; i <= 4; ++i) {
      err = std::max(err, std::abs(v1[i - 1] - (i / 4.0 * 0.2 + (4.0 - i) / 4.0 * 0.01)));
      err = std::max(err, std::abs(v2[i - 1] - v1[4 - i]));
    }
    detail = "max deviation " + fmt(err);
    return err <= 1e-15;
  });
  b.run("analytic moments vs exact samples", [](std::string& detail) {
    const MixtureTarget t = bench_target(2.875, 4);
    const Moments m = moments(t);
    RngStream s(13, {});
    const Eigen::MatrixXd xs = exact_sample(t, 200000, s);
    const Eigen::VectorXd mean = xs.rowwise().mean();
    const Eigen::VectorXd se = (m.variances / 200000.0).cwiseSqrt();
    const double z = ((mean - m.mean).cwiseQuotient(se)).cwiseAbs().maxCoeff();
    detail = "max |z| " + fmt(z);
    return z <= 4.5;
  });

  // mcmc-local
  b.run("MALA acceptance at zero move", [](std::string& detail) {
    const MixtureTarget t = bench_target(2.875, 4);
    const Eigen::VectorXd x = t.mean(1);
    const double p = mala_acceptance_probability(t, x, x, 1e-2);
    detail = "alpha(x,x) = " + fmt(p);
    return p == 1.0;
  });
  b.run("MALA standard normal moments", [](std::string& detail) {
    const GaussianDensity g(GaussianParams::diagonal(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)));
    MalaConfig c;
    c.lambda_init = 0.5;
    RngStream s(14, {});
    double sum = 0.0;
    double sq = 0.0;
    std::int64_t n = 0;
    run_mala_chain(Eigen::VectorXd::Zero(1), g, c, 5000, 1000000, s,
                   [&](const ChainState& st, bool, bool warm) {
                     if (!warm) {
                       sum += st.x[0];
                       sq += st.x[0] * st.x[0];
                       ++n;
                     }
                   });
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    detail = "mean " + fmt(mean) + ", variance " + fmt(var);
    return std::abs(mean) <= 0.01 && std::abs(var - 1.0) <= 0.02;
  });
  b.run("MALA adaptation keeps acceptance near target", [](std::string& detail) {
    double lo = 1.0;
    double hi = 0.0;
    for (int d : {4, 16, 64}) {
      const GaussianDensity g(GaussianParams::diagonal(Eigen::VectorXd::Zero(d),
                                                       Eigen::VectorXd::LinSpaced(d, 0.01, 0.2)));
      MalaConfig c;
      RngStream s(15, {static_cast<std::uint64_t>(d)});
      std::int64_t acc = 0;
      std::int64_t n = 0;
      std::int64_t step = 0;
      run_mala_chain(Eigen::VectorXd::Zero(d), g, c, 4096, 1, s, [&](const ChainState&, bool a, bool warm) {
        if (warm && ++step > 2048) {
          acc += a ? 1 : 0;
          ++n;
        }
      });
      const double rate = static_cast<double>(acc) / static_cast<double>(n);
      lo = std::min(lo, rate);
      hi = std::max(hi, rate);
    }
    detail = "late warm-up acceptance in [" + fmt(lo) + ", " + fmt(hi) + "]";
    return lo >= 0.6 && hi <= 0.9;
  });

  // direct samplers
  b.run("ESS of weights (2,1,1,0)", [](std::string& detail) {
    Eigen::VectorXd lw(4);
    lw << std::log(2.0), 0.0, 0.0, -std::numeric_limits<double>::infinity();
    const double e = ess(lw);
    detail = "ESS " + fmt(e);
    return std::abs(e - 16.0 / 6.0) <= 1e-12;
  });
  b.run("ESS shift invariance", [](std::string& detail) {
    RngStream s(16, {});
    Eigen::VectorXd lw(100);
    fill_standard_normal(s, lw);
    lw *= 3.0;
    const double err = std::abs(ess(lw) - ess((lw.array() + 512.0).matrix()));
    detail = "deviation " + fmt(err);
    return err <= 1e-12 * ess(lw);
  });
  b.run("IS with f = 1 returns exactly 1", [](std::string& detail) {
    const MixtureTarget t = bench_target(5.25, 8);
    const Moments m = moments(t);
    RngStream s(17, {});
    const ISResult r = is_estimate(t, GaussianParams::diagonal(m.mean, m.variances),
                                   [](const Eigen::Ref<const Eigen::VectorXd>&) { return 1.0; }, 4096, s);
    detail = "estimate " + fmt(r.estimate);
    return r.estimate == 1.0;
  });
  b.run("IS with proposal equal to target", [](std::string& detail) {
    const GaussianParams p = GaussianParams::diagonal(Eigen::VectorXd::Ones(3), Eigen::VectorXd::Constant(3, 0.5));
    const GaussianDensity g(p);
    RngStream s(18, {});
    const ISResult r = is_estimate(g, p, [](const Eigen::Ref<const Eigen::VectorXd>& x) { return x[0]; }, 1000, s);
    detail = "weight ESS " + fmt(r.weight_ess);
    return std::abs(r.weight_ess - 1000.0) <= 1e-9;
  });
  b.run("VI loss gradient vs finite differences", [](std::string& detail) {
    const MixtureTarget t = bench_target(2.875, 4);
    const Moments m = moments(t);
    RngStream s(19, {});
    Eigen::MatrixXd noise(4, 64);
    for (Eigen::Index j = 0; j < noise.cols(); ++j) {
      Eigen::VectorXd z(4);
      fill_standard_normal(s, z);
      noise.col(j) = z;
    }
    ViParams p{m.mean * 0.9, (0.5 * m.variances.array().log() - 1.0).matrix()};
    const ViLossGrad lg = vi_loss_and_grad(p, t, noise);
    const auto loss_mu = [&](const Eigen::VectorXd& mu) { return vi_loss_and_grad({mu, p.rho}, t, noise).loss; };
    const auto loss_rho = [&](const Eigen::VectorXd& rho) { return vi_loss_and_grad({p.mu, rho}, t, noise).loss; };
    const double e1 = fd_relative_error(loss_mu, p.mu, lg.grad_mu, 1e-6);
    const double e2 = fd_relative_error(loss_rho, p.rho, lg.grad_rho, 1e-6);
    detail = "relative error mu " + fmt(e1) + ", rho " + fmt(e2);
    return e1 <= 1e-5 && e2 <= 1e-5;
  });

  // smc
  b.run("tempering increment for two particles", [](std::string& detail) {
    Eigen::VectorXd r(2);
    const double c = 2.0;
    r << 0.0, -c;
    const double beta = next_beta(r, 0.0, 1.6);
    detail = "delta " + fmt(beta) + " vs " + fmt(std::log(3.0) / c);
    return std::abs(beta - std::log(3.0) / c) <= 1e-9;
  });
  b.run("constant log ratio jumps to 1", [](std::string& detail) {
    const Eigen::VectorXd r = Eigen::VectorXd::Constant(16, -3.0);
    const double beta = next_beta(r, 0.0, 8.0);
    detail = "beta " + fmt(beta);
    return beta == 1.0;
  });
  b.run("reweight additivity", [](std::string& detail) {
    ParticleSystem a;
    a.positions = Eigen::MatrixXd::Zero(1, 3);
    a.log_weights = Eigen::VectorXd::Zero(3);
    a.log_ratio = Eigen::Vector3d(-1.5, 0.25, 3.0);
    ParticleSystem b2 = a;
    reweight(a, 0.2);
    reweight(a, 0.7);
    reweight(b2, 0.7);
    const double err = (a.log_weights - b2.log_weights).cwiseAbs().maxCoeff();
    detail = "max deviation " + fmt(err);
    return err <= 1e-12;
  });
  b.run("tempered density endpoints", [](std::string& detail) {
    const MixtureTarget t = bench_target(2.875, 4);
    const Moments m = moments(t);
    const GaussianDensity base(GaussianParams::diagonal(m.mean, m.variances));
    TemperedDensity p(base, t, 0.0);
    RngStream s(20, {});
    const Eigen::MatrixXd xs = exact_sample(t, 20, s);
    double err = 0.0;
    for (Eigen::Index j = 0; j < xs.cols(); ++j) {
      p.set_beta(0.0);
      err = std::max(err, std::abs(p.log_density(xs.col(j)) - base.log_density(xs.col(j))));
      p.set_beta(1.0);
      err = std::max(err, std::abs(p.log_density(xs.col(j)) - t.log_density(xs.col(j))));
    }
    detail = "max deviation " + fmt(err);
    return err <= 1e-12;
  });
  b.run("multinomial resampling uniformity (chi-square)", [](std::string& detail) {
    const double p = resampling_uniformity_pvalue(8192, 1000, 21);
    detail = "p-value " + fmt(p);
    return p > 0.001;
  });
  b.run("resampling a point mass", [](std::string& detail) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(10);
    w[7] = 1.0;
    RngStream s(22, {});
    const auto idx = multinomial_ancestors(w, 10, s);
    const bool ok = std::all_of(idx.begin(), idx.end(), [](Eigen::Index i) { return i == 7; });
    detail = ok ? "all offspring from particle 7" : "stray offspring";
    return ok;
  });

  // replica exchange
  b.run("ladder schedule values", [](std::string& detail) {
    const std::vector<double> betas = build_schedule(64, 1e-5);
    const double e32 = std::abs(betas[32] - (1.0 - std::sqrt(1e-5)));
    const double e1 = std::abs(betas[1] - (1.0 - std::pow(1e-5, 1.0 / 64.0)));
    bool increasing = true;
    for (std::size_t k = 1; k < betas.size(); ++k) {
      increasing = increasing && betas[k] > betas[k - 1];
    }
    detail = "beta_32 deviation " + fmt(e32) + ", beta_1 deviation " + fmt(e1);
    return betas.front() == 0.0 && betas.back() == 1.0 && e32 <= 1e-12 && e1 <= 1e-12 && increasing;
  });
  b.run("swap probability hand case", [](std::string& detail) {
    const GaussianDensity base(GaussianParams::diagonal(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)));
    const GaussianDensity top(GaussianParams::diagonal(Eigen::VectorXd::Constant(1, 2.0),
                                                       Eigen::VectorXd::Constant(1, 0.25)));
    const double bk = 0.3;
    const double bk1 = 0.7;
    const TemperedDensity pk(base, top, bk);
    const TemperedDensity pk1(base, top, bk1);
    const Eigen::VectorXd xk = Eigen::VectorXd::Constant(1, 0.5);
    const Eigen::VectorXd xk1 = Eigen::VectorXd::Constant(1, 1.5);
    const double got = swap_probability(pk.log_density(xk), pk.log_density(xk1), pk1.log_density(xk),
                                        pk1.log_density(xk1));
    // log ratio = (b_{k+1} - b_k) (r(x_k) - r(x_{k+1})), r = log N(x;2,1/4) - log N(x;0,1)
    const auto r = [](double x) {
      return (-0.5 * (x - 2.0) * (x - 2.0) / 0.25 - 0.5 * std::log(2.0 * std::numbers::pi * 0.25)) -
             (-0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi));
    };
    const double want = std::min(1.0, std::exp((bk1 - bk) * (r(0.5) - r(1.5))));
    detail = "got " + fmt(got) + ", want " + fmt(want);
    return std::abs(got - want) <= 1e-12;
  });
  b.run("swap probability edge cases", [](std::string& detail) {
    const double same = swap_probability(-1.0, -1.0, -2.0, -2.0);
    const double inf = swap_probability(-1.0, -std::numeric_limits<double>::infinity(), -2.0, -2.0);
    const double nan = swap_probability(std::nan(""), -1.0, -2.0, -2.0);
    detail = "identical " + fmt(same) + ", -inf " + fmt(inf) + ", nan " + fmt(nan);
    return same == 1.0 && inf == 0.0 && nan == 0.0;
  });

  // slips
  b.run("Geom(1,1) schedule values", [](std::string& detail) {
    const AlphaGeom h = alpha_geom(0.5);
    const AlphaGeom n = alpha_geom(0.9);
    const double t = 1.0 - 1e-7;
    const double ratio = alpha_geom(t).alpha / std::sqrt(t);
    detail = "alpha(1/2) " + fmt(h.alpha) + ", alpha'(1/2) " + fmt(h.alpha_dot) + ", alpha(0.9) " + fmt(n.alpha);
    return std::abs(h.alpha - 1.0) <= 1e-15 && std::abs(h.alpha_dot - 2.0) <= 1e-14 &&
           std::abs(n.alpha - 3.0) <= 1e-14 && ratio > 1e3;
  });
  b.run("posterior gradient vs finite differences", [](std::string& detail) {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const int d = 2 + (i % 4) * 2;
      const MixtureTarget t = bench_target(5.25, d);
      RngStream s(23, {static_cast<std::uint64_t>(i)});
      const double tt = 0.05 + 0.9 * s.uniform();
      const AlphaGeom ag = alpha_geom(tt);
      const Eigen::VectorXd x = exact_sample(t, 1, s).col(0);
      Eigen::VectorXd y(d);
      fill_standard_normal(s, y);
      y = ag.alpha * t.mean(1) + 3.0 * y;
      const PosteriorEval e = posterior_logpdf_grad(t, y, tt, ag.alpha, 5.0, x);
      const auto f = [&](const Eigen::VectorXd& p) {
        return posterior_logpdf_grad(t, y, tt, ag.alpha, 5.0, p).log_density;
      };
      worst = std::max(worst, fd_relative_error(f, x, e.grad, 1e-6));
    }
    detail = "max relative error " + fmt(worst);
    return worst <= 1e-5;
  });
  for (int d : {2, 8}) {
    b.run("drift oracle agreement d=" + std::to_string(d), [d](std::string& detail) {
      const DriftCheck c = drift_oracle_check(5.25, d, 100, 2024);
      detail = std::to_string(c.n_within) + "/" + std::to_string(c.n_total) + " within tolerance";
      return c.n_within >= 95;
    });
  }

  // bench-harness
  b.run("mode weight estimators", [](std::string& detail) {
    const MixtureTarget t = bench_target(2.875, 4);
    Eigen::MatrixXd xs(4, 3);
    xs.col(0) = t.mean(1);
    xs.col(1) = t.mean(1);
    xs.col(2) = t.mean(2);
    const double plain = mode_weight_estimate(t, xs);
    const double weighted = mode_weight_estimate(t, xs.leftCols(1), Eigen::VectorXd::Ones(1));
    Eigen::MatrixXd two(4, 2);
    two.col(0) = t.mean(1);
    two.col(1) = t.mean(2);
    const double w09 = mode_weight_estimate(t, two, Eigen::Vector2d(0.9, 0.1));
    detail = "2:1 split " + fmt(plain) + ", weighted " + fmt(w09);
    return std::abs(plain - 2.0 / 3.0) <= 1e-15 && weighted == 1.0 && std::abs(w09 - 0.9) <= 1e-15 &&
           detect_collapse(t, xs.leftCols(2)) && !detect_collapse(t, xs);
  });
  b.run("aggregate arithmetic", [](std::string& detail) {
    std::vector<EstimateRecord> recs;
    const double vals[] = {0.6, 0.7, 0.8};
    for (int i = 0; i < 3; ++i) {
      EstimateRecord r;
      r.sampler = "is";
      r.a = 1.0;
      r.d = 2;
      r.rep = i;
      r.w1_hat = vals[i];
      recs.push_back(r);
    }
    OracleTable o;
    o[{1.0, 2}] = ModeWeightOracle{2.0 / 3.0, 0.0};
    const auto s = aggregate(recs, o);
    const double want_err = (std::abs(0.6 - 2.0 / 3.0) + std::abs(0.7 - 2.0 / 3.0) + std::abs(0.8 - 2.0 / 3.0)) / 3.0;
    const double want_std = std::sqrt(((0.6 - 0.7) * (0.6 - 0.7) + (0.8 - 0.7) * (0.8 - 0.7)) / 3.0);
    detail = "error " + fmt(s.at(0).mean_abs_error) + ", std " + fmt(s.at(0).std);
    return s.size() == 1 && std::abs(s[0].mean_abs_error - want_err) <= 1e-12 &&
           std::abs(s[0].std - want_std) <= 1e-12 && !s[0].systematic_collapse;
  });

  return b.take();
}

}  // namespace modebench
