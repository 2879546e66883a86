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


#include "modebench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "modebench/errors.hpp"
#include "modebench/importance.hpp"

namespace modebench {

namespace {

constexpr std::uint64_t kOracleTag = 0;
constexpr std::uint64_t kRepTag = 1;
constexpr std::uint64_t kPrepTag = 2;

constexpr std::pair<SamplerId, std::string_view> kSamplerNames[] = {
    {SamplerId::kMala, "mala"}, {SamplerId::kIs, "is"},   {SamplerId::kVi, "vi"},
    {SamplerId::kSmc, "smc"},   {SamplerId::kRe, "re"},   {SamplerId::kSlips, "slips"},
};

std::uint64_t bits_of(double a) { return std::bit_cast<std::uint64_t>(a); }

GaussianParams moment_gaussian(const MixtureTarget& target) {
  const Moments m = moments(target);
  return GaussianParams::diagonal(m.mean, m.variances);
}

nlohmann::ordered_json to_json(const std::vector<double>& v) { return nlohmann::ordered_json(v); }

struct Counter {
  std::int64_t first = 0;
  std::int64_t total = 0;
  void add(ModeLabel label) {
    if (label == ModeLabel::kFirst) {
      ++first;
    }
    ++total;
  }
  [[nodiscard]] double fraction() const { return static_cast<double>(first) / static_cast<double>(total); }
  [[nodiscard]] bool collapsed() const { return first == 0 || first == total; }
};

Counter count_modes(const MixtureTarget& target, const Eigen::Ref<const Eigen::MatrixXd>& positions) {
  Counter c;
  for (Eigen::Index j = 0; j < positions.cols(); ++j) {
    c.add(target.mode_of(positions.col(j)));
  }
  return c;
}

void run_mala_rep(const MixtureTarget& target, const SamplerSettings& settings, const Protocol& protocol,
                  RngStream& stream, EstimateRecord& rec) {
  const MalaSettings& ms = settings.mala;
  Counter counter;
  double acceptance = 0.0;
  double lambda = 0.0;
  const GaussianParams strongest = target.component(1);
  for (int c = 0; c < ms.n_chains; ++c) {
    RngStream chain_stream = stream.child(static_cast<std::uint64_t>(c));
    RngStream init_stream = chain_stream.child(0);
    RngStream step_stream = chain_stream.child(1);
    Eigen::VectorXd x0 = gaussian_sample(init_stream, strongest, 1).col(0);
    std::int64_t accepted = 0;
    const ChainState last = run_mala_chain(
        std::move(x0), target, ms.chain, ms.n_warmup, protocol.n_samples, step_stream,
        [&](const ChainState& state, bool acc, bool warmup) {
          if (!warmup) {
            counter.add(target.mode_of(state.x));
            accepted += acc ? 1 : 0;
          }
        });
    acceptance += static_cast<double>(accepted) / static_cast<double>(protocol.n_samples);
    lambda += last.lambda;
  }
  rec.w1_hat = counter.fraction();
  rec.collapsed = counter.collapsed();
  rec.diagnostics["n_chains"] = ms.n_chains;
  rec.diagnostics["mean_acceptance"] = acceptance / ms.n_chains;
  rec.diagnostics["mean_final_lambda"] = lambda / ms.n_chains;
}

void run_is_rep(const MixtureTarget& target, const SamplerSettings& settings, const Protocol& protocol,
                RngStream& stream, EstimateRecord& rec) {
  RngStream fit_stream = stream.child(0);
  RngStream draw_stream = stream.child(1);
  const Eigen::MatrixXd fit_samples = equilibrated_sample(target, settings.is.n_fit, fit_stream);
  const GaussianFit fit = fit_gaussian_mle(fit_samples);
  const TestFunction in_first = [&target](const Eigen::Ref<const Eigen::VectorXd>& x) {
    return target.mode_of(x) == ModeLabel::kFirst ? 1.0 : 0.0;
  };
  const ISResult res = is_estimate(target, fit.params, in_first, protocol.n_samples, draw_stream);
  rec.w1_hat = std::clamp(res.estimate, 0.0, 1.0);
  rec.collapsed = detect_collapse(target, res.samples);
  rec.diagnostics["weight_ess"] = res.weight_ess;
  rec.diagnostics["fit_regularized"] = fit.regularized;
}

void run_vi_rep(const MixtureTarget& target, const SamplerSettings& settings, const Protocol& protocol,
                RngStream& stream, EstimateRecord& rec) {
  const Moments m = moments(target);
  ViParams init{m.mean, 0.5 * m.variances.array().log().matrix()};
  RngStream opt_stream = stream.child(0);
  RngStream draw_stream = stream.child(1);
  const ViResult res = vi_optimize(target, std::move(init), settings.vi, opt_stream);
  const Eigen::MatrixXd samples = vi_sample(res.params, protocol.n_samples, draw_stream);
  const Counter c = count_modes(target, samples);
  rec.w1_hat = c.fraction();
  rec.collapsed = c.collapsed();
  rec.diagnostics["final_loss"] = res.loss_trace.empty() ? 0.0 : res.loss_trace.back();
  rec.diagnostics["iterations"] = static_cast<int>(res.loss_trace.size());
}

void run_smc_rep(const MixtureTarget& target, const SamplerSettings& settings, const Protocol& protocol,
                 RngStream& stream, EstimateRecord& rec) {
  SmcConfig config = settings.smc;
  config.n_particles = protocol.n_samples;
  const SmcResult res = run_smc(target, moment_gaussian(target), config, stream);
  rec.w1_hat = std::clamp(mode_weight_estimate(target, res.positions, res.normalized_weights), 0.0, 1.0);
  rec.collapsed = detect_collapse(target, res.positions);
  const SmcDiagnostics& dg = res.diagnostics;
  rec.diagnostics["complete"] = dg.complete;
  rec.diagnostics["n_levels"] = static_cast<int>(dg.betas.size()) - 1;
  rec.diagnostics["non_monotone_levels"] = dg.non_monotone_levels;
  rec.diagnostics["betas"] = to_json(dg.betas);
  rec.diagnostics["ess"] = to_json(dg.ess);
  rec.diagnostics["acceptance"] = to_json(dg.acceptance);
  rec.diagnostics["step_sizes"] = to_json(dg.step_sizes);
}

void run_re_rep(const MixtureTarget& target, const SamplerSettings& settings, const Protocol& protocol,
                RngStream& stream, EstimateRecord& rec) {
  const ReResult res = run_re(target, moment_gaussian(target), settings.re, stream, protocol.n_samples);
  const Counter c = count_modes(target, res.samples);
  rec.w1_hat = c.fraction();
  rec.collapsed = c.collapsed();
  rec.diagnostics["swap_rates"] = to_json(res.swap_rates);
  rec.diagnostics["acceptance"] = to_json(res.acceptance);
  rec.diagnostics["nonfinite_swaps"] = res.nonfinite_swaps;
}

void run_slips_rep(const MixtureTarget& target, const CellPreparation& prep, const Protocol& protocol,
                   RngStream& stream, EstimateRecord& rec) {
  const Moments m = moments(target);
  Counter counter;
  double acceptance = 0.0;
  for (int i = 0; i < protocol.n_samples; ++i) {
    RngStream traj = stream.child(static_cast<std::uint64_t>(i));
    const SlipsDraw draw = run_slips(target, m, prep.slips, traj);
    counter.add(target.mode_of(draw.x));
    acceptance += draw.inner_acceptance;
  }
  rec.w1_hat = counter.fraction();
  rec.collapsed = counter.collapsed();
  rec.diagnostics["t0"] = prep.slips.t0;
  rec.diagnostics["sigma"] = prep.slips.sigma;
  rec.diagnostics["mean_inner_acceptance"] = acceptance / protocol.n_samples;
}

}  // namespace

std::string_view sampler_name(SamplerId id) {
  for (const auto& [sid, name] : kSamplerNames) {
    if (sid == id) {
      return name;
    }
  }
  throw ValidationError("sampler_name: unknown sampler id");
}

SamplerId parse_sampler(std::string_view name) {
  for (const auto& [sid, n] : kSamplerNames) {
    if (n == name) {
      return sid;
    }
  }
  throw ValidationError("unknown sampler '" + std::string(name) + "' (expected mala, is, vi, smc, re or slips)");
}

void Protocol::validate() const {
  if (grid_a.empty() || grid_d.empty()) {
    throw ValidationError("protocol: grid_a and grid_d must be non-empty");
  }
  for (double a : grid_a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw ValidationError("protocol: every a must be positive and finite");
    }
  }
  for (int d : grid_d) {
    if (d < 1) {
      throw ValidationError("protocol: every d must be >= 1");
    }
  }
  if (std::set<double>(grid_a.begin(), grid_a.end()).size() != grid_a.size() ||
      std::set<int>(grid_d.begin(), grid_d.end()).size() != grid_d.size()) {
    throw ValidationError("protocol: duplicate grid values");
  }
  if (n_reps < 1) {
    throw ValidationError("protocol: n_reps must be >= 1");
  }
  if (n_samples < 1) {
    throw ValidationError("protocol: n_samples must be >= 1");
  }
  if (samplers.empty()) {
    throw ValidationError("protocol: at least one sampler is required");
  }
  if (std::set<SamplerId>(samplers.begin(), samplers.end()).size() != samplers.size()) {
    throw ValidationError("protocol: duplicate sampler");
  }
}

Protocol Protocol::full() {
  Protocol p;
  p.grid_a = {0.5, 2.875, 5.25, 7.625, 10.0};
  p.grid_d = {4, 8, 16, 32, 64};
  p.n_reps = 48;
  p.n_samples = 8192;
  p.samplers = {SamplerId::kMala, SamplerId::kIs, SamplerId::kVi,
                SamplerId::kSmc,  SamplerId::kRe, SamplerId::kSlips};
  return p;
}

Protocol Protocol::desk() {
  Protocol p = full();
  p.grid_d = {4, 8, 16};
  p.n_reps = 16;
  p.n_samples = 2048;
  return p;
}

SamplerSettings::SamplerSettings() {
  slips.config.sigma = 0.0;
  slips.t0_grid = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
}

void SamplerSettings::validate() const {
  if (mala.n_chains < 1 || mala.n_warmup < 0) {
    throw ValidationError("mala: n_chains must be >= 1 and n_warmup >= 0");
  }
  mala.chain.validate();
  if (is.n_fit < 2) {
    throw ValidationError("is: n_fit must be >= 2");
  }
  if (vi.iters < 0 || vi.batch < 1 || !(vi.learning_rate > 0.0)) {
    throw ValidationError("vi: need iters >= 0, batch >= 1, learning_rate > 0");
  }
  SmcConfig smc_check = smc;
  smc_check.n_particles = std::max(smc_check.n_particles, 2);
  smc_check.validate();
  re.validate();
  SlipsConfig slips_check = slips.config;
  if (slips_check.sigma <= 0.0) {
    slips_check.sigma = 1.0;
  }
  slips_check.validate();
  for (double t0 : slips.t0_grid) {
    if (!(t0 > 0.0) || !(t0 < slips.config.t1)) {
      throw ValidationError("slips: every t0 candidate must lie in (0, t1)");
    }
  }
  if (slips.n_pilot < 1) {
    throw ValidationError("slips: n_pilot must be >= 1");
  }
  if (n_oracle < 10000) {
    throw ValidationError("oracle: n_samples must be >= 10000");
  }
}

double mode_weight_estimate(const MixtureTarget& target, const Eigen::Ref<const Eigen::MatrixXd>& positions) {
  if (positions.cols() < 1) {
    throw DomainError("mode_weight_estimate: no samples");
  }
  return count_modes(target, positions).fraction();
}

double mode_weight_estimate(const MixtureTarget& target, const Eigen::Ref<const Eigen::MatrixXd>& positions,
                            const Eigen::Ref<const Eigen::VectorXd>& weights) {
  if (positions.cols() < 1) {
    throw DomainError("mode_weight_estimate: no samples");
  }
  if (weights.size() != positions.cols()) {
    throw ShapeError("mode_weight_estimate: one weight per sample required");
  }
  double s = 0.0;
  for (Eigen::Index j = 0; j < positions.cols(); ++j) {
    if (target.mode_of(positions.col(j)) == ModeLabel::kFirst) {
      s += weights[j];
    }
  }
  return s;
}

bool detect_collapse(const MixtureTarget& target, const Eigen::Ref<const Eigen::MatrixXd>& positions) {
  if (positions.cols() < 1) {
    throw DomainError("detect_collapse: no samples");
  }
  return count_modes(target, positions).collapsed();
}

std::vector<std::uint64_t> rep_seed_path(SamplerId sampler, double a, int d, int rep) {
  return {kRepTag, static_cast<std::uint64_t>(sampler), bits_of(a), static_cast<std::uint64_t>(d),
          static_cast<std::uint64_t>(rep)};
}

std::vector<std::uint64_t> oracle_seed_path(double a, int d) {
  return {kOracleTag, bits_of(a), static_cast<std::uint64_t>(d)};
}

ModeWeightOracle cell_oracle(const TargetSpec& spec, std::int64_t n_oracle, std::uint64_t master_seed) {
  const MixtureTarget target = build_target(spec);
  RngStream stream(master_seed, oracle_seed_path(spec.a, spec.d));
  return true_mode_weight(target, n_oracle, stream);
}

OracleTable compute_oracles(const Protocol& protocol, std::int64_t n_oracle, int jobs) {
  protocol.validate();
  std::vector<CellKey> cells;
  for (double a : protocol.grid_a) {
    for (int d : protocol.grid_d) {
      cells.emplace_back(a, d);
    }
  }
  std::vector<ModeWeightOracle> values(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  parallel_for(static_cast<int>(cells.size()), jobs, [&](int i) {
    try {
      TargetSpec spec;
      spec.a = cells[static_cast<std::size_t>(i)].first;
      spec.d = cells[static_cast<std::size_t>(i)].second;
      values[static_cast<std::size_t>(i)] = cell_oracle(spec, n_oracle, protocol.master_seed);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  });
  OracleTable table;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (errors[i]) {
      std::rethrow_exception(errors[i]);
    }
    table[cells[i]] = values[i];
  }
  return table;
}

CellPreparation prepare_cell(SamplerId sampler, const TargetSpec& spec, const SamplerSettings& settings,
                             const ModeWeightOracle& oracle, const Protocol& protocol) {
  CellPreparation prep;
  if (sampler != SamplerId::kSlips) {
    return prep;
  }
  const MixtureTarget target = build_target(spec);
  prep.slips = settings.slips.config;
  if (prep.slips.sigma <= 0.0) {
    prep.slips.sigma = default_sigma(moments(target));
  }
  if (!settings.slips.t0_grid.empty()) {
    RngStream stream(protocol.master_seed,
                     {kPrepTag, static_cast<std::uint64_t>(sampler), bits_of(spec.a), static_cast<std::uint64_t>(spec.d)});
    const T0Tuning tuning =
        tune_t0(target, oracle.w1, settings.slips.t0_grid, prep.slips, settings.slips.n_pilot, stream);
    prep.slips.t0 = tuning.t0;
    prep.diagnostics["t0_candidates"] = to_json(tuning.candidates);
    prep.diagnostics["t0_pilot_estimates"] = to_json(tuning.pilot_estimates);
    prep.diagnostics["t0_pilot_errors"] = to_json(tuning.pilot_errors);
  }
  prep.slips.validate();
  return prep;
}

EstimateRecord run_rep(SamplerId sampler, const TargetSpec& spec, const CellPreparation& prep,
                       const SamplerSettings& settings, const Protocol& protocol, int rep) {
  EstimateRecord rec;
  rec.sampler = std::string(sampler_name(sampler));
  rec.a = spec.a;
  rec.d = spec.d;
  rec.rep = rep;
  rec.seed_path = rep_seed_path(sampler, spec.a, spec.d, rep);
  const auto start = std::chrono::steady_clock::now();
  try {
    const MixtureTarget target = build_target(spec);
    RngStream stream(protocol.master_seed, rec.seed_path);
    switch (sampler) {
      case SamplerId::kMala:
        run_mala_rep(target, settings, protocol, stream, rec);
        break;
      case SamplerId::kIs:
        run_is_rep(target, settings, protocol, stream, rec);
        break;
      case SamplerId::kVi:
        run_vi_rep(target, settings, protocol, stream, rec);
        break;
      case SamplerId::kSmc:
        run_smc_rep(target, settings, protocol, stream, rec);
        break;
      case SamplerId::kRe:
        run_re_rep(target, settings, protocol, stream, rec);
        break;
      case SamplerId::kSlips:
        run_slips_rep(target, prep, protocol, stream, rec);
        break;
    }
    if (!prep.diagnostics.empty()) {
      rec.diagnostics["cell"] = prep.diagnostics;
    }
  } catch (const std::exception& e) {
    rec.w1_hat.reset();
    rec.collapsed = false;
    rec.error = e.what();
  }
  rec.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (n <= 0) {
    return;
  }
  const int workers = std::clamp(jobs, 1, n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
}

std::vector<EstimateRecord> run_setting(SamplerId sampler, const TargetSpec& spec, const Protocol& protocol,
                                        const SamplerSettings& settings, const ModeWeightOracle& oracle,
                                        int jobs) {
  spec.validate();
  protocol.validate();
  settings.validate();
  const CellPreparation prep = prepare_cell(sampler, spec, settings, oracle, protocol);
  std::vector<EstimateRecord> records(static_cast<std::size_t>(protocol.n_reps));
  parallel_for(protocol.n_reps, jobs, [&](int r) {
    records[static_cast<std::size_t>(r)] = run_rep(sampler, spec, prep, settings, protocol, r);
  });
  return records;
}

std::vector<std::vector<EstimateRecord>> run_sweep(const Protocol& protocol, const SamplerSettings& settings,
                                                   const OracleTable& oracles, int jobs,
                                                   const ProgressFn& progress) {
  protocol.validate();
  settings.validate();
  std::vector<SamplerId> samplers = protocol.samplers;
  std::sort(samplers.begin(), samplers.end(),
            [](SamplerId x, SamplerId y) { return sampler_name(x) < sampler_name(y); });
  std::vector<double> grid_a = protocol.grid_a;
  std::vector<int> grid_d = protocol.grid_d;
  std::sort(grid_a.begin(), grid_a.end());
  std::sort(grid_d.begin(), grid_d.end());

  struct Cell {
    SamplerId sampler;
    TargetSpec spec;
    ModeWeightOracle oracle;
    CellPreparation prep;
    std::string prep_error;
  };
  std::vector<Cell> cells;
  for (SamplerId s : samplers) {
    for (double a : grid_a) {
      for (int d : grid_d) {
        const auto it = oracles.find({a, d});
        if (it == oracles.end()) {
          throw ValidationError("run_sweep: no oracle entry for a=" + std::to_string(a) +
                                " d=" + std::to_string(d));
        }
        Cell c{s, TargetSpec{}, it->second, {}, {}};
        c.spec.a = a;
        c.spec.d = d;
        c.spec.validate();
        cells.push_back(std::move(c));
      }
    }
  }

  std::mutex log_mutex;
  const auto report = [&](const std::string& msg) {
    if (progress) {
      const std::lock_guard<std::mutex> lock(log_mutex);
      progress(msg);
    }
  };
  const auto cell_label = [](const Cell& c) {
    return std::string(sampler_name(c.sampler)) + " a=" + std::to_string(c.spec.a) + " d=" +
           std::to_string(c.spec.d);
  };

  parallel_for(static_cast<int>(cells.size()), jobs, [&](int i) {
    Cell& c = cells[static_cast<std::size_t>(i)];
    try {
      c.prep = prepare_cell(c.sampler, c.spec, settings, c.oracle, protocol);
    } catch (const std::exception& e) {
      c.prep_error = e.what();
      report("preparation failed for " + cell_label(c) + ": " + c.prep_error);
    }
  });

  const int n_reps = protocol.n_reps;
  std::vector<std::vector<EstimateRecord>> out(cells.size(), std::vector<EstimateRecord>(static_cast<std::size_t>(n_reps)));
  std::atomic<int> done{0};
  const int total = static_cast<int>(cells.size()) * n_reps;
  parallel_for(total, jobs, [&](int job) {
    const auto ci = static_cast<std::size_t>(job / n_reps);
    const int rep = job % n_reps;
    const Cell& c = cells[ci];
    EstimateRecord rec;
    if (c.prep_error.empty()) {
      rec = run_rep(c.sampler, c.spec, c.prep, settings, protocol, rep);
    } else {
      rec.sampler = std::string(sampler_name(c.sampler));
      rec.a = c.spec.a;
      rec.d = c.spec.d;
      rec.rep = rep;
      rec.seed_path = rep_seed_path(c.sampler, c.spec.a, c.spec.d, rep);
      rec.error = "cell preparation failed: " + c.prep_error;
    }
    if (!rec.error.empty()) {
      report("rep " + std::to_string(rep) + " failed for " + cell_label(c) + ": " + rec.error);
    }
    out[ci][static_cast<std::size_t>(rep)] = std::move(rec);
    const int finished = done.fetch_add(1) + 1;
    if (rep == n_reps - 1 || finished == total) {
      report("progress " + std::to_string(finished) + "/" + std::to_string(total));
    }
  });
  return out;
}

std::vector<CellSummary> aggregate(const std::vector<EstimateRecord>& records, const OracleTable& oracles,
                                   std::vector<std::string>* warnings) {
  using Key = std::tuple<std::string, double, int>;
  std::map<Key, std::vector<const EstimateRecord*>> cells;
  for (const EstimateRecord& r : records) {
    cells[{r.sampler, r.a, r.d}].push_back(&r);
  }
  std::vector<CellSummary> out;
  for (auto& [key, recs] : cells) {
    const auto& [sampler, a, d] = key;
    const auto it = oracles.find({a, d});
    if (it == oracles.end()) {
      throw ValidationError("aggregate: no oracle entry for a=" + std::to_string(a) + " d=" + std::to_string(d));
    }
    // fixed summation order regardless of how records arrived
    std::sort(recs.begin(), recs.end(), [](const EstimateRecord* x, const EstimateRecord* y) {
      return std::tie(x->rep, x->wall_clock_s) < std::tie(y->rep, y->wall_clock_s);
    });
    CellSummary s;
    s.sampler = sampler;
    s.a = a;
    s.d = d;
    s.oracle_w1 = it->second.w1;
    s.oracle_stderr = it->second.std_error;
    std::vector<double> values;
    bool all_collapsed = true;
    double wall = 0.0;
    for (const EstimateRecord* r : recs) {
      if (!r->w1_hat) {
        ++s.n_failed;
        continue;
      }
      values.push_back(*r->w1_hat);
      all_collapsed = all_collapsed && r->collapsed;
      wall += r->wall_clock_s;
    }
    if (values.empty()) {
      if (warnings != nullptr) {
        warnings->push_back("no successful repetition for " + sampler + " a=" + std::to_string(a) +
                            " d=" + std::to_string(d) + "; cell omitted");
      }
      continue;
    }
    const auto n = static_cast<double>(values.size());
    s.n_reps = static_cast<int>(values.size());
    double err = 0.0;
    double mean = 0.0;
    for (double v : values) {
      err += std::abs(v - s.oracle_w1);
      mean += v;
    }
    s.mean_abs_error = err / n;
    mean /= n;
    const bool identical =
        std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
    if (!identical) {
      double ss = 0.0;
      for (double v : values) {
        ss += (v - mean) * (v - mean);
      }
      s.std = std::sqrt(ss / n);
    }
    s.systematic_collapse = all_collapsed;
    s.mean_wall_clock_s = wall / n;
    out.push_back(s);
  }
  return out;
}

}  // namespace modebench
