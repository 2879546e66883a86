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


#ifndef MODEBENCH_HARNESS_HPP
#define MODEBENCH_HARNESS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modebench/mala.hpp"
#include "modebench/replica.hpp"
#include "modebench/slips.hpp"
#include "modebench/smc.hpp"
#include "modebench/target.hpp"
#include "modebench/variational.hpp"

namespace modebench {

enum class SamplerId : int { kMala = 0, kIs = 1, kVi = 2, kSmc = 3, kRe = 4, kSlips = 5 };

std::string_view sampler_name(SamplerId id);
/// Throws ValidationError for an unknown name.
SamplerId parse_sampler(std::string_view name);

struct Protocol {
  std::vector<double> grid_a;
  std::vector<int> grid_d;
  int n_reps = 48;
  int n_samples = 8192;  // samples behind one estimate
  std::vector<SamplerId> samplers;
  std::uint64_t master_seed = 0;

  void validate() const;
  static Protocol full();
  static Protocol desk();
};

struct MalaSettings {
  int n_chains = 32;
  std::int64_t n_warmup = 4096;
  MalaConfig chain;
};

struct IsSettings {
  std::int64_t n_fit = 16384;
};

struct SlipsSettings {
  SlipsConfig config;           // sigma <= 0 selects the scale-matching default
  std::vector<double> t0_grid;  // empty: use config.t0 without tuning
  int n_pilot = 256;
};

struct SamplerSettings {
  MalaSettings mala;
  IsSettings is;
  ViConfig vi;
  SmcConfig smc;  // n_particles is taken from the protocol
  LadderConfig re;
  SlipsSettings slips;
  std::int64_t n_oracle = 10'000'000;

  SamplerSettings();
  void validate() const;
};

struct EstimateRecord {
  std::string sampler;
  double a = 0.0;
  int d = 0;
  int rep = 0;
  std::optional<double> w1_hat;  // empty when the repetition failed
  bool collapsed = false;
  double wall_clock_s = 0.0;
  std::vector<std::uint64_t> seed_path;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
  std::string error;
};

using CellKey = std::pair<double, int>;  // (a, d)
using OracleTable = std::map<CellKey, ModeWeightOracle>;

/// Fraction of columns with mode_of = 1.
double mode_weight_estimate(const MixtureTarget& target, const Eigen::Ref<const Eigen::MatrixXd>& positions);
/// Sum of the normalized weights of columns with mode_of = 1.
double mode_weight_estimate(const MixtureTarget& target, const Eigen::Ref<const Eigen::MatrixXd>& positions,
                            const Eigen::Ref<const Eigen::VectorXd>& weights);
/// True iff every column lies in the same partition element.
bool detect_collapse(const MixtureTarget& target, const Eigen::Ref<const Eigen::MatrixXd>& positions);

/// Seed path of one repetition; independent of grid order and worker count.
std::vector<std::uint64_t> rep_seed_path(SamplerId sampler, double a, int d, int rep);
std::vector<std::uint64_t> oracle_seed_path(double a, int d);

ModeWeightOracle cell_oracle(const TargetSpec& spec, std::int64_t n_oracle, std::uint64_t master_seed);
OracleTable compute_oracles(const Protocol& protocol, std::int64_t n_oracle, int jobs);

/// Per-cell work shared by all repetitions (SLIPS t0 tuning).
struct CellPreparation {
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
  SlipsConfig slips;
};

CellPreparation prepare_cell(SamplerId sampler, const TargetSpec& spec, const SamplerSettings& settings,
                             const ModeWeightOracle& oracle, const Protocol& protocol);

/// One repetition. Failures are returned in the record, never thrown.
EstimateRecord run_rep(SamplerId sampler, const TargetSpec& spec, const CellPreparation& prep,
                       const SamplerSettings& settings, const Protocol& protocol, int rep);

/// Runs fn(0..n-1) on up to `jobs` threads; fn must not throw.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

std::vector<EstimateRecord> run_setting(SamplerId sampler, const TargetSpec& spec, const Protocol& protocol,
                                        const SamplerSettings& settings, const ModeWeightOracle& oracle,
                                        int jobs);

using ProgressFn = std::function<void(const std::string& message)>;

/// Every (sampler, a, d) cell of the protocol; records grouped per cell in
/// (sampler, a, d) order, reps ascending within a cell.
std::vector<std::vector<EstimateRecord>> run_sweep(const Protocol& protocol, const SamplerSettings& settings,
                                                   const OracleTable& oracles, int jobs,
                                                   const ProgressFn& progress = {});

struct CellSummary {
  std::string sampler;
  double a = 0.0;
  int d = 0;
  int n_reps = 0;  // successful repetitions
  int n_failed = 0;
  double mean_abs_error = 0.0;
  double std = 0.0;  // population standard deviation of w1_hat
  bool systematic_collapse = false;
  double mean_wall_clock_s = 0.0;
  double oracle_w1 = 0.0;
  double oracle_stderr = 0.0;
};

/// One summary per cell with at least one successful repetition, sorted by
/// (sampler, a, d). Cells without a successful repetition are skipped and
/// reported in `warnings`. Throws ValidationError when a cell has no oracle
/// entry. The result does not depend on record order.
std::vector<CellSummary> aggregate(const std::vector<EstimateRecord>& records, const OracleTable& oracles,
                                   std::vector<std::string>* warnings = nullptr);

}  // namespace modebench

#endif  // MODEBENCH_HARNESS_HPP
