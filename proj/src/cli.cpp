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


#include "modebench/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>
#include <thread>

#include "modebench/config.hpp"
#include "modebench/errors.hpp"
#include "modebench/harness.hpp"
#include "modebench/report.hpp"
#include "modebench/validate.hpp"

namespace modebench {

namespace fs = std::filesystem;

namespace {

int default_jobs() { return static_cast<int>(std::max(1U, std::thread::hardware_concurrency())); }

bool oracle_covers(const OracleFile& file, const SweepConfig& cfg) {
  if (file.n_samples != cfg.settings.n_oracle || file.master_seed != cfg.protocol.master_seed) {
    return false;
  }
  for (double a : cfg.protocol.grid_a) {
    for (int d : cfg.protocol.grid_d) {
      if (file.table.count({a, d}) == 0) {
        return false;
      }
    }
  }
  return true;
}

OracleTable ensure_oracles(const SweepConfig& cfg, const fs::path& dir, int jobs, std::ostream& err) {
  const fs::path file = dir / "oracle.json";
  if (fs::exists(file)) {
    const OracleFile existing = read_oracle_file(file);
    if (oracle_covers(existing, cfg)) {
      err << "using existing " << file.string() << "\n";
      return existing.table;
    }
    err << file.string() << " does not match the configuration; recomputing\n";
  }
  err << "computing ground truth with " << cfg.settings.n_oracle << " samples per cell\n";
  OracleTable table = compute_oracles(cfg.protocol, cfg.settings.n_oracle, jobs);
  write_oracles(file, table, cfg.settings.n_oracle, cfg.protocol.master_seed);
  return table;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, int jobs, std::ostream& out,
              std::ostream& err) {
  SweepConfig cfg = load_config(config_path);
  if (!out_dir.empty()) {
    cfg.output_dir = out_dir;
  }
  const fs::path dir(cfg.output_dir);
  const OracleTable oracles = ensure_oracles(cfg, dir, jobs, err);
  const auto cells = run_sweep(cfg.protocol, cfg.settings, oracles, jobs,
                               [&err](const std::string& msg) { err << msg << "\n"; });
  std::vector<EstimateRecord> all;
  int failed = 0;
  for (const auto& cell : cells) {
    write_cell_records(dir, cell);
    for (const EstimateRecord& r : cell) {
      failed += r.w1_hat ? 0 : 1;
      all.push_back(r);
    }
  }
  std::vector<std::string> warnings;
  const auto summary = aggregate(all, oracles, &warnings);
  for (const auto& w : warnings) {
    err << "warning: " << w << "\n";
  }
  write_text(dir / "summary.csv", summary_csv(summary));
  out << "wrote " << cells.size() << " cells to " << dir.string();
  if (failed > 0) {
    out << " (" << failed << " failed repetitions)";
  }
  out << "\n";
  return 0;
}

int cmd_report(const std::string& in_dir, const std::string& format, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const auto written = write_report(fs::path(in_dir), parse_report_format(format), &warnings);
  for (const auto& w : warnings) {
    err << "warning: " << w << "\n";
  }
  for (const auto& f : written) {
    out << f.string() << "\n";
  }
  return 0;
}

int cmd_oracle(const std::string& config_path, const std::string& out_dir, int jobs, std::ostream& out) {
  SweepConfig cfg = load_config(config_path);
  if (!out_dir.empty()) {
    cfg.output_dir = out_dir;
  }
  const fs::path file = fs::path(cfg.output_dir) / "oracle.json";
  const OracleTable table = compute_oracles(cfg.protocol, cfg.settings.n_oracle, jobs);
  write_oracles(file, table, cfg.settings.n_oracle, cfg.protocol.master_seed);
  for (const auto& [key, o] : table) {
    out << "a=" << format_real(key.first) << " d=" << key.second << " w1=" << format_real(o.w1)
        << " stderr=" << format_real(o.std_error) << "\n";
  }
  out << "wrote " << file.string() << "\n";
  return 0;
}

int cmd_validate(std::ostream& out) {
  int failures = 0;
  run_validation([&](const CheckResult& r) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) {
      out << " (" << r.detail << ")";
    }
    out << "\n" << std::flush;
    failures += r.passed ? 0 : 1;
  });
  out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mode-weight benchmark for multi-modal samplers", "modebench"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string in_dir;
  std::string format;
  int jobs = default_jobs();

  auto* sweep = app.add_subcommand("sweep", "Run the benchmark protocol");
  sweep->add_option("--config", config_path, "YAML configuration")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out_dir, "Results directory")->required();
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "Aggregate a results directory");
  report->add_option("--in", in_dir, "Results directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--format", format, "csv, json or svg")
      ->required()
      ->check(CLI::IsMember({"csv", "json", "svg"}));

  auto* oracle = app.add_subcommand("oracle", "Compute per-cell ground-truth mode weights");
  oracle->add_option("--config", config_path, "YAML configuration")->required()->check(CLI::ExistingFile);
  oracle->add_option("--out", out_dir, "Results directory (defaults to output_dir of the configuration)");
  oracle->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Run the invariant and oracle check battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*sweep) {
      return cmd_sweep(config_path, out_dir, jobs, out, err);
    }
    if (*report) {
      return cmd_report(in_dir, format, out, err);
    }
    if (*oracle) {
      return cmd_oracle(config_path, out_dir, jobs, out);
    }
    if (*validate) {
      return cmd_validate(out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace modebench
