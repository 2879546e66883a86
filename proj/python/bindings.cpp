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


#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "modebench/cli.hpp"
#include "modebench/errors.hpp"
#include "modebench/harness.hpp"
#include "modebench/target.hpp"
#include "modebench/validate.hpp"

namespace py = pybind11;
using namespace modebench;

namespace {

TargetSpec make_spec(double a, int d, double w) {
  TargetSpec spec;
  spec.a = a;
  spec.d = d;
  spec.w = w;
  spec.validate();
  return spec;
}

py::dict summary_dict(const CellSummary& s) {
  py::dict out;
  out["sampler"] = s.sampler;
  out["a"] = s.a;
  out["d"] = s.d;
  out["n_reps"] = s.n_reps;
  out["n_failed"] = s.n_failed;
  out["mean_abs_error"] = s.mean_abs_error;
  out["std"] = s.std;
  out["systematic_collapse"] = s.systematic_collapse;
  out["mean_wall_clock_s"] = s.mean_wall_clock_s;
  out["oracle_w1"] = s.oracle_w1;
  out["oracle_stderr"] = s.oracle_stderr;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bi-modal mode-weight benchmark";

  // later registrations are tried first, so the base class goes in first
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());

  py::class_<MixtureTarget>(m, "Target")
      .def(py::init([](double a, int d, double w) { return build_target(make_spec(a, d, w)); }), py::arg("a"),
           py::arg("d"), py::arg("w") = 2.0 / 3.0)
      .def_property_readonly("dim", &MixtureTarget::dim)
      .def_property_readonly("weight", &MixtureTarget::weight)
      .def("mean", &MixtureTarget::mean, py::arg("k"))
      .def("variances", &MixtureTarget::variances, py::arg("k"))
      .def("log_density", [](const MixtureTarget& t, const Eigen::VectorXd& x) { return t.log_density(x); })
      .def("grad_log_density",
           [](const MixtureTarget& t, const Eigen::VectorXd& x) {
             Eigen::VectorXd g(x.size());
             t.log_density_grad(x, g);
             return g;
           })
      .def("mode_of", [](const MixtureTarget& t, const Eigen::VectorXd& x) { return static_cast<int>(t.mode_of(x)); })
      .def("moments",
           [](const MixtureTarget& t) {
             const Moments mo = moments(t);
             return py::make_tuple(mo.mean, mo.variances);
           })
      .def(
          "sample",
          [](const MixtureTarget& t, Eigen::Index n, std::uint64_t seed) {
            RngStream s(seed);
            return exact_sample(t, n, s);
          },
          py::arg("n"), py::arg("seed"), "Exact draws, one per column.")
      .def(
          "posterior_mean",
          [](const MixtureTarget& t, const Eigen::VectorXd& y, double time, double alpha, double sigma) {
            return posterior_mean_oracle(t, y, time, alpha, sigma);
          },
          py::arg("y"), py::arg("t"), py::arg("alpha"), py::arg("sigma"));

  m.def(
      "true_mode_weight",
      [](double a, int d, std::int64_t n_oracle, std::uint64_t seed) {
        const ModeWeightOracle o = cell_oracle(make_spec(a, d, 2.0 / 3.0), n_oracle, seed);
        return py::make_tuple(o.w1, o.std_error);
      },
      py::arg("a"), py::arg("d"), py::arg("n_oracle") = 1'000'000, py::arg("seed") = 0,
      "Monte Carlo mode weight of the first component and its standard error.");

  m.def(
      "estimate",
      [](const std::string& sampler, double a, int d, int n_reps, int n_samples, std::uint64_t seed,
         std::int64_t n_oracle, int jobs) {
        const SamplerId id = parse_sampler(sampler);
        const TargetSpec spec = make_spec(a, d, 2.0 / 3.0);
        Protocol protocol;
        protocol.grid_a = {a};
        protocol.grid_d = {d};
        protocol.n_reps = n_reps;
        protocol.n_samples = n_samples;
        protocol.samplers = {id};
        protocol.master_seed = seed;
        protocol.validate();
        SamplerSettings settings;
        settings.n_oracle = n_oracle;
        OracleTable oracles;
        std::vector<EstimateRecord> records;
        {
          py::gil_scoped_release release;
          const ModeWeightOracle oracle = cell_oracle(spec, n_oracle, seed);
          oracles[{a, d}] = oracle;
          records = run_setting(id, spec, protocol, settings, oracle, jobs);
        }
        py::list estimates;
        for (const EstimateRecord& r : records) {
          if (r.w1_hat) {
            estimates.append(*r.w1_hat);
          } else {
            estimates.append(py::none());
          }
        }
        py::dict out = summary_dict(aggregate(records, oracles).front());
        out["estimates"] = estimates;
        return out;
      },
      py::arg("sampler"), py::arg("a"), py::arg("d"), py::arg("n_reps") = 8, py::arg("n_samples") = 1024,
      py::arg("seed") = 0, py::arg("n_oracle") = 1'000'000, py::arg("jobs") = 1,
      "Run one sampler on one (a, d) cell and summarise the repetitions.");

  m.def(
      "validate",
      []() {
        std::vector<CheckResult> results;
        {
          py::gil_scoped_release release;
          results = run_validation();
        }
        py::list out;
        for (const CheckResult& r : results) {
          out.append(py::make_tuple(r.name, r.passed, r.detail));
        }
        return out;
      },
      "Run the built-in validation battery; returns (name, passed, detail) tuples.");

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"modebench"};
        for (const std::string& a : args) {
          argv.push_back(a.c_str());
        }
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command line tool in-process; returns (exit code, stdout, stderr).");
}
