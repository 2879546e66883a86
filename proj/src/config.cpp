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


#include "modebench/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "modebench/errors.hpp"

namespace modebench {

namespace {

class Section {
 public:
  Section(YAML::Node node, std::string name, const std::string& source)
      : node_(std::move(node)), name_(std::move(name)), source_(source) {
    if (!node_.IsMap()) {
      fail(node_, name_.empty() ? "the configuration must be a mapping" : "'" + name_ + "' must be a mapping");
    }
  }

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    const YAML::Mark mark = at.Mark();
    std::ostringstream os;
    os << source_ << ":" << mark.line + 1 << ":" << mark.column + 1 << ": " << msg;
    throw ValidationError(os.str());
  }

  YAML::Node take(const std::string& key, bool required) {
    seen_.insert(key);
    YAML::Node child = node_[key];
    if (!child && required) {
      fail(node_, "missing required key '" + qualified(key) + "'");
    }
    return child;
  }

  template <typename T>
  T scalar(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) {
      fail(n, "'" + qualified(key) + "' must be a scalar");
    }
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, "'" + qualified(key) + "' has an invalid value '" + n.Scalar() + "'");
    }
  }

  template <typename T>
  void get(const std::string& key, T& out, bool required = false) {
    const YAML::Node n = take(key, required);
    if (n) {
      out = scalar<T>(n, key);
    }
  }

  template <typename T>
  void get_list(const std::string& key, std::vector<T>& out, bool required = false) {
    const YAML::Node n = take(key, required);
    if (!n) {
      return;
    }
    if (!n.IsSequence()) {
      fail(n, "'" + qualified(key) + "' must be a list");
    }
    out.clear();
    for (const auto& item : n) {
      out.push_back(scalar<T>(item, key));
    }
  }

  void finish() const {
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (seen_.count(key) == 0) {
        fail(kv.first, "unknown key '" + qualified(key) + "'");
      }
    }
  }

  [[nodiscard]] const YAML::Node& node() const { return node_; }

  [[nodiscard]] std::string qualified(const std::string& key) const {
    return name_.empty() ? key : name_ + "." + key;
  }

 private:
  YAML::Node node_;
  std::string name_;
  const std::string& source_;
  std::set<std::string> seen_;
};

template <typename Fn>
void checked(const Section& s, const YAML::Node& at, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    s.fail(at, e.what());
  } catch (const DomainError& e) {
    s.fail(at, e.what());
  }
}

}  // namespace

SweepConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ":" << e.mark.line + 1 << ":" << e.mark.column + 1 << ": " << e.msg;
    throw ValidationError(os.str());
  }
  if (!root || root.IsNull()) {
    throw ValidationError(source + ":1:1: empty configuration");
  }
  SweepConfig cfg;
  Section top(root, "", source);
  top.get("output_dir", cfg.output_dir, true);

  {
    Section p(top.take("protocol", true), "protocol", source);
    Protocol& pr = cfg.protocol;
    p.get_list("grid_a", pr.grid_a, true);
    p.get_list("grid_d", pr.grid_d, true);
    p.get("n_reps", pr.n_reps, true);
    p.get("n_samples", pr.n_samples, true);
    p.get("master_seed", pr.master_seed, true);
    const YAML::Node samplers = p.take("samplers", true);
    if (!samplers.IsSequence()) {
      p.fail(samplers, "'protocol.samplers' must be a list");
    }
    for (const auto& item : samplers) {
      const auto name = p.scalar<std::string>(item, "samplers");
      checked(p, item, [&] { pr.samplers.push_back(parse_sampler(name)); });
    }
    p.finish();
    checked(p, p.node(), [&] { pr.validate(); });
  }

  SamplerSettings& st = cfg.settings;
  if (const YAML::Node n = top.take("oracle", false)) {
    Section s(n, "oracle", source);
    s.get("n_samples", st.n_oracle);
    s.finish();
  }
  if (const YAML::Node n = top.take("mala", false)) {
    Section s(n, "mala", source);
    s.get("n_chains", st.mala.n_chains);
    s.get("n_warmup", st.mala.n_warmup);
    s.get("lambda_init", st.mala.chain.lambda_init);
    s.get("target_accept", st.mala.chain.target_accept);
    s.get("adapt_rate", st.mala.chain.adapt_rate);
    s.finish();
  }
  if (const YAML::Node n = top.take("is", false)) {
    Section s(n, "is", source);
    s.get("n_fit", st.is.n_fit);
    s.finish();
  }
  if (const YAML::Node n = top.take("vi", false)) {
    Section s(n, "vi", source);
    s.get("iters", st.vi.iters);
    s.get("batch", st.vi.batch);
    s.get("learning_rate", st.vi.learning_rate);
    s.get("beta1", st.vi.beta1);
    s.get("beta2", st.vi.beta2);
    s.get("epsilon", st.vi.epsilon);
    s.finish();
  }
  if (const YAML::Node n = top.take("smc", false)) {
    Section s(n, "smc", source);
    s.get("ess_threshold_alpha", st.smc.ess_threshold_alpha);
    s.get("max_steps", st.smc.max_steps);
    s.get("mutation_steps", st.smc.mutation_steps);
    s.get("lambda_init", st.smc.lambda_init);
    s.get("target_accept", st.smc.target_accept);
    s.get("adapt_rate", st.smc.adapt_rate);
    s.get("resample_every_step", st.smc.resample_every_step);
    s.finish();
  }
  if (const YAML::Node n = top.take("re", false)) {
    Section s(n, "re", source);
    s.get("K", st.re.K);
    s.get("epsilon", st.re.epsilon);
    s.get("swap_interval", st.re.swap_interval);
    s.get("n_warmup", st.re.n_warmup);
    s.get("n_steps", st.re.n_steps);
    s.get("thinning", st.re.thinning);
    s.get("n_instances", st.re.n_instances);
    s.get("lambda_init", st.re.lambda_init);
    s.get("target_accept", st.re.target_accept);
    s.get("adapt_rate", st.re.adapt_rate);
    s.finish();
  }
  if (const YAML::Node n = top.take("slips", false)) {
    Section s(n, "slips", source);
    const YAML::Node sigma = s.take("sigma", false);
    if (sigma) {
      if (sigma.IsScalar() && sigma.Scalar() == "auto") {
        st.slips.config.sigma = 0.0;
      } else {
        st.slips.config.sigma = s.scalar<double>(sigma, "sigma");
        if (!(st.slips.config.sigma > 0.0)) {
          s.fail(sigma, "'slips.sigma' must be positive or 'auto'");
        }
      }
    }
    s.get("t0", st.slips.config.t0);
    s.get("t1", st.slips.config.t1);
    s.get("n_steps", st.slips.config.n_steps);
    s.get("inner_steps", st.slips.config.inner_steps);
    s.get("inner_lambda_init", st.slips.config.inner_lambda_init);
    s.get("target_accept", st.slips.config.target_accept);
    s.get("adapt_rate", st.slips.config.adapt_rate);
    s.get_list("t0_grid", st.slips.t0_grid);
    s.get("n_pilot", st.slips.n_pilot);
    s.finish();
  }
  top.finish();
  checked(top, root, [&] { st.validate(); });
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError(path + ": cannot open configuration file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace modebench
