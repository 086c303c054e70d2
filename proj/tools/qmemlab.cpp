// Copyright 2026 The qmemlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmem/harness.hpp"

// Batch front end: `qmemlab run` executes the trade-off check over a
// configured grid and writes a CSV, `qmemlab sweep` drives the
// exponential-form check, `qmemlab selftest` runs the invariant suites.

namespace {

using qmem::harness::ExperimentConfig;
using qmem::harness::StrategySpec;

std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    const auto dots = cur.find("..");
    if (dots != std::string::npos) {
      const std::size_t lo = std::stoul(cur.substr(0, dots));
      const std::size_t hi = std::stoul(cur.substr(dots + 2));
      for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      out.push_back(std::stoul(cur));
    }
    cur.clear();
  };
  for (char c : text) {
    if (c == ',') {
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conjugate-coding trade-off checks for memory-bounded "
               "receivers"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand(
      "run", "trade-off check over a strategy grid; emits CSV rows");
  std::string config_path, n_list, m_str, strategy_str, lx_str, lz_str,
      cexp_str, seed_str, out_str;
  run_cmd->add_option("--config", config_path, "experiment config JSON");
  run_cmd->add_option("--n", n_list, "message lengths, e.g. 2,3,4 or 2..5");
  run_cmd->add_option("--m", m_str, "fixed memory qubit count");
  run_cmd->add_option("--strategy", strategy_str,
                      "keep_all | measure_all:<B> | keep_first:<B> | "
                      "keep_subset:<i.j>:<B> | breidbart | custom:<file> "
                      "with <B> one of Z, X, angle=<t>");
  run_cmd->add_option("--lx", lx_str, "program length cutoff, X side");
  run_cmd->add_option("--lz", lz_str, "program length cutoff, Z side");
  run_cmd->add_option("--c-exp", cexp_str, "exponent constant (default 1.5)");
  run_cmd->add_option("--seed", seed_str, "seed recorded in the config");
  run_cmd->add_option("--out", out_str, "output CSV path");

  // selftest
  auto* self_cmd =
      app.add_subcommand("selftest", "run all module invariant suites");
  std::string self_seed_str, inject;
  self_cmd->add_option("--seed", self_seed_str, "fuzz seed");
  self_cmd->add_option("--inject", inject,
                       "deliberate defect tag (negative control)");

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "exponential-form check across message lengths");
  double q = 0, px = 0, pz = 0, sweep_cexp = 1.5;
  std::size_t n_min = 2, n_max = 5;
  std::string sweep_strategy = "measure_all:Z", sweep_out = "sweep.csv";
  sweep_cmd->add_option("--q", q, "memory rate M = floor(qN)")->required();
  sweep_cmd->add_option("--px", px, "X-side length rate")->required();
  sweep_cmd->add_option("--pz", pz, "Z-side length rate")->required();
  sweep_cmd->add_option("--n-min", n_min, "smallest N")->required();
  sweep_cmd->add_option("--n-max", n_max, "largest N")->required();
  sweep_cmd->add_option("--strategy", sweep_strategy, "strategy spec");
  sweep_cmd->add_option("--c-exp", sweep_cexp, "exponent constant");
  sweep_cmd->add_option("--out", sweep_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty())
        cfg = ExperimentConfig::from_json_file(config_path);
      if (!n_list.empty()) cfg.n_range = parse_n_list(n_list);
      if (!m_str.empty()) {
        cfg.m_fixed = std::stoul(m_str);
        cfg.q_rate.reset();
      }
      if (!strategy_str.empty())
        cfg.strategy = StrategySpec::parse(strategy_str);
      if (!lx_str.empty()) {
        cfg.l_x = std::stoul(lx_str);
        cfg.p_x.reset();
      }
      if (!lz_str.empty()) {
        cfg.l_z = std::stoul(lz_str);
        cfg.p_z.reset();
      }
      if (!cexp_str.empty()) cfg.c_exponent = std::stod(cexp_str);
      if (!seed_str.empty()) cfg.seed = std::stoull(seed_str);
      if (!out_str.empty()) cfg.out_path = out_str;
      return qmem::harness::run(cfg, std::cerr);
    }
    if (self_cmd->parsed()) {
      const std::uint64_t seed =
          self_seed_str.empty() ? 20260801ull : std::stoull(self_seed_str);
      return qmem::harness::selftest(seed, std::cout, inject);
    }
    if (sweep_cmd->parsed()) {
      const StrategySpec spec = StrategySpec::parse(sweep_strategy);
      return qmem::harness::sweep(spec, q, px, pz, n_min, n_max, sweep_cexp,
                                  sweep_out, std::cerr);
    }
  } catch (const qmem::harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return qmem::harness::kExitInvalidConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return qmem::harness::kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qmem::harness::kExitInternalFailure;
  }
  return qmem::harness::kExitInvalidConfig;
}
