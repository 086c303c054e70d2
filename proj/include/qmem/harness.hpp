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

#ifndef QMEM_HARNESS_HPP
#define QMEM_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmem/protocol.hpp"

namespace qmem::harness {

// Exit codes shared by the batch commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBoundViolation = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitInternalFailure = 3;

/// Configuration problems raised during parsing/validation; mapped to exit
/// code 2 by the commands.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Which strategy to instantiate at each N.
struct StrategySpec {
  enum class Kind { kKeepSubset, kMeasureAll, kKeepAll, kCustomFile };
  Kind kind = Kind::kMeasureAll;
  protocol::MeasurementBasis measure = protocol::MeasurementBasis::z();
  /// Explicit kept set for keep_subset; empty means "first M qubits" with M
  /// taken from the memory rule.
  std::vector<std::size_t> kept;
  std::string file;  // custom strategy JSON

  /// Compact text form: "keep_all", "measure_all:Z|X|angle=<t>",
  /// "keep_first:<basis>", "keep_subset:<i.j.k>:<basis>",
  /// "custom:<path>".
  static StrategySpec parse(const std::string& text);
};

struct ExperimentConfig {
  std::vector<std::size_t> n_range;

  // Memory rule: fixed M, or floor(q N).
  std::optional<std::size_t> m_fixed;
  std::optional<double> q_rate;

  StrategySpec strategy;

  // Program-length cutoffs: fixed, or floor(p N).
  std::size_t l_x = 0, l_z = 0;
  std::optional<double> p_x, p_z;

  double c_exponent = 1.5;
  std::uint64_t seed = 20260801;
  std::string out_path = "results.csv";

  std::size_t memory_qubits(std::size_t n) const;
  std::size_t cutoff_x(std::size_t n) const;
  std::size_t cutoff_z(std::size_t n) const;

  /// Throws ConfigError on any inconsistency (empty range, rate sums,
  /// dimension guard, ...).
  void validate() const;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

/// One CSV row of a run; the stable schema is
/// n,m,strategy,xi,lhs_z,lhs_x,lhs_total,rhs,slack,holds.
struct ResultRow {
  std::size_t n, m;
  std::string strategy;
  std::size_t xi;
  double lhs_z, lhs_x, lhs_total, rhs, slack;
  bool holds;
  double wall_time_s = 0;  // diagnostics only, never written to the CSV
};

/// Largest operator dimension the Theta-based checks may allocate; defaults
/// to 4096 (N + M <= 12) and can be raised via QMEMLAB_MAX_DIM.
std::size_t max_theta_dim();

protocol::BobStrategy instantiate_strategy(const StrategySpec& spec,
                                           std::size_t n, std::size_t m);

/// Executes the trade-off check for every (N, xi), writes the CSV, and
/// returns an exit code: 0 all rows hold, 1 bound violation (rows still
/// written), 2 invalid config, 3 internal identity failure.
int run(const ExperimentConfig& config, std::ostream& log);

/// Theorem-style exponential sweep; writes CSV rows
/// n,m,strategy,q,px,pz,lhs_total,rhs,epsilon,c0,slack,holds.
int sweep(const StrategySpec& spec, double q, double p_x, double p_z,
          std::size_t n_min, std::size_t n_max, double c_exponent,
          const std::string& out_path, std::ostream& log);

/// Runs every module's invariant suite with the given seed, printing one
/// pass/fail line per suite. `inject` enables deliberate defects for
/// negative-control testing ("broken-channel" is the only recognized tag).
int selftest(std::uint64_t seed, std::ostream& out,
             const std::string& inject = "");

}  // namespace qmem::harness

#endif  // QMEM_HARNESS_HPP
