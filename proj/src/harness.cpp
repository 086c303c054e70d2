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

#include "qmem/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qmem/bounds.hpp"
#include "qmem/codebook.hpp"

namespace qmem::harness {

namespace {

using protocol::Basis;
using protocol::BobStrategy;
using protocol::MeasurementBasis;
using protocol::Message;

constexpr double kOutcomeThreshold = 1e-12;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

MeasurementBasis parse_basis(const std::string& text) {
  if (text == "Z") return MeasurementBasis::z();
  if (text == "X") return MeasurementBasis::x();
  if (text == "breidbart")
    return MeasurementBasis::angle(std::numbers::pi / 8);
  if (text.rfind("angle=", 0) == 0) {
    try {
      return MeasurementBasis::angle(std::stod(text.substr(6)));
    } catch (const std::exception&) {
      throw ConfigError("bad angle in basis spec: " + text);
    }
  }
  throw ConfigError("unknown measurement basis: " + text);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

StrategySpec StrategySpec::parse(const std::string& text) {
  StrategySpec spec;
  const auto parts = split(text, ':');
  const std::string& kind = parts.front();

  if (kind == "keep_all") {
    if (parts.size() != 1) throw ConfigError("keep_all takes no parameters");
    spec.kind = Kind::kKeepAll;
    return spec;
  }
  if (kind == "measure_all" || kind == "breidbart") {
    spec.kind = Kind::kMeasureAll;
    if (kind == "breidbart") {
      if (parts.size() != 1)
        throw ConfigError("breidbart takes no parameters");
      spec.measure = MeasurementBasis::angle(std::numbers::pi / 8);
    } else {
      if (parts.size() != 2)
        throw ConfigError("measure_all needs a basis, e.g. measure_all:Z");
      spec.measure = parse_basis(parts[1]);
    }
    return spec;
  }
  if (kind == "keep_first") {
    if (parts.size() != 2)
      throw ConfigError("keep_first needs a basis, e.g. keep_first:Z");
    spec.kind = Kind::kKeepSubset;
    spec.measure = parse_basis(parts[1]);
    return spec;
  }
  if (kind == "keep_subset") {
    if (parts.size() != 3)
      throw ConfigError("keep_subset needs indices and a basis, "
                        "e.g. keep_subset:0.2:Z");
    spec.kind = Kind::kKeepSubset;
    for (const auto& tok : split(parts[1], '.')) {
      try {
        spec.kept.push_back(std::stoul(tok));
      } catch (const std::exception&) {
        throw ConfigError("bad qubit index in keep_subset: " + tok);
      }
    }
    spec.measure = parse_basis(parts[2]);
    return spec;
  }
  if (kind == "custom") {
    if (parts.size() < 2) throw ConfigError("custom needs a file path");
    spec.kind = Kind::kCustomFile;
    spec.file = text.substr(7);  // keep any ':' inside the path
    return spec;
  }
  throw ConfigError("unknown strategy kind: " + kind);
}

std::size_t ExperimentConfig::memory_qubits(std::size_t n) const {
  switch (strategy.kind) {
    case StrategySpec::Kind::kKeepAll:
      return n;
    case StrategySpec::Kind::kMeasureAll:
      return 0;
    case StrategySpec::Kind::kKeepSubset:
      if (!strategy.kept.empty()) return strategy.kept.size();
      if (m_fixed) return *m_fixed;
      if (q_rate) return static_cast<std::size_t>(*q_rate * n + 1e-9);
      throw ConfigError("keep_first strategy needs m or q");
    case StrategySpec::Kind::kCustomFile:
      // Determined by the strategy file itself.
      return m_fixed.value_or(0);
  }
  throw ConfigError("unreachable strategy kind");
}

std::size_t ExperimentConfig::cutoff_x(std::size_t n) const {
  if (p_x) return static_cast<std::size_t>(*p_x * n + 1e-9);
  return l_x;
}

std::size_t ExperimentConfig::cutoff_z(std::size_t n) const {
  if (p_z) return static_cast<std::size_t>(*p_z * n + 1e-9);
  return l_z;
}

void ExperimentConfig::validate() const {
  if (n_range.empty()) throw ConfigError("n_range is empty");
  for (std::size_t n : n_range)
    if (n < 1) throw ConfigError("message length must be >= 1");
  if (m_fixed && q_rate) throw ConfigError("set either m or q, not both");
  if (q_rate && (*q_rate < 0 || *q_rate > 1))
    throw ConfigError("q must lie in [0, 1]");
  if (q_rate || p_x || p_z) {
    const double sum =
        q_rate.value_or(0.0) + p_x.value_or(0.0) + p_z.value_or(0.0);
    if (sum >= 1.0)
      throw ConfigError("rate mode requires q + p_x + p_z < 1 (got " +
                        format_double(sum) + ")");
  }
  if (!std::isfinite(c_exponent)) throw ConfigError("c_exponent not finite");
  if (out_path.empty()) throw ConfigError("output path is empty");

  if (strategy.kind != StrategySpec::Kind::kCustomFile) {
    const std::size_t limit = max_theta_dim();
    for (std::size_t n : n_range) {
      const std::size_t m = memory_qubits(n);
      if (m > n) throw ConfigError("memory size exceeds message length");
      // Built-in channels route all N qubits, so the conditioned joint
      // state lives on 2^(2N) before tracing out the measured part.
      if (2 * n > 62 || (std::size_t{1} << (2 * n)) > limit ||
          (std::size_t{1} << (n + m)) > limit)
        throw ConfigError(
            "dimension guard: N = " + std::to_string(n) +
            " exceeds QMEMLAB_MAX_DIM = " + std::to_string(limit));
    }
  }
}

std::size_t max_theta_dim() {
  if (const char* env = std::getenv("QMEMLAB_MAX_DIM")) {
    const long v = std::atol(env);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 4096;
}

namespace {

StrategySpec strategy_spec_from_json(const nlohmann::json& j) {
  if (j.is_string()) return StrategySpec::parse(j.get<std::string>());
  if (!j.is_object()) throw ConfigError("strategy must be string or object");
  StrategySpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "keep_all") {
    spec.kind = StrategySpec::Kind::kKeepAll;
  } else if (kind == "measure_all") {
    spec.kind = StrategySpec::Kind::kMeasureAll;
  } else if (kind == "keep_subset" || kind == "keep_first") {
    spec.kind = StrategySpec::Kind::kKeepSubset;
    if (j.contains("kept"))
      spec.kept = j.at("kept").get<std::vector<std::size_t>>();
  } else if (kind == "custom") {
    spec.kind = StrategySpec::Kind::kCustomFile;
    spec.file = j.at("file").get<std::string>();
  } else {
    throw ConfigError("unknown strategy kind: " + kind);
  }
  if (j.contains("measure")) {
    const auto& mj = j.at("measure");
    spec.measure = mj.is_number()
                       ? MeasurementBasis::angle(mj.get<double>())
                       : parse_basis(mj.get<std::string>());
  }
  return spec;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("n_range")) {
      const auto& nr = j.at("n_range");
      if (nr.is_array()) {
        cfg.n_range = nr.get<std::vector<std::size_t>>();
      } else {
        const std::size_t lo = nr.at("min").get<std::size_t>();
        const std::size_t hi = nr.at("max").get<std::size_t>();
        for (std::size_t n = lo; n <= hi; ++n) cfg.n_range.push_back(n);
      }
    } else if (j.contains("n")) {
      cfg.n_range = {j.at("n").get<std::size_t>()};
    }
    if (j.contains("m")) cfg.m_fixed = j.at("m").get<std::size_t>();
    if (j.contains("q")) cfg.q_rate = j.at("q").get<double>();
    if (j.contains("strategy"))
      cfg.strategy = strategy_spec_from_json(j.at("strategy"));
    if (j.contains("l_x")) cfg.l_x = j.at("l_x").get<std::size_t>();
    if (j.contains("l_z")) cfg.l_z = j.at("l_z").get<std::size_t>();
    if (j.contains("p_x")) cfg.p_x = j.at("p_x").get<double>();
    if (j.contains("p_z")) cfg.p_z = j.at("p_z").get<double>();
    if (j.contains("c_exponent"))
      cfg.c_exponent = j.at("c_exponent").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) cfg.out_path = j.at("out").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

BobStrategy instantiate_strategy(const StrategySpec& spec, std::size_t n,
                                 std::size_t m) {
  switch (spec.kind) {
    case StrategySpec::Kind::kKeepAll:
      return protocol::keep_all_strategy(n);
    case StrategySpec::Kind::kMeasureAll:
      return protocol::measure_all_strategy(n, spec.measure);
    case StrategySpec::Kind::kKeepSubset: {
      std::set<std::size_t> kept(spec.kept.begin(), spec.kept.end());
      if (kept.empty())
        for (std::size_t q = 0; q < m; ++q) kept.insert(q);
      try {
        return protocol::keep_subset_strategy(n, kept, spec.measure);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    case StrategySpec::Kind::kCustomFile: {
      try {
        BobStrategy s = protocol::strategy_from_json_file(spec.file);
        if (s.n() != n)
          throw ConfigError("custom strategy has N = " +
                            std::to_string(s.n()) + ", config asks for " +
                            std::to_string(n));
        return s;
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  throw ConfigError("unreachable strategy kind");
}

namespace {

// Memory states for every message the families cover, for one outcome.
std::map<Message, DensityOperator> states_for_validation(
    const BobStrategy& strategy, Basis basis,
    const codebook::DecoderFamily& family, std::size_t xi) {
  std::map<Message, DensityOperator> states;
  for (const auto& decoder : family.decoders) {
    for (const auto& [msg, e] : decoder.entries) {
      if (states.count(msg)) continue;
      for (auto& cs : protocol::conditional_states(strategy, basis, msg)) {
        if (cs.outcome == xi) {
          states.emplace(msg, std::move(cs.memory_state));
          break;
        }
      }
    }
  }
  return states;
}

void write_rows_csv(const std::string& path,
                    const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << "n,m,strategy,xi,lhs_z,lhs_x,lhs_total,rhs,slack,holds\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.m << ',' << r.strategy << ',' << r.xi << ','
        << format_double(r.lhs_z) << ',' << format_double(r.lhs_x) << ','
        << format_double(r.lhs_total) << ',' << format_double(r.rhs) << ','
        << format_double(r.slack) << ',' << (r.holds ? 1 : 0) << '\n';
  }
}

}  // namespace

int run(const ExperimentConfig& config, std::ostream& log) {
  try {
    config.validate();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitInvalidConfig;
  }

  std::vector<std::size_t> ns = config.n_range;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::vector<ResultRow> rows;
  int exit_code = kExitOk;
  try {
    for (const std::size_t n : ns) {
      const std::size_t m_rule = config.memory_qubits(n);
      const BobStrategy strategy =
          instantiate_strategy(config.strategy, n, m_rule);
      const std::size_t m = strategy.m();

      if ((std::size_t{1} << n) * strategy.memory_dim() > max_theta_dim() ||
          (std::size_t{1} << n) * strategy.channel().output_dim >
              max_theta_dim() * max_theta_dim())
        throw ConfigError("dimension guard: strategy too large at N = " +
                          std::to_string(n));

      const auto priors = protocol::outcome_prior_distribution(strategy);
      for (std::size_t xi = 0; xi < strategy.num_outcomes(); ++xi) {
        if (priors[xi] < kOutcomeThreshold) continue;
        const auto start = std::chrono::steady_clock::now();

        const auto theta = protocol::joint_conditional_state(strategy, xi);
        // Built-in strategies get their canonical decoders; anything custom
        // falls back to the always-valid singleton construction.
        codebook::DecoderFamily z_fam, x_fam;
        if (strategy.builtin()) {
          z_fam = codebook::natural_family(strategy, xi, Basis::Z);
          x_fam = codebook::natural_family(strategy, xi, Basis::X);
        } else {
          z_fam = codebook::singleton_family(strategy, xi, Basis::Z);
          x_fam = codebook::singleton_family(strategy, xi, Basis::X);
        }

        const auto z_report = codebook::validate(
            z_fam, states_for_validation(strategy, Basis::Z, z_fam, xi));
        if (!z_report.ok())
          throw ConfigError("Z decoder family invalid: " +
                            z_report.summary());
        const auto x_report = codebook::validate(
            x_fam, states_for_validation(strategy, Basis::X, x_fam, xi));
        if (!x_report.ok())
          throw ConfigError("X decoder family invalid: " +
                            x_report.summary());

        const bounds::TradeoffReport rep = bounds::tradeoff_check(
            theta.second, z_fam, x_fam, config.cutoff_x(n),
            config.cutoff_z(n), m, n, config.c_exponent);

        ResultRow row;
        row.n = n;
        row.m = m;
        row.strategy = strategy.label();
        row.xi = xi;
        row.lhs_z = rep.lhs_z;
        row.lhs_x = rep.lhs_x;
        row.lhs_total = rep.lhs_total();
        row.rhs = rep.rhs;
        row.slack = rep.slack;
        row.holds = rep.holds;
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (!row.holds) exit_code = kExitBoundViolation;
        rows.push_back(std::move(row));
      }
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::runtime_error& e) {
    log << "internal failure: " << e.what() << "\n";
    if (!rows.empty()) write_rows_csv(config.out_path, rows);
    return kExitInternalFailure;
  }

  write_rows_csv(config.out_path, rows);
  log << rows.size() << " row(s) written to " << config.out_path << "\n";
  if (exit_code == kExitBoundViolation) log << "bound violations present\n";
  return exit_code;
}

int sweep(const StrategySpec& spec, double q, double p_x, double p_z,
          std::size_t n_min, std::size_t n_max, double c_exponent,
          const std::string& out_path, std::ostream& log) {
  if (n_min < 1 || n_min > n_max) {
    log << "config error: need 1 <= n_min <= n_max\n";
    return kExitInvalidConfig;
  }
  if (q < 0 || p_x < 0 || p_z < 0 || q + p_x + p_z >= 1.0) {
    log << "config error: sweep requires 0 <= q, p_x, p_z and "
           "q + p_x + p_z < 1\n";
    return kExitInvalidConfig;
  }
  std::vector<std::size_t> ns;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    if ((std::size_t{1} << (2 * n)) > max_theta_dim()) {
      log << "config error: dimension guard at N = " << n << "\n";
      return kExitInvalidConfig;
    }
    ns.push_back(n);
  }

  std::vector<bounds::SweepPoint> points;
  std::vector<std::string> labels;
  try {
    const auto factory = [&](std::size_t n) {
      const std::size_t m = static_cast<std::size_t>(q * n + 1e-9);
      return instantiate_strategy(spec, n, m);
    };
    for (std::size_t n : ns) labels.push_back(factory(n).label());
    points = bounds::asymptotic_sweep(factory, q, p_x, p_z, ns, c_exponent);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::runtime_error& e) {
    log << "internal failure: " << e.what() << "\n";
    return kExitInternalFailure;
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    log << "config error: cannot open output file " << out_path << "\n";
    return kExitInvalidConfig;
  }
  out << "n,m,strategy,q,px,pz,lhs_total,rhs,epsilon,c0,slack,holds\n";
  int exit_code = kExitOk;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!p.holds) exit_code = kExitBoundViolation;
    out << p.n << ',' << p.m << ',' << labels[i] << ','
        << format_double(p.q) << ',' << format_double(p.p_x) << ','
        << format_double(p.p_z) << ',' << format_double(p.lhs_total) << ','
        << format_double(p.rhs) << ',' << format_double(p.epsilon) << ','
        << format_double(p.c0) << ',' << format_double(p.rhs - p.lhs_total)
        << ',' << (p.holds ? 1 : 0) << '\n';
  }
  log << points.size() << " sweep point(s) written to " << out_path << "\n";
  return exit_code;
}

}  // namespace qmem::harness
