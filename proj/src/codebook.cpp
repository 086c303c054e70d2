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

#include "qmem/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qmem/json_io.hpp"
#include "qmem/linalg.hpp"

namespace qmem::codebook {

namespace {

constexpr double kRecoveryTol = 1e-8;
constexpr double kSupportThreshold = 1e-12;

bool is_binary(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return c == '0' || c == '1'; });
}

double hermiticity_residual(const ComplexMatrix& e) {
  double r = 0;
  for (std::size_t i = 0; i < e.rows(); ++i)
    for (std::size_t j = i; j < e.cols(); ++j)
      r = std::max(r, std::abs(e(i, j) - std::conj(e(j, i))));
  return r;
}

void add_violation(ValidationReport& report, double residual,
                   const std::string& text) {
  report.violations.push_back(Violation{text, residual});
}

}  // namespace

bool DecoderFamily::covers(const Message& msg) const {
  return std::any_of(decoders.begin(), decoders.end(),
                     [&](const Decoder& d) { return d.covers(msg); });
}

std::string ValidationReport::summary() const {
  if (ok()) return "valid";
  std::ostringstream os;
  os << violations.size() << " violation(s):";
  for (const auto& v : violations)
    os << "\n  " << v.description << " (residual " << v.residual << ")";
  return os.str();
}

ValidationReport validate(const DecoderFamily& family,
                          const std::map<Message, DensityOperator>& states) {
  ValidationReport report;

  std::set<std::string> programs;
  std::map<Message, std::string> owners;
  std::size_t memory_dim = 0;

  for (const auto& decoder : family.decoders) {
    const std::string tag = "decoder t=\"" + decoder.program + "\"";
    if (!is_binary(decoder.program))
      add_violation(report, 0.0, tag + ": program is not a binary string");
    if (!programs.insert(decoder.program).second)
      add_violation(report, 0.0, tag + ": duplicate program");

    // Projector validity and dimension consistency.
    for (const auto& [msg, e] : decoder.entries) {
      const std::string etag = tag + " entry " + msg.bits();
      if (e.rows() != e.cols()) {
        add_violation(report, 0.0, etag + ": projector not square");
        continue;
      }
      if (memory_dim == 0) memory_dim = e.rows();
      if (e.rows() != memory_dim) {
        add_violation(report, 0.0, etag + ": inconsistent memory dimension");
        continue;
      }
      const double herm = hermiticity_residual(e);
      if (herm > kValidationTol)
        add_violation(report, herm, etag + ": not Hermitian");
      const double idem = frobenius_distance(multiply(e, e), e);
      if (idem > kValidationTol)
        add_violation(report, idem, etag + ": not idempotent");
    }

    // Mutual orthogonality within the decoder.
    for (auto it = decoder.entries.begin(); it != decoder.entries.end();
         ++it) {
      for (auto jt = std::next(it); jt != decoder.entries.end(); ++jt) {
        if (!it->second.is_square() || !jt->second.is_square() ||
            it->second.rows() != jt->second.rows())
          continue;
        const double res =
            multiply(it->second, jt->second).frobenius_norm();
        if (res > kValidationTol)
          add_violation(report, res,
                        tag + ": projectors for " + it->first.bits() +
                            " and " + jt->first.bits() + " not orthogonal");
      }
    }

    // Sub-resolution: sum of projectors bounded by the identity.
    if (!decoder.entries.empty() && memory_dim > 0) {
      ComplexMatrix sum(memory_dim, memory_dim);
      bool shapes_ok = true;
      for (const auto& [msg, e] : decoder.entries) {
        if (e.rows() != memory_dim || e.cols() != memory_dim) {
          shapes_ok = false;
          break;
        }
        sum += e;
      }
      if (shapes_ok && sum.is_hermitian(1e-6)) {
        const double top = herm_eigvals(sum, 1e-6).back();
        if (top > 1.0 + kValidationTol)
          add_violation(report, top - 1.0,
                        tag + ": projector sum exceeds identity");
      }
    }

    // Cardinality against dim H_m.
    if (memory_dim > 0 && decoder.entries.size() > memory_dim)
      add_violation(
          report,
          static_cast<double>(decoder.entries.size() - memory_dim),
          tag + ": more messages than dim(H_m) = " +
              std::to_string(memory_dim));

    // Perfect recovery against the supplied states.
    for (const auto& [msg, e] : decoder.entries) {
      for (const auto& [msg2, e2] : decoder.entries) {
        const auto it = states.find(msg2);
        if (it == states.end()) {
          if (msg == msg2)
            add_violation(report, 1.0,
                          tag + ": no memory state supplied for " +
                              msg2.bits());
          continue;
        }
        const auto& rho = it->second.matrix();
        if (rho.rows() != e.rows()) {
          if (msg == msg2)
            add_violation(report, 0.0,
                          tag + ": state/projector dimension mismatch for " +
                              msg2.bits());
          continue;
        }
        const double want = (msg == msg2) ? 1.0 : 0.0;
        const double got = real_trace_product(rho, e);
        if (std::abs(got - want) > kRecoveryTol)
          add_violation(report, std::abs(got - want),
                        tag + ": recovery tr(rho_" + msg2.bits() + " E_" +
                            msg.bits() + ") = " + std::to_string(got) +
                            ", expected " + std::to_string(want));
      }
    }

    // Cross-decoder disjointness.
    for (const auto& [msg, e] : decoder.entries) {
      auto [it, inserted] = owners.emplace(msg, decoder.program);
      if (!inserted)
        add_violation(report, 0.0,
                      "message " + msg.bits() + " covered by programs \"" +
                          it->second + "\" and \"" + decoder.program + "\"");
    }
  }

  return report;
}

std::string canonical_program(std::size_t k) {
  // Strings of length < L number 2^L - 1; find the block containing k.
  std::size_t len = 0;
  while ((std::size_t{1} << (len + 1)) - 1 <= k) ++len;
  const std::size_t offset = k - ((std::size_t{1} << len) - 1);
  std::string s(len, '0');
  for (std::size_t i = 0; i < len; ++i)
    if (offset & (std::size_t{1} << (len - 1 - i))) s[i] = '1';
  return s;
}

namespace {

using protocol::MeasurementBasis;

std::array<complex_t, 2> encode_qubit(Basis basis, bool bit) {
  constexpr double r = 0.70710678118654752440;
  if (basis == Basis::Z)
    return bit ? std::array<complex_t, 2>{0.0, 1.0}
               : std::array<complex_t, 2>{1.0, 0.0};
  return bit ? std::array<complex_t, 2>{r, -r} : std::array<complex_t, 2>{r, r};
}

double overlap2(const std::array<complex_t, 2>& a,
                const std::array<complex_t, 2>& b) {
  return std::norm(std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]);
}

// Rank-one projector onto the product of per-qubit encode vectors.
ComplexMatrix kept_projector(Basis basis, const std::string& bits) {
  std::vector<complex_t> v{1.0};
  for (char c : bits) {
    const auto q = encode_qubit(basis, c == '1');
    std::vector<complex_t> next(v.size() * 2);
    for (std::size_t i = 0; i < v.size(); ++i) {
      next[2 * i] = v[i] * q[0];
      next[2 * i + 1] = v[i] * q[1];
    }
    v = std::move(next);
  }
  return outer(v, v);
}

}  // namespace

DecoderFamily natural_family(const BobStrategy& strategy, std::size_t xi,
                             Basis basis) {
  if (!strategy.builtin())
    throw std::invalid_argument(
        "natural_family: strategy is not a built-in construction");
  if (xi >= strategy.num_outcomes())
    throw std::invalid_argument("natural_family: bad outcome index");

  const auto& info = *strategy.builtin();
  const std::size_t n = strategy.n();
  std::vector<std::size_t> rest;
  {
    std::set<std::size_t> kept(info.kept.begin(), info.kept.end());
    for (std::size_t q = 0; q < n; ++q)
      if (!kept.count(q)) rest.push_back(q);
  }
  const std::string& payload = strategy.payload(xi);
  const std::size_t num_rest = rest.size();
  const std::size_t m = info.kept.size();

  // Posterior support per measured-bit pattern: the kept qubits never affect
  // the outcome probability, so support factorizes over the measured ones.
  std::vector<std::size_t> supported;
  for (std::size_t r = 0; r < (std::size_t{1} << num_rest); ++r) {
    double w = 1.0;
    for (std::size_t j = 0; j < num_rest; ++j) {
      const bool outcome_bit = payload[j] == '1';
      const bool msg_bit = r & (std::size_t{1} << (num_rest - 1 - j));
      w *= overlap2(info.measure.vector(outcome_bit),
                    encode_qubit(basis, msg_bit));
    }
    if (w > kSupportThreshold) supported.push_back(r);
  }

  DecoderFamily family;
  family.basis = basis;
  family.outcome = xi;

  for (std::size_t k = 0; k < supported.size(); ++k) {
    Decoder decoder;
    decoder.program = canonical_program(k);
    const std::size_t r = supported[k];
    for (std::size_t s = 0; s < (std::size_t{1} << m); ++s) {
      std::string bits(n, '0');
      std::string kept_bits(m, '0');
      for (std::size_t i = 0; i < m; ++i) {
        const bool bit = s & (std::size_t{1} << (m - 1 - i));
        bits[info.kept[i]] = bit ? '1' : '0';
        kept_bits[i] = bit ? '1' : '0';
      }
      for (std::size_t j = 0; j < num_rest; ++j) {
        const bool bit = r & (std::size_t{1} << (num_rest - 1 - j));
        bits[rest[j]] = bit ? '1' : '0';
      }
      decoder.entries.emplace(Message(std::move(bits)),
                              kept_projector(basis, kept_bits));
    }
    family.decoders.push_back(std::move(decoder));
  }
  return family;
}

DecoderFamily natural_z_family(const BobStrategy& strategy, std::size_t xi) {
  if (!strategy.builtin())
    throw std::invalid_argument(
        "natural_z_family: strategy is not a built-in construction");
  const auto& info = *strategy.builtin();
  const bool trivial_measurement = info.kept.size() == strategy.n();
  if (!trivial_measurement &&
      info.measure.kind != MeasurementBasis::Kind::kZ)
    throw std::invalid_argument(
        "natural_z_family: strategy does not measure in Z");
  return natural_family(strategy, xi, Basis::Z);
}

DecoderFamily singleton_family(const BobStrategy& strategy, std::size_t xi,
                               Basis basis) {
  const auto posterior = protocol::posterior_distribution(strategy, xi, basis);
  std::vector<std::pair<double, Message>> ordered;
  for (const auto& [msg, p] : posterior)
    if (p > kSupportThreshold) ordered.emplace_back(p, msg);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });

  DecoderFamily family;
  family.basis = basis;
  family.outcome = xi;
  const ComplexMatrix id = ComplexMatrix::identity(strategy.memory_dim());
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    Decoder decoder;
    decoder.program = canonical_program(k);
    decoder.entries.emplace(ordered[k].second, id);
    family.decoders.push_back(std::move(decoder));
  }
  return family;
}

ComplexMatrix decoder_projector(const Decoder& decoder, Basis basis,
                                std::size_t n, std::size_t m) {
  const std::size_t dim_a = std::size_t{1} << n;
  const std::size_t dim_m = std::size_t{1} << m;
  ComplexMatrix sum(dim_a * dim_m, dim_a * dim_m);
  for (const auto& [msg, e] : decoder.entries) {
    if (msg.length() != n)
      throw std::invalid_argument("decoder_projector: message length != n");
    if (e.rows() != dim_m || e.cols() != dim_m)
      throw std::invalid_argument("decoder_projector: projector dim != 2^m");
    sum += tensor(protocol::basis_projector(msg, basis), e);
  }
  return sum;
}

ComplexMatrix build_projector_sum(std::span<const DecoderFamily> families,
                                  std::size_t max_program_length,
                                  std::size_t n, std::size_t m, Basis basis) {
  std::set<std::string> programs;
  std::set<Message> seen;
  const std::size_t dim = (std::size_t{1} << n) * (std::size_t{1} << m);
  ComplexMatrix sum(dim, dim);

  for (const auto& family : families) {
    if (family.basis != basis)
      throw std::invalid_argument("build_projector_sum: basis mismatch");
    for (const auto& decoder : family.decoders) {
      if (!programs.insert(decoder.program).second)
        throw std::invalid_argument(
            "build_projector_sum: duplicate program \"" + decoder.program +
            "\"");
      for (const auto& [msg, e] : decoder.entries)
        if (!seen.insert(msg).second)
          throw std::invalid_argument(
              "build_projector_sum: message " + msg.bits() +
              " appears in multiple decoders");
      if (decoder.program.size() <= max_program_length)
        sum += decoder_projector(decoder, basis, n, m);
    }
  }
  return sum;
}

ComplexMatrix build_P_hat(std::span<const DecoderFamily> families,
                          std::size_t max_program_length, std::size_t n,
                          std::size_t m) {
  return build_projector_sum(families, max_program_length, n, m, Basis::Z);
}

ComplexMatrix build_Q_hat(std::span<const DecoderFamily> families,
                          std::size_t max_program_length, std::size_t n,
                          std::size_t m) {
  return build_projector_sum(families, max_program_length, n, m, Basis::X);
}

std::optional<std::size_t> operational_complexity(const Message& msg,
                                                  const DecoderFamily& family) {
  std::optional<std::size_t> best;
  for (const auto& decoder : family.decoders)
    if (decoder.covers(msg))
      if (!best || decoder.program.size() < *best)
        best = decoder.program.size();
  return best;
}

DecoderFamily disjointify(const DecoderFamily& family) {
  // Owner of each message: shortest program, ties to the lexicographically
  // smaller one.
  std::map<Message, std::string> owner;
  for (const auto& decoder : family.decoders) {
    for (const auto& [msg, e] : decoder.entries) {
      auto it = owner.find(msg);
      if (it == owner.end()) {
        owner.emplace(msg, decoder.program);
        continue;
      }
      const auto& cur = it->second;
      if (decoder.program.size() < cur.size() ||
          (decoder.program.size() == cur.size() && decoder.program < cur))
        it->second = decoder.program;
    }
  }

  DecoderFamily out;
  out.basis = family.basis;
  out.outcome = family.outcome;
  for (const auto& decoder : family.decoders) {
    Decoder d;
    d.program = decoder.program;
    for (const auto& [msg, e] : decoder.entries)
      if (owner.at(msg) == decoder.program) d.entries.emplace(msg, e);
    out.decoders.push_back(std::move(d));
  }
  return out;
}

nlohmann::json family_to_json(const DecoderFamily& family) {
  nlohmann::json j;
  j["basis"] = basis_name(family.basis);
  j["outcome"] = family.outcome;
  nlohmann::json decoders = nlohmann::json::array();
  for (const auto& decoder : family.decoders) {
    nlohmann::json d;
    d["program"] = decoder.program;
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [msg, e] : decoder.entries)
      entries[msg.bits()] = json_io::matrix_to_json(e);
    d["entries"] = std::move(entries);
    decoders.push_back(std::move(d));
  }
  j["decoders"] = std::move(decoders);
  return j;
}

DecoderFamily family_from_json(const nlohmann::json& j) {
  DecoderFamily family;
  const std::string basis = j.at("basis").get<std::string>();
  if (basis == "Z")
    family.basis = Basis::Z;
  else if (basis == "X")
    family.basis = Basis::X;
  else
    throw std::invalid_argument("family JSON: basis must be \"Z\" or \"X\"");
  family.outcome = j.at("outcome").get<std::size_t>();
  for (const auto& d : j.at("decoders")) {
    Decoder decoder;
    decoder.program = d.at("program").get<std::string>();
    if (!is_binary(decoder.program))
      throw std::invalid_argument("family JSON: non-binary program");
    for (const auto& [bits, mat] : d.at("entries").items())
      decoder.entries.emplace(Message(bits), json_io::matrix_from_json(mat));
    family.decoders.push_back(std::move(decoder));
  }
  return family;
}

}  // namespace qmem::codebook
