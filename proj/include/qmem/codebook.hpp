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

#ifndef QMEM_CODEBOOK_HPP
#define QMEM_CODEBOOK_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qmem/matrix.hpp"
#include "qmem/protocol.hpp"
#include "qmem/state.hpp"

// Decoder codebooks: program-indexed message sets together with mutually
// orthogonal memory projectors that recover each member perfectly. A decoder
// stands for "run program t on the memory state"; we keep the measurement it
// induces and drop the machine.

namespace qmem::codebook {

using protocol::Basis;
using protocol::BobStrategy;
using protocol::Message;

/// One program together with the messages it reconstructs and their
/// distinguishing projectors on H_m.
struct Decoder {
  std::string program;  // binary string, "" allowed
  std::map<Message, ComplexMatrix> entries;

  bool covers(const Message& msg) const { return entries.count(msg) > 0; }
};

/// All decoders available for one (basis, outcome) pair.
struct DecoderFamily {
  Basis basis = Basis::Z;
  std::size_t outcome = 0;
  std::vector<Decoder> decoders;

  bool covers(const Message& msg) const;
};

struct Violation {
  std::string description;
  double residual;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Checks every decoder invariant (projector validity, mutual orthogonality,
/// sub-resolution, cardinality vs dim H_m, program well-formedness and
/// uniqueness, cross-decoder disjointness) plus perfect recovery
/// tr(rho_z E_z') = delta_zz' within 1e-8 against the supplied memory
/// states. Violations are report entries, never exceptions.
ValidationReport validate(const DecoderFamily& family,
                          const std::map<Message, DensityOperator>& states);

/// k-th binary string in length-then-lexicographic order:
/// "", "0", "1", "00", "01", ...
std::string canonical_program(std::size_t k);

/// Canonical decoder family for a built-in strategy and announced basis.
///
/// Messages group by their bits on the measured qubits; each group that has
/// nonzero posterior becomes one decoder whose projectors are the kept-qubit
/// basis states. When only one group survives (measurement basis equals the
/// announced one) the single decoder gets the empty program; otherwise
/// programs are assigned in canonical order over the groups.
DecoderFamily natural_family(const BobStrategy& strategy, std::size_t xi,
                             Basis basis);

/// natural_family restricted to Z-measuring strategies (single decoder with
/// the empty program). Throws for anything else.
DecoderFamily natural_z_family(const BobStrategy& strategy, std::size_t xi);

/// Universal fallback for strategies without built-in structure: one
/// singleton decoder per posterior-supported message, each with the identity
/// projector on H_m (recovery is trivially perfect). Shortest programs go to
/// the most probable messages.
DecoderFamily singleton_family(const BobStrategy& strategy, std::size_t xi,
                               Basis basis);

/// P_t = sum_z Z_z (x) E_z for a single decoder (or the X analog), on
/// H_A' (x) H_m.
ComplexMatrix decoder_projector(const Decoder& decoder, Basis basis,
                                std::size_t n, std::size_t m);

/// P_hat = sum over decoders with l(t) <= l of P_t, across all listed
/// families (which must share the given basis, have distinct programs and
/// pairwise disjoint message sets). The result is a projector.
ComplexMatrix build_projector_sum(std::span<const DecoderFamily> families,
                                  std::size_t max_program_length,
                                  std::size_t n, std::size_t m, Basis basis);

/// build_projector_sum pinned to basis Z (paper's P) and X (paper's Q).
ComplexMatrix build_P_hat(std::span<const DecoderFamily> families,
                          std::size_t max_program_length, std::size_t n,
                          std::size_t m);
ComplexMatrix build_Q_hat(std::span<const DecoderFamily> families,
                          std::size_t max_program_length, std::size_t n,
                          std::size_t m);

/// Shortest program length whose decoder covers msg; nullopt when uncovered
/// (read as infinity).
std::optional<std::size_t> operational_complexity(const Message& msg,
                                                  const DecoderFamily& family);

/// Resolve multiple coverage by keeping each message only in the decoder
/// with the shortest program, ties broken toward the lexicographically
/// smaller program. Identity on already-disjoint families.
DecoderFamily disjointify(const DecoderFamily& family);

nlohmann::json family_to_json(const DecoderFamily& family);
DecoderFamily family_from_json(const nlohmann::json& j);

}  // namespace qmem::codebook

#endif  // QMEM_CODEBOOK_HPP
