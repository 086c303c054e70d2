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

#ifndef QMEM_PROTOCOL_HPP
#define QMEM_PROTOCOL_HPP

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qmem/matrix.hpp"
#include "qmem/state.hpp"

// The two-party game this library simulates: Alice encodes an N-bit message
// into N qubits in the Z basis (computational) or the X basis (Hadamard
// conjugate) and sends them to Bob, who may keep at most M qubits of quantum
// memory. Bob routes the qubits through a channel into memory x auxiliary,
// measures the auxiliary part with a POVM before the basis announcement, and
// later uses the memory, the outcome and the announced basis to estimate the
// message.

namespace qmem::protocol {

/// Alice's announced encoding basis.
enum class Basis { Z, X };

inline const char* basis_name(Basis b) { return b == Basis::Z ? "Z" : "X"; }

/// N-bit message over {0,1}, N >= 1.
class Message {
 public:
  explicit Message(std::string bits);
  static Message from_index(std::size_t length, std::size_t index);

  const std::string& bits() const { return bits_; }
  std::size_t length() const { return bits_.size(); }
  bool bit(std::size_t i) const { return bits_[i] == '1'; }
  /// Bits read as a binary number, leftmost bit most significant.
  std::size_t to_index() const;

  auto operator<=>(const Message&) const = default;

 private:
  std::string bits_;
};

/// Single-qubit measurement basis at angle theta from the Z eigenbasis:
/// vectors (cos t, sin t) and (-sin t, cos t). Z is t = 0, X is t = pi/4,
/// and pi/8 is the intermediate (Breidbart) basis.
struct MeasurementBasis {
  enum class Kind { kZ, kX, kAngle };
  Kind kind;
  double theta;

  static MeasurementBasis z() { return {Kind::kZ, 0.0}; }
  static MeasurementBasis x();
  static MeasurementBasis angle(double theta);  // throws on non-finite input

  /// Basis vector for outcome bit b.
  std::array<complex_t, 2> vector(bool b) const;
  std::string label() const;
};

/// Alice's encoding: Z maps bits to |z1>...|zN>, X to the conjugate basis
/// |x1bar>...|xNbar| with |0bar> = (|0>+|1>)/sqrt2, |1bar> = (|0>-|1>)/sqrt2.
StateVector encode(const Message& msg, Basis basis);

/// Rank-one projector X_x or Z_z on 2^N dimensions.
ComplexMatrix basis_projector(const Message& msg, Basis basis);

/// N EPR pairs as a state on H_A' (x) H_A, both blocks in message order:
/// 2^(-N/2) sum_z |z>|z>.
StateVector epr_state(std::size_t n);

/// CPTP map in Kraus form; construction checks sum K^dag K = 1 within 1e-9
/// (Frobenius).
struct QuantumChannel {
  std::size_t input_dim;
  std::size_t output_dim;
  std::vector<ComplexMatrix> kraus_ops;

  QuantumChannel(std::size_t input_dim, std::size_t output_dim,
                 std::vector<ComplexMatrix> kraus_ops);

  /// Frobenius norm of sum K^dag K - 1 for an arbitrary Kraus list; the
  /// constructor rejects anything above 1e-9.
  static double completeness_residual(std::span<const ComplexMatrix> kraus,
                                      std::size_t input_dim);
};

/// Positive-operator-valued measure; elements PSD and summing to identity
/// within 1e-9.
struct Povm {
  std::vector<ComplexMatrix> elements;

  explicit Povm(std::vector<ComplexMatrix> elements);
  std::size_t size() const { return elements.size(); }
  std::size_t dim() const { return elements.front().rows(); }
};

/// Structure of a built-in strategy: which qubits stay in memory and the
/// measurement basis applied to the rest.
struct BuiltinInfo {
  std::vector<std::size_t> kept;  // ascending, 0-based
  MeasurementBasis measure;
};

/// Bob's full strategy: channel into H_m (x) K followed by a POVM on K.
/// Outcome labels are indices into the POVM element list. Immutable after
/// construction; square roots of POVM elements are precomputed.
class BobStrategy {
 public:
  BobStrategy(std::size_t n, std::size_t m, QuantumChannel channel, Povm povm,
              std::string label = "custom",
              std::vector<std::string> payloads = {},
              std::optional<BuiltinInfo> builtin = std::nullopt);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t memory_dim() const { return std::size_t{1} << m_; }
  std::size_t aux_dim() const { return povm_.dim(); }
  std::size_t num_outcomes() const { return povm_.size(); }

  const QuantumChannel& channel() const { return channel_; }
  const Povm& povm() const { return povm_; }
  const ComplexMatrix& sqrt_povm(std::size_t xi) const {
    return sqrt_povm_.at(xi);
  }
  const std::string& label() const { return label_; }
  /// Classical payload attached to outcome xi ("" when none).
  const std::string& payload(std::size_t xi) const { return payloads_.at(xi); }
  const std::optional<BuiltinInfo>& builtin() const { return builtin_; }

 private:
  std::size_t n_, m_;
  QuantumChannel channel_;
  Povm povm_;
  std::vector<ComplexMatrix> sqrt_povm_;
  std::string label_;
  std::vector<std::string> payloads_;
  std::optional<BuiltinInfo> builtin_;
};

/// A-posteriori memory state for one outcome.
struct ConditionalState {
  std::size_t outcome;
  double probability;
  DensityOperator memory_state;
};

/// p(xi | msg, basis) for every outcome, by the Born rule through the
/// channel. Sums to one.
std::vector<double> outcome_distribution(const BobStrategy& strategy,
                                         Basis basis, const Message& msg);

/// Outcome probabilities and square-root-conditioned memory states
/// tr_K[(1 (x) sqrt(C)) Lambda(rho) (1 (x) sqrt(C))] / p. Outcomes with
/// p < 1e-12 are omitted.
std::vector<ConditionalState> conditional_states(const BobStrategy& strategy,
                                                 Basis basis,
                                                 const Message& msg);

/// Bayes posterior over messages given outcome xi under the uniform prior.
/// Throws if the outcome has zero total probability.
std::map<Message, double> posterior_distribution(const BobStrategy& strategy,
                                                 std::size_t xi, Basis basis);

/// p(xi) under the uniform message prior (basis independent):
/// tr[(1_m (x) C_xi) Lambda(1 / 2^N)].
std::vector<double> outcome_prior_distribution(const BobStrategy& strategy);

/// Entanglement-picture conditional state: apply id (x) Lambda to the EPR
/// state, condition on xi, trace out K. Returns (p(xi), Theta_xi) with
/// Theta_xi on H_A' (x) H_m (dims {2^N, 2^M}).
std::pair<double, DensityOperator> joint_conditional_state(
    const BobStrategy& strategy, std::size_t xi);

/// Keep the qubits in `kept`, measure the rest in `measure`. Outcome xi
/// enumerates the measured bit patterns; payloads carry the bits.
BobStrategy keep_subset_strategy(std::size_t n,
                                 const std::set<std::size_t>& kept,
                                 MeasurementBasis measure);

/// keep_subset with an empty kept set (M = 0).
BobStrategy measure_all_strategy(std::size_t n, MeasurementBasis measure);

/// Keep everything (M = N), trivial POVM.
BobStrategy keep_all_strategy(std::size_t n);

/// Load a custom strategy from a JSON document
/// {"n":..,"m":..,"kraus":[matrix..],"povm":[matrix..]} where a matrix is an
/// array of rows of [re, im] pairs. Dimension and completeness checks apply.
BobStrategy strategy_from_json_text(const std::string& text);
BobStrategy strategy_from_json_file(const std::string& path);

}  // namespace qmem::protocol

#endif  // QMEM_PROTOCOL_HPP
