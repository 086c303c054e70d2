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

#include "qmem/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qmem/json_io.hpp"
#include "qmem/kernels.hpp"
#include "qmem/linalg.hpp"

namespace qmem::protocol {

namespace {

constexpr double kOutcomeThreshold = 1e-12;

std::size_t pow2(std::size_t e) { return std::size_t{1} << e; }

}  // namespace

Message::Message(std::string bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("Message: empty bit string");
  for (char c : bits_)
    if (c != '0' && c != '1')
      throw std::invalid_argument("Message: bits must be 0 or 1");
}

Message Message::from_index(std::size_t length, std::size_t index) {
  if (index >= pow2(length))
    throw std::invalid_argument("Message: index out of range");
  std::string bits(length, '0');
  for (std::size_t i = 0; i < length; ++i)
    if (index & (std::size_t{1} << (length - 1 - i))) bits[i] = '1';
  return Message(std::move(bits));
}

std::size_t Message::to_index() const {
  std::size_t idx = 0;
  for (char c : bits_) idx = (idx << 1) | (c == '1' ? 1 : 0);
  return idx;
}

MeasurementBasis MeasurementBasis::x() {
  return {Kind::kX, std::numbers::pi / 4};
}

MeasurementBasis MeasurementBasis::angle(double theta) {
  if (!std::isfinite(theta))
    throw std::invalid_argument("MeasurementBasis: angle must be finite");
  return {Kind::kAngle, theta};
}

std::array<complex_t, 2> MeasurementBasis::vector(bool b) const {
  const double c = std::cos(theta), s = std::sin(theta);
  if (!b) return {complex_t{c}, complex_t{s}};
  return {complex_t{-s}, complex_t{c}};
}

std::string MeasurementBasis::label() const {
  switch (kind) {
    case Kind::kZ:
      return "Z";
    case Kind::kX:
      return "X";
    default: {
      std::ostringstream os;
      os << "a" << theta;
      return os.str();
    }
  }
}

StateVector encode(const Message& msg, Basis basis) {
  const std::size_t n = msg.length();
  std::vector<complex_t> amps(pow2(n));
  if (basis == Basis::Z) {
    amps[msg.to_index()] = 1.0;
  } else {
    // <b|x_bar> = 2^(-n/2) (-1)^(x.b)
    const double scale = std::pow(2.0, -0.5 * static_cast<double>(n));
    const std::size_t x = msg.to_index();
    for (std::size_t b = 0; b < amps.size(); ++b) {
      const int parity = std::popcount(b & x) & 1;
      amps[b] = parity ? -scale : scale;
    }
  }
  return StateVector(n, std::move(amps));
}

ComplexMatrix basis_projector(const Message& msg, Basis basis) {
  return encode(msg, basis).projector();
}

StateVector epr_state(std::size_t n) {
  if (n < 1) throw std::invalid_argument("epr_state: n must be >= 1");
  const std::size_t d = pow2(n);
  std::vector<complex_t> amps(d * d);
  const double scale = std::pow(2.0, -0.5 * static_cast<double>(n));
  for (std::size_t z = 0; z < d; ++z) amps[z * d + z] = scale;
  return StateVector(2 * n, std::move(amps));
}

double QuantumChannel::completeness_residual(
    std::span<const ComplexMatrix> kraus, std::size_t input_dim) {
  ComplexMatrix sum(input_dim, input_dim);
  for (const auto& k : kraus) sum += multiply(k.adjoint(), k);
  return frobenius_distance(sum, ComplexMatrix::identity(input_dim));
}

QuantumChannel::QuantumChannel(std::size_t input_dim, std::size_t output_dim,
                               std::vector<ComplexMatrix> kraus_ops)
    : input_dim(input_dim),
      output_dim(output_dim),
      kraus_ops(std::move(kraus_ops)) {
  if (this->kraus_ops.empty())
    throw std::invalid_argument("QuantumChannel: empty Kraus list");
  for (const auto& k : this->kraus_ops)
    if (k.rows() != output_dim || k.cols() != input_dim)
      throw std::invalid_argument("QuantumChannel: Kraus operator shape");
  if (completeness_residual(this->kraus_ops, input_dim) > kValidationTol)
    throw std::invalid_argument(
        "QuantumChannel: Kraus operators not trace preserving");
}

Povm::Povm(std::vector<ComplexMatrix> elems) : elements(std::move(elems)) {
  if (elements.empty()) throw std::invalid_argument("Povm: empty element list");
  const std::size_t d = elements.front().rows();
  ComplexMatrix sum(d, d);
  for (const auto& e : elements) {
    if (e.rows() != d || e.cols() != d)
      throw std::invalid_argument("Povm: inconsistent element dimensions");
    if (!e.is_positive_semidefinite(kValidationTol))
      throw std::invalid_argument("Povm: element not PSD");
    sum += e;
  }
  if (frobenius_distance(sum, ComplexMatrix::identity(d)) > kValidationTol)
    throw std::invalid_argument("Povm: elements do not sum to identity");
}

BobStrategy::BobStrategy(std::size_t n, std::size_t m, QuantumChannel channel,
                         Povm povm, std::string label,
                         std::vector<std::string> payloads,
                         std::optional<BuiltinInfo> builtin)
    : n_(n),
      m_(m),
      channel_(std::move(channel)),
      povm_(std::move(povm)),
      label_(std::move(label)),
      payloads_(std::move(payloads)),
      builtin_(std::move(builtin)) {
  if (channel_.input_dim != pow2(n_))
    throw std::invalid_argument("BobStrategy: channel input dim != 2^N");
  if (channel_.output_dim != memory_dim() * povm_.dim())
    throw std::invalid_argument(
        "BobStrategy: channel output dim != 2^M * dim(K)");
  if (payloads_.empty()) payloads_.resize(povm_.size());
  if (payloads_.size() != povm_.size())
    throw std::invalid_argument("BobStrategy: payload count != outcome count");
  sqrt_povm_.reserve(povm_.size());
  for (const auto& e : povm_.elements) sqrt_povm_.push_back(sqrt_psd(e));
}

namespace {

// Kraus images of the encoded state, each a vector on H_m (x) K.
std::vector<std::vector<complex_t>> channel_images(const BobStrategy& s,
                                                   Basis basis,
                                                   const Message& msg) {
  if (msg.length() != s.n())
    throw std::invalid_argument("message length != strategy N");
  const StateVector enc = encode(msg, basis);
  std::vector<std::vector<complex_t>> vs;
  vs.reserve(s.channel().kraus_ops.size());
  for (const auto& k : s.channel().kraus_ops)
    vs.push_back(apply(k, enc.amplitudes()));
  return vs;
}

// (1 (x) A) v for v indexed (head, aux) with aux fastest: rows of v times
// A^T, i.e. w[h,k] = sum_k' A[k,k'] v[h,k'].
std::vector<complex_t> apply_on_aux(const ComplexMatrix& a,
                                    std::span<const complex_t> v,
                                    std::size_t head_dim) {
  const std::size_t aux = a.rows();
  std::vector<complex_t> out(v.size());
  for (std::size_t h = 0; h < head_dim; ++h) {
    const complex_t* src = v.data() + h * aux;
    complex_t* dst = out.data() + h * aux;
    for (std::size_t k = 0; k < aux; ++k) {
      complex_t acc{};
      for (std::size_t k2 = 0; k2 < aux; ++k2) acc += a(k, k2) * src[k2];
      dst[k] = acc;
    }
  }
  return out;
}

double norm2(std::span<const complex_t> v) {
  double s = 0;
  for (const auto& c : v) s += std::norm(c);
  return s;
}

std::vector<std::size_t> memory_dims(std::size_t m) {
  if (m == 0) return {1};
  return std::vector<std::size_t>(m, 2);
}

}  // namespace

std::vector<double> outcome_distribution(const BobStrategy& strategy,
                                         Basis basis, const Message& msg) {
  const auto vs = channel_images(strategy, basis, msg);
  const std::size_t head = strategy.memory_dim();
  const std::size_t aux = strategy.aux_dim();
  std::vector<double> probs(strategy.num_outcomes(), 0.0);
  for (std::size_t xi = 0; xi < probs.size(); ++xi) {
    const ComplexMatrix& c = strategy.povm().elements[xi];
    double p = 0;
    for (const auto& v : vs) {
      // <v| (1 (x) C) |v> accumulated row by row.
      for (std::size_t h = 0; h < head; ++h) {
        const complex_t* row = v.data() + h * aux;
        for (std::size_t k = 0; k < aux; ++k) {
          complex_t acc{};
          for (std::size_t k2 = 0; k2 < aux; ++k2) acc += c(k, k2) * row[k2];
          p += (std::conj(row[k]) * acc).real();
        }
      }
    }
    probs[xi] = p;
  }
  return probs;
}

std::vector<ConditionalState> conditional_states(const BobStrategy& strategy,
                                                 Basis basis,
                                                 const Message& msg) {
  const auto vs = channel_images(strategy, basis, msg);
  const std::size_t head = strategy.memory_dim();
  const std::size_t aux = strategy.aux_dim();

  std::vector<ConditionalState> out;
  for (std::size_t xi = 0; xi < strategy.num_outcomes(); ++xi) {
    const ComplexMatrix& root = strategy.sqrt_povm(xi);
    std::vector<std::vector<complex_t>> ws;
    ws.reserve(vs.size());
    double p = 0;
    for (const auto& v : vs) {
      auto w = apply_on_aux(root, v, head);
      p += norm2(w);
      ws.push_back(std::move(w));
    }
    if (p < kOutcomeThreshold) continue;

    ComplexMatrix mem(head, head);
    kernels::gram_traced(ws, head, aux, mem.data());
    mem *= complex_t{1.0 / p};
    out.push_back(ConditionalState{
        xi, p, DensityOperator(memory_dims(strategy.m()), std::move(mem))});
  }
  return out;
}

std::map<Message, double> posterior_distribution(const BobStrategy& strategy,
                                                 std::size_t xi, Basis basis) {
  if (xi >= strategy.num_outcomes())
    throw std::invalid_argument("posterior_distribution: bad outcome index");
  const std::size_t n = strategy.n();
  const double prior = std::pow(2.0, -static_cast<double>(n));

  std::map<Message, double> joint;
  double total = 0;
  for (std::size_t idx = 0; idx < pow2(n); ++idx) {
    const Message msg = Message::from_index(n, idx);
    const double p = outcome_distribution(strategy, basis, msg)[xi] * prior;
    total += p;
    if (p > 0) joint.emplace(msg, p);
  }
  if (total < kOutcomeThreshold)
    throw std::invalid_argument(
        "posterior_distribution: outcome has zero probability");

  std::map<Message, double> posterior;
  for (const auto& [msg, p] : joint) {
    const double q = p / total;
    if (q > 1e-15) posterior.emplace(msg, q);
  }
  return posterior;
}

std::vector<double> outcome_prior_distribution(const BobStrategy& strategy) {
  const std::size_t head = strategy.memory_dim();
  const std::size_t aux = strategy.aux_dim();
  const double prior = std::pow(2.0, -static_cast<double>(strategy.n()));

  // Lambda applied to the maximally mixed input: sum_k K_k K_k^dag / 2^N.
  ComplexMatrix image(head * aux, head * aux);
  for (const auto& k : strategy.channel().kraus_ops)
    image += multiply(k, k.adjoint());

  std::vector<double> probs(strategy.num_outcomes(), 0.0);
  for (std::size_t xi = 0; xi < probs.size(); ++xi) {
    const ComplexMatrix& c = strategy.povm().elements[xi];
    double p = 0;
    for (std::size_t h = 0; h < head; ++h)
      for (std::size_t a = 0; a < aux; ++a)
        for (std::size_t b = 0; b < aux; ++b)
          p += (image(h * aux + a, h * aux + b) * c(b, a)).real();
    probs[xi] = p * prior;
  }
  return probs;
}

std::pair<double, DensityOperator> joint_conditional_state(
    const BobStrategy& strategy, std::size_t xi) {
  if (xi >= strategy.num_outcomes())
    throw std::invalid_argument("joint_conditional_state: bad outcome index");
  const std::size_t n = strategy.n();
  const std::size_t dim_a = pow2(n);
  const std::size_t head = dim_a * strategy.memory_dim();
  const std::size_t aux = strategy.aux_dim();
  const double scale = std::pow(2.0, -0.5 * static_cast<double>(n));

  // (1_A' (x) K) |phi^N> has components scale * K[j, a'] at (a', j); applying
  // sqrt(C_xi) on the aux factor conditions on the outcome.
  const ComplexMatrix& root = strategy.sqrt_povm(xi);
  std::vector<std::vector<complex_t>> ws;
  ws.reserve(strategy.channel().kraus_ops.size());
  double p = 0;
  for (const auto& k : strategy.channel().kraus_ops) {
    std::vector<complex_t> v(dim_a * k.rows());
    for (std::size_t a = 0; a < dim_a; ++a)
      for (std::size_t j = 0; j < k.rows(); ++j)
        v[a * k.rows() + j] = scale * k(j, a);
    auto w = apply_on_aux(root, v, head);
    p += norm2(w);
    ws.push_back(std::move(w));
  }
  if (p < kOutcomeThreshold)
    throw std::invalid_argument(
        "joint_conditional_state: outcome has zero probability");

  ComplexMatrix theta(head, head);
  kernels::gram_traced(ws, head, aux, theta.data());
  theta *= complex_t{1.0 / p};
  return {p, DensityOperator({dim_a, strategy.memory_dim()},
                             std::move(theta))};
}

namespace {

// Permutation unitary reordering qubits so `order` becomes the output order.
ComplexMatrix qubit_permutation(std::size_t n,
                                const std::vector<std::size_t>& order) {
  const std::size_t d = pow2(n);
  ComplexMatrix u(d, d);
  for (std::size_t in = 0; in < d; ++in) {
    std::size_t out = 0;
    for (std::size_t p = 0; p < n; ++p) {
      const bool bit = in & (std::size_t{1} << (n - 1 - order[p]));
      out = (out << 1) | (bit ? 1 : 0);
    }
    u(out, in) = 1.0;
  }
  return u;
}

}  // namespace

BobStrategy keep_subset_strategy(std::size_t n,
                                 const std::set<std::size_t>& kept,
                                 MeasurementBasis measure) {
  if (n < 1) throw std::invalid_argument("keep_subset: n must be >= 1");
  if (kept.size() > n)
    throw std::invalid_argument("keep_subset: |S| > n");
  for (std::size_t q : kept)
    if (q >= n) throw std::invalid_argument("keep_subset: qubit index >= n");

  std::vector<std::size_t> order(kept.begin(), kept.end());
  std::vector<std::size_t> rest;
  for (std::size_t q = 0; q < n; ++q)
    if (!kept.count(q)) rest.push_back(q);
  order.insert(order.end(), rest.begin(), rest.end());

  const std::size_t m = kept.size();
  const std::size_t aux = pow2(rest.size());
  std::vector<ComplexMatrix> kraus{qubit_permutation(n, order)};
  QuantumChannel channel(pow2(n), pow2(n), std::move(kraus));

  // POVM on K: product of single-qubit projectors in the measured basis,
  // one element per bit pattern over the measured qubits.
  std::vector<ComplexMatrix> elements;
  std::vector<std::string> payloads;
  elements.reserve(aux);
  for (std::size_t pattern = 0; pattern < aux; ++pattern) {
    ComplexMatrix el = ComplexMatrix::identity(1);
    std::string payload;
    for (std::size_t j = 0; j < rest.size(); ++j) {
      const bool bit = pattern & (std::size_t{1} << (rest.size() - 1 - j));
      const auto v = measure.vector(bit);
      el = tensor(el, outer(v, v));
      payload.push_back(bit ? '1' : '0');
    }
    elements.push_back(std::move(el));
    payloads.push_back(std::move(payload));
  }

  std::string label;
  if (kept.empty()) {
    label = "measure_all_" + measure.label();
  } else if (kept.size() == n) {
    label = "keep_all";
  } else {
    label = "keep";
    for (std::size_t q : kept) label += "." + std::to_string(q);
    label += "_" + measure.label();
  }

  return BobStrategy(n, m, std::move(channel), Povm(std::move(elements)),
                     std::move(label), std::move(payloads),
                     BuiltinInfo{std::vector<std::size_t>(kept.begin(),
                                                          kept.end()),
                                 measure});
}

BobStrategy measure_all_strategy(std::size_t n, MeasurementBasis measure) {
  return keep_subset_strategy(n, {}, measure);
}

BobStrategy keep_all_strategy(std::size_t n) {
  std::set<std::size_t> all;
  for (std::size_t q = 0; q < n; ++q) all.insert(q);
  return keep_subset_strategy(n, all, MeasurementBasis::z());
}

BobStrategy strategy_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("strategy JSON: ") + e.what());
  }
  if (!doc.contains("n") || !doc.contains("m") || !doc.contains("kraus") ||
      !doc.contains("povm"))
    throw std::invalid_argument("strategy JSON: need n, m, kraus, povm");
  const std::size_t n = doc.at("n").get<std::size_t>();
  const std::size_t m = doc.at("m").get<std::size_t>();
  if (n < 1) throw std::invalid_argument("strategy JSON: n must be >= 1");

  std::vector<ComplexMatrix> kraus;
  for (const auto& j : doc.at("kraus"))
    kraus.push_back(json_io::matrix_from_json(j));
  std::vector<ComplexMatrix> povm;
  for (const auto& j : doc.at("povm"))
    povm.push_back(json_io::matrix_from_json(j));
  if (kraus.empty() || povm.empty())
    throw std::invalid_argument("strategy JSON: empty kraus or povm list");

  const std::size_t aux = povm.front().rows();
  const std::size_t out_dim = pow2(m) * aux;
  for (const auto& k : kraus)
    if (k.rows() != out_dim || k.cols() != pow2(n))
      throw std::invalid_argument(
          "strategy JSON: Kraus shape != (2^m * dim_k) x 2^n");

  const std::string label =
      doc.contains("label") ? doc.at("label").get<std::string>() : "custom";
  return BobStrategy(n, m, QuantumChannel(pow2(n), out_dim, std::move(kraus)),
                     Povm(std::move(povm)), label);
}

BobStrategy strategy_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open strategy file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return strategy_from_json_text(ss.str());
}

}  // namespace qmem::protocol
