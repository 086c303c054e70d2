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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qmem/codebook.hpp"
#include "qmem/linalg.hpp"
#include "qmem/protocol.hpp"
#include "qmem/testing.hpp"

using namespace qmem;
using namespace qmem::protocol;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double prob_sum(const std::vector<double>& ps) {
  double s = 0;
  for (double p : ps) s += p;
  return s;
}

}  // namespace

TEST_CASE("encode in the computational basis") {
  const auto psi = encode(Message("01"), Basis::Z);
  CHECK(std::abs(psi[1] - complex_t{1.0}) < 1e-15);
  CHECK(std::abs(psi[0]) + std::abs(psi[2]) + std::abs(psi[3]) < 1e-15);
}

TEST_CASE("encode in the conjugate basis") {
  const auto plus = encode(Message("0"), Basis::X);
  CHECK(std::abs(plus[0] - complex_t{kInvSqrt2}) < 1e-12);
  CHECK(std::abs(plus[1] - complex_t{kInvSqrt2}) < 1e-12);

  const auto minus = encode(Message("1"), Basis::X);
  CHECK(std::abs(minus[0] - complex_t{kInvSqrt2}) < 1e-12);
  CHECK(std::abs(minus[1] + complex_t{kInvSqrt2}) < 1e-12);
}

TEST_CASE("conjugate-basis overlaps are uniform at N = 3") {
  const std::size_t n = 3;
  for (std::size_t x = 0; x < 8; ++x) {
    const auto xv = encode(Message::from_index(n, x), Basis::X);
    for (std::size_t z = 0; z < 8; ++z) {
      const auto zv = encode(Message::from_index(n, z), Basis::Z);
      CHECK(std::norm(xv.inner(zv)) == doctest::Approx(0.125).epsilon(1e-12));
    }
  }
}

TEST_CASE("basis projectors") {
  const auto z0 = basis_projector(Message("0"), Basis::Z);
  CHECK(std::abs(z0(0, 0) - complex_t{1.0}) < 1e-15);
  CHECK(std::abs(z0(1, 1)) < 1e-15);

  const auto x0 = basis_projector(Message("0"), Basis::X);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(std::abs(x0(i, j) - complex_t{0.5}) < 1e-12);

  ComplexMatrix sum(4, 4);
  for (std::size_t z = 0; z < 4; ++z)
    sum += basis_projector(Message::from_index(2, z), Basis::Z);
  CHECK(frobenius_distance(sum, ComplexMatrix::identity(4)) < 1e-12);
}

TEST_CASE("EPR state amplitudes and marginals") {
  const auto phi = epr_state(1);
  CHECK(std::abs(phi[0] - complex_t{kInvSqrt2}) < 1e-12);
  CHECK(std::abs(phi[1]) < 1e-15);
  CHECK(std::abs(phi[2]) < 1e-15);
  CHECK(std::abs(phi[3] - complex_t{kInvSqrt2}) < 1e-12);

  const auto phi2 = epr_state(2);
  const DensityOperator joint =
      DensityOperator::from_pure({4, 4}, phi2.amplitudes());
  const auto marginal = partial_trace(joint, {1});  // trace out A'
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(std::abs(marginal.matrix()(i, j) -
                     complex_t{i == j ? 0.25 : 0.0}) < 1e-12);
}

TEST_CASE("projecting one EPR half steers the other") {
  const auto phi = epr_state(1);
  const auto proj = tensor(basis_projector(Message("0"), Basis::X),
                           ComplexMatrix::identity(2));
  auto collapsed = apply(proj, phi.amplitudes());
  double norm2 = 0;
  for (const auto& a : collapsed) norm2 += std::norm(a);
  CHECK(norm2 == doctest::Approx(0.5).epsilon(1e-12));
  for (auto& a : collapsed) a /= std::sqrt(norm2);
  // The A side must now be |0bar> up to the A' factor: amplitudes
  // (1/2, 1/2, 1/2, 1/2).
  for (const auto& a : collapsed)
    CHECK(std::abs(a - complex_t{0.5}) < 1e-12);
}

TEST_CASE("channel and POVM constructors validate their inputs") {
  // Kraus list missing weight: not trace preserving.
  auto half = ComplexMatrix::identity(2);
  half *= complex_t{0.5};
  CHECK_THROWS_AS(QuantumChannel(2, 2, {half}), std::invalid_argument);

  // POVM elements that do not sum to identity.
  CHECK_THROWS_AS(
      Povm({ComplexMatrix::from_rows({{0.5, 0.0}, {0.0, 0.5}})}),
      std::invalid_argument);

  // Non-PSD element.
  CHECK_THROWS_AS(
      Povm({ComplexMatrix::from_rows({{1.5, 0.0}, {0.0, 1.5}}),
            ComplexMatrix::from_rows({{-0.5, 0.0}, {0.0, -0.5}})}),
      std::invalid_argument);
}

TEST_CASE("keep_all strategy leaves the encoded state in memory") {
  const auto strategy = keep_all_strategy(2);
  CHECK(strategy.m() == 2);
  CHECK(strategy.num_outcomes() == 1);
  for (Basis basis : {Basis::Z, Basis::X}) {
    const Message msg("10");
    const auto conds = conditional_states(strategy, basis, msg);
    REQUIRE(conds.size() == 1);
    CHECK(conds[0].probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(frobenius_distance(conds[0].memory_state.matrix(),
                             basis_projector(msg, basis)) < 1e-12);
  }
}

TEST_CASE("measure-all-Z resolves Z messages deterministically") {
  const auto strategy = measure_all_strategy(3, MeasurementBasis::z());
  const Message msg("101");
  const auto conds = conditional_states(strategy, Basis::Z, msg);
  REQUIRE(conds.size() == 1);
  CHECK(conds[0].outcome == msg.to_index());
  CHECK(conds[0].probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(strategy.payload(conds[0].outcome) == "101");
}

TEST_CASE("keep-first-qubit with Z measurement on X-encoded messages") {
  const auto strategy =
      keep_subset_strategy(3, {0}, MeasurementBasis::z());
  for (std::size_t idx : {0u, 5u}) {
    const Message msg = Message::from_index(3, idx);
    const auto conds = conditional_states(strategy, Basis::X, msg);
    REQUIRE(conds.size() == 4);
    const auto expect = basis_projector(
        Message(msg.bits().substr(0, 1)), Basis::X);
    for (const auto& c : conds) {
      CHECK(c.probability == doctest::Approx(0.25).epsilon(1e-12));
      CHECK(frobenius_distance(c.memory_state.matrix(), expect) < 1e-12);
    }
  }
}

TEST_CASE("posterior distributions by Bayes") {
  const auto measure_z = measure_all_strategy(3, MeasurementBasis::z());

  // Z basis: point mass on the payload message.
  const auto point = posterior_distribution(measure_z, 5, Basis::Z);
  REQUIRE(point.size() == 1);
  CHECK(point.begin()->first == Message("101"));
  CHECK(point.begin()->second == doctest::Approx(1.0).epsilon(1e-12));

  // X basis: payload carries nothing, posterior uniform.
  const auto flat = posterior_distribution(measure_z, 5, Basis::X);
  REQUIRE(flat.size() == 8);
  for (const auto& [msg, p] : flat)
    CHECK(p == doctest::Approx(0.125).epsilon(1e-12));

  // keep-first-qubit, payload "01" supports exactly {001, 101}.
  const auto keep1 = keep_subset_strategy(3, {0}, MeasurementBasis::z());
  const auto post = posterior_distribution(keep1, 1, Basis::Z);
  REQUIRE(post.size() == 2);
  CHECK(post.at(Message("001")) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(post.at(Message("101")) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("outcome probabilities are normalized across the grid") {
  testing::Rng rng(211);
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const auto& strategy : testing::builtin_grid(n)) {
      const Message msg = Message::from_index(n, rng() % (1u << n));
      for (Basis basis : {Basis::Z, Basis::X}) {
        CHECK(prob_sum(outcome_distribution(strategy, basis, msg)) ==
              doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("joint conditional state of keep_all is the EPR state") {
  const auto strategy = keep_all_strategy(2);
  const auto [p, theta] = joint_conditional_state(strategy, 0);
  CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
  const auto phi = epr_state(2);
  CHECK(frobenius_distance(theta.matrix(),
                           outer(phi.amplitudes(), phi.amplitudes())) <
        1e-12);
}

TEST_CASE("Theta marginals reproduce Bayes posteriors at N = 2") {
  for (const auto& strategy : testing::builtin_grid(2)) {
    const auto priors = outcome_prior_distribution(strategy);
    for (std::size_t xi = 0; xi < strategy.num_outcomes(); ++xi) {
      if (priors[xi] < 1e-9) continue;
      const auto [p, theta] = joint_conditional_state(strategy, xi);
      CHECK(p == doctest::Approx(priors[xi]).epsilon(1e-9));
      for (Basis basis : {Basis::Z, Basis::X}) {
        const auto posterior = posterior_distribution(strategy, xi, basis);
        for (std::size_t idx = 0; idx < 4; ++idx) {
          const Message msg = Message::from_index(2, idx);
          const auto proj = tensor(basis_projector(msg, basis),
                                   ComplexMatrix::identity(
                                       strategy.memory_dim()));
          const double from_theta =
              real_trace_product(theta.matrix(), proj);
          const auto it = posterior.find(msg);
          const double from_bayes = it == posterior.end() ? 0.0 : it->second;
          CHECK(from_theta == doctest::Approx(from_bayes).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("conditioning Theta on Alice's outcome matches conditional_states") {
  const auto strategy = keep_subset_strategy(2, {0}, MeasurementBasis::z());
  const auto [p, theta] = joint_conditional_state(strategy, 1);
  const Message msg("01");
  const Basis basis = Basis::Z;

  const auto proj = tensor(basis_projector(msg, basis),
                           ComplexMatrix::identity(2));
  ComplexMatrix collapsed = multiply(multiply(proj, theta.matrix()), proj);
  const double pz = real_trace_product(theta.matrix(), proj);
  collapsed *= complex_t{1.0 / pz};
  const DensityOperator joint({4, 2}, std::move(collapsed));
  const auto memory = partial_trace(joint, {1});

  for (const auto& c : conditional_states(strategy, basis, msg)) {
    if (c.outcome != 1) continue;
    CHECK(frobenius_distance(memory.matrix(), c.memory_state.matrix()) <
          1e-9);
  }
}

TEST_CASE("full recovery with enough memory") {
  const auto strategy = keep_subset_strategy(4, {0, 1}, MeasurementBasis::z());
  // Bob keeps 2 of 4 qubits and measures the rest in Z; when Alice also used
  // Z, decoding memory in Z plus the payload recovers every message.
  for (std::size_t idx = 0; idx < 16; ++idx) {
    const Message msg = Message::from_index(4, idx);
    double recovered = 0;
    for (const auto& c : conditional_states(strategy, Basis::Z, msg)) {
      const auto mem_proj = basis_projector(
          Message(msg.bits().substr(0, 2)), Basis::Z);
      recovered += c.probability *
                   real_trace_product(c.memory_state.matrix(), mem_proj);
      // The payload pins the measured bits exactly.
      CHECK(strategy.payload(c.outcome) == msg.bits().substr(2));
    }
    CHECK(recovered == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("keep-first with Z measurement learns nothing about X messages") {
  const auto strategy = keep_subset_strategy(4, {0, 1}, MeasurementBasis::z());
  const auto posterior = posterior_distribution(strategy, 2, Basis::X);
  REQUIRE(posterior.size() == 16);
  for (const auto& [msg, p] : posterior)
    CHECK(p == doctest::Approx(1.0 / 16).epsilon(1e-12));
}

TEST_CASE("intermediate-basis measurement at N = 1") {
  const auto strategy = measure_all_strategy(
      1, MeasurementBasis::angle(std::numbers::pi / 8));
  const auto probs = outcome_distribution(strategy, Basis::Z, Message("0"));
  const double c2 = std::cos(std::numbers::pi / 8) *
                    std::cos(std::numbers::pi / 8);
  CHECK(probs[0] == doctest::Approx(c2).epsilon(1e-12));
  CHECK(probs[0] == doctest::Approx(0.853553).epsilon(1e-6));
}

TEST_CASE("builtin constructors reject invalid parameters") {
  CHECK_THROWS_AS(keep_subset_strategy(2, {0, 1, 5}, MeasurementBasis::z()),
                  std::invalid_argument);
  CHECK_THROWS_AS(keep_subset_strategy(2, {3}, MeasurementBasis::z()),
                  std::invalid_argument);
  CHECK_THROWS_AS(MeasurementBasis::angle(
                      std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
}

TEST_CASE("custom strategies load from JSON with validation") {
  // Identity channel into K = C^2 with a Z measurement, i.e. measure-all-Z
  // at N = 1 spelled out by hand.
  const std::string good = R"({
    "n": 1, "m": 0,
    "kraus": [[[[1,0],[0,0]],[[0,0],[1,0]]]],
    "povm": [[[[1,0],[0,0]],[[0,0],[0,0]]],
             [[[0,0],[0,0]],[[0,0],[1,0]]]]
  })";
  const auto strategy = strategy_from_json_text(good);
  CHECK(strategy.n() == 1);
  CHECK(strategy.m() == 0);
  CHECK(strategy.num_outcomes() == 2);
  const auto probs = outcome_distribution(strategy, Basis::Z, Message("1"));
  CHECK(probs[1] == doctest::Approx(1.0).epsilon(1e-12));

  // Broken completeness must be rejected on load.
  const std::string bad = R"({
    "n": 1, "m": 0,
    "kraus": [[[[0.5,0],[0,0]],[[0,0],[1,0]]]],
    "povm": [[[[1,0],[0,0]],[[0,0],[1,0]]]]
  })";
  CHECK_THROWS_AS(strategy_from_json_text(bad), std::invalid_argument);

  CHECK_THROWS_AS(strategy_from_json_text("{"), std::invalid_argument);
  CHECK_THROWS_AS(strategy_from_json_text("{\"n\": 1}"),
                  std::invalid_argument);
}
