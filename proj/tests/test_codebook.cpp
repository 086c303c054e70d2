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

#include "doctest.h"
#include "qmem/codebook.hpp"
#include "qmem/linalg.hpp"
#include "qmem/protocol.hpp"
#include "qmem/testing.hpp"

using namespace qmem;
using namespace qmem::codebook;
using protocol::Basis;
using protocol::MeasurementBasis;
using protocol::Message;

namespace {

ComplexMatrix scalar_one() { return ComplexMatrix::identity(1); }

// Memory states of every message a family covers, for a fixed outcome.
std::map<Message, DensityOperator> family_states(
    const protocol::BobStrategy& strategy, Basis basis,
    const DecoderFamily& family, std::size_t xi) {
  std::map<Message, DensityOperator> states;
  for (const auto& d : family.decoders)
    for (const auto& [msg, e] : d.entries) {
      if (states.count(msg)) continue;
      for (auto& cs : protocol::conditional_states(strategy, basis, msg))
        if (cs.outcome == xi) {
          states.emplace(msg, std::move(cs.memory_state));
          break;
        }
    }
  return states;
}

}  // namespace

TEST_CASE("singleton decoder with scalar memory is always valid") {
  DecoderFamily family;
  family.basis = Basis::Z;
  Decoder d;
  d.program = "";
  d.entries.emplace(Message("10"), scalar_one());
  family.decoders.push_back(d);

  std::map<Message, DensityOperator> states;
  states.emplace(Message("10"), DensityOperator({1}, scalar_one()));
  CHECK(validate(family, states).ok());
}

TEST_CASE("identical states in one decoder are flagged as indistinguishable") {
  DecoderFamily family;
  family.basis = Basis::Z;
  Decoder d;
  d.program = "";
  d.entries.emplace(Message("0"),
                    ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}));
  d.entries.emplace(Message("1"),
                    ComplexMatrix::from_rows({{0.0, 0.0}, {0.0, 1.0}}));
  family.decoders.push_back(d);

  const DensityOperator rho(
      {2}, ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}));
  std::map<Message, DensityOperator> states;
  states.emplace(Message("0"), rho);
  states.emplace(Message("1"), rho);

  const auto report = validate(family, states);
  CHECK_FALSE(report.ok());
  double worst = 0;
  for (const auto& v : report.violations) worst = std::max(worst, v.residual);
  CHECK(worst >= 0.5);
}

TEST_CASE("validator catches structural defects") {
  const auto not_projector =
      ComplexMatrix::from_rows({{0.5, 0.0}, {0.0, 0.5}});
  DecoderFamily family;
  family.basis = Basis::Z;
  Decoder d;
  d.program = "0";
  d.entries.emplace(Message("0"), not_projector);
  family.decoders.push_back(d);
  Decoder dup;
  dup.program = "0";
  dup.entries.emplace(Message("1"), scalar_one());
  family.decoders.push_back(dup);
  Decoder overlap;
  overlap.program = "1";
  overlap.entries.emplace(Message("0"),
                          ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}));
  family.decoders.push_back(overlap);

  const auto report = validate(family, {});
  CHECK_FALSE(report.ok());
  bool idempotency = false, duplicate = false, covered_twice = false;
  for (const auto& v : report.violations) {
    if (v.description.find("not idempotent") != std::string::npos)
      idempotency = true;
    if (v.description.find("duplicate program") != std::string::npos)
      duplicate = true;
    if (v.description.find("covered by programs") != std::string::npos)
      covered_twice = true;
  }
  CHECK(idempotency);
  CHECK(duplicate);
  CHECK(covered_twice);
}

TEST_CASE("cardinality above dim H_m is rejected") {
  DecoderFamily family;
  family.basis = Basis::Z;
  Decoder d;
  d.program = "";
  d.entries.emplace(Message("00"), scalar_one());
  d.entries.emplace(Message("01"), scalar_one());
  family.decoders.push_back(d);

  std::map<Message, DensityOperator> states;
  states.emplace(Message("00"), DensityOperator({1}, scalar_one()));
  states.emplace(Message("01"), DensityOperator({1}, scalar_one()));
  const auto report = validate(family, states);
  CHECK_FALSE(report.ok());
  bool cardinality = false;
  for (const auto& v : report.violations)
    if (v.description.find("more messages than dim") != std::string::npos)
      cardinality = true;
  CHECK(cardinality);
}

TEST_CASE("canonical program enumeration is length-lex") {
  CHECK(canonical_program(0) == "");
  CHECK(canonical_program(1) == "0");
  CHECK(canonical_program(2) == "1");
  CHECK(canonical_program(3) == "00");
  CHECK(canonical_program(4) == "01");
  CHECK(canonical_program(6) == "11");
  CHECK(canonical_program(7) == "000");
  CHECK(canonical_program(15) == "0000");
}

TEST_CASE("natural Z family for keep-first-qubit") {
  const auto strategy =
      protocol::keep_subset_strategy(3, {0}, MeasurementBasis::z());
  const auto family = natural_z_family(strategy, 1);  // payload "01"
  REQUIRE(family.decoders.size() == 1);
  CHECK(family.decoders[0].program == "");
  REQUIRE(family.decoders[0].entries.size() == 2);
  CHECK(family.decoders[0].covers(Message("001")));
  CHECK(family.decoders[0].covers(Message("101")));
  const auto& e0 = family.decoders[0].entries.at(Message("001"));
  CHECK(std::abs(e0(0, 0) - complex_t{1.0}) < 1e-12);
  CHECK(std::abs(e0(1, 1)) < 1e-12);

  const auto states = family_states(strategy, Basis::Z, family, 1);
  CHECK(validate(family, states).ok());
}

TEST_CASE("natural Z family for measure-all is a classical lookup") {
  const auto strategy =
      protocol::measure_all_strategy(2, MeasurementBasis::z());
  const auto family = natural_z_family(strategy, 2);  // payload "10"
  REQUIRE(family.decoders.size() == 1);
  REQUIRE(family.decoders[0].entries.size() == 1);
  CHECK(family.decoders[0].covers(Message("10")));
  CHECK(family.decoders[0].entries.at(Message("10")).rows() == 1);
}

TEST_CASE("natural_z_family requires a Z-measuring built-in") {
  const auto x_meas =
      protocol::measure_all_strategy(2, MeasurementBasis::x());
  CHECK_THROWS_AS(natural_z_family(x_meas, 0), std::invalid_argument);
}

TEST_CASE("natural families validate across the built-in grid") {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const auto& strategy : testing::builtin_grid(n)) {
      const auto priors = protocol::outcome_prior_distribution(strategy);
      for (std::size_t xi = 0; xi < strategy.num_outcomes(); ++xi) {
        if (priors[xi] < 1e-9) continue;
        for (Basis basis : {Basis::Z, Basis::X}) {
          const auto family = natural_family(strategy, xi, basis);
          const auto states = family_states(strategy, basis, family, xi);
          const auto report = validate(family, states);
          INFO(strategy.label(), " xi=", xi, " ", report.summary());
          CHECK(report.ok());
        }
      }
    }
  }
}

TEST_CASE("conjugate-side natural family enumerates measured-bit patterns") {
  const auto strategy =
      protocol::keep_subset_strategy(3, {0}, MeasurementBasis::z());
  const auto family = natural_family(strategy, 1, Basis::X);
  // 4 patterns over the two measured qubits, 2 messages each.
  REQUIRE(family.decoders.size() == 4);
  CHECK(family.decoders[0].program == "");
  CHECK(family.decoders[1].program == "0");
  CHECK(family.decoders[2].program == "1");
  CHECK(family.decoders[3].program == "00");
  for (const auto& d : family.decoders) CHECK(d.entries.size() == 2);
  // The empty-program decoder covers the lexicographically first pattern.
  CHECK(family.decoders[0].covers(Message("000")));
  CHECK(family.decoders[0].covers(Message("100")));
}

TEST_CASE("singleton fallback family is valid and posterior-ordered") {
  const auto strategy =
      protocol::measure_all_strategy(2, MeasurementBasis::z());
  const auto family = singleton_family(strategy, 1, Basis::Z);
  // Point-mass posterior: exactly one singleton with the empty program.
  REQUIRE(family.decoders.size() == 1);
  CHECK(family.decoders[0].program == "");
  CHECK(family.decoders[0].covers(Message("01")));

  const auto flat = singleton_family(strategy, 1, Basis::X);
  CHECK(flat.decoders.size() == 4);
  const auto states = family_states(strategy, Basis::X, flat, 1);
  CHECK(validate(flat, states).ok());
}

TEST_CASE("build_P_hat assembles projectors") {
  SUBCASE("empty family gives the zero matrix") {
    DecoderFamily family;
    family.basis = Basis::Z;
    const auto hat = build_P_hat({&family, 1}, 3, 2, 0);
    CHECK(hat.rows() == 4);
    CHECK(hat.max_abs() == 0.0);
  }

  SUBCASE("single scalar decoder is Z_z tensor identity") {
    DecoderFamily family;
    family.basis = Basis::Z;
    Decoder d;
    d.program = "";
    d.entries.emplace(Message("10"), scalar_one());
    family.decoders.push_back(d);
    const auto hat = build_P_hat({&family, 1}, 0, 2, 0);
    const auto want = protocol::basis_projector(Message("10"), Basis::Z);
    CHECK(frobenius_distance(hat, want) < 1e-12);
    CHECK(hat.is_projector(1e-9));
  }

  SUBCASE("natural family P_hat has full expectation") {
    const auto strategy =
        protocol::keep_subset_strategy(3, {0}, MeasurementBasis::z());
    const auto family = natural_z_family(strategy, 2);
    const auto hat = build_P_hat({&family, 1}, 0, 3, 1);
    CHECK(hat.is_projector(1e-8));
    const auto [p, theta] = protocol::joint_conditional_state(strategy, 2);
    CHECK(real_trace_product(theta.matrix(), hat) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("overlapping message sets are rejected") {
    DecoderFamily family;
    family.basis = Basis::Z;
    Decoder a;
    a.program = "";
    a.entries.emplace(Message("0"), scalar_one());
    Decoder b;
    b.program = "1";
    b.entries.emplace(Message("0"), scalar_one());
    family.decoders = {a, b};
    CHECK_THROWS_AS(build_P_hat({&family, 1}, 2, 1, 0),
                    std::invalid_argument);
  }

  SUBCASE("basis tag is enforced") {
    DecoderFamily family;
    family.basis = Basis::X;
    CHECK_THROWS_AS(build_P_hat({&family, 1}, 0, 1, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("P_hat projector property across the grid") {
  for (std::size_t n = 2; n <= 3; ++n) {
    for (const auto& strategy : testing::builtin_grid(n)) {
      const auto priors = protocol::outcome_prior_distribution(strategy);
      for (std::size_t xi = 0; xi < strategy.num_outcomes(); ++xi) {
        if (priors[xi] < 1e-9) continue;
        for (Basis basis : {Basis::Z, Basis::X}) {
          const auto family = natural_family(strategy, xi, basis);
          const auto hat = build_projector_sum({&family, 1}, n, n,
                                               strategy.m(), basis);
          CHECK(hat.is_hermitian(1e-8));
          CHECK(frobenius_distance(multiply(hat, hat), hat) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("operational complexity is the shortest covering program") {
  DecoderFamily family;
  family.basis = Basis::Z;
  Decoder a;
  a.program = "0";
  a.entries.emplace(Message("01"), scalar_one());
  Decoder b;
  b.program = "11";
  b.entries.emplace(Message("01"), scalar_one());
  b.entries.emplace(Message("10"), scalar_one());
  family.decoders = {a, b};

  CHECK(operational_complexity(Message("01"), family) == 1);
  CHECK(operational_complexity(Message("10"), family) == 2);
  CHECK_FALSE(operational_complexity(Message("11"), family).has_value());

  Decoder c;
  c.program = "";
  c.entries.emplace(Message("11"), scalar_one());
  family.decoders.push_back(c);
  CHECK(operational_complexity(Message("11"), family) == 0);
}

TEST_CASE("program counting bound holds structurally") {
  // Distinct binary strings of length <= l number exactly 2^(l+1) - 1; the
  // canonical enumeration exhausts them before moving on.
  for (std::size_t l = 0; l <= 4; ++l) {
    std::size_t count = 0;
    while (canonical_program(count).size() <= l) ++count;
    CHECK(count == (std::size_t{1} << (l + 1)) - 1);
    CHECK(count <= (std::size_t{1} << (l + 1)));
  }
}

TEST_CASE("disjointify keeps the shortest program and is idempotent") {
  DecoderFamily family;
  family.basis = Basis::Z;
  Decoder a;
  a.program = "00";
  a.entries.emplace(Message("0"), scalar_one());
  a.entries.emplace(Message("1"), scalar_one());
  Decoder b;
  b.program = "1";
  b.entries.emplace(Message("0"), scalar_one());
  Decoder c;
  c.program = "0";
  c.entries.emplace(Message("0"), scalar_one());
  family.decoders = {a, b, c};

  const auto cleaned = disjointify(family);
  // "0" and "1" tie on length; lexicographic order favors "0".
  CHECK_FALSE(cleaned.decoders[0].covers(Message("0")));
  CHECK(cleaned.decoders[0].covers(Message("1")));
  CHECK_FALSE(cleaned.decoders[1].covers(Message("0")));
  CHECK(cleaned.decoders[2].covers(Message("0")));

  const auto twice = disjointify(cleaned);
  for (std::size_t i = 0; i < cleaned.decoders.size(); ++i) {
    CHECK(twice.decoders[i].program == cleaned.decoders[i].program);
    CHECK(twice.decoders[i].entries.size() ==
          cleaned.decoders[i].entries.size());
  }
}

TEST_CASE("decoder families round-trip through JSON") {
  const auto strategy =
      protocol::keep_subset_strategy(3, {0}, MeasurementBasis::z());
  const auto family = natural_family(strategy, 1, Basis::X);
  const auto j = family_to_json(family);
  const auto back = family_from_json(j);

  CHECK(back.basis == family.basis);
  CHECK(back.outcome == family.outcome);
  REQUIRE(back.decoders.size() == family.decoders.size());
  for (std::size_t i = 0; i < family.decoders.size(); ++i) {
    CHECK(back.decoders[i].program == family.decoders[i].program);
    REQUIRE(back.decoders[i].entries.size() ==
            family.decoders[i].entries.size());
    for (const auto& [msg, e] : family.decoders[i].entries)
      CHECK(frobenius_distance(back.decoders[i].entries.at(msg), e) < 1e-15);
  }

  CHECK_THROWS_AS(family_from_json(nlohmann::json{{"basis", "Y"}}),
                  std::invalid_argument);
}
