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
#include <functional>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "qmem/bounds.hpp"
#include "qmem/codebook.hpp"
#include "qmem/harness.hpp"
#include "qmem/kernels.hpp"
#include "qmem/linalg.hpp"
#include "qmem/testing.hpp"

// The selftest command: every module's invariant suite, seeded, one
// pass/fail line per suite. These overlap the unit tests on purpose; the
// point is a one-shot health check of an installed binary.

namespace qmem::harness {

namespace {

using protocol::Basis;
using protocol::BobStrategy;
using protocol::MeasurementBasis;
using protocol::Message;
using testing::Rng;

struct SuiteResult {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& what) {
    pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << what;
  }
  void check(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
};

SuiteResult suite_kernels(Rng& rng) {
  SuiteResult r;
  using namespace qmem::kernels;
  for (int round = 0; round < 8; ++round) {
    const std::size_t n = 3 + rng() % 14, k = 2 + rng() % 17,
                      m = 1 + rng() % 13;
    const ComplexMatrix a = testing::random_matrix(rng, n, k);
    const ComplexMatrix b = testing::random_matrix(rng, k, m);
    ComplexMatrix c1(n, m), c2(n, m);
    matmul(a.data(), b.data(), c1.data(), n, k, m);
    serial::matmul(a.data(), b.data(), c2.data(), n, k, m);
    r.check(frobenius_distance(c1, c2) <= 1e-12, "matmul mismatch");

    ComplexMatrix k1(n * k, k * m), k2(n * k, k * m);
    kron(a.data(), n, k, b.data(), k, m, k1.data());
    serial::kron(a.data(), n, k, b.data(), k, m, k2.data());
    r.check(frobenius_distance(k1, k2) <= 1e-12, "kron mismatch");

    const ComplexMatrix v = testing::random_matrix(rng, k, 1);
    std::vector<complex_t> w1(n), w2(n);
    matvec(a.data(), v.data(), w1.data(), n, k);
    serial::matvec(a.data(), v.data(), w2.data(), n, k);
    for (std::size_t i = 0; i < n; ++i)
      r.check(std::abs(w1[i] - w2[i]) <= 1e-12, "matvec mismatch");
  }
  for (int round = 0; round < 6; ++round) {
    const std::vector<std::size_t> dims = {2, 3, 2, 2};
    const std::vector<unsigned char> mask = {
        static_cast<unsigned char>(rng() % 2),
        static_cast<unsigned char>(rng() % 2),
        static_cast<unsigned char>(rng() % 2), 1};
    const ComplexMatrix in = testing::random_matrix(rng, 24, 24);
    std::size_t kd = 1;
    for (std::size_t i = 0; i < dims.size(); ++i)
      if (mask[i]) kd *= dims[i];
    ComplexMatrix o1(kd, kd), o2(kd, kd);
    kernels::partial_trace(in.data(), dims, mask, o1.data());
    serial::partial_trace(in.data(), dims, mask, o2.data());
    r.check(frobenius_distance(o1, o2) <= 1e-12, "partial_trace mismatch");
  }
  {
    std::vector<std::vector<complex_t>> vs;
    for (int i = 0; i < 3; ++i) {
      const auto m = testing::random_matrix(rng, 6, 4);
      vs.emplace_back(m.entries().begin(), m.entries().end());
    }
    ComplexMatrix g1(6, 6), g2(6, 6);
    kernels::gram_traced(vs, 6, 4, g1.data());
    serial::gram_traced(vs, 6, 4, g2.data());
    r.check(frobenius_distance(g1, g2) <= 1e-12, "gram_traced mismatch");
  }
  return r;
}

SuiteResult suite_eig(Rng& rng) {
  SuiteResult r;
  for (int round = 0; round < 20; ++round) {
    const ComplexMatrix h = testing::random_hermitian(rng, 8);
    const EigResult eig = herm_eig(h);
    ComplexMatrix recon(8, 8);
    for (std::size_t k = 0; k < 8; ++k)
      for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
          recon(i, j) += eig.eigenvalues[k] * eig.eigenvectors(i, k) *
                         std::conj(eig.eigenvectors(j, k));
    r.check(frobenius_distance(recon, h) <= 1e-8, "eig reconstruction");
    for (std::size_t k = 1; k < 8; ++k)
      r.check(eig.eigenvalues[k - 1] <= eig.eigenvalues[k],
              "eigenvalues not ascending");
  }
  for (int round = 0; round < 20; ++round) {
    const auto rho = testing::random_density(rng, 2 + rng() % 15);
    const auto vals = herm_eigvals(rho.matrix());
    double sum = 0;
    for (double v : vals) {
      sum += v;
      r.check(v >= -1e-9 && v <= 1 + 1e-9, "density eigenvalue range");
    }
    r.check(std::abs(sum - 1.0) <= 1e-9, "density eigenvalue sum");
  }
  return r;
}

SuiteResult suite_norms(Rng& rng) {
  SuiteResult r;
  for (int round = 0; round < 100; ++round) {
    const std::size_t d = 2 + rng() % 31;
    const ComplexMatrix a = testing::random_matrix(rng, d, d);
    const ComplexMatrix b = testing::random_matrix(rng, d, d);
    const double lhs = spectral_norm(multiply(a, b));
    const double rhs = spectral_norm(a) * spectral_norm(b);
    r.check(lhs <= rhs * (1 + 1e-12) + 1e-12, "submultiplicativity");
  }
  for (int round = 0; round < 30; ++round) {
    const std::size_t d = 2 + rng() % 15;
    const std::size_t rank = rng() % (d / 2 + 1);
    const ComplexMatrix p = testing::random_projector(rng, d, rank);
    r.check(frobenius_distance(multiply(p, p), p) <= 1e-9,
            "projector idempotency");
    const double nrm = spectral_norm(p);
    r.check(std::abs(nrm) <= 1e-9 || std::abs(nrm - 1.0) <= 1e-9,
            "projector norm not in {0, 1}");
  }
  return r;
}

SuiteResult suite_ptrace(Rng& rng) {
  SuiteResult r;
  for (int round = 0; round < 25; ++round) {
    const auto rho = testing::random_density(rng, 4);
    const auto sigma = testing::random_density(rng, 3);
    const DensityOperator joint(
        {4, 3}, tensor(rho.matrix(), sigma.matrix()));
    const auto back = partial_trace(joint, {0});
    r.check(frobenius_distance(back.matrix(), rho.matrix()) <= 1e-9,
            "ptrace of product state");
    const auto other = partial_trace(joint, {1});
    r.check(std::abs(other.matrix().trace().real() - 1.0) <= 1e-9,
            "ptrace trace preservation");
    const auto vals = herm_eigvals(other.matrix());
    r.check(vals.front() >= -1e-9, "ptrace PSD preservation");
  }
  return r;
}

SuiteResult suite_channels(Rng& rng, bool inject_broken) {
  SuiteResult r;
  (void)rng;
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const auto& strategy : testing::builtin_grid(n)) {
      // Re-derive the completeness residual from the raw Kraus list; the
      // constructor already enforces it, this re-checks the stored values.
      auto kraus = strategy.channel().kraus_ops;
      if (inject_broken) kraus.front()(0, 0) += 1e-3;
      const double res = protocol::QuantumChannel::completeness_residual(
          kraus, strategy.channel().input_dim);
      std::ostringstream what;
      what << strategy.label() << " completeness residual " << res;
      r.check(res <= 1e-9, what.str());
      if (inject_broken) return r;  // one corrupted instance is enough
    }
  }
  return r;
}

SuiteResult suite_normalization(Rng& rng) {
  SuiteResult r;
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const auto& strategy : testing::builtin_grid(n)) {
      for (int round = 0; round < 3; ++round) {
        const Message msg =
            Message::from_index(n, rng() % (std::size_t{1} << n));
        for (Basis basis : {Basis::Z, Basis::X}) {
          const auto probs =
              protocol::outcome_distribution(strategy, basis, msg);
          double sum = 0;
          for (double p : probs) sum += p;
          r.check(std::abs(sum - 1.0) <= 1e-9,
                  strategy.label() + ": outcome probabilities sum");
          const auto conds =
              protocol::conditional_states(strategy, basis, msg);
          double csum = 0;
          for (const auto& c : conds) csum += c.probability;
          r.check(std::abs(csum - 1.0) <= 1e-9,
                  strategy.label() + ": conditional probabilities sum");
        }
      }
    }
  }
  return r;
}

// Conditioning Theta_xi on Alice's announced-basis outcome must reproduce
// the prepare-and-send pair (P(msg|xi), rho_msg,xi).
SuiteResult suite_pictures(Rng& rng) {
  SuiteResult r;
  (void)rng;
  for (std::size_t n = 2; n <= 3; ++n) {
    for (const auto& strategy : testing::builtin_grid(n)) {
      const auto priors = protocol::outcome_prior_distribution(strategy);
      for (std::size_t xi = 0; xi < strategy.num_outcomes(); ++xi) {
        if (priors[xi] < 1e-9) continue;
        const auto [p_xi, theta] =
            protocol::joint_conditional_state(strategy, xi);
        r.check(std::abs(p_xi - priors[xi]) <= 1e-9,
                strategy.label() + ": outcome probability across pictures");
        r.check(theta.is_valid(1e-8),
                strategy.label() + ": Theta not a valid density operator");
        for (Basis basis : {Basis::Z, Basis::X}) {
          const auto posterior =
              protocol::posterior_distribution(strategy, xi, basis);
          for (std::size_t idx = 0; idx < (std::size_t{1} << n); ++idx) {
            const Message msg = Message::from_index(n, idx);
            // P(msg|xi) from Theta: <enc| tr_m Theta |enc>.
            const auto marg = partial_trace(theta, {0});
            const auto enc = protocol::encode(msg, basis);
            const auto tmp = apply(marg.matrix(), enc.amplitudes());
            complex_t ip{};
            for (std::size_t i = 0; i < tmp.size(); ++i)
              ip += std::conj(enc[i]) * tmp[i];
            const double p_theta = ip.real();
            const auto it = posterior.find(msg);
            const double p_bayes = it == posterior.end() ? 0.0 : it->second;
            r.check(std::abs(p_theta - p_bayes) <= 1e-8,
                    strategy.label() + ": posterior across pictures");

            if (p_bayes <= 1e-9) continue;
            // Conditioned memory state from Theta.
            const std::size_t dm = strategy.memory_dim();
            const ComplexMatrix cond = tensor(
                protocol::basis_projector(msg, basis),
                ComplexMatrix::identity(dm));
            ComplexMatrix collapsed =
                multiply(multiply(cond, theta.matrix()), cond);
            collapsed *= complex_t{1.0 / p_theta};
            const DensityOperator joint(
                {std::size_t{1} << n, dm}, std::move(collapsed));
            const auto mem = partial_trace(joint, {1});
            for (const auto& cs :
                 protocol::conditional_states(strategy, basis, msg)) {
              if (cs.outcome != xi) continue;
              r.check(frobenius_distance(mem.matrix(),
                                         cs.memory_state.matrix()) <= 1e-8,
                      strategy.label() + ": memory state across pictures");
            }
          }
        }
      }
    }
  }
  return r;
}

SuiteResult suite_codebook(Rng& rng) {
  SuiteResult r;
  (void)rng;
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const auto& strategy : testing::builtin_grid(n)) {
      const auto priors = protocol::outcome_prior_distribution(strategy);
      for (std::size_t xi = 0; xi < strategy.num_outcomes(); ++xi) {
        if (priors[xi] < 1e-9) continue;
        for (Basis basis : {Basis::Z, Basis::X}) {
          const auto family = codebook::natural_family(strategy, xi, basis);
          std::map<Message, DensityOperator> states;
          for (const auto& d : family.decoders)
            for (const auto& [msg, e] : d.entries) {
              if (states.count(msg)) continue;
              for (auto& cs :
                   protocol::conditional_states(strategy, basis, msg))
                if (cs.outcome == xi) {
                  states.emplace(msg, std::move(cs.memory_state));
                  break;
                }
            }
          const auto report = codebook::validate(family, states);
          r.check(report.ok(), strategy.label() + " " +
                                   basis_name(basis) + " family: " +
                                   report.summary());

          const auto again = codebook::disjointify(family);
          r.check(again.decoders.size() == family.decoders.size(),
                  "disjointify changed decoder count");
          for (std::size_t i = 0; i < again.decoders.size(); ++i)
            r.check(again.decoders[i].entries.size() ==
                        family.decoders[i].entries.size(),
                    "disjointify not identity on disjoint family");

          const auto hat = codebook::build_projector_sum(
              {&family, 1}, n, n, strategy.m(), basis);
          r.check(hat.is_projector(1e-8), "P_hat not a projector");
        }
      }
    }
  }
  return r;
}

SuiteResult suite_landau_pollak(Rng& rng) {
  SuiteResult r;
  const std::size_t dims[] = {2, 4, 8, 16};
  for (int round = 0; round < 1000; ++round) {
    const std::size_t d = dims[rng() % 4];
    const auto rho = testing::random_density(rng, d);
    const std::size_t count = 1 + rng() % 5;
    std::vector<ComplexMatrix> projs;
    for (std::size_t i = 0; i < count; ++i)
      projs.push_back(
          testing::random_projector(rng, d, 1 + rng() % (d / 2 + 1)));
    const auto res = bounds::landau_pollak_check(rho, projs);
    if (!res.holds) {
      std::ostringstream what;
      what << "violation at dim " << d << ": lhs " << res.lhs << " rhs "
           << res.rhs;
      r.fail(what.str());
    }
  }
  return r;
}

SuiteResult suite_cross_norm(Rng& rng) {
  SuiteResult r;
  (void)rng;
  for (std::size_t n = 2; n <= 3; ++n) {
    for (const auto& strategy : testing::builtin_grid(n)) {
      const auto priors = protocol::outcome_prior_distribution(strategy);
      for (std::size_t xi = 0; xi < strategy.num_outcomes(); ++xi) {
        if (priors[xi] < 1e-9) continue;
        const auto z_fam = codebook::natural_family(strategy, xi, Basis::Z);
        const auto x_fam = codebook::natural_family(strategy, xi, Basis::X);
        for (const auto& dz : z_fam.decoders) {
          const auto p_t =
              codebook::decoder_projector(dz, Basis::Z, n, strategy.m());
          for (const auto& dx : x_fam.decoders) {
            const auto q_s =
                codebook::decoder_projector(dx, Basis::X, n, strategy.m());
            const auto res =
                bounds::cross_norm_check(q_s, p_t, strategy.m(), n);
            if (!res.holds) {
              std::ostringstream what;
              what << strategy.label() << " xi=" << xi << ": norm "
                   << res.norm << " > bound " << res.bound;
              r.fail(what.str());
            }
          }
        }
      }
    }
  }
  return r;
}

SuiteResult suite_tradeoff_identity(Rng& rng) {
  SuiteResult r;
  (void)rng;
  for (std::size_t n = 2; n <= 3; ++n) {
    for (const auto& strategy : testing::builtin_grid(n)) {
      const auto priors = protocol::outcome_prior_distribution(strategy);
      for (std::size_t xi = 0; xi < strategy.num_outcomes(); ++xi) {
        if (priors[xi] < 1e-9) continue;
        const auto theta = protocol::joint_conditional_state(strategy, xi);
        const auto z_fam = codebook::natural_family(strategy, xi, Basis::Z);
        const auto x_fam = codebook::natural_family(strategy, xi, Basis::X);
        for (std::size_t l = 0; l <= 2; ++l) {
          // Operator route.
          const auto p_hat =
              codebook::build_P_hat({&z_fam, 1}, l, n, strategy.m());
          const double expectation =
              real_trace_product(theta.second.matrix(), p_hat);
          // Posterior route via Bayes in the prepare-and-send picture.
          const auto posterior =
              protocol::posterior_distribution(strategy, xi, Basis::Z);
          double psum = 0;
          for (const auto& [msg, p] : posterior) {
            const auto len = codebook::operational_complexity(msg, z_fam);
            if (len && *len <= l) psum += p;
          }
          if (std::abs(expectation - psum) > 1e-8) {
            std::ostringstream what;
            what << strategy.label() << " xi=" << xi << " l=" << l
                 << ": tr(Theta P) = " << expectation << " vs posterior sum "
                 << psum;
            r.fail(what.str());
          }
          const auto rep = bounds::tradeoff_check(
              theta.second, z_fam, x_fam, l, l, strategy.m(), n);
          r.check(rep.holds, strategy.label() + ": trade-off violated");
        }
      }
    }
  }
  return r;
}

}  // namespace

int selftest(std::uint64_t seed, std::ostream& out,
             const std::string& inject) {
  if (!inject.empty() && inject != "broken-channel") {
    out << "unknown injection tag: " << inject << "\n";
    return kExitInvalidConfig;
  }

  struct Entry {
    const char* name;
    std::function<SuiteResult(Rng&)> fn;
  };
  const bool broken = inject == "broken-channel";
  const Entry suites[] = {
      {"qmath/kernels-vs-reference", suite_kernels},
      {"qmath/eigendecomposition", suite_eig},
      {"qmath/spectral-norms", suite_norms},
      {"qmath/partial-trace", suite_ptrace},
      {"protocol/channel-completeness",
       [broken](Rng& rng) { return suite_channels(rng, broken); }},
      {"protocol/normalization", suite_normalization},
      {"protocol/picture-consistency", suite_pictures},
      {"codebook/natural-families", suite_codebook},
      {"bounds/landau-pollak-fuzz", suite_landau_pollak},
      {"bounds/cross-norm-grid", suite_cross_norm},
      {"bounds/tradeoff-identity", suite_tradeoff_identity},
  };

  bool all_pass = true;
  for (const auto& suite : suites) {
    Rng rng(seed);  // every suite starts from the same seed
    const SuiteResult result = suite.fn(rng);
    if (result.pass) {
      out << "[PASS] " << suite.name << "\n";
    } else {
      all_pass = false;
      out << "[FAIL] " << suite.name << ": " << result.detail.str() << "\n";
    }
  }
  return all_pass ? kExitOk : kExitBoundViolation;
}

}  // namespace qmem::harness
