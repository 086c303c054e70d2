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

#include "qmem/bounds.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "qmem/linalg.hpp"

namespace qmem::bounds {

namespace {

constexpr double kIdentityHardFail = 1e-6;
constexpr double kOutcomeThreshold = 1e-12;

// Posterior of a message in the announced basis, read off the A' marginal
// of Theta: <enc(msg)| tr_m Theta |enc(msg)>.
double posterior_from_marginal(const ComplexMatrix& marginal,
                               const Message& msg, Basis basis) {
  const StateVector enc = protocol::encode(msg, basis);
  const auto tmp = apply(marginal, enc.amplitudes());
  complex_t s{};
  for (std::size_t i = 0; i < tmp.size(); ++i)
    s += std::conj(enc[i]) * tmp[i];
  return s.real();
}

// Sum of Theta-marginal posteriors over messages the family decodes with
// programs of length <= cutoff. This is the right-hand side of the
// expectation identity tr(Theta P_hat_l) = P({complexity <= l} | xi).
double posterior_sum(const ComplexMatrix& marginal,
                     const DecoderFamily& family, std::size_t cutoff,
                     Basis basis) {
  double total = 0;
  std::set<Message> counted;
  for (const auto& decoder : family.decoders) {
    if (decoder.program.size() > cutoff) continue;
    for (const auto& [msg, e] : decoder.entries)
      if (counted.insert(msg).second)
        total += posterior_from_marginal(marginal, msg, basis);
  }
  return total;
}

}  // namespace

LandauPollakResult landau_pollak_check(const DensityOperator& rho,
                                       std::span<const ComplexMatrix> projs) {
  for (const auto& a : projs)
    if (!a.is_projector(kValidationTol))
      throw std::invalid_argument("landau_pollak_check: not a projector");

  double lhs = 0;
  for (const auto& a : projs) {
    if (a.rows() != rho.total_dim())
      throw std::invalid_argument("landau_pollak_check: dimension mismatch");
    lhs += real_trace_product(rho.matrix(), a);
  }

  // Ordered pairs i != j; the two orders have equal norms.
  double cross = 0;
  for (std::size_t i = 0; i < projs.size(); ++i) {
    for (std::size_t j = i + 1; j < projs.size(); ++j) {
      const double nrm = spectral_norm(multiply(projs[i], projs[j]));
      cross += 2.0 * nrm * nrm;
    }
  }
  const double rhs = 1.0 + std::sqrt(cross);
  return {lhs, rhs, lhs <= rhs + kBoundTol};
}

CrossNormResult cross_norm_check(const ComplexMatrix& q_s,
                                 const ComplexMatrix& p_t, std::size_t m,
                                 std::size_t n) {
  if (q_s.rows() != p_t.rows() || q_s.cols() != p_t.cols() ||
      !q_s.is_square())
    throw std::invalid_argument("cross_norm_check: dimension mismatch");
  const double norm = spectral_norm(multiply(q_s, p_t));
  const double bound = std::exp2(
      0.5 * (static_cast<double>(m) - static_cast<double>(n)));
  return {norm, bound, norm <= bound + kBoundTol};
}

TradeoffReport tradeoff_check(const DensityOperator& theta,
                              const DecoderFamily& z_family,
                              const DecoderFamily& x_family, std::size_t l_x,
                              std::size_t l_z, std::size_t m, std::size_t n,
                              double c_exponent) {
  if (z_family.basis != Basis::Z || x_family.basis != Basis::X)
    throw std::invalid_argument("tradeoff_check: family basis mismatch");
  const std::size_t dim = (std::size_t{1} << n) * (std::size_t{1} << m);
  if (theta.total_dim() != dim)
    throw std::invalid_argument("tradeoff_check: Theta dimension mismatch");

  const ComplexMatrix p_hat =
      codebook::build_P_hat({&z_family, 1}, l_z, n, m);
  const ComplexMatrix q_hat =
      codebook::build_Q_hat({&x_family, 1}, l_x, n, m);

  const double lhs_z = real_trace_product(theta.matrix(), p_hat);
  const double lhs_x = real_trace_product(theta.matrix(), q_hat);

  // Independent route via the A' marginal; disagreement means a bug, not a
  // violated bound.
  const DensityOperator marginal = partial_trace(theta, {0});
  const double post_z =
      posterior_sum(marginal.matrix(), z_family, l_z, Basis::Z);
  const double post_x =
      posterior_sum(marginal.matrix(), x_family, l_x, Basis::X);
  if (std::abs(post_z - lhs_z) > kIdentityHardFail ||
      std::abs(post_x - lhs_x) > kIdentityHardFail)
    throw std::runtime_error(
        "tradeoff_check: expectation/posterior identity failed (z: " +
        std::to_string(lhs_z) + " vs " + std::to_string(post_z) + ", x: " +
        std::to_string(lhs_x) + " vs " + std::to_string(post_x) + ")");

  TradeoffReport report;
  report.lhs_z = lhs_z;
  report.lhs_x = lhs_x;
  report.rhs =
      1.0 + std::exp2(0.5 * (static_cast<double>(l_x) +
                             static_cast<double>(l_z) +
                             static_cast<double>(m) - static_cast<double>(n)) +
                      c_exponent);
  report.slack = report.rhs - (lhs_z + lhs_x);
  report.holds = report.slack >= -kBoundTol;
  report.params = TradeoffParams{n, m, l_x, l_z, c_exponent};
  return report;
}

std::vector<SweepPoint> asymptotic_sweep(
    const std::function<BobStrategy(std::size_t)>& strategy_family, double q,
    double p_x, double p_z, std::span<const std::size_t> n_range,
    double c_exponent) {
  if (q < 0 || p_x < 0 || p_z < 0)
    throw std::invalid_argument("asymptotic_sweep: rates must be >= 0");
  if (q + p_x + p_z >= 1.0)
    throw std::invalid_argument(
        "asymptotic_sweep: requires q + p_x + p_z < 1");
  const double epsilon = (1.0 - (q + p_x + p_z)) / 2.0;
  const double c0 = std::exp2(c_exponent);

  std::vector<SweepPoint> points;
  for (const std::size_t n : n_range) {
    const BobStrategy strategy = strategy_family(n);
    if (strategy.n() != n)
      throw std::invalid_argument("asymptotic_sweep: strategy has wrong N");
    const double nd = static_cast<double>(n);
    if (static_cast<double>(strategy.m()) > q * nd + kBoundTol)
      throw std::invalid_argument("asymptotic_sweep: M exceeds qN");
    const auto l_x = static_cast<std::size_t>(p_x * nd + kBoundTol);
    const auto l_z = static_cast<std::size_t>(p_z * nd + kBoundTol);

    double worst = 0;
    const auto priors = protocol::outcome_prior_distribution(strategy);
    for (std::size_t xi = 0; xi < strategy.num_outcomes(); ++xi) {
      if (priors[xi] < kOutcomeThreshold) continue;
      const auto theta = protocol::joint_conditional_state(strategy, xi);
      const auto z_fam = codebook::natural_family(strategy, xi, Basis::Z);
      const auto x_fam = codebook::natural_family(strategy, xi, Basis::X);
      const TradeoffReport r =
          tradeoff_check(theta.second, z_fam, x_fam, l_x, l_z, strategy.m(),
                         n, c_exponent);
      worst = std::max(worst, r.lhs_total());
    }

    SweepPoint pt;
    pt.n = n;
    pt.m = strategy.m();
    pt.q = q;
    pt.p_x = p_x;
    pt.p_z = p_z;
    pt.lhs_total = worst;
    pt.rhs = 1.0 + c0 * std::exp2(-epsilon * nd);
    pt.epsilon = epsilon;
    pt.c0 = c0;
    pt.holds = worst <= pt.rhs + kBoundTol;
    points.push_back(pt);
  }
  return points;
}

namespace {

// Largest operational complexity over the posterior support; throws unless
// the family covers the full support (coverage probability 1).
std::size_t max_complexity_over_support(
    const DecoderFamily& family, const std::map<Message, double>& posterior,
    const char* side) {
  double covered = 0;
  std::size_t worst = 0;
  for (const auto& [msg, p] : posterior) {
    if (p <= kOutcomeThreshold) continue;
    const auto len = codebook::operational_complexity(msg, family);
    if (!len)
      throw std::invalid_argument(
          std::string("corollary_min_lengths: ") + side +
          " family leaves supported message " + msg.bits() + " uncovered");
    covered += p;
    worst = std::max(worst, *len);
  }
  if (std::abs(covered - 1.0) > 1e-9)
    throw std::invalid_argument(
        std::string("corollary_min_lengths: ") + side +
        " family coverage probability " + std::to_string(covered) + " != 1");
  return worst;
}

}  // namespace

CorollaryReport corollary_min_lengths(const DecoderFamily& z_family,
                                      const DecoderFamily& x_family,
                                      const std::map<Message, double>& z_post,
                                      const std::map<Message, double>& x_post,
                                      std::size_t m, std::size_t n,
                                      double c_exponent) {
  CorollaryReport report;
  report.max_len_z = max_complexity_over_support(z_family, z_post, "Z");
  report.max_len_x = max_complexity_over_support(x_family, x_post, "X");
  report.bound = static_cast<double>(n) - static_cast<double>(m) -
                 2.0 * c_exponent;
  const double sum =
      static_cast<double>(report.max_len_x + report.max_len_z);
  report.holds = sum >= report.bound - kBoundTol;
  return report;
}

double helstrom_pgm_guess(std::span<const DensityOperator> states,
                          std::span<const double> priors) {
  if (states.empty() || states.size() != priors.size())
    throw std::invalid_argument("helstrom_pgm_guess: size mismatch");
  double total = 0;
  for (double p : priors) {
    if (p < -kBoundTol)
      throw std::invalid_argument("helstrom_pgm_guess: negative prior");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("helstrom_pgm_guess: priors must sum to 1");

  const std::size_t dim = states.front().total_dim();
  ComplexMatrix average(dim, dim);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].total_dim() != dim)
      throw std::invalid_argument("helstrom_pgm_guess: dimension mismatch");
    ComplexMatrix scaled = states[i].matrix();
    scaled *= complex_t{priors[i]};
    average += scaled;
  }

  // M_i = avg^(-1/2) p_i rho_i avg^(-1/2) on the support of the average.
  const ComplexMatrix root = pinv_sqrt_psd(average);
  double success = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const ComplexMatrix t = multiply(root, states[i].matrix());
    success += priors[i] * priors[i] * real_trace_product(t, t);
  }
  return success;
}

}  // namespace qmem::bounds
