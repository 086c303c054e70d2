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

#ifndef QMEM_BOUNDS_HPP
#define QMEM_BOUNDS_HPP

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "qmem/codebook.hpp"
#include "qmem/matrix.hpp"
#include "qmem/protocol.hpp"
#include "qmem/state.hpp"

// The inequality engine: a generalized Landau-Pollak uncertainty relation
// for projector families, the cross-norm bound between conjugate-basis
// decoder projectors, the resulting recoverability trade-off at fixed (N, M),
// its exponential form under linear scaling of memory and program lengths,
// and discrimination oracles used as achievability baselines.

namespace qmem::bounds {

using codebook::DecoderFamily;
using protocol::Basis;
using protocol::BobStrategy;
using protocol::Message;

/// Additive tolerance on every bound check.
inline constexpr double kBoundTol = 1e-9;

/// Default exponent constant in the trade-off bound
/// 1 + 2^((l_x + l_z + M - N)/2 + c); 3/2 is the value the explicit
/// program-counting argument yields.
inline constexpr double kDefaultCExponent = 1.5;

struct LandauPollakResult {
  double lhs;  // sum_i tr(rho A_i)
  double rhs;  // 1 + sqrt(sum_{i != j} ||A_i A_j||^2), ordered pairs
  bool holds;
};

/// Generalized Landau-Pollak relation for an arbitrary projector family.
/// Throws std::invalid_argument when an input is not a projector within
/// 1e-9.
LandauPollakResult landau_pollak_check(const DensityOperator& rho,
                                       std::span<const ComplexMatrix> projs);

struct CrossNormResult {
  double norm;   // ||Q_s P_t||
  double bound;  // 2^((M - N)/2)
  bool holds;
};

/// Spectral norm of q_s * p_t against the memory-size bound.
CrossNormResult cross_norm_check(const ComplexMatrix& q_s,
                                 const ComplexMatrix& p_t, std::size_t m,
                                 std::size_t n);

struct TradeoffParams {
  std::size_t n, m, l_x, l_z;
  double c_exponent;
};

struct TradeoffReport {
  double lhs_z, lhs_x;
  double rhs;
  double slack;  // rhs - (lhs_z + lhs_x)
  bool holds;
  TradeoffParams params;

  double lhs_total() const { return lhs_z + lhs_x; }
};

/// Both sides of the trade-off for one outcome: lhs_z = tr(Theta P_hat),
/// lhs_x = tr(Theta Q_hat), rhs = 1 + 2^((l_x + l_z + M - N)/2 + c).
///
/// Each operator expectation is cross-checked against the posterior-sum
/// route (marginal of Theta over the covered short-program messages); a
/// mismatch beyond 1e-6 throws std::runtime_error, as it can only mean an
/// implementation bug.
TradeoffReport tradeoff_check(const DensityOperator& theta,
                              const DecoderFamily& z_family,
                              const DecoderFamily& x_family, std::size_t l_x,
                              std::size_t l_z, std::size_t m, std::size_t n,
                              double c_exponent = kDefaultCExponent);

struct SweepPoint {
  std::size_t n;
  std::size_t m;
  double q, p_x, p_z;
  double lhs_total;  // worst case over outcomes
  double rhs;        // 1 + c0 * 2^(-epsilon n)
  double epsilon;    // (1 - (q + p_x + p_z)) / 2
  double c0;         // 2^c_exponent
  bool holds;
};

/// Exponential-form check across message lengths: for each n in n_range,
/// builds the strategy, derives natural decoder families per outcome with
/// program-length cutoffs floor(p_x n) and floor(p_z n), and compares the
/// worst-case lhs against 1 + c0 2^(-epsilon n).
/// Requires q + p_x + p_z < 1 and m <= q n for every strategy.
std::vector<SweepPoint> asymptotic_sweep(
    const std::function<BobStrategy(std::size_t)>& strategy_family, double q,
    double p_x, double p_z, std::span<const std::size_t> n_range,
    double c_exponent = kDefaultCExponent);

struct CorollaryReport {
  std::size_t max_len_x;  // worst-case operational complexity, X side
  std::size_t max_len_z;
  double bound;  // n - m - 2 c_exponent
  bool holds;
};

/// Uncertainty-principle form: when both families cover their full posterior
/// support, the worst-case program lengths obey
/// max_x + max_z >= N - M - 2c. Throws when a side does not reach coverage
/// probability 1.
CorollaryReport corollary_min_lengths(const DecoderFamily& z_family,
                                      const DecoderFamily& x_family,
                                      const std::map<Message, double>& z_post,
                                      const std::map<Message, double>& x_post,
                                      std::size_t m, std::size_t n,
                                      double c_exponent = kDefaultCExponent);

/// Pretty-good-measurement success probability for discriminating `states`
/// under `priors`; optimal for two equiprobable pure states.
double helstrom_pgm_guess(std::span<const DensityOperator> states,
                          std::span<const double> priors);

}  // namespace qmem::bounds

#endif  // QMEM_BOUNDS_HPP
