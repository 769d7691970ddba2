// Copyright 2026 The kerrcat Authors
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

// Probabilistic teleportation of states spanned by the M symmetric coherent
// states |alpha w^q>, w = e^{-2 pi i/M}, over an M-branch entangled coherent
// state (M even). Alice dilutes her two modes into L = M/2 copies each,
// interferes them pairwise, and counts photons on all M outputs. Exactly one
// empty output heralds success and tells Bob which rotation to apply.
//
// Mode layout:
//   joint state     (C, A, B)
//   network output  (G_0 .. G_{L-1}, H_0 .. H_{L-1}, B)

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "kerrcat/common.hpp"
#include "kerrcat/css.hpp"
#include "kerrcat/entanglement.hpp"

namespace kerrcat::teleport {

using css::CssState;

inline constexpr double residual_mass_tolerance = 1e-9;
inline constexpr int max_exact_modes = 8;

struct TeleportConfig {
  int M = 2;
  cplx alpha = 1.0;
  std::vector<cplx> Q;  // input-state coefficients, length M
  std::uint64_t seed = 1;
  std::int64_t trials = 0;
  std::optional<int> n_cap;  // per-mode photon cutoff; derived per mode when unset
  bool h_only = false;       // count only empty-H outcomes as successes
  unsigned threads = 0;      // 0 = hardware concurrency

  int L() const { return M / 2; }

  void validate() const {
    if (M < 2 || M % 2 != 0) throw std::invalid_argument("teleport: M must be even and >= 2");
    if (static_cast<int>(Q.size()) != M) {
      throw std::invalid_argument("teleport: Q must have exactly M entries");
    }
    if (std::all_of(Q.begin(), Q.end(), [](cplx q) { return q == cplx{}; })) {
      throw std::invalid_argument("teleport: Q is all zero");
    }
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
      throw std::invalid_argument("teleport: alpha must be finite");
    }
    if (trials < 0) throw std::invalid_argument("teleport: trials must be >= 0");
    if (n_cap && *n_cap < 0) throw std::invalid_argument("teleport: n_cap must be >= 0");
  }
};

enum class Port { G, H };

struct Success {
  Port port;
  int m;      // index within the port, 0..L-1
  int n_tot;  // total photons detected by Alice

  bool operator==(const Success&) const = default;
};

enum class FailureReason { no_empty_mode, multiple_empty_modes };

struct Failure {
  FailureReason reason;

  bool operator==(const Failure&) const = default;
};

using Classification = std::variant<Success, Failure>;

inline const char* to_string(FailureReason r) {
  return r == FailureReason::no_empty_mode ? "no_empty_mode" : "multiple_empty_modes";
}

/// Photon counts and Bob's unnormalized conditional state. The state's
/// squared norm is the probability of the counts.
struct Measurement {
  std::vector<int> counts;
  CssState bob_state;
};

struct TrialOutcome {
  std::vector<int> counts;
  Classification classification = Failure{FailureReason::no_empty_mode};
  CssState bob_state;  // after correction on success, raw conditional state otherwise
  double fidelity_vs_ideal = std::numeric_limits<double>::quiet_NaN();
  double fidelity_vs_residual_target = std::numeric_limits<double>::quiet_NaN();
};

struct ExactProbabilities {
  double success = 0.0;         // exactly one empty output
  double success_h_only = 0.0;  // exactly one empty output, and it is an H port
  double no_empty = 0.0;
  double multiple_empty = 0.0;
  double all_empty = 0.0;
};

struct ProtocolStats {
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  std::int64_t successes_h = 0;
  double success_probability = std::numeric_limits<double>::quiet_NaN();
  double success_stderr = std::numeric_limits<double>::quiet_NaN();
  double mean_fidelity_ideal = std::numeric_limits<double>::quiet_NaN();
  double stderr_fidelity_ideal = std::numeric_limits<double>::quiet_NaN();
  double mean_fidelity_residual = std::numeric_limits<double>::quiet_NaN();
  double stderr_fidelity_residual = std::numeric_limits<double>::quiet_NaN();
  std::optional<ExactProbabilities> exact;

  /// Exact success probability under the config's success definition.
  std::optional<double> exact_success(bool h_only) const {
    if (!exact) return std::nullopt;
    return h_only ? exact->success_h_only : exact->success;
  }
};

/// w^q = e^{-2 pi i q / M}, reduced so large q stays exact.
inline cplx root_power(int M, long long q) {
  const long long r = ((q % M) + M) % M;
  return unit_phase(-2.0 * pi * static_cast<double>(r) / M);
}

/// Normalized sum_q Q_q |alpha w^q> on one mode.
inline CssState input_state(const TeleportConfig& cfg) {
  cfg.validate();
  CssState s(1);
  for (int q = 0; q < cfg.M; ++q) {
    if (cfg.Q[q] != cplx{}) s.add_branch(cfg.Q[q], {cfg.alpha * root_power(cfg.M, q)});
  }
  return css::normalized(s);
}

/// The state Bob should end up with.
inline CssState ideal_target(const TeleportConfig& cfg) { return input_state(cfg); }

/// Joint state on (C, A, B): the input on C and the M-branch entangled
/// coherent state on (A, B), both built around the same alpha.
inline CssState prepare_joint(const TeleportConfig& cfg) {
  const CssState c = input_state(cfg);
  // generate_ecs places branch q at beta e^{i pi (1-2q)/M}/sqrt2; this beta re-centres it on alpha w^q.
  const cplx beta = std::sqrt(2.0) * cfg.alpha * unit_phase(-pi / cfg.M);
  return css::tensor(c, entanglement::generate_ecs(cfg.M, beta));
}

/// Replaces `mode` by L consecutive modes, gamma -> (gamma/sqrt L, ..., gamma/sqrt L).
inline CssState dilute(const CssState& state, int mode, int L) {
  state.check_mode(mode);
  if (L < 1) throw std::invalid_argument("dilute: L must be >= 1");
  const double s = 1.0 / std::sqrt(static_cast<double>(L));
  CssState out(state.mode_count() + L - 1);
  for (const auto& b : state.branches()) {
    std::vector<cplx> amps;
    amps.reserve(out.mode_count());
    amps.insert(amps.end(), b.amps.begin(), b.amps.begin() + mode);
    amps.insert(amps.end(), L, b.amps[mode] * s);
    amps.insert(amps.end(), b.amps.begin() + mode + 1, b.amps.end());
    out.add_branch(b.coeff, std::move(amps));
  }
  return out;
}

/// Alice's linear-optics network. A_k is rotated by 2 pi k / M and mixed with
/// C_k; the outputs are then referenced to the C_k frame (a further -2 pi k / M
/// on both ports, invisible to photon counting) so that for entangled-state
/// branch q and input branch p
///   G_k = alpha (w^q - w^{p+k}) / sqrt(2L),   H_k = alpha (w^q + w^{p+k}) / sqrt(2L).
inline CssState alice_network(const CssState& joint, const TeleportConfig& cfg) {
  if (joint.mode_count() != 3) throw std::invalid_argument("alice_network: expected modes (C, A, B)");
  const int M = cfg.M;
  const int L = cfg.L();
  CssState s = dilute(joint, 0, L);  // (C_0..C_{L-1}, A, B)
  s = dilute(s, L, L);               // (C_0..C_{L-1}, A_0..A_{L-1}, B)
  for (int k = 0; k < L; ++k) {
    const int c = k;
    const int a = L + k;
    const double phi = 2.0 * pi * k / M;
    s = css::phase_shift(s, a, phi);
    s = css::beamsplitter(s, a, c);  // a <- (A + C)/sqrt2 = H_k, c <- (A - C)/sqrt2 = G_k
    s = css::phase_shift(s, c, -phi);
    s = css::phase_shift(s, a, -phi);
  }
  return s;
}

/// Full preparation: joint state through Alice's network.
inline CssState network_state(const TeleportConfig& cfg) {
  return alice_network(prepare_joint(cfg), cfg);
}

/// P(n) for n = 0..cap on one mode, normalized by the state's squared norm.
inline std::vector<double> number_distribution(const CssState& state, int mode, int cap) {
  state.check_mode(mode);
  const auto K = static_cast<Eigen::Index>(state.size());
  // Gram of the coefficients over every other mode.
  Eigen::MatrixXcd R(K, K);
  for (Eigen::Index b = 0; b < K; ++b) {
    for (Eigen::Index c = 0; c < K; ++c) {
      R(b, c) = std::conj(state[b].coeff) * state[c].coeff *
                std::exp(css::overlap_exponent(state[b].amps, state[c].amps, mode));
    }
  }
  const double total = css::norm2(state);
  std::vector<double> p(cap + 1, 0.0);
  if (!(total > 0.0)) return p;

  Eigen::VectorXcd a(K);
  for (Eigen::Index b = 0; b < K; ++b) a[b] = std::exp(-0.5 * std::norm(state[b].amps[mode]));
  for (int n = 0; n <= cap; ++n) {
    if (n > 0) {
      const double sn = 1.0 / std::sqrt(static_cast<double>(n));
      for (Eigen::Index b = 0; b < K; ++b) a[b] *= state[b].amps[mode] * sn;
    }
    p[n] = std::max(0.0, (a.adjoint() * R * a)(0, 0).real() / total);
  }
  return p;
}

/// Measures the first `measured` modes in turn by the chain rule, sampling each
/// count from its exact conditional distribution. The remaining modes form
/// Bob's unnormalized conditional state.
template <class Rng>
Measurement sample_counts(const CssState& state, int measured, Rng& rng,
                          std::optional<int> n_cap = std::nullopt) {
  if (measured < 0 || measured > state.mode_count()) {
    throw std::invalid_argument("sample_counts: bad measured-mode count");
  }
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Measurement out;
  out.counts.reserve(measured);
  CssState cur = state;
  const double start_norm = css::norm2(state);
  for (int i = 0; i < measured; ++i) {
    if (!(css::norm2(cur) > 0.0)) throw NumericalError("sample_counts: conditional state vanished");
    const int cap = n_cap ? *n_cap : css::measurement_cap(cur, 0);
    const auto p = number_distribution(cur, 0, cap);
    CompensatedSum mass;
    for (double x : p) mass.add(x);
    if (1.0 - mass.value() > residual_mass_tolerance) {
      throw NumericalError("sample_counts: probability mass " + std::to_string(1.0 - mass.value()) +
                           " beyond photon cutoff " + std::to_string(cap) + "; raise n_cap");
    }
    const double u = uniform(rng);
    int n = -1;
    double cum = 0.0;
    for (int k = 0; k <= cap; ++k) {
      if (p[k] <= 0.0) continue;
      cum += p[k];
      n = k;
      if (cum > u) break;
    }
    if (n < 0) throw NumericalError("sample_counts: empty distribution");
    out.counts.push_back(n);
    cur = css::prune(css::project_number(cur, 0, n), 0.0);
  }
  out.bob_state = start_norm > 0.0 ? cur.scaled(1.0 / std::sqrt(start_norm)) : cur;
  return out;
}

/// Success iff exactly one output is empty. Counts are ordered (G_0..G_{L-1}, H_0..H_{L-1}).
inline Classification classify(const std::vector<int>& counts) {
  if (counts.empty() || counts.size() % 2 != 0) {
    throw std::invalid_argument("classify: need an even, nonzero number of counts");
  }
  const int L = static_cast<int>(counts.size()) / 2;
  int empty = 0;
  int where = -1;
  int total = 0;
  for (int i = 0; i < static_cast<int>(counts.size()); ++i) {
    if (counts[i] < 0) throw std::invalid_argument("classify: negative count");
    if (counts[i] == 0) {
      ++empty;
      where = i;
    }
    total += counts[i];
  }
  if (empty == 0) return Failure{FailureReason::no_empty_mode};
  if (empty > 1) return Failure{FailureReason::multiple_empty_modes};
  if (where < L) return Success{Port::G, where, total};
  return Success{Port::H, where - L, total};
}

/// Rotation index s for Bob's correction exp(-2 pi i N s / M).
/// Empty H_m selects p + m = q + L (mod M), giving s = L - m; empty G_m selects
/// q = p + m, giving s = -m.
inline int correction_shift(const Success& s, int M) {
  const int L = M / 2;
  const int raw = s.port == Port::H ? L - s.m : -s.m;
  return ((raw % M) + M) % M;
}

/// exp(-2 pi i N shift / M): gamma -> gamma e^{-2 pi i shift / M}.
inline CssState apply_rotation(const CssState& bob, int shift, int M) {
  return css::phase_shift(bob, 0, -2.0 * pi * shift / M);
}

/// Correction after an empty H_m.
inline CssState bob_correct(const CssState& bob, int m, int M) {
  return apply_rotation(bob, M / 2 - m, M);
}

inline CssState bob_correct(const CssState& bob, const Success& s, int M) {
  return apply_rotation(bob, correction_shift(s, M), M);
}

/// Large-alpha conditional state after correction,
///   sum_q e^{i pi (q - s)^2 / M} e^{-2 pi i q N_tot / M} Q_q |alpha w^q>,
/// normalized. The remaining q-dependent phase is what a final (non-unitary at
/// finite alpha) phase operation would have to undo.
inline CssState residual_target(const TeleportConfig& cfg, int shift, int n_tot) {
  cfg.validate();
  const int M = cfg.M;
  CssState s(1);
  for (int q = 0; q < M; ++q) {
    if (cfg.Q[q] == cplx{}) continue;
    const long long d = q - shift;
    const double quad = static_cast<double>((d * d) % (2LL * M));
    const cplx phase = unit_phase(pi * quad / M) * root_power(M, static_cast<long long>(q) * n_tot);
    s.add_branch(phase * cfg.Q[q], {cfg.alpha * root_power(M, q)});
  }
  return css::normalized(s);
}

inline CssState residual_target(const TeleportConfig& cfg, const Success& s) {
  return residual_target(cfg, correction_shift(s, cfg.M), s.n_tot);
}

inline double fidelity(const CssState& x, const CssState& y) {
  const double nx = css::norm2(x);
  const double ny = css::norm2(y);
  if (!(nx > 0.0) || !(ny > 0.0)) throw std::domain_error("fidelity: zero-norm state");
  return std::norm(css::inner(x, y)) / (nx * ny);
}

/// Exact outcome-class probabilities over the first `measured` modes, by
/// inclusion-exclusion on P(all modes in S read zero).
inline ExactProbabilities exact_event_probabilities(const CssState& state, int measured) {
  if (measured < 1 || measured > max_exact_modes || measured > state.mode_count()) {
    throw std::invalid_argument("exact_event_probabilities: measured-mode count must be in [1, " +
                                std::to_string(max_exact_modes) + "]");
  }
  const double total = css::norm2(state);
  if (!(total > 0.0)) throw std::domain_error("exact_event_probabilities: zero-norm state");

  const unsigned full = (1u << measured) - 1u;
  std::vector<double> p_zero(full + 1);
  for (unsigned S = 0; S <= full; ++S) {
    CssState s = state;
    // Project from the highest index down so earlier indices stay valid.
    for (int k = measured - 1; k >= 0; --k) {
      if (S & (1u << k)) s = css::project_number(s, k, 0);
    }
    p_zero[S] = css::norm2(s) / total;
  }
  auto exactly = [&](unsigned T) {
    CompensatedSum acc;
    for (unsigned S = T;; S = (S + 1) | T) {
      const int extra = std::popcount(S) - std::popcount(T);
      acc.add(extra % 2 == 0 ? p_zero[S] : -p_zero[S]);
      if (S == full) break;
    }
    return std::clamp(acc.value(), 0.0, 1.0);
  };

  ExactProbabilities out;
  const int L = measured / 2;
  for (int x = 0; x < measured; ++x) {
    const double p = exactly(1u << x);
    out.success += p;
    if (x >= L) out.success_h_only += p;
  }
  out.no_empty = exactly(0u);
  out.all_empty = p_zero[full];
  out.multiple_empty = std::clamp(1.0 - out.success - out.no_empty, 0.0, 1.0);
  return out;
}

/// Per-trial generator: mt19937_64 seeded from (seed, trial) through seed_seq,
/// so trial streams are independent of scheduling.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

inline constexpr const char* rng_identity = "mt19937_64, per-trial seed_seq(seed_lo, seed_hi, trial_lo, trial_hi)";

inline bool counts_as_success(const Classification& c, bool h_only) {
  const auto* s = std::get_if<Success>(&c);
  return s && (!h_only || s->port == Port::H);
}

/// One protocol run on a precomputed network state.
inline TrialOutcome run_trial(const CssState& network, const TeleportConfig& cfg,
                              std::uint64_t trial) {
  auto rng = trial_rng(cfg.seed, trial);
  Measurement meas = sample_counts(network, cfg.M, rng, cfg.n_cap);
  TrialOutcome out;
  out.counts = std::move(meas.counts);
  out.classification = classify(out.counts);
  if (const auto* s = std::get_if<Success>(&out.classification)) {
    out.bob_state = bob_correct(meas.bob_state, *s, cfg.M);
    out.fidelity_vs_ideal = fidelity(out.bob_state, ideal_target(cfg));
    out.fidelity_vs_residual_target = fidelity(out.bob_state, residual_target(cfg, *s));
  } else {
    out.bob_state = std::move(meas.bob_state);
  }
  return out;
}

inline ProtocolStats run_trials(const TeleportConfig& cfg) {
  cfg.validate();
  const CssState network = network_state(cfg);
  ProtocolStats stats;
  stats.trials = cfg.trials;
  if (cfg.M <= max_exact_modes) stats.exact = exact_event_probabilities(network, cfg.M);
  if (cfg.trials == 0) return stats;

  const auto n = static_cast<std::size_t>(cfg.trials);
  std::vector<signed char> success(n, 0), success_h(n, 0);
  std::vector<double> f_ideal(n, 0.0), f_resid(n, 0.0);

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t t = w; t < n; t += workers) {
        const TrialOutcome o = run_trial(network, cfg, t);
        if (const auto* s = std::get_if<Success>(&o.classification)) {
          success_h[t] = s->port == Port::H;
          success[t] = counts_as_success(o.classification, cfg.h_only);
          f_ideal[t] = o.fidelity_vs_ideal;
          f_resid[t] = o.fidelity_vs_residual_target;
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Aggregate in trial order so results do not depend on the worker count.
  CompensatedSum fi, fi2, fr, fr2;
  for (std::size_t t = 0; t < n; ++t) {
    stats.successes_h += success_h[t];
    if (!success[t]) continue;
    ++stats.successes;
    fi.add(f_ideal[t]);
    fi2.add(f_ideal[t] * f_ideal[t]);
    fr.add(f_resid[t]);
    fr2.add(f_resid[t] * f_resid[t]);
  }
  const double N = static_cast<double>(n);
  stats.success_probability = stats.successes / N;
  stats.success_stderr =
      std::sqrt(stats.success_probability * (1.0 - stats.success_probability) / N);
  if (stats.successes > 0) {
    const double k = static_cast<double>(stats.successes);
    auto sem = [k](double s, double s2) {
      if (k < 2) return 0.0;
      const double var = std::max(0.0, (s2 - s * s / k) / (k - 1));
      return std::sqrt(var / k);
    };
    stats.mean_fidelity_ideal = fi.value() / k;
    stats.stderr_fidelity_ideal = sem(fi.value(), fi2.value());
    stats.mean_fidelity_residual = fr.value() / k;
    stats.stderr_fidelity_residual = sem(fr.value(), fr2.value());
  }
  return stats;
}

}  // namespace kerrcat::teleport
