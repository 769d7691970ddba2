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

// Multimode states written as finite superpositions of coherent-state
// products. Kerr evolution is exact here only at the revival times
// tau = pi/M, where one coherent state becomes M rotated copies.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kerrcat/common.hpp"
#include "kerrcat/fock.hpp"

namespace kerrcat::css {

struct CoherentBranch {
  cplx coeff;
  std::vector<cplx> amps;  // one coherent amplitude per mode
};

class CssState {
 public:
  /// Zero-mode, zero-branch state (the scalar 0).
  CssState() = default;
  explicit CssState(int mode_count) : mode_count_(mode_count) {
    if (mode_count < 0) throw std::invalid_argument("CssState: negative mode count");
  }

  static CssState vacuum(int mode_count) {
    CssState s(mode_count);
    s.add_branch(1.0, std::vector<cplx>(mode_count, cplx{}));
    return s;
  }

  static CssState coherent(std::vector<cplx> amps, cplx coeff = 1.0) {
    CssState s(static_cast<int>(amps.size()));
    s.add_branch(coeff, std::move(amps));
    return s;
  }

  static CssState scalar(cplx c) {
    CssState s(0);
    s.add_branch(c, {});
    return s;
  }

  int mode_count() const { return mode_count_; }
  std::size_t size() const { return branches_.size(); }
  bool empty() const { return branches_.empty(); }
  const std::vector<CoherentBranch>& branches() const { return branches_; }
  const CoherentBranch& operator[](std::size_t i) const { return branches_[i]; }

  void add_branch(cplx coeff, std::vector<cplx> amps) {
    if (static_cast<int>(amps.size()) != mode_count_) {
      throw std::invalid_argument("CssState: branch has " + std::to_string(amps.size()) +
                                  " amplitudes, state has " + std::to_string(mode_count_) +
                                  " modes");
    }
    for (const cplx& a : amps) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw std::invalid_argument("CssState: non-finite amplitude");
      }
    }
    if (!std::isfinite(coeff.real()) || !std::isfinite(coeff.imag())) {
      throw std::invalid_argument("CssState: non-finite coefficient");
    }
    branches_.push_back({coeff, std::move(amps)});
  }

  void check_mode(int mode) const {
    if (mode < 0 || mode >= mode_count_) {
      throw std::out_of_range("CssState: mode " + std::to_string(mode) + " out of range [0, " +
                              std::to_string(mode_count_) + ")");
    }
  }

  /// Scales every coefficient.
  CssState scaled(cplx factor) const {
    CssState out = *this;
    for (auto& b : out.branches_) b.coeff *= factor;
    return out;
  }

 private:
  int mode_count_ = 0;
  std::vector<CoherentBranch> branches_;
};

/// <g|d> for coherent states.
inline cplx overlap_coherent(cplx g, cplx d) {
  return std::exp(-0.5 * std::norm(g) - 0.5 * std::norm(d) + std::conj(g) * d);
}

/// Exponent of the product of overlaps over all modes, optionally skipping one.
inline cplx overlap_exponent(const std::vector<cplx>& x, const std::vector<cplx>& y,
                             int skip_mode = -1) {
  cplx e{};
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (static_cast<int>(k) == skip_mode) continue;
    e += -0.5 * std::norm(x[k]) - 0.5 * std::norm(y[k]) + std::conj(x[k]) * y[k];
  }
  return e;
}

inline cplx inner(const CssState& x, const CssState& y) {
  if (x.mode_count() != y.mode_count()) {
    throw std::invalid_argument("css::inner: mode-count mismatch");
  }
  cplx acc{};
  for (const auto& b : x.branches()) {
    for (const auto& c : y.branches()) {
      acc += std::conj(b.coeff) * c.coeff * std::exp(overlap_exponent(b.amps, c.amps));
    }
  }
  return acc;
}

inline constexpr double negative_norm_slack = 1e-10;

/// Squared norm from Gram sums; rounding negatives within the slack clamp to 0.
inline double norm2(const CssState& s) {
  const double n = inner(s, s).real();
  if (n >= 0.0) return n;
  if (n >= -negative_norm_slack) return 0.0;
  throw NumericalError("css::norm2: negative squared norm " + std::to_string(n));
}

inline CssState normalized(const CssState& s) {
  const double n = norm2(s);
  if (!(n > 0.0)) throw std::domain_error("css::normalized: zero-norm state");
  return s.scaled(1.0 / std::sqrt(n));
}

// ---------------------------------------------------------------------------
// Revival coefficients

enum class Parity { odd, even };

/// Expansion of U(pi/M) over the phase rotations exp(-2 pi i q N / M).
struct RevivalCoeffs {
  int M = 0;
  Parity parity = Parity::even;
  std::vector<cplx> f;
};

inline Parity parity_of(int M) { return M % 2 == 0 ? Parity::even : Parity::odd; }

/// Photon-number phase that the expansion reproduces for a given parity:
/// exp(-i pi n(n-1)/M) for odd M, exp(-i pi n^2/M) for even M.
inline cplx revival_phase(int M, long long n) {
  // Reduce the quadratic exponent modulo 2M so the phase stays exact for large n.
  const long long q = (M % 2 == 0) ? n * n : n * (n - 1);
  const long long r = q % (2LL * M);
  return unit_phase(-pi * static_cast<double>(r) / M);
}

inline RevivalCoeffs fq_closed(int M) {
  if (M < 2) throw std::invalid_argument("fq_closed: M must be >= 2");
  RevivalCoeffs out{M, parity_of(M), std::vector<cplx>(M)};
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(M));
  if (out.parity == Parity::odd) {
    const long long K = (M - 1) / 2;
    // The i^K factor fixes the global phase so that the expansion equals
    // exp(-i pi N(N-1)/M) exactly, not just up to a constant.
    const cplx global = unit_phase(-pi * static_cast<double>(K * (K + 1) % (2LL * M)) / M) *
                        unit_phase(0.5 * pi * static_cast<double>(K % 4));
    for (long long q = 0; q < M; ++q) {
      out.f[q] = inv_sqrt * unit_phase(pi * static_cast<double>(q * (q + 1) % (2LL * M)) / M) *
                 global;
    }
  } else {
    const cplx global = unit_phase(-0.25 * pi);
    for (long long q = 0; q < M; ++q) {
      out.f[q] = inv_sqrt * unit_phase(pi * static_cast<double>(q * q % (2LL * M)) / M) * global;
    }
  }
  return out;
}

/// Brute-force inverse DFT of the revival phase sequence.
inline RevivalCoeffs fq_dft(int M) {
  if (M < 2) throw std::invalid_argument("fq_dft: M must be >= 2");
  RevivalCoeffs out{M, parity_of(M), std::vector<cplx>(M)};
  for (long long q = 0; q < M; ++q) {
    cplx acc{};
    for (long long n = 0; n < M; ++n) {
      acc += revival_phase(M, n) * unit_phase(2.0 * pi * static_cast<double>(q * n % M) / M);
    }
    out.f[q] = acc / static_cast<double>(M);
  }
  return out;
}

/// Angle of the q-th rotated copy produced by U(pi/M) acting on |gamma>.
/// Odd M: -2 pi q / M. Even M: pi (1 - 2q) / M.
inline double revival_angle(int M, int q) {
  if (M % 2 == 1) return -2.0 * pi * q / M;
  return pi * (1.0 - 2.0 * q) / M;
}

/// Applies exp(-i (pi/M) N(N-1)) to one mode.
inline CssState kerr_fractional(const CssState& state, int mode, int M) {
  state.check_mode(mode);
  const RevivalCoeffs rc = fq_closed(M);
  std::vector<cplx> rot(M);
  for (int q = 0; q < M; ++q) rot[q] = unit_phase(revival_angle(M, q));
  CssState out(state.mode_count());
  for (const auto& b : state.branches()) {
    for (int q = 0; q < M; ++q) {
      auto amps = b.amps;
      amps[mode] *= rot[q];
      out.add_branch(b.coeff * rc.f[q], std::move(amps));
    }
  }
  return out;
}

/// 50/50 beamsplitter: (g_i, g_j) -> ((g_i + g_j)/sqrt2, (g_i - g_j)/sqrt2).
inline CssState beamsplitter(const CssState& state, int i, int j) {
  state.check_mode(i);
  state.check_mode(j);
  if (i == j) throw std::invalid_argument("beamsplitter: modes must differ");
  const double s = 1.0 / std::sqrt(2.0);
  CssState out(state.mode_count());
  for (const auto& b : state.branches()) {
    auto amps = b.amps;
    amps[i] = (b.amps[i] + b.amps[j]) * s;
    amps[j] = (b.amps[i] - b.amps[j]) * s;
    out.add_branch(b.coeff, std::move(amps));
  }
  return out;
}

inline CssState phase_shift(const CssState& state, int mode, double phi) {
  state.check_mode(mode);
  const cplx ph = unit_phase(phi);
  CssState out(state.mode_count());
  for (const auto& b : state.branches()) {
    auto amps = b.amps;
    amps[mode] *= ph;
    out.add_branch(b.coeff, std::move(amps));
  }
  return out;
}

/// Projects `mode` onto |n> and removes it. The result is unnormalized; its
/// squared norm over the input's is the outcome probability.
inline CssState project_number(const CssState& state, int mode, int n) {
  state.check_mode(mode);
  if (n < 0) throw std::invalid_argument("project_number: n must be >= 0");
  CssState out(state.mode_count() - 1);
  for (const auto& b : state.branches()) {
    std::vector<cplx> amps;
    amps.reserve(b.amps.size() - 1);
    for (int k = 0; k < state.mode_count(); ++k) {
      if (k != mode) amps.push_back(b.amps[k]);
    }
    out.add_branch(b.coeff * number_amplitude(b.amps[mode], n), std::move(amps));
  }
  return out;
}

/// Tensor product; modes of x come first.
inline CssState tensor(const CssState& x, const CssState& y) {
  CssState out(x.mode_count() + y.mode_count());
  for (const auto& b : x.branches()) {
    for (const auto& c : y.branches()) {
      auto amps = b.amps;
      amps.insert(amps.end(), c.amps.begin(), c.amps.end());
      out.add_branch(b.coeff * c.coeff, std::move(amps));
    }
  }
  return out;
}

/// Reorders modes: output mode k is input mode order[k].
inline CssState permute_modes(const CssState& state, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != state.mode_count()) {
    throw std::invalid_argument("permute_modes: order has wrong length");
  }
  std::vector<int> seen(order.size(), 0);
  for (int k : order) {
    state.check_mode(k);
    if (seen[k]++) throw std::invalid_argument("permute_modes: repeated mode");
  }
  CssState out(state.mode_count());
  for (const auto& b : state.branches()) {
    std::vector<cplx> amps(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) amps[k] = b.amps[order[k]];
    out.add_branch(b.coeff, std::move(amps));
  }
  return out;
}

/// Largest |gamma| on a mode across branches.
inline double max_amplitude(const CssState& state, int mode) {
  state.check_mode(mode);
  double g = 0.0;
  for (const auto& b : state.branches()) g = std::max(g, std::abs(b.amps[mode]));
  return g;
}

/// Photon-count cutoff for measuring a mode, ceil(g^2 + 8g + 10).
inline int measurement_cap(const CssState& state, int mode) {
  const double g = max_amplitude(state, mode);
  return static_cast<int>(std::ceil(g * g + 8.0 * g + 10.0));
}

inline constexpr double merge_tolerance = 1e-12;

/// Merges branches whose amplitudes agree within 1e-12 componentwise and drops
/// branches with |coeff| < tol (exact zeros are always dropped).
inline CssState prune(const CssState& state, double tol = 0.0) {
  if (tol < 0.0) throw std::invalid_argument("prune: tol must be >= 0");
  std::vector<CoherentBranch> merged;
  for (const auto& b : state.branches()) {
    auto same = [&](const CoherentBranch& m) {
      for (std::size_t k = 0; k < b.amps.size(); ++k) {
        if (std::abs(m.amps[k] - b.amps[k]) > merge_tolerance) return false;
      }
      return true;
    };
    auto it = std::find_if(merged.begin(), merged.end(), same);
    if (it == merged.end()) {
      merged.push_back(b);
    } else {
      it->coeff += b.coeff;
    }
  }
  CssState out(state.mode_count());
  for (auto& m : merged) {
    if (m.coeff == cplx{} || std::abs(m.coeff) < tol) continue;
    out.add_branch(m.coeff, std::move(m.amps));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bridge to the number basis

inline fock::FockVec to_fock(const CssState& state, int cutoff,
                             double leakage_tolerance = fock::default_leakage_tolerance) {
  if (state.mode_count() != 1) throw std::invalid_argument("to_fock: expected one mode");
  fock::FockVec out;
  out.amps = Eigen::VectorXcd::Zero(cutoff + 1);
  for (const auto& b : state.branches()) {
    out.amps += b.coeff * fock::coherent_fock(b.amps[0], cutoff).amps;
  }
  const double n = state.empty() ? 0.0 : norm2(state);
  out.leakage = n > 0.0 ? std::max(0.0, 1.0 - out.norm2() / n) : 0.0;
  out.status = fock::classify_leakage(out.leakage, leakage_tolerance);
  return out;
}

inline fock::FockMat to_fock(const CssState& state, int cutoff_a, int cutoff_b,
                             double leakage_tolerance = fock::default_leakage_tolerance) {
  if (state.mode_count() != 2) throw std::invalid_argument("to_fock: expected two modes");
  fock::FockMat out;
  out.amps = Eigen::MatrixXcd::Zero(cutoff_a + 1, cutoff_b + 1);
  for (const auto& b : state.branches()) {
    const auto va = fock::coherent_fock(b.amps[0], cutoff_a).amps;
    const auto vb = fock::coherent_fock(b.amps[1], cutoff_b).amps;
    out.amps += b.coeff * (va * vb.transpose());
  }
  const double n = state.empty() ? 0.0 : norm2(state);
  out.leakage = n > 0.0 ? std::max(0.0, 1.0 - out.norm2() / n) : 0.0;
  out.status = fock::classify_leakage(out.leakage, leakage_tolerance);
  return out;
}

}  // namespace kerrcat::css
