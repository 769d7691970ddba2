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

// Truncated photon-number-basis representation of one and two bosonic modes.
// Used as the exact reference for the coherent-branch backend and for
// entanglement at small amplitude.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "kerrcat/common.hpp"

namespace kerrcat::fock {

inline constexpr double default_leakage_tolerance = 1e-12;

enum class Truncation { ok, leaky };

/// Single-mode amplitudes indexed by photon number 0..cutoff.
struct FockVec {
  Eigen::VectorXcd amps;
  double leakage = 0.0;
  Truncation status = Truncation::ok;

  int cutoff() const { return static_cast<int>(amps.size()) - 1; }
  double norm2() const { return amps.squaredNorm(); }
};

/// Two-mode amplitudes indexed by (n_A, n_B).
struct FockMat {
  Eigen::MatrixXcd amps;
  double leakage = 0.0;
  Truncation status = Truncation::ok;

  int cutoff_a() const { return static_cast<int>(amps.rows()) - 1; }
  int cutoff_b() const { return static_cast<int>(amps.cols()) - 1; }
  double norm2() const { return amps.squaredNorm(); }
};

/// Dimensionless Kerr interaction time tau = chi * t.
struct KerrParams {
  double tau = 0.0;
};

inline Truncation classify_leakage(double leakage, double tolerance) {
  return leakage > tolerance ? Truncation::leaky : Truncation::ok;
}

/// Photon-number cutoff that keeps Poisson tail leakage below 1e-12 for |beta|^2 <= 16.
inline int default_cutoff(cplx beta) {
  const double n = std::norm(beta);
  return static_cast<int>(std::ceil(n + 10.0 * std::sqrt(std::max(n, 1.0)) + 20.0));
}

inline FockVec coherent_fock(cplx beta, int cutoff,
                             double leakage_tolerance = default_leakage_tolerance) {
  if (cutoff < 0) throw std::invalid_argument("coherent_fock: cutoff must be >= 0");
  FockVec out;
  out.amps.resize(cutoff + 1);
  out.amps[0] = std::exp(-0.5 * std::norm(beta));
  for (int n = 1; n <= cutoff; ++n) {
    out.amps[n] = out.amps[n - 1] * beta / std::sqrt(static_cast<double>(n));
  }
  out.leakage = std::max(0.0, 1.0 - out.norm2());
  out.status = classify_leakage(out.leakage, leakage_tolerance);
  return out;
}

/// Applies exp(-i tau N(N-1)).
inline FockVec kerr_evolve(FockVec state, KerrParams p) {
  for (int n = 0; n <= state.cutoff(); ++n) {
    const double nn = static_cast<double>(n) * (n - 1);
    state.amps[n] *= unit_phase(-p.tau * nn);
  }
  return state;
}

/// sqrt(C(n, k)) 2^{-n/2}, accumulated in log space.
inline double split_weight(int n, int k) {
  const double log_binom = log_factorial(n) - log_factorial(k) - log_factorial(n - k);
  return std::exp(0.5 * log_binom - 0.5 * n * std::log(2.0));
}

/// 50/50 beamsplitter with the second port in vacuum:
/// |n>|0> -> 2^{-n/2} sum_k sqrt(C(n,k)) |k>|n-k>, so |b>|0> -> |b/sqrt2>|b/sqrt2>.
inline FockMat split_with_vacuum(const FockVec& state) {
  const int c = state.cutoff();
  FockMat out;
  out.amps = Eigen::MatrixXcd::Zero(c + 1, c + 1);
  for (int n = 0; n <= c; ++n) {
    const cplx a = state.amps[n];
    if (a == cplx{}) continue;
    for (int k = 0; k <= n; ++k) out.amps(k, n - k) += a * split_weight(n, k);
  }
  out.leakage = state.leakage;
  out.status = state.status;
  return out;
}

inline FockMat product(const FockVec& a, const FockVec& b) {
  FockMat out;
  out.amps = a.amps * b.amps.transpose();
  out.leakage = std::max(0.0, 1.0 - out.norm2());
  out.status = std::max(a.status, b.status);
  return out;
}

inline Eigen::MatrixXcd reduced_density_a(const FockMat& state) {
  const double n2 = state.norm2();
  if (!(n2 > 0.0)) throw std::domain_error("reduced_density_a: zero-norm state");
  Eigen::MatrixXcd rho = state.amps * state.amps.adjoint() / n2;
  // Symmetrize away rounding so downstream Hermitian solvers see an exact Hermitian input.
  return 0.5 * (rho + rho.adjoint());
}

/// P[N] for N = n_A + n_B, normalized by the state norm.
inline std::vector<double> total_number_distribution(const FockMat& state) {
  const double n2 = state.norm2();
  std::vector<double> p(state.amps.rows() + state.amps.cols() - 1, 0.0);
  if (!(n2 > 0.0)) return p;
  for (Eigen::Index a = 0; a < state.amps.rows(); ++a) {
    for (Eigen::Index b = 0; b < state.amps.cols(); ++b) {
      p[a + b] += std::norm(state.amps(a, b));
    }
  }
  for (double& x : p) x /= n2;
  return p;
}

/// Coherent |beta> in mode A, vacuum in mode B, with matching cutoffs.
inline FockMat initial_product(cplx beta, int cutoff) {
  return product(coherent_fock(beta, cutoff), coherent_fock(0.0, cutoff));
}

/// Kerr evolution of |beta> for time tau followed by the vacuum beamsplitter.
inline FockMat pipeline(cplx beta, double tau, int cutoff) {
  return split_with_vacuum(kerr_evolve(coherent_fock(beta, cutoff), {tau}));
}

inline cplx inner(const FockMat& x, const FockMat& y) {
  if (x.amps.rows() != y.amps.rows() || x.amps.cols() != y.amps.cols()) {
    throw std::invalid_argument("fock::inner: shape mismatch");
  }
  return (x.amps.conjugate().cwiseProduct(y.amps)).sum();
}

inline double fidelity(const FockMat& x, const FockMat& y) {
  const double nx = x.norm2();
  const double ny = y.norm2();
  if (!(nx > 0.0) || !(ny > 0.0)) throw std::domain_error("fock::fidelity: zero-norm state");
  return std::norm(inner(x, y)) / (nx * ny);
}

}  // namespace kerrcat::fock
