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

// Reduced-state spectra and von Neumann entropy (in ebits) of two-mode
// entangled coherent states, by Gram matrices on the branch representation
// and by direct diagonalization in the number basis.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kerrcat/common.hpp"
#include "kerrcat/css.hpp"
#include "kerrcat/fock.hpp"
#include "kerrcat/table.hpp"

namespace kerrcat::entanglement {

using css::CssState;

/// Eigenvalues (descending, clipped and normalized) and their entropy.
struct SpectrumResult {
  std::vector<double> eigenvalues;
  double entropy_ebits = 0.0;
};

struct Partition {
  std::vector<int> side_a;
  std::vector<int> side_b;

  /// Modes in `a` on side A, all others on side B.
  static Partition split(int mode_count, std::vector<int> a) {
    Partition p;
    p.side_a = std::move(a);
    for (int k = 0; k < mode_count; ++k) {
      if (std::find(p.side_a.begin(), p.side_a.end(), k) == p.side_a.end()) p.side_b.push_back(k);
    }
    p.validate(mode_count);
    return p;
  }

  void validate(int mode_count) const {
    std::vector<int> seen(mode_count, 0);
    for (const auto* side : {&side_a, &side_b}) {
      for (int k : *side) {
        if (k < 0 || k >= mode_count) throw std::out_of_range("Partition: mode out of range");
        if (seen[k]++) throw std::invalid_argument("Partition: sides overlap");
      }
    }
    for (int s : seen) {
      if (!s) throw std::invalid_argument("Partition: sides do not cover every mode");
    }
  }
};

inline constexpr double eigenvalue_clip = 1e-9;
inline constexpr double eigenvalue_imag_tolerance = 1e-8;

/// Clips eigenvalues in [-1e-9, 0) to zero, normalizes, sorts descending and
/// sums -lambda log2 lambda with 0 log 0 = 0.
inline SpectrumResult spectrum_from_eigenvalues(std::vector<double> ev) {
  double sum = 0.0;
  for (double& x : ev) {
    if (x < -eigenvalue_clip) {
      throw NumericalError("spectrum: eigenvalue " + std::to_string(x) + " below clip threshold");
    }
    x = std::max(x, 0.0);
    sum += x;
  }
  if (!(sum > 0.0)) throw NumericalError("spectrum: eigenvalues sum to zero");
  for (double& x : ev) x /= sum;
  std::sort(ev.begin(), ev.end(), std::greater<>());
  CompensatedSum h;
  for (double x : ev) {
    if (x > 0.0) h.add(-x * std::log2(x));
  }
  return {std::move(ev), std::max(0.0, h.value())};
}

/// M-branch entangled coherent state amplitude: beta/sqrt2 for odd M,
/// beta e^{i pi/M}/sqrt2 for even M.
inline cplx ecs_alpha(int M, cplx beta) {
  const cplx a = beta / std::sqrt(2.0);
  return M % 2 == 0 ? a * unit_phase(pi / M) : a;
}

/// |beta>|0> evolved under the Kerr revival U(pi/M) on mode 0 and then the
/// 50/50 beamsplitter.
inline CssState generate_ecs(int M, cplx beta) {
  auto s = CssState::coherent({beta, cplx{}});
  s = css::kerr_fractional(s, 0, M);
  return css::beamsplitter(s, 0, 1);
}

/// sum_q f_q |alpha w^q>|alpha w^q> with w = e^{-2 pi i/M}.
inline CssState analytic_ecs(int M, cplx alpha) {
  const auto rc = css::fq_closed(M);
  CssState s(2);
  for (int q = 0; q < M; ++q) {
    const cplx a = alpha * unit_phase(-2.0 * pi * q / M);
    s.add_branch(rc.f[q], {a, a});
  }
  return s;
}

/// Reduced-state spectrum on side A of a branch state. With branches
/// c_q |u_q>|v_q>, the nonzero eigenvalues of rho_A are those of
/// T = diag(c) V^T diag(conj c) U / norm^2, U and V being the side Gram matrices.
inline SpectrumResult gram_spectrum(const CssState& input, const Partition& part) {
  part.validate(input.mode_count());
  const CssState state = css::prune(input, 0.0);
  const auto K = static_cast<Eigen::Index>(state.size());
  if (K == 0) throw std::domain_error("gram_spectrum: zero state");

  auto side_gram = [&](const std::vector<int>& modes) {
    Eigen::MatrixXcd G(K, K);
    for (Eigen::Index p = 0; p < K; ++p) {
      for (Eigen::Index k = 0; k < K; ++k) {
        cplx e{};
        for (int m : modes) {
          const cplx x = state[p].amps[m];
          const cplx y = state[k].amps[m];
          e += -0.5 * std::norm(x) - 0.5 * std::norm(y) + std::conj(x) * y;
        }
        G(p, k) = std::exp(e);
      }
    }
    return G;
  };
  const Eigen::MatrixXcd U = side_gram(part.side_a);
  const Eigen::MatrixXcd V = side_gram(part.side_b);

  Eigen::VectorXcd c(K);
  for (Eigen::Index q = 0; q < K; ++q) c[q] = state[q].coeff;

  const double n2 = (c.adjoint() * U.cwiseProduct(V) * c)(0, 0).real();
  if (!(n2 > 0.0)) throw std::domain_error("gram_spectrum: zero-norm state");

  const Eigen::MatrixXcd T =
      c.asDiagonal() * V.transpose() * c.conjugate().asDiagonal() * U / n2;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(T, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("gram_spectrum: eigensolver failed");

  std::vector<double> ev;
  ev.reserve(K);
  for (Eigen::Index i = 0; i < K; ++i) {
    const cplx lam = solver.eigenvalues()[i];
    if (std::abs(lam.imag()) > eigenvalue_imag_tolerance) {
      throw NumericalError("gram_spectrum: eigenvalue with imaginary part " +
                           std::to_string(lam.imag()));
    }
    ev.push_back(lam.real());
  }
  return spectrum_from_eigenvalues(std::move(ev));
}

/// Two-mode convenience: mode 0 against mode 1.
inline SpectrumResult gram_spectrum(const CssState& state) {
  return gram_spectrum(state, Partition::split(state.mode_count(), {0}));
}

inline SpectrumResult fock_spectrum(const fock::FockMat& state) {
  const Eigen::MatrixXcd rho = fock::reduced_density_a(state);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("fock_spectrum: eigensolver failed");
  const Eigen::VectorXd& v = solver.eigenvalues();
  return spectrum_from_eigenvalues(std::vector<double>(v.data(), v.data() + v.size()));
}

/// Entanglement of the M-branch state whose per-mode amplitude has |alpha|^2 = alpha_sq.
inline double ecs_entropy(int M, double alpha_sq) {
  const double beta = std::sqrt(2.0 * alpha_sq);
  return gram_spectrum(generate_ecs(M, beta)).entropy_ebits;
}

/// Entropy at tau = pi/M for every (|alpha|^2, M) pair, ordered by |alpha|^2 then M.
inline SweepTable entropy_sweep(const std::vector<double>& alpha_sq_list,
                                const std::vector<int>& M_list) {
  for (int M : M_list) {
    if (M < 2) throw std::invalid_argument("entropy_sweep: M must be >= 2");
  }
  for (double a : alpha_sq_list) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("entropy_sweep: |alpha|^2 must be finite and >= 0");
    }
  }
  SweepTable t({"alpha_sq", "M", "tau_over_pi", "entropy_ebits", "log2M_reference"});
  for (double a : alpha_sq_list) {
    for (int M : M_list) {
      t.add_row({a, static_cast<double>(M), 1.0 / M, ecs_entropy(M, a), std::log2(M)});
    }
  }
  return t;
}

}  // namespace kerrcat::entanglement
