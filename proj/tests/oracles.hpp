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

// Test-only reference computations. Nothing here calls into the library's
// evolution, projection or spectrum code; the point is to check those paths
// against independent constructions.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace kerrcat::oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

inline double poisson_pmf(double lambda, int n) {
  return std::exp(-lambda + n * std::log(lambda) - std::lgamma(n + 1.0));
}

/// Coherent amplitudes by the direct formula (small cutoffs only).
inline Eigen::VectorXcd coherent_direct(cplx beta, int cutoff) {
  Eigen::VectorXcd v(cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) {
    v[n] = std::exp(-0.5 * std::norm(beta)) * std::pow(beta, n) / std::sqrt(std::tgamma(n + 1.0));
  }
  return v;
}

/// Annihilation operator on one truncated mode.
inline Eigen::MatrixXcd annihilation(int cutoff) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// exp(theta (a^dag b - b^dag a)) on two truncated modes, index n_A * (c+1) + n_B.
/// Exact on every state whose total photon number is <= cutoff.
inline Eigen::MatrixXcd beamsplitter_expm(double theta, int cutoff) {
  const Eigen::MatrixXcd a1 = annihilation(cutoff);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(cutoff + 1, cutoff + 1);
  const int d = (cutoff + 1) * (cutoff + 1);
  Eigen::MatrixXcd a(d, d), b(d, d);
  for (int i = 0; i <= cutoff; ++i) {
    for (int j = 0; j <= cutoff; ++j) {
      for (int k = 0; k <= cutoff; ++k) {
        for (int l = 0; l <= cutoff; ++l) {
          a(i * (cutoff + 1) + k, j * (cutoff + 1) + l) = a1(i, j) * id(k, l);
          b(i * (cutoff + 1) + k, j * (cutoff + 1) + l) = id(i, j) * a1(k, l);
        }
      }
    }
  }
  const Eigen::MatrixXcd gen = theta * (a.adjoint() * b - b.adjoint() * a);
  return gen.exp();
}

/// Revival coefficients straight from the defining Fourier sum.
inline std::vector<cplx> revival_coeffs(int M) {
  std::vector<cplx> f(M);
  for (int q = 0; q < M; ++q) {
    cplx acc = 0.0;
    for (int n = 0; n < M; ++n) {
      const double quad = (M % 2 == 0) ? double(n) * n : double(n) * (n - 1);
      acc += std::exp(cplx(0.0, -pi * quad / M + 2.0 * pi * q * n / M));
    }
    f[q] = acc / double(M);
  }
  return f;
}

/// sum_q f_q |alpha w^q>|alpha w^q> in the number basis, w = e^{-2 pi i/M}.
inline Eigen::MatrixXcd ecs_fock(int M, cplx alpha, int cutoff) {
  const auto f = revival_coeffs(M);
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int q = 0; q < M; ++q) {
    const cplx g = alpha * std::exp(cplx(0.0, -2.0 * pi * q / M));
    Eigen::VectorXcd v(cutoff + 1);
    v[0] = std::exp(-0.5 * std::norm(g));
    for (int n = 1; n <= cutoff; ++n) v[n] = v[n - 1] * g / std::sqrt(double(n));
    psi += f[q] * v * v.transpose();
  }
  return psi;
}

/// Schmidt spectrum (squared singular values, normalized, descending).
inline std::vector<double> schmidt_spectrum(const Eigen::MatrixXcd& psi) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(psi);
  const Eigen::VectorXd s = svd.singularValues();
  const double tot = s.squaredNorm();
  std::vector<double> out;
  for (Eigen::Index i = 0; i < s.size(); ++i) out.push_back(s[i] * s[i] / tot);
  return out;
}

inline double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

/// Two-branch entangled coherent state f_0|u>|u> + f_1|v>|v> with |f| = 1/sqrt2 and
/// <u|v> = s real: lambda = (1 +- sqrt(1 - (1 - s^2)^2)) / 2.
inline std::pair<double, double> two_branch_eigenvalues(double alpha_sq) {
  const double s = std::exp(-2.0 * alpha_sq);
  const double r = std::sqrt(1.0 - (1.0 - s * s) * (1.0 - s * s));
  return {(1.0 + r) / 2.0, (1.0 - r) / 2.0};
}

/// <alpha w^q | alpha w^r> for w = e^{-2 pi i/M}.
inline cplx ring_overlap(double alpha_sq, int M, int q, int r) {
  const cplx w = std::exp(cplx(0.0, -2.0 * pi * (r - q) / M));
  return std::exp(alpha_sq * (w - 1.0));
}

/// M = 2 protocol: every branch puts 2|alpha|^2 photons on average into the
/// two outputs, so P(both outputs empty) = e^{-2|a|^2} |sum Q~|^2 ||sum_q f_q|a w^q>||^2,
/// with Q~ the Gram-normalized input coefficients. Real alpha only.
inline double m2_all_empty_probability(double alpha, std::vector<cplx> Q) {
  const double a2 = alpha * alpha;
  const auto f = revival_coeffs(2);
  cplx qn = 0.0, fn = 0.0, qs = 0.0;
  for (int p = 0; p < 2; ++p) {
    qs += Q[p];
    for (int r = 0; r < 2; ++r) {
      qn += std::conj(Q[p]) * Q[r] * ring_overlap(a2, 2, p, r);
      fn += std::conj(f[p]) * f[r] * ring_overlap(a2, 2, p, r);
    }
  }
  return std::exp(-2.0 * a2) * std::norm(qs) / qn.real() * fn.real();
}

/// Random amplitude with modulus below rmax.
inline cplx random_amplitude(std::mt19937_64& rng, double rmax) {
  std::uniform_real_distribution<double> r(0.0, rmax), t(0.0, 2.0 * pi);
  return std::polar(r(rng), t(rng));
}

}  // namespace kerrcat::oracle
