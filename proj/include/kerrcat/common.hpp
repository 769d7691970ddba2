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

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#ifndef KERRCAT_VERSION
#define KERRCAT_VERSION "0.1.0"
#endif

namespace kerrcat {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx imag_unit{0.0, 1.0};

inline constexpr const char* version = KERRCAT_VERSION;

/// Raised when a computation cannot meet its numerical tolerance
/// (truncation leakage, non-real spectra, residual sampling mass).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// e^{i theta}
inline cplx unit_phase(double theta) { return std::polar(1.0, theta); }

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

/// Number-state amplitude of a coherent state, <n|gamma> = e^{-|g|^2/2} g^n / sqrt(n!).
/// Evaluated in log space so it stays finite for large n.
inline cplx number_amplitude(cplx gamma, int n) {
  const double r = std::abs(gamma);
  if (r == 0.0) return n == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
  const double log_mag = -0.5 * r * r + n * std::log(r) - 0.5 * log_factorial(n);
  return std::polar(std::exp(log_mag), n * std::arg(gamma));
}

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace kerrcat
