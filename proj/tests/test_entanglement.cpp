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

#include "kerrcat/entanglement.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"

using namespace kerrcat;
using namespace kerrcat::entanglement;
using kerrcat::css::CssState;

namespace {

double state_fidelity(const CssState& x, const CssState& y) {
  return std::norm(css::inner(x, y)) / (css::norm2(x) * css::norm2(y));
}

}  // namespace

TEST(GenerateEcs, matches_analytic_form) {
  for (int M = 2; M <= 12; ++M) {
    for (cplx beta : {cplx(std::sqrt(2.0)), std::polar(3.0, 0.4), cplx(0.2, -0.1)}) {
      const auto g = generate_ecs(M, beta);
      const auto a = analytic_ecs(M, ecs_alpha(M, beta));
      EXPECT_GT(state_fidelity(g, a), 1.0 - 1e-12) << "M=" << M;
      // Same phase too: the branch sets coincide term by term.
      EXPECT_NEAR(std::abs(css::inner(a, g) - 1.0), 0.0, 1e-10);
    }
  }
}

TEST(GenerateEcs, two_branch_amplitudes) {
  // beta = sqrt2, M = 2: branches at i and -i, i.e. alpha = e^{i pi/2} and w = -1.
  const auto g = generate_ecs(2, std::sqrt(2.0));
  ASSERT_EQ(g.size(), 2u);
  EXPECT_NEAR(std::abs(g[0].amps[0] - imag_unit), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g[0].amps[1] - imag_unit), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g[1].amps[0] + imag_unit), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ecs_alpha(2, std::sqrt(2.0)) - imag_unit), 0.0, 1e-15);
}

TEST(GenerateEcs, odd_M_branches_have_equal_weight) {
  const auto g = generate_ecs(3, std::polar(1.4, 0.2));
  ASSERT_EQ(g.size(), 3u);
  for (const auto& b : g.branches()) EXPECT_NEAR(std::abs(b.coeff), 1.0 / std::sqrt(3.0), 1e-15);
}

TEST(GenerateEcs, vacuum_input_gives_vacuum) {
  for (int M : {2, 3, 7}) {
    const auto g = generate_ecs(M, 0.0);
    const auto p = css::prune(g);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_NEAR(std::abs(p[0].coeff - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(gram_spectrum(g).entropy_ebits, 0.0, 1e-12);
  }
}

TEST(GramSpectrum, product_state) {
  const auto r = gram_spectrum(CssState::coherent({1.0, cplx(0, 2.0)}));
  ASSERT_EQ(r.eigenvalues.size(), 1u);
  EXPECT_NEAR(r.eigenvalues[0], 1.0, 1e-15);
  EXPECT_NEAR(r.entropy_ebits, 0.0, 1e-15);
}

TEST(GramSpectrum, two_branch_closed_form) {
  const auto r = gram_spectrum(generate_ecs(2, std::sqrt(2.0)));
  const auto [lp, lm] = oracle::two_branch_eigenvalues(1.0);
  ASSERT_EQ(r.eigenvalues.size(), 2u);
  EXPECT_NEAR(r.eigenvalues[0], lp, 1e-12);
  EXPECT_NEAR(r.eigenvalues[1], lm, 1e-12);
  EXPECT_NEAR(r.eigenvalues[0], 0.59526, 1e-5);
  EXPECT_NEAR(r.eigenvalues[1], 0.40474, 1e-5);
  EXPECT_NEAR(r.entropy_ebits, oracle::entropy_bits({lp, lm}), 1e-12);
  EXPECT_NEAR(r.entropy_ebits, 0.9736574, 1e-6);
}

TEST(GramSpectrum, large_amplitude_reaches_log2M) {
  const int M = 4;
  const double alpha = 4.0 * M;
  const auto r = gram_spectrum(analytic_ecs(M, alpha));
  EXPECT_NEAR(r.entropy_ebits, 2.0, 1e-3);
}

TEST(GramSpectrum, agrees_with_number_basis_schmidt_spectrum) {
  for (int M = 2; M <= 8; ++M) {
    for (double nb : {0.5, 2.0, 6.0, 10.0}) {
      const cplx beta = std::polar(std::sqrt(nb), 0.25);
      const auto g = gram_spectrum(generate_ecs(M, beta));
      const int c = fock::default_cutoff(beta);
      const auto ref = oracle::schmidt_spectrum(oracle::ecs_fock(M, ecs_alpha(M, beta), c));
      for (std::size_t i = 0; i < g.eigenvalues.size(); ++i) {
        EXPECT_NEAR(g.eigenvalues[i], ref[i], 1e-6) << "M=" << M << " |beta|^2=" << nb;
      }
      EXPECT_NEAR(g.entropy_ebits, oracle::entropy_bits(ref), 1e-6);
    }
  }
}

TEST(FockSpectrum, simple_states) {
  const auto prod = fock::product(fock::coherent_fock(1.0, 30), fock::coherent_fock(0.5, 30));
  EXPECT_NEAR(fock_spectrum(prod).entropy_ebits, 0.0, 1e-9);

  fock::FockMat bell{Eigen::MatrixXcd::Zero(2, 2)};
  bell.amps(0, 0) = bell.amps(1, 1) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(fock_spectrum(bell).entropy_ebits, 1.0, 1e-12);

  fock::FockMat zero{Eigen::MatrixXcd::Zero(2, 2)};
  EXPECT_THROW(fock_spectrum(zero), std::domain_error);
}

TEST(FockSpectrum, matches_gram_on_three_branch_state) {
  // |beta|^2 = 2, so |alpha|^2 = 1. Eigenvalues frozen from an SVD of the
  // number-basis amplitudes: 0.502500061, 0.353163052, 0.144336887.
  const cplx beta = std::sqrt(2.0);
  const auto g = gram_spectrum(generate_ecs(3, beta));
  const auto f = fock_spectrum(fock::pipeline(beta, pi / 3, fock::default_cutoff(beta)));
  ASSERT_EQ(g.eigenvalues.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(g.eigenvalues[i], f.eigenvalues[i], 1e-6);
  EXPECT_NEAR(g.eigenvalues[0], 0.502500061, 1e-8);
  EXPECT_NEAR(g.eigenvalues[1], 0.353163052, 1e-8);
  EXPECT_NEAR(g.eigenvalues[2], 0.144336887, 1e-8);
  EXPECT_NEAR(g.entropy_ebits, 1.43225067, 1e-7);
}

TEST(SpectrumHygiene, clipping_and_errors) {
  const auto r = spectrum_from_eigenvalues({0.5, -5e-10, 0.5});
  EXPECT_EQ(r.eigenvalues.back(), 0.0);
  EXPECT_NEAR(r.entropy_ebits, 1.0, 1e-15);
  EXPECT_THROW(spectrum_from_eigenvalues({1.0, -1e-6}), NumericalError);
  EXPECT_THROW(spectrum_from_eigenvalues({0.0, 0.0}), NumericalError);
}

TEST(Partition, validation) {
  EXPECT_NO_THROW(Partition::split(3, {0, 2}));
  Partition overlap{{0, 1}, {1}};
  EXPECT_THROW(overlap.validate(2), std::invalid_argument);
  Partition gap{{0}, {}};
  EXPECT_THROW(gap.validate(2), std::invalid_argument);
  EXPECT_THROW(Partition::split(2, {5}), std::out_of_range);
}

TEST(GramSpectrum, multimode_partition_equals_merged_modes) {
  // Splitting each side's amplitude over two modes leaves the Gram matrices unchanged.
  const auto g = generate_ecs(4, std::polar(2.0, 0.1));
  CssState four(4);
  for (const auto& b : g.branches()) {
    const double s = 1.0 / std::sqrt(2.0);
    four.add_branch(b.coeff, {b.amps[0] * s, b.amps[1] * s, b.amps[0] * s, b.amps[1] * s});
  }
  const auto r2 = gram_spectrum(g);
  const auto r4 = gram_spectrum(four, Partition{{0, 2}, {1, 3}});
  EXPECT_NEAR(r2.entropy_ebits, r4.entropy_ebits, 1e-12);
}

TEST(EntropyInvariants, dimension_bound_and_vacuum_limit) {
  for (int M = 2; M <= 30; ++M) {
    for (double a2 : {0.01, 0.3, 1.0, 3.0, 10.0, 40.0}) {
      EXPECT_LE(ecs_entropy(M, a2), std::log2(M) + 1e-9) << M << " " << a2;
    }
  }
  for (int M : {2, 3, 8, 20}) {
    EXPECT_LT(ecs_entropy(M, 0.5e-4), 1e-3);  // |beta|^2 = 1e-4
  }
}

TEST(EntropyInvariants, asymptote) {
  for (int M : {2, 3, 4, 6}) {
    const double alpha = 4.0 * M;
    EXPECT_LT(std::abs(ecs_entropy(M, alpha * alpha) - std::log2(M)), 0.01) << M;
  }
}

TEST(EntropySweep, rows_and_reference_values) {
  const auto t = entropy_sweep({1.0, 10.0}, {2, 3, 100});
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.at(0, "M"), 2.0);
  EXPECT_EQ(t.at(0, "tau_over_pi"), 0.5);
  EXPECT_NEAR(t.at(0, "entropy_ebits"), 0.9737, 1e-3);
  EXPECT_NEAR(t.at(0, "entropy_ebits"), 0.97365737633736, 1e-10);
  EXPECT_LT(t.at(2, "entropy_ebits"), 0.1);
  EXPECT_NEAR(t.at(2, "entropy_ebits"), 0.0369740606566, 1e-9);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    EXPECT_EQ(t.at(r, "log2M_reference"), std::log2(t.at(r, "M")));
    EXPECT_LE(t.at(r, "entropy_ebits"), t.at(r, "log2M_reference") + 1e-9);
  }
  EXPECT_THROW(entropy_sweep({1.0}, {1}), std::invalid_argument);
}

TEST(EntropySweep, interior_maximum_at_alpha_sq_ten) {
  std::vector<int> Ms;
  for (int M = 2; M <= 40; ++M) Ms.push_back(M);
  const auto t = entropy_sweep({10.0}, Ms);
  std::size_t best = 0;
  for (std::size_t r = 1; r < t.rows.size(); ++r) {
    if (t.at(r, "entropy_ebits") > t.at(best, "entropy_ebits")) best = r;
  }
  const double Mstar = t.at(best, "M");
  EXPECT_GT(Mstar, 2.0);
  EXPECT_LT(Mstar, 40.0);
  // Frozen from the number-basis SVD oracle: peak at M = 13, 3.3944 ebits.
  EXPECT_EQ(Mstar, 13.0);
  EXPECT_NEAR(t.at(best, "entropy_ebits"), 3.3944, 1e-4);
}
