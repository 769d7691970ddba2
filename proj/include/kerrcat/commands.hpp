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

// Experiment drivers behind the command-line tool. Each returns a SweepTable;
// the tool adds timestamp and config echo and serializes it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerrcat/common.hpp"
#include "kerrcat/css.hpp"
#include "kerrcat/entanglement.hpp"
#include "kerrcat/fock.hpp"
#include "kerrcat/table.hpp"
#include "kerrcat/teleport.hpp"

namespace kerrcat::commands {

/// Bad user input; the tool maps it to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Argument parsing

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double parse_real(const std::string& s) {
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  double x = 0.0;
  is >> x;
  if (is.fail() || !(is >> std::ws).eof() || !std::isfinite(x)) {
    throw UsageError("not a finite number: '" + s + "'");
  }
  return x;
}

inline int parse_int(const std::string& s) {
  const double x = parse_real(s);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw UsageError("not an integer: '" + s + "'");
  return static_cast<int>(x);
}

/// "x" (real), "x:y" (cartesian), or "r@t" (polar, phase t in units of pi).
inline cplx parse_complex(const std::string& s) {
  if (auto at = s.find('@'); at != std::string::npos) {
    return std::polar(parse_real(s.substr(0, at)), pi * parse_real(s.substr(at + 1)));
  }
  if (auto colon = s.find(':'); colon != std::string::npos) {
    return {parse_real(s.substr(0, colon)), parse_real(s.substr(colon + 1))};
  }
  return {parse_real(s), 0.0};
}

/// Comma list of items, each either a value or an inclusive range
/// start:stop[:step] (step defaults to 1).
inline std::vector<double> parse_real_grid(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.empty()) throw UsageError("empty item in grid '" + text + "'");
    if (parts.size() == 1) {
      out.push_back(parse_real(parts[0]));
      continue;
    }
    if (parts.size() > 3) throw UsageError("bad range '" + item + "'");
    const double start = parse_real(parts[0]);
    const double stop = parse_real(parts[1]);
    const double step = parts.size() == 3 ? parse_real(parts[2]) : 1.0;
    if (!(step > 0.0)) throw UsageError("range step must be > 0 in '" + item + "'");
    if (stop < start) throw UsageError("range stop below start in '" + item + "'");
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) throw UsageError("range too long: '" + item + "'");
    for (long long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  }
  if (out.empty()) throw UsageError("empty grid '" + text + "'");
  return out;
}

inline std::vector<int> parse_int_grid(const std::string& text) {
  std::vector<int> out;
  for (double x : parse_real_grid(text)) {
    if (x != std::floor(x)) throw UsageError("grid '" + text + "' must contain integers");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

inline std::vector<cplx> parse_complex_list(const std::string& text) {
  std::vector<cplx> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_complex(item));
  if (out.empty()) throw UsageError("empty list '" + text + "'");
  return out;
}

/// Input-state coefficients for a given M: "uniform", "basis:<q0>",
/// "alternating" (1, i, 1, i, ...), or an explicit comma list of M complex values.
inline std::vector<cplx> resolve_q(const std::string& preset, int M) {
  if (preset == "uniform") return std::vector<cplx>(M, 1.0);
  if (preset == "alternating") {
    std::vector<cplx> q(M);
    for (int k = 0; k < M; ++k) q[k] = k % 2 ? imag_unit : cplx{1.0};
    return q;
  }
  if (preset.rfind("basis:", 0) == 0) {
    const int q0 = parse_int(preset.substr(6));
    if (q0 < 0 || q0 >= M) throw UsageError("basis index out of range for M=" + std::to_string(M));
    std::vector<cplx> q(M, 0.0);
    q[q0] = 1.0;
    return q;
  }
  auto q = parse_complex_list(preset);
  if (static_cast<int>(q.size()) != M) {
    throw UsageError("Q list has " + std::to_string(q.size()) + " entries, M=" + std::to_string(M));
  }
  return q;
}

// ---------------------------------------------------------------------------
// Commands

inline SweepTable cmd_coefficients(int M_max) {
  if (M_max < 2) throw UsageError("coefficients: M_max must be >= 2");
  SweepTable t({"M", "q", "re_f", "im_f", "abs_f", "closed_minus_dft"});
  for (int M = 2; M <= M_max; ++M) {
    const auto closed = css::fq_closed(M);
    const auto dft = css::fq_dft(M);
    for (int q = 0; q < M; ++q) {
      const cplx f = closed.f[q];
      t.add_row({static_cast<double>(M), static_cast<double>(q), f.real(), f.imag(), std::abs(f),
                 std::abs(f - dft.f[q])});
    }
  }
  t.set_meta("command", "coefficients");
  t.set_meta("version", version);
  return t;
}

inline SweepTable cmd_entropy_sweep(const std::vector<double>& alpha_sq,
                                    const std::vector<int>& Ms) {
  for (int M : Ms) {
    if (M < 2) throw UsageError("entropy-sweep: M must be >= 2");
  }
  for (double a : alpha_sq) {
    if (a < 0.0) throw UsageError("entropy-sweep: |alpha|^2 must be >= 0");
  }
  SweepTable t = entanglement::entropy_sweep(alpha_sq, Ms);
  t.set_meta("command", "entropy-sweep");
  t.set_meta("version", version);
  return t;
}

inline constexpr double backends_fidelity_tolerance = 1e-8;
inline constexpr double conservation_tolerance = 1e-10;
inline constexpr double backends_max_beta_sq = 10.0;

struct BackendsReport {
  SweepTable table;
  bool pass = true;
};

/// Number-basis pipeline versus branch pipeline at tau = pi/M, plus the
/// total-photon-number conservation check.
inline BackendsReport cmd_backends_check(cplx beta, const std::vector<int>& Ms,
                                         double fidelity_tol = backends_fidelity_tolerance,
                                         double conservation_tol = conservation_tolerance) {
  if (std::norm(beta) > backends_max_beta_sq + 1e-12) {
    throw UsageError("backends-check: |beta|^2 must be <= 10");
  }
  for (int M : Ms) {
    if (M < 2) throw UsageError("backends-check: M must be >= 2");
  }
  const int cutoff = fock::default_cutoff(beta);
  const auto before = fock::total_number_distribution(fock::initial_product(beta, cutoff));

  BackendsReport rep;
  rep.table = SweepTable({"M", "fidelity", "infidelity", "conservation_linf", "leakage"});
  for (int M : Ms) {
    const fock::FockMat ref = fock::pipeline(beta, pi / M, cutoff);
    const fock::FockMat alt = css::to_fock(entanglement::generate_ecs(M, beta), cutoff, cutoff);
    const double f = fock::fidelity(ref, alt);
    const auto after = fock::total_number_distribution(ref);
    double linf = 0.0;
    for (std::size_t n = 0; n < before.size(); ++n) linf = std::max(linf, std::abs(after[n] - before[n]));
    const double leak = std::max(ref.leakage, alt.leakage);
    rep.table.add_row({static_cast<double>(M), f, 1.0 - f, linf, leak});
    if (1.0 - f > fidelity_tol || linf > conservation_tol ||
        ref.status == fock::Truncation::leaky || alt.status == fock::Truncation::leaky) {
      rep.pass = false;
    }
  }
  rep.table.set_meta("command", "backends-check");
  rep.table.set_meta("version", version);
  rep.table.set_meta("cutoff", std::to_string(cutoff));
  rep.table.set_meta("result", rep.pass ? "pass" : "fail");
  return rep;
}

struct TeleportGrid {
  std::vector<int> Ms{2};
  std::vector<cplx> alphas{3.0};
  std::string q_preset = "uniform";
  std::uint64_t seed = 1;
  std::int64_t trials = 10000;
  std::optional<int> n_cap;
  bool h_only = false;
  unsigned threads = 0;
};

inline SweepTable cmd_teleport(const TeleportGrid& grid) {
  for (int M : grid.Ms) {
    if (M < 2 || M % 2 != 0) throw UsageError("teleport: M must be even and >= 2 (got " + std::to_string(M) + ")");
  }
  if (grid.trials < 0) throw UsageError("teleport: trials must be >= 0");
  SweepTable t({"M", "alpha_re", "alpha_im", "trials", "successes", "mc_success", "mc_stderr",
                "exact_success", "exact_success_h_only", "exact_multiple_empty",
                "exact_all_empty", "mean_fidelity_ideal", "stderr_fidelity_ideal",
                "mean_fidelity_residual", "stderr_fidelity_residual"});
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (int M : grid.Ms) {
    for (cplx alpha : grid.alphas) {
      teleport::TeleportConfig cfg;
      cfg.M = M;
      cfg.alpha = alpha;
      cfg.Q = resolve_q(grid.q_preset, M);
      cfg.seed = grid.seed;
      cfg.trials = grid.trials;
      cfg.n_cap = grid.n_cap;
      cfg.h_only = grid.h_only;
      cfg.threads = grid.threads;
      const auto st = teleport::run_trials(cfg);
      const auto& ex = st.exact;
      t.add_row({static_cast<double>(M), alpha.real(), alpha.imag(),
                 static_cast<double>(st.trials), static_cast<double>(st.successes),
                 st.success_probability, st.success_stderr,
                 ex ? st.exact_success(grid.h_only).value() : nan,
                 ex ? ex->success_h_only : nan, ex ? ex->multiple_empty : nan,
                 ex ? ex->all_empty : nan, st.mean_fidelity_ideal, st.stderr_fidelity_ideal,
                 st.mean_fidelity_residual, st.stderr_fidelity_residual});
    }
  }
  t.set_meta("command", "teleport");
  t.set_meta("version", version);
  t.set_meta("seed", std::to_string(grid.seed));
  t.set_meta("rng", teleport::rng_identity);
  t.set_meta("success_definition", grid.h_only ? "exactly one empty H output"
                                               : "exactly one empty output (G or H)");
  return t;
}

}  // namespace kerrcat::commands
