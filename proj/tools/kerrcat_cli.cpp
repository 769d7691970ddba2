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

// kerrcat: command-line experiment runner.
//
//   kerrcat coefficients   --m-max 16
//   kerrcat entropy-sweep  --alpha-sq 1,10 --m 2:40
//   kerrcat backends-check --beta 1 --m 2,3,4,5,8
//   kerrcat teleport       --m 2,4 --alpha 3 --q uniform --trials 10000
//
// Exit codes: 0 success, 2 usage error, 3 numerical-tolerance failure.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "kerrcat/kerrcat.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

/// key=value config lines. Keys naming a global option apply globally; any
/// other bare key is routed to the subcommand being run, so one file can hold
/// both kinds without [section] headers.
class RoutedConfig : public CLI::ConfigINI {
 public:
  explicit RoutedConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    const auto subs = app_->get_subcommands();
    if (subs.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty() && app_->get_option_no_throw("--" + item.name) == nullptr) {
        item.parents = {subs.front()->get_name()};
      }
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Comma-separated list options: config files split values on commas, so rejoin them.
CLI::Option* as_list(CLI::Option* opt) {
  return opt->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace kerrcat;
  using namespace kerrcat::commands;

  CLI::App app{"Kerr-revival entangled coherent states: coefficients, entanglement sweeps, "
               "backend cross-checks and teleportation statistics.\n"
               "Grids: comma lists and inclusive ranges start:stop[:step], e.g. 2:40 or 1,10.\n"
               "Complex values: x, x:y (cartesian) or r@t (polar, phase t in units of pi)."};
  app.set_version_flag("--version", std::string(version));
  app.config_formatter(std::make_shared<RoutedConfig>(&app));
  app.set_config("--config", "", "Read key=value lines; command-line flags take precedence");

  std::uint64_t seed = 1;
  std::string out_path = "-";
  std::string format = "csv";
  app.add_option("--seed", seed, "Master RNG seed")->capture_default_str();
  app.add_option("--out", out_path, "Output file ('-' for stdout)")->capture_default_str();
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.require_subcommand(1);

  auto* coeff = app.add_subcommand("coefficients", "Revival coefficients, closed form vs DFT");
  int m_max = 16;
  coeff->add_option("--m-max", m_max, "Largest M")->capture_default_str();

  auto* sweep = app.add_subcommand("entropy-sweep", "Entanglement at tau = pi/M over a grid");
  std::string sweep_alpha_sq = "1,10";
  std::string sweep_m = "2:40";
  as_list(sweep->add_option("--alpha-sq", sweep_alpha_sq, "|alpha|^2 grid"))->capture_default_str();
  as_list(sweep->add_option("--m", sweep_m, "M grid"))->capture_default_str();

  auto* check = app.add_subcommand("backends-check", "Number-basis vs branch pipelines");
  std::string check_beta = "1";
  std::string check_m = "2,3,4,5,8";
  double fid_tol = backends_fidelity_tolerance;
  double cons_tol = conservation_tolerance;
  check->add_option("--beta", check_beta, "Initial coherent amplitude (|beta|^2 <= 10)")
      ->capture_default_str();
  as_list(check->add_option("--m", check_m, "M grid"))->capture_default_str();
  check->add_option("--fidelity-tol", fid_tol, "Allowed infidelity")->capture_default_str();
  check->add_option("--conservation-tol", cons_tol, "Allowed L-inf change of P(N)")
      ->capture_default_str();

  auto* tele = app.add_subcommand("teleport", "Teleportation protocol statistics (even M)");
  std::string tele_m = "2";
  std::string tele_alpha = "3";
  std::string tele_q = "uniform";
  std::int64_t trials = 10000;
  std::optional<int> n_cap;
  bool h_only = false;
  unsigned threads = 0;
  as_list(tele->add_option("--m", tele_m, "Even M grid"))->capture_default_str();
  as_list(tele->add_option("--alpha", tele_alpha, "Comma list of complex alpha"))->capture_default_str();
  as_list(tele->add_option("--q", tele_q,
                           "Input coefficients: uniform | alternating | basis:<q0> | comma list"))
      ->capture_default_str();
  tele->add_option("--trials", trials, "Monte-Carlo trials per grid point")->capture_default_str();
  tele->add_option("--n-cap", n_cap, "Per-mode photon cutoff (default: derived per mode)");
  tele->add_flag("--h-only", h_only, "Count only empty-H outcomes as successes");
  tele->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  int exit_code = 0;
  SweepTable table;
  try {
    if (*coeff) {
      table = cmd_coefficients(m_max);
    } else if (*sweep) {
      table = cmd_entropy_sweep(parse_real_grid(sweep_alpha_sq), parse_int_grid(sweep_m));
    } else if (*check) {
      auto rep = cmd_backends_check(parse_complex(check_beta), parse_int_grid(check_m), fid_tol,
                                    cons_tol);
      table = std::move(rep.table);
      if (!rep.pass) exit_code = kExitNumerical;
    } else if (*tele) {
      TeleportGrid grid;
      grid.Ms = parse_int_grid(tele_m);
      grid.alphas = parse_complex_list(tele_alpha);
      grid.q_preset = tele_q;
      grid.seed = seed;
      grid.trials = trials;
      grid.n_cap = n_cap;
      grid.h_only = h_only;
      grid.threads = threads;
      table = cmd_teleport(grid);
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  table.set_meta("seed", std::to_string(seed));
  table.set_meta("config", app.config_to_str(true, false));
  table.set_meta("timestamp", utc_timestamp());

  const std::string body = format == "json" ? to_json(table).dump(2) + "\n" : to_csv(table);
  if (out_path == "-") {
    std::cout << body;
  } else {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
      std::cerr << "cannot open output file '" << out_path << "'\n";
      return kExitUsage;
    }
    os << body;
  }
  if (exit_code == kExitNumerical) std::cerr << "tolerance check failed\n";
  return exit_code;
}
