// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// mcs_auction: run crowdsensing auction scenarios, head-to-head comparisons
// and the brute-force oracle from the command line.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mcs/mcs.hpp"

namespace {

struct CommonArgs {
  int tasks = 100;
  int participants = 100;
  int auctions = 100;
  unsigned long long seed = 1;
  double alpha = 2.0;
  double radius = 30.0;
  double area = 1000.0;
  std::string empty_interest = "drop";
  std::string ptb_admission = "budget";
  std::string ptb_payment = "bid";
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--tasks", a.tasks, "Number of tasks M")->capture_default_str();
  cmd->add_option("--participants", a.participants, "Number of devices placed N")
      ->capture_default_str();
  cmd->add_option("--auctions", a.auctions, "Auctions per grid point")->capture_default_str();
  cmd->add_option("--seed", a.seed, "Base seed")->capture_default_str();
  cmd->add_option("--alpha", a.alpha, "Half-width of the per-task bid interval")
      ->capture_default_str();
  cmd->add_option("--radius", a.radius, "Interest radius in meters")->capture_default_str();
  cmd->add_option("--area", a.area, "Side of the square area in meters")->capture_default_str();
  cmd->add_option("--empty-interest", a.empty_interest,
                  "Devices with no task in reach: drop or relocate")
      ->check(CLI::IsMember({"drop", "relocate"}))
      ->capture_default_str();
  cmd->add_option("--ptb-admission", a.ptb_admission, "Per-task admission: budget or utility")
      ->check(CLI::IsMember({"budget", "utility"}))
      ->capture_default_str();
  cmd->add_option("--ptb-payment", a.ptb_payment, "Per-task payment: bid or critical")
      ->check(CLI::IsMember({"bid", "critical"}))
      ->capture_default_str();
  cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
}

mcs::Scenario make_scenario(const std::string& mechanism, const CommonArgs& a) {
  mcs::Scenario s;
  s.mechanism = mcs::parse_mechanism(mechanism);
  s.gen.n_tasks = a.tasks;
  s.gen.n_participants = a.participants;
  s.gen.alpha = a.alpha;
  s.gen.interest_radius = a.radius;
  s.gen.area_side = a.area;
  s.gen.empty_interest = a.empty_interest == "relocate" ? mcs::EmptyInterestPolicy::kRelocate
                                                        : mcs::EmptyInterestPolicy::kDrop;
  s.n_auctions = a.auctions;
  s.base_seed = a.seed;
  s.ptb.admission = a.ptb_admission == "utility" ? mcs::PtbAdmission::kPositiveUtility
                                                 : mcs::PtbAdmission::kBudget;
  s.ptb.payment =
      a.ptb_payment == "critical" ? mcs::PtbPayment::kCritical : mcs::PtbPayment::kBidEqual;
  return s;
}

int cmd_run(const std::string& mechanism, const CommonArgs& a, const std::string& sweep,
            const std::string& grid, const std::string& out) {
  mcs::Scenario s = make_scenario(mechanism, a);
  if (!sweep.empty() || !grid.empty()) {
    if (sweep.empty() || grid.empty()) {
      throw std::invalid_argument("--sweep and --grid must be given together");
    }
    s.sweep.axis = mcs::parse_axis(sweep);
    s.sweep.grid = mcs::parse_grid(grid);
  }
  const mcs::ScenarioResult r = mcs::run_scenario(s, a.threads);
  if (out.empty()) {
    mcs::write_csv(std::cout, r);
  } else {
    std::ofstream csv(out, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open " + out);
    mcs::write_csv(csv, r);
    std::ofstream side(out + ".manifest.json", std::ios::binary);
    side << mcs::manifest(s).dump(2) << '\n';
  }
  for (int g : r.grid_values()) {
    std::cerr << mcs::to_string(s.mechanism) << ' ' << mcs::to_string(s.sweep.axis) << '='
              << g << " mean_cr=" << mcs::format_real(r.mean_cr(g)) << '\n';
  }
  return 0;
}

int cmd_compare(const std::string& ma, const std::string& mb, const CommonArgs& a,
                int repeats) {
  const mcs::Scenario sa = make_scenario(ma, a);
  const mcs::Scenario sb = make_scenario(mb, a);
  const mcs::HeadToHead h = mcs::compare_head_to_head(sa, sb, repeats, a.threads);
  std::cout << "a=" << ma << " b=" << mb << " auctions=" << a.auctions
            << " repeats=" << repeats << '\n';
  std::cout << "mean_cr_a=" << mcs::format_real(h.mean_cr_a)
            << " mean_cr_b=" << mcs::format_real(h.mean_cr_b) << '\n';
  std::cout << "batch_fractions=";
  for (std::size_t k = 0; k < h.batch_fractions.size(); ++k) {
    std::cout << (k ? "," : "") << mcs::format_real(h.batch_fractions[k]);
  }
  std::cout << "\nfrequency_b_beats_a=" << mcs::format_real(h.mean_fraction) << '\n';
  return 0;
}

int cmd_oracle(int fuzz, int max_n, int max_m, unsigned long long seed, bool verbose) {
  const mcs::oracle::FuzzSummary s = mcs::oracle::fuzz(fuzz, max_n, max_m, seed);
  for (const auto& rep : s.failures) std::cout << rep.to_text();
  if (verbose && s.failures.empty()) {
    mcs::Rng rng(seed);
    const auto c = mcs::oracle::random_small_campaign(rng, max_n, max_m,
                                                      mcs::Mode::kReputationUnaware);
    std::cout << mcs::oracle::exhaustive_greedy_check(c).to_text();
  }
  std::cout << "instances=" << s.instances << " failed=" << s.failed_instances
            << " sweeps_checked=" << s.sweeps_checked
            << " sweeps_skipped_no_competitor=" << s.sweeps_skipped
            << " sweep_mismatches=" << s.sweep_mismatches
            << " non_monotone=" << s.non_monotone_sweeps
            << " max_sweep_deviation=" << mcs::format_real(s.max_sweep_deviation) << '\n';
  std::cout << (s.passed() ? "PASS" : "FAIL") << '\n';
  return s.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reputation-aware crowdsensing auction simulator"};
  app.require_subcommand(1);

  CommonArgs run_args;
  std::string run_mech, sweep, grid, out;
  auto* run = app.add_subcommand("run", "Run a scenario and write per-auction CSV rows");
  run->add_option("--mechanism", run_mech, "msensing|tscm|2sb-ra|2sb-ru|ptb-ra|ptb-ru")
      ->required();
  add_common(run, run_args);
  run->add_option("--sweep", sweep, "Sweep axis: tasks, participants or auctions");
  run->add_option("--grid", grid, "Sweep grid a:b:step");
  run->add_option("--out", out, "CSV path (stdout if omitted); writes <out>.manifest.json");

  CommonArgs cmp_args;
  std::string cmp_a, cmp_b;
  int repeats = 1;
  auto* cmp = app.add_subcommand("compare", "Fraction of auctions where b beats a on CR");
  cmp->add_option("--a", cmp_a, "Baseline mechanism")->required();
  cmp->add_option("--b", cmp_b, "Challenger mechanism")->required();
  add_common(cmp, cmp_args);
  cmp->add_option("--repeats", repeats, "Independent batches of --auctions auctions")
      ->capture_default_str();

  int fuzz = 1000, max_n = 8, max_m = 8;
  unsigned long long oracle_seed = 1;
  bool verbose = false;
  auto* orc = app.add_subcommand("oracle", "Brute-force check of stage-one selection and payments");
  orc->add_option("--fuzz", fuzz, "Random instances")->capture_default_str();
  orc->add_option("--max-n", max_n, "Max participants (<= 12)")->capture_default_str();
  orc->add_option("--max-m", max_m, "Max tasks")->capture_default_str();
  orc->add_option("--seed", oracle_seed, "Fuzz seed")->capture_default_str();
  orc->add_flag("--verbose", verbose, "Print one sample report");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_mech, run_args, sweep, grid, out);
    if (*cmp) return cmd_compare(cmp_a, cmp_b, cmp_args, repeats);
    if (*orc) return cmd_oracle(fuzz, max_n, max_m, oracle_seed, verbose);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
