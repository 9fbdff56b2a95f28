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

#pragma once

// Brute-force verifiers for tiny campaigns. Nothing here shares code with the
// stage-one implementation except the campaign type: the greedy is re-derived
// on task bitmasks, recomputing coverage from scratch on every scan.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcs/domain.hpp"
#include "mcs/greedy.hpp"
#include "mcs/rng.hpp"

namespace mcs::oracle {

inline constexpr int kMaxParticipants = 12;
inline constexpr double kSweepStep = 1e-3;
inline constexpr double kSweepTolerance = 1e-2;

// Bitmask view of a campaign.
struct Instance {
  std::vector<double> values;
  std::vector<std::uint64_t> interest;
  std::vector<double> bids;         // collective
  std::vector<double> reputations;  // 1 when reputation-unaware

  int size() const { return static_cast<int>(bids.size()); }

  static Instance from(const Campaign& c) {
    if (c.num_participants() > kMaxParticipants) {
      throw std::invalid_argument("oracle supports at most 12 participants");
    }
    if (c.num_tasks() > 64) throw std::invalid_argument("oracle supports at most 64 tasks");
    Instance in;
    for (const Task& t : c.tasks()) in.values.push_back(t.value);
    for (const Participant& p : c.participants()) {
      std::uint64_t m = 0;
      for (TaskId t : p.interested_tasks) m |= std::uint64_t{1} << t;
      in.interest.push_back(m);
      in.bids.push_back(p.collective_bid);
      in.reputations.push_back(c.reputation_aware() ? p.reputation : 1.0);
    }
    return in;
  }

  // R_p times the value of p's tasks outside `covered`, ascending task order.
  double value(int p, std::uint64_t covered) const {
    std::uint64_t open = interest[static_cast<std::size_t>(p)] & ~covered;
    double sum = 0.0;
    while (open) {
      const int t = std::countr_zero(open);
      sum += values[static_cast<std::size_t>(t)];
      open &= open - 1;
    }
    return reputations[static_cast<std::size_t>(p)] * sum;
  }

  std::uint64_t union_of(const std::vector<int>& members) const {
    std::uint64_t m = 0;
    for (int p : members) m |= interest[static_cast<std::size_t>(p)];
    return m;
  }
};

struct Scan {
  int id = -1;
  double value = 0.0;
  double effective_bid = 0.0;
};

// Full re-scan argmax over participants not in `taken`, coverage rebuilt from
// `taken_order` every time. `bid_of` yields the effective bid b/R.
template <class BidOf>
Scan naive_argmax(const Instance& in, const std::vector<int>& taken_order,
                  std::uint64_t taken, BidOf&& bid_of) {
  const std::uint64_t covered = in.union_of(taken_order);
  Scan best;
  for (int p = 0; p < in.size(); ++p) {
    if (taken >> p & 1) continue;
    const double v = in.value(p, covered);
    const double b = bid_of(p);
    const double u = v - b;
    const double bu = best.value - best.effective_bid;
    const bool better = best.id < 0 || u > bu ||
                        (u == bu && (b < best.effective_bid ||
                                     (b == best.effective_bid && p < best.id)));
    if (better) best = Scan{p, v, b};
  }
  return best;
}

inline std::vector<int> naive_select(const Instance& in) {
  std::vector<int> order;
  std::uint64_t taken = 0;
  auto bid_of = [&](int p) {
    return in.bids[static_cast<std::size_t>(p)] / in.reputations[static_cast<std::size_t>(p)];
  };
  while (static_cast<int>(order.size()) < in.size()) {
    const Scan h = naive_argmax(in, order, taken, bid_of);
    if (!(h.effective_bid < h.value)) break;
    order.push_back(h.id);
    taken |= std::uint64_t{1} << h.id;
  }
  return order;
}

// Does `who` win when its effective bid is replaced by `effective_bid`?
inline bool wins_with(const Instance& in, int who, double effective_bid) {
  std::vector<int> order;
  std::uint64_t taken = 0;
  auto bid_of = [&](int p) {
    return p == who ? effective_bid
                    : in.bids[static_cast<std::size_t>(p)] /
                          in.reputations[static_cast<std::size_t>(p)];
  };
  while (static_cast<int>(order.size()) < in.size()) {
    const Scan h = naive_argmax(in, order, taken, bid_of);
    if (!(h.effective_bid < h.value)) return false;
    if (h.id == who) return true;
    order.push_back(h.id);
    taken |= std::uint64_t{1} << h.id;
  }
  return false;
}

struct NaivePayment {
  double payment = 0.0;
  int examined = 0;
};

inline NaivePayment naive_payment(const Instance& in, int winner) {
  NaivePayment out;
  std::vector<int> theta;
  std::uint64_t taken = std::uint64_t{1} << winner;
  auto bid_of = [&](int p) {
    return in.bids[static_cast<std::size_t>(p)] / in.reputations[static_cast<std::size_t>(p)];
  };
  for (;;) {
    const Scan q = naive_argmax(in, theta, taken, bid_of);
    const double own = in.value(winner, in.union_of(theta));
    if (q.id < 0) {
      if (out.examined > 0) out.payment = std::max(out.payment, own);
      return out;
    }
    const double uq = q.value - q.effective_bid;
    out.payment = std::max(out.payment, std::min(own - uq, own));
    ++out.examined;
    if (q.effective_bid >= q.value) return out;
    theta.push_back(q.id);
    taken |= std::uint64_t{1} << q.id;
  }
}

struct PropertyCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct OracleReport {
  std::uint64_t digest = 0;
  std::vector<PropertyCheck> checks;
  std::string counterexample;
  // Context from enumeration: the largest coverage any participant subset
  // reaches, and the cheapest subset (by total effective bid) reaching it.
  double optimal_clearance_rate = 0.0;
  std::vector<int> optimal_subset;
  double greedy_clearance_rate = 0.0;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }

  std::string to_text() const {
    std::ostringstream os;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    os << "instance " << buf << ' ' << (passed() ? "PASS" : "FAIL") << '\n';
    for (const auto& c : checks) {
      os << "  " << (c.passed ? "ok   " : "FAIL ") << c.name;
      if (!c.detail.empty()) os << " (" << c.detail << ')';
      os << '\n';
    }
    os << "  greedy_cr " << greedy_clearance_rate << " optimal_cr "
       << optimal_clearance_rate << " optimal_subset {";
    for (std::size_t k = 0; k < optimal_subset.size(); ++k) {
      os << (k ? "," : "") << optimal_subset[k];
    }
    os << "}\n";
    if (!counterexample.empty()) os << "  counterexample: " << counterexample << '\n';
    return os.str();
  }
};

// FNV-1a over the campaign's numeric content.
inline std::uint64_t digest(const Campaign& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
      h ^= b[k];
      h *= 0x100000001b3ULL;
    }
  };
  const int mode = c.reputation_aware() ? 1 : 0;
  mix(&mode, sizeof mode);
  for (const Task& t : c.tasks()) mix(&t.value, sizeof t.value);
  for (const Participant& p : c.participants()) {
    for (TaskId t : p.interested_tasks) mix(&t, sizeof t);
    mix(&p.collective_bid, sizeof p.collective_bid);
    for (double b : p.descriptive_bids) mix(&b, sizeof b);
    mix(&p.reputation, sizeof p.reputation);
  }
  return h;
}

inline std::string describe(const Campaign& c) {
  std::ostringstream os;
  os.precision(17);
  os << (c.reputation_aware() ? "RA" : "RU") << " values[";
  for (const Task& t : c.tasks()) os << (t.id ? " " : "") << t.value;
  os << "]";
  for (const Participant& p : c.participants()) {
    os << " p" << p.id << "{T=";
    for (std::size_t k = 0; k < p.interested_tasks.size(); ++k) {
      os << (k ? "," : "") << p.interested_tasks[k];
    }
    os << " b=" << p.collective_bid << " R=" << p.reputation << "}";
  }
  return os.str();
}

inline OracleReport exhaustive_greedy_check(const Campaign& c) {
  const Instance in = Instance::from(c);
  OracleReport report;
  report.digest = digest(c);

  const std::vector<int> naive = naive_select(in);
  const PrimaryResult fast = run_primary(c);

  PropertyCheck order{"winner_order", naive == fast.winners, ""};
  if (!order.passed) order.detail = "naive and fast selection orders differ";
  report.checks.push_back(order);

  const std::uint64_t naive_cover = in.union_of(naive);
  std::uint64_t fast_cover = 0;
  for (TaskId t : fast.covered) fast_cover |= std::uint64_t{1} << t;
  report.checks.push_back({"coverage", naive_cover == fast_cover, ""});

  PropertyCheck pay{"payments", true, ""};
  for (int p = 0; p < in.size(); ++p) {
    const bool won = std::find(naive.begin(), naive.end(), p) != naive.end();
    const double expect = won ? naive_payment(in, p).payment : 0.0;
    const double got = fast.payments[static_cast<std::size_t>(p)];
    if (std::abs(expect - got) > 1e-9) {
      pay.passed = false;
      pay.detail = "participant " + std::to_string(p) + " expected " +
                   std::to_string(expect) + " got " + std::to_string(got);
      break;
    }
  }
  report.checks.push_back(pay);

  // Enumerate all 2^N subsets for the coverage optimum.
  const std::uint64_t all = std::uint64_t{1} << in.size();
  int best_count = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  std::uint64_t best_subset = 0;
  for (std::uint64_t s = 0; s < all; ++s) {
    std::uint64_t cov = 0;
    double cost = 0.0;
    for (int p = 0; p < in.size(); ++p) {
      if (s >> p & 1) {
        cov |= in.interest[static_cast<std::size_t>(p)];
        cost += in.bids[static_cast<std::size_t>(p)] / in.reputations[static_cast<std::size_t>(p)];
      }
    }
    const int count = std::popcount(cov);
    if (count > best_count || (count == best_count && cost < best_cost)) {
      best_count = count;
      best_cost = cost;
      best_subset = s;
    }
  }
  for (int p = 0; p < in.size(); ++p) {
    if (best_subset >> p & 1) report.optimal_subset.push_back(p);
  }
  const double m = static_cast<double>(c.num_tasks());
  report.optimal_clearance_rate = best_count / m;
  report.greedy_clearance_rate = std::popcount(naive_cover) / m;
  report.checks.push_back({"greedy_within_optimum",
                           report.greedy_clearance_rate <= report.optimal_clearance_rate,
                           ""});

  if (!report.passed()) report.counterexample = describe(c);
  return report;
}

struct SweepResult {
  // Largest grid effective bid (b/R) at which the winner still wins; 0 if
  // none does.
  double critical = 0.0;
  // The winning grid points form a prefix of the grid.
  bool monotone = true;
};

// Sweeps the winner's effective bid upward from one step on a fixed grid,
// re-running the selection each time. Under reputation-unaware campaigns the
// effective bid is the collective bid.
inline SweepResult critical_bid_sweep(const Campaign& c, ParticipantId winner,
                                      double step = kSweepStep) {
  const Instance in = Instance::from(c);
  if (winner < 0 || winner >= in.size()) throw std::invalid_argument("unknown participant");
  const std::vector<int> sel = naive_select(in);
  if (std::find(sel.begin(), sel.end(), winner) == sel.end()) {
    throw std::invalid_argument("participant is not a stage-one winner");
  }
  // Admission needs b/R < V_i(∅), so nothing above that can win.
  const double ceiling = in.value(winner, 0);
  const long steps = static_cast<long>(std::ceil(ceiling / step)) + 1;
  SweepResult r;
  bool lost = false;
  for (long k = 1; k <= steps; ++k) {
    const double x = static_cast<double>(k) * step;
    if (wins_with(in, winner, x)) {
      if (lost) r.monotone = false;
      r.critical = x;
    } else {
      lost = true;
    }
  }
  return r;
}

// Random campaign with 1..max_n participants and 1..max_m tasks; each
// participant bids on 1..3 tasks. Values, bids and reputations follow the
// simulation defaults.
inline Campaign random_small_campaign(Rng& rng, int max_n, int max_m, Mode mode) {
  const int m = rng.uniform_int(1, max_m);
  const int n = rng.uniform_int(1, max_n);
  std::vector<double> values;
  for (int j = 0; j < m; ++j) values.push_back(rng.uniform(1.0, 5.0));
  std::vector<Task> tasks = make_tasks(values);
  std::vector<Participant> ps;
  for (int i = 0; i < n; ++i) {
    const int k = rng.uniform_int(1, std::min(3, m));
    std::vector<TaskId> ts;
    while (static_cast<int>(ts.size()) < k) {
      const TaskId t = rng.uniform_int(0, m - 1);
      if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    std::vector<double> bids;
    for (TaskId t : ts) {
      const double v = values[static_cast<std::size_t>(t)];
      bids.push_back(rng.uniform(std::max(kMinDescriptiveBid, v - 2.0), v + 2.0));
    }
    const double collective = rng.uniform(1.0, 10.0);
    const double rep = rng.uniform(0.6, 0.9);
    ps.push_back(make_participant(i, std::move(ts), collective, std::move(bids),
                                  is_reputation_aware(mode) ? rep : 1.0));
  }
  return Campaign(std::move(tasks), std::move(ps), mode);
}

struct FuzzSummary {
  int instances = 0;
  int failed_instances = 0;
  int sweeps_checked = 0;
  int sweeps_skipped = 0;  // winners whose payment loop saw no competitor
  int sweep_mismatches = 0;
  int non_monotone_sweeps = 0;
  double max_sweep_deviation = 0.0;
  std::vector<OracleReport> failures;

  bool passed() const {
    return failed_instances == 0 && sweep_mismatches == 0 && non_monotone_sweeps == 0;
  }
};

// Runs the exhaustive check and the critical-bid sweep on `count` random
// campaigns, alternating reputation-aware and reputation-unaware modes.
inline FuzzSummary fuzz(int count, int max_n, int max_m, std::uint64_t seed) {
  if (max_n < 1 || max_n > kMaxParticipants || max_m < 1 || max_m > 64) {
    throw std::invalid_argument("fuzz bounds out of range");
  }
  FuzzSummary s;
  Rng rng(seed);
  for (int k = 0; k < count; ++k) {
    const Mode mode = k % 2 ? Mode::kReputationAware : Mode::kReputationUnaware;
    const Campaign c = random_small_campaign(rng, max_n, max_m, mode);
    ++s.instances;
    OracleReport rep = exhaustive_greedy_check(c);
    const PrimaryResult fast = run_primary(c);
    PropertyCheck sweep_check{"critical_bid_sweep", true, ""};
    for (ParticipantId w : fast.winners) {
      if (fast.competitors_examined[static_cast<std::size_t>(w)] == 0) {
        ++s.sweeps_skipped;
        continue;
      }
      const SweepResult sw = critical_bid_sweep(c, w);
      ++s.sweeps_checked;
      const double dev = std::abs(sw.critical - fast.payments[static_cast<std::size_t>(w)]);
      s.max_sweep_deviation = std::max(s.max_sweep_deviation, dev);
      if (!sw.monotone) {
        ++s.non_monotone_sweeps;
        sweep_check.passed = false;
        sweep_check.detail = "winning bids are not a prefix of the grid";
      }
      if (dev > kSweepTolerance) {
        ++s.sweep_mismatches;
        sweep_check.passed = false;
        sweep_check.detail = "participant " + std::to_string(w) + " sweep " +
                             std::to_string(sw.critical) + " payment " +
                             std::to_string(fast.payments[static_cast<std::size_t>(w)]);
      }
    }
    rep.checks.push_back(sweep_check);
    if (!rep.passed()) {
      if (rep.counterexample.empty()) rep.counterexample = describe(c);
      ++s.failed_instances;
      if (s.failures.size() < 10) s.failures.push_back(std::move(rep));
    }
  }
  return s;
}

}  // namespace mcs::oracle
