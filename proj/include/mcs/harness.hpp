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

// Monte-Carlo scenario runner: seeds, sweeps, CSV output and head-to-head
// comparisons.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcs/domain.hpp"
#include "mcs/greedy.hpp"
#include "mcs/metrics.hpp"
#include "mcs/per_task.hpp"
#include "mcs/rng.hpp"
#include "mcs/two_stage.hpp"

namespace mcs {

enum class Mechanism { kMsensing, kTscm, kTwoStageRa, kTwoStageRu, kPerTaskRa, kPerTaskRu };

inline constexpr Mechanism kAllMechanisms[] = {
    Mechanism::kMsensing,   Mechanism::kTscm,      Mechanism::kTwoStageRa,
    Mechanism::kTwoStageRu, Mechanism::kPerTaskRa, Mechanism::kPerTaskRu};

inline std::string_view to_string(Mechanism m) {
  switch (m) {
    case Mechanism::kMsensing: return "msensing";
    case Mechanism::kTscm: return "tscm";
    case Mechanism::kTwoStageRa: return "2sb-ra";
    case Mechanism::kTwoStageRu: return "2sb-ru";
    case Mechanism::kPerTaskRa: return "ptb-ra";
    case Mechanism::kPerTaskRu: return "ptb-ru";
  }
  return "?";
}

inline Mechanism parse_mechanism(std::string_view name) {
  for (Mechanism m : kAllMechanisms) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown mechanism '" + std::string(name) +
                              "' (expected msensing, tscm, 2sb-ra, 2sb-ru, ptb-ra, ptb-ru)");
}

inline Mode mode_of(Mechanism m) {
  switch (m) {
    case Mechanism::kTscm:
    case Mechanism::kTwoStageRa:
    case Mechanism::kPerTaskRa:
      return Mode::kReputationAware;
    default:
      return Mode::kReputationUnaware;
  }
}

inline bool is_per_task(Mechanism m) {
  return m == Mechanism::kPerTaskRa || m == Mechanism::kPerTaskRu;
}

inline AuctionMetrics run_auction(const Campaign& c, Mechanism m,
                                  const PerTaskOptions& ptb = {}) {
  switch (m) {
    case Mechanism::kMsensing:
    case Mechanism::kTscm:
      return evaluate(c, run_primary(c));
    case Mechanism::kTwoStageRa:
    case Mechanism::kTwoStageRu:
      return evaluate(c, run_two_stage(c));
    case Mechanism::kPerTaskRa:
    case Mechanism::kPerTaskRu:
      return evaluate(c, run_per_task(c, ptb));
  }
  throw std::logic_error("unhandled mechanism");
}

enum class SweepAxis { kNone, kTasks, kParticipants, kAuctions };

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kNone: return "none";
    case SweepAxis::kTasks: return "tasks";
    case SweepAxis::kParticipants: return "participants";
    case SweepAxis::kAuctions: return "auctions";
  }
  return "?";
}

inline SweepAxis parse_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::kNone, SweepAxis::kTasks, SweepAxis::kParticipants,
                      SweepAxis::kAuctions}) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "'");
}

// Parses "a:b:step" into a, a+step, ..., up to and including b.
inline std::vector<int> parse_grid(std::string_view text) {
  std::vector<long> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t colon = text.find(':', start);
    const std::string piece(text.substr(start, colon == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : colon - start));
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (piece.empty() || used != piece.size()) {
      throw std::invalid_argument("malformed grid '" + std::string(text) + "'");
    }
    parts.push_back(v);
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 3) throw std::invalid_argument("grid must be a:b:step");
  const long a = parts[0], b = parts[1], step = parts[2];
  if (a <= 0 || b < a || step <= 0) {
    throw std::invalid_argument("grid needs 0 < a <= b and step > 0");
  }
  std::vector<int> grid;
  for (long v = a; v <= b; v += step) grid.push_back(static_cast<int>(v));
  return grid;
}

struct Sweep {
  SweepAxis axis = SweepAxis::kNone;
  std::vector<int> grid;
};

struct Scenario {
  Mechanism mechanism = Mechanism::kTwoStageRa;
  GenConfig gen;
  int n_auctions = 100;
  Sweep sweep;
  std::uint64_t base_seed = 1;
  PerTaskOptions ptb;
};

struct ResultRow {
  int auction = 0;
  SweepAxis axis = SweepAxis::kNone;
  int grid_value = 0;
  std::uint64_t seed = 0;
  double cr = 0.0;
  double avg_user_utility = 0.0;
  int n_primary = 0;
  int n_secondary = 0;
  double total_payment = 0.0;
  double wall_seconds = 0.0;
};

struct ScenarioResult {
  std::vector<ResultRow> rows;  // ordered by (grid point, auction index)

  // Distinct grid values in row order.
  std::vector<int> grid_values() const {
    std::vector<int> out;
    for (const ResultRow& r : rows) {
      if (out.empty() || out.back() != r.grid_value) out.push_back(r.grid_value);
    }
    return out;
  }

  double mean_cr(int grid_value) const {
    double sum = 0.0;
    int n = 0;
    for (const ResultRow& r : rows) {
      if (r.grid_value == grid_value) {
        sum += r.cr;
        ++n;
      }
    }
    return n ? sum / n : 0.0;
  }

  double mean_cr() const {
    double sum = 0.0;
    for (const ResultRow& r : rows) sum += r.cr;
    return rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
  }
};

// Generation config and auction count at one sweep point.
struct GridPoint {
  int value = 0;
  GenConfig gen;
  int n_auctions = 0;
};

inline std::vector<GridPoint> expand(const Scenario& s) {
  if (s.sweep.axis != SweepAxis::kNone && s.sweep.grid.empty()) {
    throw std::invalid_argument("sweep axis given without a grid");
  }
  if (s.sweep.axis == SweepAxis::kNone && !s.sweep.grid.empty()) {
    throw std::invalid_argument("grid given without a sweep axis");
  }
  for (int v : s.sweep.grid) {
    if (v <= 0) throw std::invalid_argument("grid values must be positive");
  }
  if (s.sweep.axis != SweepAxis::kAuctions && s.n_auctions < 1) {
    throw std::invalid_argument("n_auctions must be >= 1");
  }
  if (is_per_task(s.mechanism) && s.ptb.payment == PtbPayment::kCritical &&
      s.ptb.admission != PtbAdmission::kPositiveUtility) {
    throw std::invalid_argument("critical per-task payments need utility admission");
  }
  GenConfig base = s.gen;
  base.mode = mode_of(s.mechanism);
  std::vector<GridPoint> points;
  if (s.sweep.axis == SweepAxis::kNone) {
    points.push_back({0, base, s.n_auctions});
  }
  for (int v : s.sweep.grid) {
    GridPoint p{v, base, s.n_auctions};
    switch (s.sweep.axis) {
      case SweepAxis::kTasks: p.gen.n_tasks = v; break;
      case SweepAxis::kParticipants: p.gen.n_participants = v; break;
      case SweepAxis::kAuctions: p.n_auctions = v; break;
      case SweepAxis::kNone: break;
    }
    points.push_back(p);
  }
  for (const GridPoint& p : points) validate(p.gen);
  return points;
}

// Runs `count` jobs over up to `threads` workers (0 = hardware concurrency).
template <class Job>
void parallel_for(int count, int threads, Job&& job) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int k = 0; k < count; ++k) job(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int k = next++; k < count && !failed; k = next++) {
        try {
          job(k);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

inline ScenarioResult run_scenario(const Scenario& s, int threads = 0) {
  const std::vector<GridPoint> points = expand(s);
  ScenarioResult result;
  for (const GridPoint& p : points) {
    for (int a = 0; a < p.n_auctions; ++a) {
      ResultRow row;
      row.auction = a;
      row.axis = s.sweep.axis;
      row.grid_value = p.value;
      row.seed = child_seed(s.base_seed, static_cast<std::uint64_t>(p.value),
                            static_cast<std::uint64_t>(a));
      result.rows.push_back(row);
    }
  }
  std::vector<const GenConfig*> gen_of;
  for (const GridPoint& p : points) {
    for (int a = 0; a < p.n_auctions; ++a) gen_of.push_back(&p.gen);
  }
  parallel_for(static_cast<int>(result.rows.size()), threads, [&](int k) {
    ResultRow& row = result.rows[static_cast<std::size_t>(k)];
    const auto t0 = std::chrono::steady_clock::now();
    GenConfig cfg = *gen_of[static_cast<std::size_t>(k)];
    cfg.seed = row.seed;
    const Campaign c = generate_campaign(cfg);
    const AuctionMetrics m = run_auction(c, s.mechanism, s.ptb);
    row.cr = m.clearance_rate;
    row.avg_user_utility = m.avg_user_utility;
    row.n_primary = m.n_primary;
    row.n_secondary = m.n_secondary;
    row.total_payment = m.total_payments;
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  return result;
}

inline constexpr std::string_view kCsvHeader =
    "auction,grid_axis,grid_value,seed,cr,avg_user_utility,n_primary,n_secondary,"
    "total_payment";

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const ScenarioResult& r) {
  os << kCsvHeader << '\n';
  for (const ResultRow& row : r.rows) {
    os << row.auction << ',' << to_string(row.axis) << ',' << row.grid_value << ','
       << row.seed << ',' << format_real(row.cr) << ','
       << format_real(row.avg_user_utility) << ',' << row.n_primary << ','
       << row.n_secondary << ',' << format_real(row.total_payment) << '\n';
  }
}

inline nlohmann::json to_json(const GenConfig& g) {
  return {
      {"n_tasks", g.n_tasks},
      {"n_participants", g.n_participants},
      {"area_side_m", g.area_side},
      {"interest_radius_m", g.interest_radius},
      {"value_range", {g.value_range.lo, g.value_range.hi}},
      {"collective_bid_range", {g.collective_bid_range.lo, g.collective_bid_range.hi}},
      {"alpha", g.alpha},
      {"reputation_range", {g.reputation_range.lo, g.reputation_range.hi}},
      {"mode", is_reputation_aware(g.mode) ? "reputation_aware" : "reputation_unaware"},
      {"empty_interest",
       g.empty_interest == EmptyInterestPolicy::kDrop ? "drop" : "relocate"},
  };
}

// Provenance sidecar for a scenario's CSV.
inline nlohmann::json manifest(const Scenario& s) {
  GenConfig gen = s.gen;
  gen.mode = mode_of(s.mechanism);
  nlohmann::json j = {
      {"mechanism", std::string(to_string(s.mechanism))},
      {"generation", to_json(gen)},
      {"n_auctions", s.n_auctions},
      {"sweep", {{"axis", std::string(to_string(s.sweep.axis))}, {"grid", s.sweep.grid}}},
      {"base_seed", s.base_seed},
      {"seed_derivation", "splitmix64 chain over (base_seed, grid_value, auction)"},
      {"prng", "mt19937_64, 53-bit uniform mapping"},
      {"csv_header", std::string(kCsvHeader)},
      {"defaults_note",
       "area, radius, value/bid/reputation ranges and alpha are reconstructed "
       "defaults; per-scenario sweep grids are reconstructions"},
  };
  if (is_per_task(s.mechanism)) {
    j["per_task"] = {
        {"admission", s.ptb.admission == PtbAdmission::kBudget ? "budget" : "utility"},
        {"payment", s.ptb.payment == PtbPayment::kBidEqual ? "bid" : "critical"}};
  }
  return j;
}

struct HeadToHead {
  std::vector<double> batch_fractions;
  double mean_fraction = 0.0;
  double mean_cr_a = 0.0;
  double mean_cr_b = 0.0;
};

// Fraction of auctions in which mechanism b's clearance rate strictly exceeds
// mechanism a's on the same campaign geometry and bids, averaged over
// `repeats` batches of a.n_auctions auctions. Batch r uses the seeds of grid
// value r.
inline HeadToHead compare_head_to_head(const Scenario& a, const Scenario& b,
                                       int repeats = 1, int threads = 0) {
  auto same_gen = [](GenConfig x, GenConfig y) {
    x.mode = y.mode;
    return x.n_tasks == y.n_tasks && x.n_participants == y.n_participants &&
           x.area_side == y.area_side && x.interest_radius == y.interest_radius &&
           x.value_range.lo == y.value_range.lo && x.value_range.hi == y.value_range.hi &&
           x.collective_bid_range.lo == y.collective_bid_range.lo &&
           x.collective_bid_range.hi == y.collective_bid_range.hi && x.alpha == y.alpha &&
           x.reputation_range.lo == y.reputation_range.lo &&
           x.reputation_range.hi == y.reputation_range.hi &&
           x.empty_interest == y.empty_interest;
  };
  if (!same_gen(a.gen, b.gen)) throw std::invalid_argument("generation configs differ");
  if (a.base_seed != b.base_seed) throw std::invalid_argument("base seeds differ");
  if (a.n_auctions != b.n_auctions) throw std::invalid_argument("auction counts differ");
  if (a.sweep.axis != SweepAxis::kNone || b.sweep.axis != SweepAxis::kNone) {
    throw std::invalid_argument("head-to-head comparisons take no sweep");
  }
  if (repeats < 1 || a.n_auctions < 1) throw std::invalid_argument("nothing to compare");
  expand(a);
  expand(b);

  const int per_batch = a.n_auctions;
  const int total = repeats * per_batch;
  std::vector<double> cr_a(static_cast<std::size_t>(total));
  std::vector<double> cr_b(static_cast<std::size_t>(total));
  parallel_for(total, threads, [&](int k) {
    const int batch = k / per_batch;
    const int auction = k % per_batch;
    const std::uint64_t seed = child_seed(a.base_seed, static_cast<std::uint64_t>(batch),
                                          static_cast<std::uint64_t>(auction));
    GenConfig ga = a.gen;
    ga.mode = mode_of(a.mechanism);
    ga.seed = seed;
    GenConfig gb = b.gen;
    gb.mode = mode_of(b.mechanism);
    gb.seed = seed;
    const Campaign ca = generate_campaign(ga);
    cr_a[static_cast<std::size_t>(k)] = run_auction(ca, a.mechanism, a.ptb).clearance_rate;
    if (gb.mode == ga.mode) {
      cr_b[static_cast<std::size_t>(k)] = run_auction(ca, b.mechanism, b.ptb).clearance_rate;
    } else {
      cr_b[static_cast<std::size_t>(k)] =
          run_auction(generate_campaign(gb), b.mechanism, b.ptb).clearance_rate;
    }
  });

  HeadToHead out;
  for (int r = 0; r < repeats; ++r) {
    int wins = 0;
    for (int k = r * per_batch; k < (r + 1) * per_batch; ++k) {
      if (cr_b[static_cast<std::size_t>(k)] > cr_a[static_cast<std::size_t>(k)]) ++wins;
      out.mean_cr_a += cr_a[static_cast<std::size_t>(k)];
      out.mean_cr_b += cr_b[static_cast<std::size_t>(k)];
    }
    out.batch_fractions.push_back(static_cast<double>(wins) / per_batch);
    out.mean_fraction += out.batch_fractions.back();
  }
  out.mean_fraction /= repeats;
  out.mean_cr_a /= total;
  out.mean_cr_b /= total;
  return out;
}

}  // namespace mcs
