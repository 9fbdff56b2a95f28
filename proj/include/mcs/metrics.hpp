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

#include <map>
#include <span>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "mcs/domain.hpp"
#include "mcs/greedy.hpp"
#include "mcs/per_task.hpp"
#include "mcs/two_stage.hpp"

namespace mcs {

struct AuctionMetrics {
  double clearance_rate = 0.0;
  std::map<ParticipantId, double> primary_utils;
  std::map<ParticipantId, double> secondary_utils;
  double overall_utility = 0.0;
  double avg_user_utility = 0.0;
  double total_payments = 0.0;
  int n_primary = 0;
  int n_secondary = 0;
};

inline double clearance_rate(int covered_count, int num_tasks) {
  if (num_tasks <= 0) throw std::invalid_argument("campaign has no tasks");
  return static_cast<double>(covered_count) / num_tasks;
}

inline double clearance_rate(std::span<const TaskId> covered, int num_tasks) {
  return clearance_rate(static_cast<int>(covered.size()), num_tasks);
}

inline double primary_utility(double payment, double cost) { return payment - cost; }

// Cost of a secondary winner paid `payment` for its tasks: the collective bid
// when the descriptive payment reaches it, the payment itself otherwise.
inline double secondary_cost(double payment, double collective_bid) {
  return payment >= collective_bid ? collective_bid : payment;
}

inline double secondary_utility(double payment, double collective_bid,
                                bool is_secondary_winner) {
  if (!is_secondary_winner) return 0.0;
  const double cost = secondary_cost(payment, collective_bid);
  return payment > cost ? payment - cost : 0.0;
}

namespace detail {
inline double sum_values(const std::map<ParticipantId, double>& m) {
  double s = 0.0;
  for (const auto& [id, v] : m) s += v;
  return s;
}
}  // namespace detail

// Overall utility and average user utility. An empty winner class adds 0 to
// the average instead of dividing by zero.
inline std::pair<double, double> overall_and_average(
    const std::map<ParticipantId, double>& primary_utils,
    const std::map<ParticipantId, double>& secondary_utils) {
  const double p = detail::sum_values(primary_utils);
  const double s = detail::sum_values(secondary_utils);
  double avg = 0.0;
  if (!primary_utils.empty()) avg += p / static_cast<double>(primary_utils.size());
  if (!secondary_utils.empty()) avg += s / static_cast<double>(secondary_utils.size());
  return {p + s, avg};
}

namespace detail {
inline void finish(AuctionMetrics& m) {
  std::tie(m.overall_utility, m.avg_user_utility) =
      overall_and_average(m.primary_utils, m.secondary_utils);
  m.n_primary = static_cast<int>(m.primary_utils.size());
  m.n_secondary = static_cast<int>(m.secondary_utils.size());
}

inline void add_primary(AuctionMetrics& m, const Campaign& c, const PrimaryResult& r) {
  for (ParticipantId w : r.winners) {
    m.primary_utils[w] = primary_utility(r.payments[static_cast<std::size_t>(w)],
                                         c.participant(w).private_cost);
  }
  m.total_payments += r.total_payment;
}
}  // namespace detail

// Stage-one-only auction (Msensing / TSCM).
inline AuctionMetrics evaluate(const Campaign& c, const PrimaryResult& r) {
  AuctionMetrics m;
  m.clearance_rate = clearance_rate(r.covered, c.num_tasks());
  detail::add_primary(m, c, r);
  detail::finish(m);
  return m;
}

inline AuctionMetrics evaluate(const Campaign& c, const TwoStageOutcome& o) {
  AuctionMetrics m;
  m.clearance_rate = clearance_rate(o.covered_final, c.num_tasks());
  detail::add_primary(m, c, o.primary);
  for (const auto& [id, pay] : o.secondary_payments) {
    m.secondary_utils[id] = secondary_utility(pay, c.participant(id).collective_bid, true);
    m.total_payments += pay;
  }
  detail::finish(m);
  return m;
}

// Per-task winners form a single class, booked as primary. Their cost is the
// descriptive-bid sum over the tasks they were assigned.
inline AuctionMetrics evaluate(const Campaign& c, const PerTaskOutcome& o) {
  AuctionMetrics m;
  m.clearance_rate = clearance_rate(o.covered_final, c.num_tasks());
  for (ParticipantId w : o.winners) {
    m.primary_utils[w] = primary_utility(o.payments.at(w), o.assigned_bid_sums.at(w));
  }
  m.total_payments = o.total_payment();
  detail::finish(m);
  return m;
}

}  // namespace mcs
