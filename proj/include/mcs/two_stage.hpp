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

// Two-stage bid mechanism: collective-bid greedy first, then the residual
// budget buys still-uncovered tasks through descriptive bids.

#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "mcs/domain.hpp"
#include "mcs/greedy.hpp"

namespace mcs {

struct TwoStageOutcome {
  PrimaryResult primary;
  std::vector<ParticipantId> secondary_winners;  // admission order
  std::map<ParticipantId, std::vector<TaskId>> secondary_assignments;
  std::map<ParticipantId, double> secondary_payments;
  // Budget after the first stage, then after each secondary admission.
  std::vector<double> budget_trace;
  std::vector<TaskId> covered_final;
  TaskMask covered_final_mask;

  double secondary_total() const {
    double sum = 0.0;
    for (const auto& [id, pay] : secondary_payments) sum += pay;
    return sum;
  }
};

// Total task value minus the first-stage payments. May be negative.
inline double compute_budget(const Campaign& c, const PrimaryResult& primary) {
  return c.total_value() - primary.total_payment;
}

// One budget debit after admitting a participant with reputation `reputation`
// and live descriptive sum `bid_sum`.
inline double debit_budget(double budget, double reputation, double bid_sum) {
  return budget * reputation - bid_sum / reputation;
}

namespace detail {

// Descriptive-bid greedy shared by the secondary stage and the per-task
// mechanism in budget mode. Candidates are participants accepted by
// `eligible` that still hold an uncovered task; each admission must leave the
// budget nonnegative. Returns the admission order; fills assignments,
// payments (the live descriptive sum), the budget trace and, optionally, the
// utility score of each admitted candidate.
template <class Eligible>
std::vector<ParticipantId> budgeted_descriptive_greedy(
    const Campaign& c, TaskMask& covered, double budget, Eligible&& eligible,
    std::map<ParticipantId, std::vector<TaskId>>& assignments,
    std::map<ParticipantId, double>& payments, std::vector<double>& trace,
    std::map<ParticipantId, double>* admission_utilities = nullptr) {
  const bool ra = c.reputation_aware();
  std::vector<std::uint8_t> admitted(static_cast<std::size_t>(c.num_participants()), 0);
  std::vector<ParticipantId> order;
  int remaining = c.num_tasks() - count_covered(covered);
  while (remaining > 0) {
    const auto h = best_pick(
        c, covered,
        [&](const Participant& p) {
          return !admitted[static_cast<std::size_t>(p.id)] && eligible(p) &&
                 has_live_task(p, covered);
        },
        [&](const Participant& p) { return live_descriptive_sum(p, covered); });
    if (!h) break;
    const Participant& winner = c.participant(h->id);
    const double reputation = effective_reputation(winner, ra);
    const double bid_sum = live_descriptive_sum(winner, covered);
    const double next = debit_budget(budget, reputation, bid_sum);
    if (next < 0.0) break;
    budget = next;
    trace.push_back(budget);
    admitted[static_cast<std::size_t>(h->id)] = 1;
    order.push_back(h->id);
    std::vector<TaskId> got = live_tasks(winner, covered);
    remaining -= static_cast<int>(got.size());
    for (TaskId t : got) covered[static_cast<std::size_t>(t)] = 1;
    assignments.emplace(h->id, std::move(got));
    payments.emplace(h->id, bid_sum);
    if (admission_utilities) admission_utilities->emplace(h->id, h->utility());
  }
  return order;
}

}  // namespace detail

inline TwoStageOutcome run_two_stage(const Campaign& c) {
  TwoStageOutcome out;
  out.primary = run_primary(c);
  const double budget = compute_budget(c, out.primary);
  out.budget_trace.push_back(budget);
  TaskMask covered = out.primary.covered_mask;
  const bool all_covered = count_covered(covered) == c.num_tasks();
  if (!all_covered && budget > 0.0) {
    std::vector<std::uint8_t> primary(static_cast<std::size_t>(c.num_participants()), 0);
    for (ParticipantId w : out.primary.winners) primary[static_cast<std::size_t>(w)] = 1;
    out.secondary_winners = detail::budgeted_descriptive_greedy(
        c, covered, budget,
        [&](const Participant& p) { return !primary[static_cast<std::size_t>(p.id)]; },
        out.secondary_assignments, out.secondary_payments, out.budget_trace);
  }
  out.covered_final = mask_to_ids(covered);
  out.covered_final_mask = std::move(covered);
  return out;
}

// Post-auction reputation update. Receives the winner, its current
// reputation and the finished outcome; returns the new reputation.
using ReputationPolicy =
    std::function<double(ParticipantId, double, const TwoStageOutcome&)>;

inline ReputationPolicy identity_reputation_policy() {
  return [](ParticipantId, double current, const TwoStageOutcome&) { return current; };
}

// Applies `policy` to every primary and secondary winner and returns the full
// reputation vector. Outlier detection on sensed data is not modeled; a
// policy can encode its result.
inline std::vector<double> apply_reputation_hook(const Campaign& c,
                                                 const TwoStageOutcome& outcome,
                                                 const ReputationPolicy& policy) {
  std::vector<double> reputations;
  reputations.reserve(static_cast<std::size_t>(c.num_participants()));
  for (const Participant& p : c.participants()) reputations.push_back(p.reputation);
  auto update = [&](ParticipantId id) {
    auto& r = reputations[static_cast<std::size_t>(id)];
    const double next = policy(id, r, outcome);
    if (!(next > 0.0 && next <= 1.0)) {
      throw std::invalid_argument("reputation policy returned a value outside (0, 1]");
    }
    r = next;
  };
  for (ParticipantId id : outcome.primary.winners) update(id);
  for (ParticipantId id : outcome.secondary_winners) update(id);
  return reputations;
}

}  // namespace mcs
