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

// Per-task bid mechanism: the whole auction runs on descriptive bids, and
// every task is assigned to at most one winner.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "mcs/domain.hpp"
#include "mcs/greedy.hpp"
#include "mcs/two_stage.hpp"

namespace mcs {

enum class PtbAdmission {
  // Admit the argmax candidate while the budget recursion, started from the
  // total task value, stays nonnegative.
  kBudget,
  // Admit the argmax candidate while its utility is strictly positive.
  kPositiveUtility,
};

enum class PtbPayment {
  kBidEqual,  // pay the descriptive sum over the assigned tasks
  kCritical,  // critical value of the live bid term; kPositiveUtility only
};

struct PerTaskOptions {
  PtbAdmission admission = PtbAdmission::kBudget;
  PtbPayment payment = PtbPayment::kBidEqual;
};

struct PerTaskOutcome {
  std::vector<ParticipantId> winners;  // admission order
  std::map<ParticipantId, std::vector<TaskId>> assignments;
  std::map<ParticipantId, double> payments;
  // Descriptive-bid sum over each winner's assigned tasks.
  std::map<ParticipantId, double> assigned_bid_sums;
  // Utility score V_p^R - B_p/R_p of each winner when admitted.
  std::map<ParticipantId, double> admission_utilities;
  std::map<ParticipantId, int> competitors_examined;
  // Platform budget: total task value, then after each admission. In budget
  // mode this is the admission recursion; otherwise plain accounting of
  // value minus payments.
  std::vector<double> budget_trace;
  std::vector<TaskId> covered_final;
  TaskMask covered_final_mask;

  double total_payment() const {
    double sum = 0.0;
    for (const auto& [id, pay] : payments) sum += pay;
    return sum;
  }
};

namespace detail {

inline auto live_bid_term(const TaskMask& covered) {
  return [&covered](const Participant& p) { return live_descriptive_sum(p, covered); };
}

// Critical value of the live bid term for `winner` under positive-utility
// admission, computed the same way as the stage-one payment.
inline CriticalPayment per_task_critical_payment(const Campaign& c,
                                                 ParticipantId winner) {
  const bool ra = c.reputation_aware();
  const Participant& self = c.participant(winner);
  CriticalPayment out;
  TaskMask covered = c.empty_mask();
  std::vector<std::uint8_t> in_theta(static_cast<std::size_t>(c.num_participants()), 0);
  in_theta[static_cast<std::size_t>(winner)] = 1;
  for (;;) {
    const auto q = best_pick(
        c, covered,
        [&](const Participant& p) {
          return !in_theta[static_cast<std::size_t>(p.id)] && has_live_task(p, covered);
        },
        live_bid_term(covered));
    const double own = marginal_value(self, covered, c.tasks(), ra);
    if (!q) {
      if (out.competitors_examined > 0) out.payment = std::max(out.payment, own);
      break;
    }
    out.payment = std::max(out.payment, std::min(own - q->utility(), own));
    ++out.competitors_examined;
    if (q->utility() <= 0.0) break;
    in_theta[static_cast<std::size_t>(q->id)] = 1;
    cover(covered, c.participant(q->id));
  }
  return out;
}

}  // namespace detail

inline PerTaskOutcome run_per_task(const Campaign& c, PerTaskOptions options = {}) {
  if (options.payment == PtbPayment::kCritical &&
      options.admission != PtbAdmission::kPositiveUtility) {
    throw std::invalid_argument(
        "critical payments require positive-utility admission");
  }
  PerTaskOutcome out;
  TaskMask covered = c.empty_mask();

  if (options.admission == PtbAdmission::kBudget) {
    out.budget_trace.push_back(c.total_value());
    out.winners = detail::budgeted_descriptive_greedy(
        c, covered, c.total_value(), [](const Participant&) { return true; },
        out.assignments, out.payments, out.budget_trace, &out.admission_utilities);
  } else {
    std::vector<std::uint8_t> admitted(static_cast<std::size_t>(c.num_participants()), 0);
    double accounting = c.total_value();
    out.budget_trace.push_back(accounting);
    for (;;) {
      const auto h = best_pick(
          c, covered,
          [&](const Participant& p) {
            return !admitted[static_cast<std::size_t>(p.id)] && has_live_task(p, covered);
          },
          detail::live_bid_term(covered));
      if (!h || !(h->utility() > 0.0)) break;
      const Participant& winner = c.participant(h->id);
      const double bid_sum = live_descriptive_sum(winner, covered);
      admitted[static_cast<std::size_t>(h->id)] = 1;
      out.winners.push_back(h->id);
      out.admission_utilities.emplace(h->id, h->utility());
      std::vector<TaskId> got = live_tasks(winner, covered);
      for (TaskId t : got) covered[static_cast<std::size_t>(t)] = 1;
      out.assignments.emplace(h->id, std::move(got));
      out.payments.emplace(h->id, bid_sum);
    }
    if (options.payment == PtbPayment::kCritical) {
      for (ParticipantId w : out.winners) {
        const CriticalPayment cp = detail::per_task_critical_payment(c, w);
        out.payments[w] = cp.payment;
        out.competitors_examined[w] = cp.competitors_examined;
      }
    }
    for (ParticipantId w : out.winners) {
      accounting -= out.payments[w];
      out.budget_trace.push_back(accounting);
    }
  }

  for (const auto& [id, tasks] : out.assignments) {
    out.assigned_bid_sums[id] = sum_descriptive_bids(c.participant(id), tasks);
  }
  out.covered_final = mask_to_ids(covered);
  out.covered_final_mask = std::move(covered);
  return out;
}

}  // namespace mcs
