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

// Stage-one winner selection and critical payments. With reputation-aware
// campaigns this is TSCM, with reputation-unaware ones Msensing; the
// two-stage mechanism reuses it as its first stage.

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mcs/domain.hpp"

namespace mcs {

// Greedy ranking key. Higher utility wins; ties go to the lower effective bid,
// then to the lower participant id.
struct PickKey {
  double utility = 0.0;
  double effective_bid = 0.0;
  ParticipantId id = 0;
};

inline bool outranks(const PickKey& a, const PickKey& b) {
  if (a.utility != b.utility) return a.utility > b.utility;
  if (a.effective_bid != b.effective_bid) return a.effective_bid < b.effective_bid;
  return a.id < b.id;
}

struct Pick {
  ParticipantId id = 0;
  double value = 0.0;          // V_p^R against the current coverage
  double effective_bid = 0.0;  // bid term divided by R_p
  double utility() const { return value - effective_bid; }
};

// Best participant among those accepted by `eligible`, ranked by
// V_p^R(covered) - bid_term(p) / R_p.
template <class Eligible, class BidTerm>
std::optional<Pick> best_pick(const Campaign& c, const TaskMask& covered,
                              Eligible&& eligible, BidTerm&& bid_term) {
  const bool ra = c.reputation_aware();
  std::optional<Pick> best;
  PickKey best_key;
  for (const Participant& p : c.participants()) {
    if (!eligible(p)) continue;
    Pick pick;
    pick.id = p.id;
    pick.value = marginal_value(p, covered, c.tasks(), ra);
    pick.effective_bid = bid_term(p) / effective_reputation(p, ra);
    const PickKey key{pick.utility(), pick.effective_bid, p.id};
    if (!best || outranks(key, best_key)) {
      best = pick;
      best_key = key;
    }
  }
  return best;
}

inline double collective_bid_term(const Participant& p) { return p.collective_bid; }

struct PrimarySelection {
  std::vector<ParticipantId> winners;  // selection order
  TaskMask covered;
};

// Admits the argmax participant while its effective bid is strictly below its
// reputational marginal value. Coverage accumulates by union.
inline PrimarySelection select_primary(const Campaign& c) {
  PrimarySelection sel;
  sel.covered = c.empty_mask();
  std::vector<std::uint8_t> selected(static_cast<std::size_t>(c.num_participants()), 0);
  while (sel.winners.size() < selected.size()) {
    const auto h = best_pick(
        c, sel.covered,
        [&](const Participant& p) { return !selected[static_cast<std::size_t>(p.id)]; },
        collective_bid_term);
    if (!h || !(h->effective_bid < h->value)) break;
    selected[static_cast<std::size_t>(h->id)] = 1;
    sel.winners.push_back(h->id);
    cover(sel.covered, c.participant(h->id));
  }
  return sel;
}

struct CriticalPayment {
  double payment = 0.0;
  // Competitors the payment loop looked at. Zero only when the winner is the
  // sole participant, in which case the payment stays 0.
  int competitors_examined = 0;
};

// Re-runs the greedy without `winner` over every other participant. At each
// pick q the payment is raised to min(V_i(Θ) - (V_q(Θ) - b_q/R_q), V_i(Θ)).
// The loop stops at the first q with b_q/R_q >= V_q(Θ), V_q taken before q
// joins Θ. If all competitors join Θ first, V_i(Θ) over all of them is the
// last candidate value. Payments are in reputation-scaled units.
inline CriticalPayment critical_payment(const Campaign& c, ParticipantId winner) {
  if (winner < 0 || winner >= c.num_participants()) {
    throw std::invalid_argument("winner is not a participant");
  }
  const bool ra = c.reputation_aware();
  const Participant& self = c.participant(winner);
  CriticalPayment out;
  TaskMask covered = c.empty_mask();
  std::vector<std::uint8_t> in_theta(static_cast<std::size_t>(c.num_participants()), 0);
  in_theta[static_cast<std::size_t>(winner)] = 1;
  for (;;) {
    const auto q = best_pick(
        c, covered,
        [&](const Participant& p) { return !in_theta[static_cast<std::size_t>(p.id)]; },
        collective_bid_term);
    if (!q) {
      if (out.competitors_examined > 0) {
        out.payment = std::max(out.payment, marginal_value(self, covered, c.tasks(), ra));
      }
      break;
    }
    const double own = marginal_value(self, covered, c.tasks(), ra);
    out.payment = std::max(out.payment, std::min(own - q->utility(), own));
    ++out.competitors_examined;
    if (q->effective_bid >= q->value) break;
    in_theta[static_cast<std::size_t>(q->id)] = 1;
    cover(covered, c.participant(q->id));
  }
  return out;
}

struct PaymentSet {
  std::vector<double> payments;          // per participant, 0 for non-winners
  std::vector<int> competitors_examined;  // per participant, 0 for non-winners
  double total = 0.0;
};

inline PaymentSet compute_payments(const Campaign& c,
                                   std::span<const ParticipantId> winners) {
  const auto n = static_cast<std::size_t>(c.num_participants());
  PaymentSet out{std::vector<double>(n, 0.0), std::vector<int>(n, 0), 0.0};
  std::vector<std::uint8_t> seen(n, 0);
  for (ParticipantId w : winners) {
    if (w < 0 || w >= c.num_participants()) {
      throw std::invalid_argument("winner is not a participant");
    }
    if (seen[static_cast<std::size_t>(w)]++) {
      throw std::invalid_argument("duplicate winner");
    }
    const CriticalPayment cp = critical_payment(c, w);
    out.payments[static_cast<std::size_t>(w)] = cp.payment;
    out.competitors_examined[static_cast<std::size_t>(w)] = cp.competitors_examined;
    out.total += cp.payment;
  }
  return out;
}

struct PrimaryResult {
  std::vector<ParticipantId> winners;  // selection order
  std::vector<TaskId> covered;         // ascending
  TaskMask covered_mask;
  std::vector<double> payments;        // per participant
  std::vector<int> competitors_examined;
  double total_payment = 0.0;
};

inline PrimaryResult run_primary(const Campaign& c) {
  PrimarySelection sel = select_primary(c);
  PaymentSet pay = compute_payments(c, sel.winners);
  PrimaryResult r;
  r.covered = mask_to_ids(sel.covered);
  r.covered_mask = std::move(sel.covered);
  r.winners = std::move(sel.winners);
  r.payments = std::move(pay.payments);
  r.competitors_examined = std::move(pay.competitors_examined);
  r.total_payment = pay.total;
  return r;
}

}  // namespace mcs
