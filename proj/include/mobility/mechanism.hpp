#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mobility/decimal.hpp"
#include "mobility/dynamics.hpp"
#include "mobility/instance.hpp"
#include "mobility/parallel.hpp"
#include "mobility/solver.hpp"

namespace mobility {

// Externality price: what the market loses by serving this traveler,
// credited with the traveler's own realized valuation.
inline Money compute_payment(Money welfare_opt, Money valuation_at_opt, Money excluded_welfare) {
  return excluded_welfare - (welfare_opt - valuation_at_opt);
}

// Payment charged to a traveler who rejects the recommendation and takes the
// outside option, and the resulting utility.
inline std::pair<Money, Money> outside_option(const Traveler& traveler) {
  return {traveler.requirements.max_wtp, Money{}};
}

struct TravelerOutcome {
  TravelerId traveler;
  std::optional<ServiceId> service;
  Minutes experienced_time;
  Money valuation;
  Money min_payment;        // fare of the assigned service
  Money excluded_welfare;   // optimum with this traveler's row forced to zero
  Money payment;
  Money utility;
  bool rejected = false;    // settled via the outside option
};

struct ServiceOutcome {
  ServiceId service;
  std::int64_t load = 0;
  Money operating_cost;
};

struct MarketOutcome {
  std::string subclass;
  Assignment assignment;
  std::vector<TravelerOutcome> travelers;  // sorted by traveler id
  std::vector<ServiceOutcome> services;    // sorted by service id
  Money welfare;                   // optimum market welfare
  Money revenue;                   // sum of payments
  Money assigned_min_payments;     // sum of fares over assigned travelers
  Money total_operating_cost;
};

// Solves the welfare optimum once and one exclusion problem per traveler,
// then prices each traveler by their externality. Exclusion solves are
// independent and may run on up to `threads` workers; the outcome does not
// depend on the thread count.
inline MarketOutcome run_market(const WelfareInstance& inst, unsigned threads = 1) {
  if (inst.excluded)
    throw StructuralError("run_market expects an instance without exclusions");

  SolveResult opt = solve_welfare_max(inst);
  DynamicsReport dyn = compute_dynamics(inst.members, inst.services, opt.assignment);

  std::size_t n = inst.members.size();
  std::vector<Money> excluded_welfare(n);
  parallel_for(n, threads, [&](std::size_t i) {
    excluded_welfare[i] = solve_exclusion(inst.excluding(inst.members[i].id)).welfare;
  });

  MarketOutcome out;
  out.subclass = inst.subclass.id;
  out.assignment = opt.assignment;
  out.welfare = opt.welfare;
  for (std::size_t i = 0; i < n; ++i) {
    TravelerOutcome row;
    row.traveler = inst.members[i].id;
    if (auto col = opt.assignment.assigned_service(i))
      row.service = inst.services[*col].id;
    row.experienced_time = dyn.experienced_time[i];
    row.valuation = dyn.valuation[i];
    row.min_payment = dyn.min_payment[i];
    row.excluded_welfare = excluded_welfare[i];
    row.payment = compute_payment(opt.welfare, row.valuation, row.excluded_welfare);
    row.utility = utility(row.valuation, row.payment);
    out.travelers.push_back(std::move(row));
    out.revenue += out.travelers.back().payment;
    if (out.travelers.back().service) out.assigned_min_payments += dyn.min_payment[i];
  }
  for (std::size_t c = 0; c < inst.services.size(); ++c) {
    out.services.push_back({inst.services[c].id, dyn.load[c], dyn.service_cost[c]});
    out.total_operating_cost += dyn.service_cost[c];
  }
  return out;
}

// Market run where some travelers reject the recommendation: they pay their
// maximum willingness-to-pay, end at zero utility, and the rest of the
// market is solved without them.
inline MarketOutcome run_market_with_rejections(const WelfareInstance& inst,
                                                const std::set<TravelerId>& rejecters,
                                                unsigned threads = 1) {
  if (rejecters.empty()) return run_market(inst, threads);

  WelfareInstance reduced = inst;
  std::vector<Traveler> rejected_members;
  for (const auto& id : rejecters) {
    auto it = std::find(reduced.subclass.members.begin(), reduced.subclass.members.end(), id);
    if (it == reduced.subclass.members.end())
      throw StructuralError("rejecting traveler '" + id + "' is not a subclass member");
    rejected_members.push_back(reduced.members[static_cast<std::size_t>(
        it - reduced.subclass.members.begin())]);
    reduced = reduced.without_member(id);
  }

  MarketOutcome out = run_market(reduced, threads);
  out.subclass = inst.subclass.id;
  for (const auto& t : rejected_members) {
    TravelerOutcome row;
    row.traveler = t.id;
    auto [payment, u] = outside_option(t);
    row.valuation = t.requirements.max_wtp;
    row.payment = payment;
    row.utility = u;
    row.rejected = true;
    out.travelers.push_back(std::move(row));
    out.revenue += payment;
  }
  std::sort(out.travelers.begin(), out.travelers.end(),
            [](const TravelerOutcome& a, const TravelerOutcome& b) {
              return a.traveler < b.traveler;
            });
  return out;
}

}  // namespace mobility
