#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mobility/decimal.hpp"
#include "mobility/dynamics.hpp"
#include "mobility/instance.hpp"
#include "mobility/mechanism.hpp"
#include "mobility/solver.hpp"

namespace mobility {

// Outcome of one property check. A failing report carries a witness with the
// concrete ids and numbers needed to replay the violation standalone.
struct PropertyReport {
  std::string property;
  std::string instance_desc;
  bool pass = true;
  std::string witness;
  std::uint64_t checked = 0;

  void fail(std::string w) {
    pass = false;
    if (witness.empty()) witness = std::move(w);
  }
};

// Individual rationality: non-negative utility for every traveler.
inline PropertyReport check_ir(const MarketOutcome& outcome) {
  PropertyReport rep{"individual-rationality", "subclass " + outcome.subclass};
  for (const auto& row : outcome.travelers) {
    ++rep.checked;
    if (row.utility.is_negative())
      rep.fail("traveler '" + row.traveler + "' utility " + row.utility.str() + " < 0");
  }
  return rep;
}

// Economic sustainability: every payment meets the assigned service's fare.
inline PropertyReport check_sustainability(const MarketOutcome& outcome) {
  PropertyReport rep{"economic-sustainability", "subclass " + outcome.subclass};
  for (const auto& row : outcome.travelers) {
    ++rep.checked;
    if (row.payment < row.min_payment)
      rep.fail("traveler '" + row.traveler + "' payment " + row.payment.str() +
               " below minimum " + row.min_payment.str());
  }
  return rep;
}

// Evenly spaced misreports spanning under- and over-reporting in every
// dimension: value of time over [0.1, 0.9], preferred time over [0, 2*theta],
// willingness-to-pay over [0, 2*vbar].
inline std::vector<TravelRequirements> default_misreport_grid(const TravelRequirements& truth,
                                                              int per_dim = 5) {
  if (per_dim < 2) per_dim = 2;
  auto axis = [per_dim](Decimal lo, Decimal hi) {
    std::vector<Decimal> pts;
    Decimal step = (hi - lo).div_int(per_dim - 1);
    for (int i = 0; i < per_dim; ++i) pts.push_back(lo + step * static_cast<std::int64_t>(i));
    return pts;
  };
  auto alphas = axis(Decimal::parse("0.1"), Decimal::parse("0.9"));
  auto thetas = axis(Minutes{}, truth.preferred_time * 2);
  auto vbars = axis(Money{}, truth.max_wtp * 2);
  std::vector<TravelRequirements> grid;
  grid.reserve(alphas.size() * thetas.size() * vbars.size());
  for (const auto& a : alphas)
    for (const auto& t : thetas)
      for (const auto& v : vbars) grid.push_back({a, t, v});
  return grid;
}

// Incentive compatibility, falsified by grid search: re-run the market with
// each misreport substituted for the traveler's requirements and compare the
// traveler's actual utility (true valuation at the induced assignment minus
// the payment charged under the misreport) against the truthful utility.
// The truthful point itself is always evaluated first as a sanity anchor.
inline PropertyReport check_ic(const WelfareInstance& inst, const TravelerId& traveler,
                               const std::vector<TravelRequirements>& grid) {
  PropertyReport rep{"incentive-compatibility", inst.descriptor() + ", traveler '" + traveler + "'"};
  auto it = std::find(inst.subclass.members.begin(), inst.subclass.members.end(), traveler);
  if (it == inst.subclass.members.end())
    throw StructuralError("traveler '" + traveler + "' is not a subclass member");
  std::size_t row = static_cast<std::size_t>(it - inst.subclass.members.begin());
  const TravelRequirements truth = inst.members[row].requirements;

  for (const auto& g : grid) {
    auto issues = g.problems("misreport grid point");
    if (!issues.empty()) throw ValidationError(issues.front());
  }

  MarketOutcome truthful = run_market(inst);
  Money truthful_utility = truthful.travelers[row].utility;

  auto actual_utility_under = [&](const TravelRequirements& report) {
    WelfareInstance misreported = inst;
    misreported.members[row].requirements = report;
    MarketOutcome outcome = run_market(misreported);
    const TravelerOutcome& r = outcome.travelers[row];
    Money actual_valuation;
    if (auto col = outcome.assignment.assigned_service(row)) {
      Minutes t = r.experienced_time;
      actual_valuation = valuation(truth, &inst.services[*col], t);
    }
    return utility(actual_valuation, r.payment);
  };

  ++rep.checked;
  Money at_truth = actual_utility_under(truth);
  if (at_truth != truthful_utility)
    rep.fail("identity misreport changed traveler '" + traveler + "' utility from " +
             truthful_utility.str() + " to " + at_truth.str());

  for (const auto& report : grid) {
    ++rep.checked;
    Money actual = actual_utility_under(report);
    if (truthful_utility < actual) {
      rep.fail("traveler '" + traveler + "' gains by reporting (alpha=" +
               report.value_of_time.str() + ", theta=" + report.preferred_time.str() +
               ", vbar=" + report.max_wtp.str() + "): utility " + actual.str() +
               " > truthful " + truthful_utility.str());
    }
  }
  return rep;
}

// Exclusion relations at corresponding assignments: zero one traveler's row
// of the optimal assignment and compare. Experienced times may only drop,
// remaining valuations may only rise, total operating cost may only fall.
inline PropertyReport check_exclusion_lemmas(const WelfareInstance& inst) {
  PropertyReport rep{"exclusion-lemmas", inst.descriptor()};
  SolveResult opt = solve_welfare_max(inst);
  DynamicsReport at_opt = compute_dynamics(inst.members, inst.services, opt.assignment);

  for (std::size_t ell = 0; ell < inst.members.size(); ++ell) {
    Assignment excluded = opt.assignment;
    excluded.zero_row(ell);
    DynamicsReport at_excl = compute_dynamics(inst.members, inst.services, excluded);
    ++rep.checked;

    for (std::size_t i = 0; i < inst.members.size(); ++i) {
      if (i == ell) continue;
      if (at_opt.experienced_time[i] < at_excl.experienced_time[i])
        rep.fail("excluding '" + inst.members[ell].id + "' raised traveler '" +
                 inst.members[i].id + "' travel time from " +
                 at_opt.experienced_time[i].str() + " to " + at_excl.experienced_time[i].str());
    }

    Money others_at_opt;
    for (std::size_t i = 0; i < inst.members.size(); ++i)
      if (i != ell) others_at_opt += at_opt.valuation[i];
    if (at_excl.total_valuation() < others_at_opt)
      rep.fail("excluding '" + inst.members[ell].id + "' dropped the remaining valuations from " +
               others_at_opt.str() + " to " + at_excl.total_valuation().str());

    if (at_opt.total_operating_cost() < at_excl.total_operating_cost())
      rep.fail("excluding '" + inst.members[ell].id + "' raised operating cost from " +
               at_opt.total_operating_cost().str() + " to " +
               at_excl.total_operating_cost().str());
  }
  return rep;
}

// Every traveler assigned at the optimum values the trip at least at the fare.
inline PropertyReport check_valuation_floor(const WelfareInstance& inst) {
  PropertyReport rep{"valuation-floor", inst.descriptor()};
  SolveResult opt = solve_welfare_max(inst);
  DynamicsReport dyn = compute_dynamics(inst.members, inst.services, opt.assignment);
  for (std::size_t r = 0; r < inst.members.size(); ++r) {
    if (!opt.assignment.assigned_service(r)) continue;
    ++rep.checked;
    if (dyn.valuation[r] < dyn.min_payment[r])
      rep.fail("traveler '" + inst.members[r].id + "' valuation " + dyn.valuation[r].str() +
               " below fare " + dyn.min_payment[r].str());
  }
  return rep;
}

}  // namespace mobility
