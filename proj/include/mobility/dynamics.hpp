#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "mobility/decimal.hpp"
#include "mobility/errors.hpp"
#include "mobility/model.hpp"

namespace mobility {

// Affine congestion model: base time plus a per-extra-occupant delay.
// Non-decreasing in load; delay_per_rider = 0 recovers a fixed timetable.
inline Minutes experienced_travel_time(const MobilityService& service, std::int64_t load) {
  if (load < 0 || load > service.capacity) {
    throw CapacityError("service '" + service.id + "' load " + std::to_string(load) +
                        " outside [0, " + std::to_string(service.capacity) + "]");
  }
  std::int64_t extra = std::max<std::int64_t>(0, load - 1);
  return service.base_time + service.delay_per_rider * extra;
}

// Monetary inconvenience of the experienced vs preferred travel time,
// clamped to [0, max_wtp] so the valuation stays within [0, max_wtp].
inline Money inconvenience(const TravelRequirements& req, Minutes experienced) {
  Money raw = req.value_of_time * (experienced - req.preferred_time);
  return clamp(raw, Money{}, req.max_wtp);
}

// Willingness-to-pay realized by an assignment; zero when unassigned.
inline Money valuation(const TravelRequirements& req, const MobilityService* assigned,
                       Minutes experienced) {
  if (assigned == nullptr) return Money{};
  return req.max_wtp - inconvenience(req, experienced);
}

inline Money utility(Money valuation, Money payment) { return valuation - payment; }

// Operating cost of one service under an assignment: per-rider share times load.
inline Money operating_cost(const MobilityService& service, const Assignment& a) {
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (a.services[c] == service.id) return service.seat_cost * a.load(c);
  }
  return Money{};
}

// Fare of the assigned service; zero for an unassigned traveler.
inline Money min_payment(const Traveler& traveler, const Assignment& a,
                         const std::vector<MobilityService>& services) {
  auto row = a.row_of(traveler.id);
  if (!row) return Money{};
  auto col = a.assigned_service(*row);
  if (!col) return Money{};
  for (const auto& s : services) {
    if (s.id == a.services[*col]) return s.fare;
  }
  throw StructuralError("assignment references unknown service '" + a.services[*col] + "'");
}

// Per-traveler and per-service quantities induced by one assignment.
// Unassigned travelers carry the conventions: experienced time 0,
// inconvenience 0, valuation 0, min payment 0.
struct DynamicsReport {
  std::vector<Minutes> experienced_time;  // by traveler row
  std::vector<Money> inconvenience;       // by traveler row
  std::vector<Money> valuation;           // by traveler row
  std::vector<Money> min_payment;         // by traveler row
  std::vector<std::int64_t> load;         // by service column
  std::vector<Money> service_cost;        // by service column

  Money total_valuation() const {
    Money t;
    for (const auto& v : valuation) t += v;
    return t;
  }
  Money total_min_payment() const {
    Money t;
    for (const auto& s : min_payment) t += s;
    return t;
  }
  Money total_operating_cost() const {
    Money t;
    for (const auto& c : service_cost) t += c;
    return t;
  }
};

// members and services must be aligned with the assignment's row/column labels.
inline DynamicsReport compute_dynamics(const std::vector<Traveler>& members,
                                       const std::vector<MobilityService>& services,
                                       const Assignment& a) {
  if (members.size() != a.rows() || services.size() != a.cols())
    throw StructuralError("dynamics input does not match assignment dimensions");

  DynamicsReport rep;
  rep.load.resize(a.cols());
  rep.service_cost.resize(a.cols());
  std::vector<Minutes> service_time(a.cols());
  for (std::size_t c = 0; c < a.cols(); ++c) {
    rep.load[c] = a.load(c);
    service_time[c] = experienced_travel_time(services[c], rep.load[c]);
    rep.service_cost[c] = services[c].seat_cost * rep.load[c];
  }
  rep.experienced_time.resize(a.rows());
  rep.inconvenience.resize(a.rows());
  rep.valuation.resize(a.rows());
  rep.min_payment.resize(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto col = a.assigned_service(r);
    if (!col) continue;  // all-zero conventions
    const auto& req = members[r].requirements;
    rep.experienced_time[r] = service_time[*col];
    rep.inconvenience[r] = inconvenience(req, service_time[*col]);
    rep.valuation[r] = req.max_wtp - rep.inconvenience[r];
    rep.min_payment[r] = services[*col].fare;
  }
  return rep;
}

}  // namespace mobility
