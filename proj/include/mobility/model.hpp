#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mobility/decimal.hpp"
#include "mobility/errors.hpp"

namespace mobility {

using ZoneId = std::string;
using LinkId = std::string;
using ServiceId = std::string;
using TravelerId = std::string;

// Undirected connection between two zones; gamma caps the riders one
// service type may put on the link.
struct Link {
  LinkId id;
  ZoneId a;
  ZoneId b;
  Decimal gamma;

  bool joins(const ZoneId& x, const ZoneId& y) const {
    return (a == x && b == y) || (a == y && b == x);
  }
};

// Zone multigraph: parallel links between the same zone pair are allowed.
struct CityNetwork {
  std::vector<ZoneId> zones;
  std::vector<Link> links;

  bool has_zone(const ZoneId& z) const {
    return std::find(zones.begin(), zones.end(), z) != zones.end();
  }

  const Link* find_link(const LinkId& id) const {
    for (const auto& l : links)
      if (l.id == id) return &l;
    return nullptr;
  }

  std::vector<std::string> problems() const {
    std::vector<std::string> out;
    std::set<ZoneId> seen;
    for (const auto& z : zones) {
      if (!seen.insert(z).second) out.push_back("duplicate zone '" + z + "'");
    }
    std::set<LinkId> link_ids;
    for (const auto& l : links) {
      if (!link_ids.insert(l.id).second)
        out.push_back("duplicate link '" + l.id + "'");
      if (!has_zone(l.a))
        out.push_back("link '" + l.id + "' endpoint '" + l.a + "' is not a declared zone");
      if (!has_zone(l.b))
        out.push_back("link '" + l.id + "' endpoint '" + l.b + "' is not a declared zone");
      if (l.gamma.is_negative())
        out.push_back("link '" + l.id + "' has negative capacity");
    }
    return out;
  }
};

struct MobilityService {
  ServiceId id;
  int type = 1;           // service type h
  LinkId link;            // route link carrying this type between the pair
  ZoneId origin;
  ZoneId destination;
  std::int64_t capacity = 1;   // max riders
  Minutes base_time;           // travel time with at most one rider
  Minutes delay_per_rider;     // extra minutes per additional occupant
  Money seat_cost;             // per-rider share of the operating cost
  Money fare;                  // minimum acceptable payment

  std::vector<std::string> problems(const CityNetwork& net) const {
    std::vector<std::string> out;
    if (capacity < 1) out.push_back("service '" + id + "' capacity must be >= 1");
    if (type < 1) out.push_back("service '" + id + "' type must be >= 1");
    if (base_time.is_negative() || delay_per_rider.is_negative() ||
        seat_cost.is_negative() || fare.is_negative())
      out.push_back("service '" + id + "' has a negative time or money field");
    if (!net.has_zone(origin))
      out.push_back("service '" + id + "' origin '" + origin + "' is not a declared zone");
    if (!net.has_zone(destination))
      out.push_back("service '" + id + "' destination '" + destination + "' is not a declared zone");
    const Link* l = net.find_link(link);
    if (l == nullptr) {
      out.push_back("service '" + id + "' references unknown link '" + link + "'");
    } else if (!l->joins(origin, destination)) {
      out.push_back("service '" + id + "' route link '" + link +
                    "' does not join its served pair");
    }
    return out;
  }
};

// Private travel requirements reported by a traveler.
struct TravelRequirements {
  Decimal value_of_time;   // currency per minute, in (0, 1)
  Minutes preferred_time;  // minutes
  Money max_wtp;           // willingness-to-pay ceiling

  std::vector<std::string> problems(const std::string& owner) const {
    std::vector<std::string> out;
    if (!(Decimal{} < value_of_time && value_of_time < Decimal::from_int(1)))
      out.push_back(owner + ": value of time must lie strictly inside (0, 1)");
    if (preferred_time.is_negative()) out.push_back(owner + ": preferred time must be >= 0");
    if (max_wtp.is_negative()) out.push_back(owner + ": willingness-to-pay must be >= 0");
    return out;
  }
};

struct Traveler {
  TravelerId id;
  ZoneId origin;
  ZoneId destination;
  TravelRequirements requirements;

  std::vector<std::string> problems(const CityNetwork& net) const {
    std::vector<std::string> out;
    if (!net.has_zone(origin))
      out.push_back("traveler '" + id + "' origin '" + origin + "' is not a declared zone");
    if (!net.has_zone(destination))
      out.push_back("traveler '" + id + "' destination '" + destination +
                    "' is not a declared zone");
    if (origin == destination)
      out.push_back("traveler '" + id + "' origin equals destination");
    auto req = requirements.problems("traveler '" + id + "'");
    out.insert(out.end(), req.begin(), req.end());
    return out;
  }
};

// Travelers sharing one origin-destination pair; markets are solved per subclass.
struct Subclass {
  std::string id;  // "<origin>-><destination>"
  ZoneId origin;
  ZoneId destination;
  std::vector<TravelerId> members;     // sorted
  std::vector<ServiceId> feasible;     // sorted; filled by feasible_services
};

inline std::string subclass_label(const ZoneId& o, const ZoneId& d) {
  return o + "->" + d;
}

// Groups travelers by origin-destination pair. Output is sorted by pair and
// covers every traveler exactly once.
inline std::vector<Subclass> partition_travelers(const CityNetwork& network,
                                                 const std::vector<Traveler>& travelers) {
  for (const auto& t : travelers) {
    if (!network.has_zone(t.origin))
      throw ValidationError("traveler '" + t.id + "' origin '" + t.origin +
                            "' is not a declared zone");
    if (!network.has_zone(t.destination))
      throw ValidationError("traveler '" + t.id + "' destination '" + t.destination +
                            "' is not a declared zone");
  }
  std::map<std::pair<ZoneId, ZoneId>, std::vector<TravelerId>> buckets;
  for (const auto& t : travelers) buckets[{t.origin, t.destination}].push_back(t.id);
  std::vector<Subclass> out;
  out.reserve(buckets.size());
  for (auto& [pair, ids] : buckets) {
    std::sort(ids.begin(), ids.end());
    Subclass k;
    k.id = subclass_label(pair.first, pair.second);
    k.origin = pair.first;
    k.destination = pair.second;
    k.members = std::move(ids);
    out.push_back(std::move(k));
  }
  return out;
}

// Services serving exactly the subclass pair, sorted by id. Every traveler
// must have at least two travel options.
inline std::vector<ServiceId> feasible_services(const Subclass& subclass,
                                                const std::vector<MobilityService>& services) {
  std::vector<ServiceId> out;
  for (const auto& s : services) {
    if (s.origin == subclass.origin && s.destination == subclass.destination)
      out.push_back(s.id);
  }
  std::sort(out.begin(), out.end());
  if (out.size() < 2) {
    throw ValidationError("subclass " + subclass.id + " has " +
                          std::to_string(out.size()) +
                          " feasible service(s); every traveler needs at least two options");
  }
  return out;
}

// Binary traveler-service matrix for one subclass, row-major over sorted
// traveler and service ids.
struct Assignment {
  std::string subclass_id;
  std::vector<TravelerId> travelers;  // row labels, sorted
  std::vector<ServiceId> services;    // column labels, sorted
  std::vector<std::uint8_t> cells;    // rows() * cols(), row-major

  static Assignment zeros(const std::string& subclass_id,
                          std::vector<TravelerId> travelers,
                          std::vector<ServiceId> services) {
    Assignment a;
    a.subclass_id = subclass_id;
    a.travelers = std::move(travelers);
    a.services = std::move(services);
    a.cells.assign(a.travelers.size() * a.services.size(), 0);
    return a;
  }

  std::size_t rows() const { return travelers.size(); }
  std::size_t cols() const { return services.size(); }

  bool at(std::size_t row, std::size_t col) const {
    return cells[row * cols() + col] != 0;
  }
  void set(std::size_t row, std::size_t col, bool value) {
    cells[row * cols() + col] = value ? 1 : 0;
  }

  // Column index the traveler is assigned to; empty when the row is zero.
  // Rows with several ones have no single choice and yield the first.
  std::optional<std::size_t> assigned_service(std::size_t row) const {
    for (std::size_t c = 0; c < cols(); ++c)
      if (at(row, c)) return c;
    return std::nullopt;
  }

  std::int64_t load(std::size_t col) const {
    std::int64_t n = 0;
    for (std::size_t r = 0; r < rows(); ++r) n += at(r, col) ? 1 : 0;
    return n;
  }

  std::optional<std::size_t> row_of(const TravelerId& id) const {
    auto it = std::lower_bound(travelers.begin(), travelers.end(), id);
    if (it == travelers.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - travelers.begin());
  }

  void zero_row(std::size_t row) {
    for (std::size_t c = 0; c < cols(); ++c) set(row, c, false);
  }

  // Flattened-vector order used for deterministic tie-breaking.
  friend bool lex_less(const Assignment& a, const Assignment& b) {
    return std::lexicographical_compare(a.cells.begin(), a.cells.end(),
                                        b.cells.begin(), b.cells.end());
  }

  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.subclass_id == b.subclass_id && a.travelers == b.travelers &&
           a.services == b.services && a.cells == b.cells;
  }
};

enum class ConstraintFamily { RowSum, ServiceCapacity, LinkCapacity };

inline const char* constraint_family_name(ConstraintFamily f) {
  switch (f) {
    case ConstraintFamily::RowSum: return "row-sum";
    case ConstraintFamily::ServiceCapacity: return "service-capacity";
    case ConstraintFamily::LinkCapacity: return "link-capacity";
  }
  return "?";
}

struct ConstraintViolation {
  ConstraintFamily family;
  std::string detail;
};

struct ValidationVerdict {
  bool ok = true;
  std::vector<ConstraintViolation> violations;
};

// Checks the three constraint families: each traveler rides at most one
// service, service loads respect capacity, and per (type, link) groups the
// combined load respects the link capacity.
inline ValidationVerdict validate_assignment(const Assignment& a, const Subclass& subclass,
                                             const std::vector<MobilityService>& services,
                                             const CityNetwork& network) {
  if (a.travelers != subclass.members)
    throw StructuralError("assignment rows do not match subclass members");
  std::vector<ServiceId> expected;
  for (const auto& s : services) expected.push_back(s.id);
  std::sort(expected.begin(), expected.end());
  if (a.services != expected)
    throw StructuralError("assignment columns do not match the feasible services");
  if (a.cells.size() != a.rows() * a.cols())
    throw StructuralError("assignment cell count does not match its dimensions");

  auto service_by_id = [&](const ServiceId& id) -> const MobilityService& {
    for (const auto& s : services)
      if (s.id == id) return s;
    throw StructuralError("unknown service '" + id + "'");
  };

  ValidationVerdict verdict;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    int row_sum = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) row_sum += a.at(r, c) ? 1 : 0;
    if (row_sum > 1) {
      verdict.violations.push_back(
          {ConstraintFamily::RowSum,
           "traveler '" + a.travelers[r] + "' assigned to " + std::to_string(row_sum) +
               " services"});
    }
  }
  for (std::size_t c = 0; c < a.cols(); ++c) {
    const auto& svc = service_by_id(a.services[c]);
    std::int64_t load = a.load(c);
    if (load > svc.capacity) {
      verdict.violations.push_back(
          {ConstraintFamily::ServiceCapacity,
           "service '" + svc.id + "' load " + std::to_string(load) + " exceeds capacity " +
               std::to_string(svc.capacity)});
    }
  }
  // Only (type, link) pairs actually carrying a feasible service bind.
  std::map<std::pair<int, LinkId>, std::int64_t> group_load;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    const auto& svc = service_by_id(a.services[c]);
    group_load[{svc.type, svc.link}] += a.load(c);
  }
  for (const auto& [key, load] : group_load) {
    const Link* link = network.find_link(key.second);
    if (link == nullptr)
      throw StructuralError("service group references unknown link '" + key.second + "'");
    if (Decimal::from_int(load) > link->gamma) {
      verdict.violations.push_back(
          {ConstraintFamily::LinkCapacity,
           "type " + std::to_string(key.first) + " on link '" + key.second + "' carries " +
               std::to_string(load) + " riders, over capacity " + link->gamma.str()});
    }
  }
  verdict.ok = verdict.violations.empty();
  return verdict;
}

}  // namespace mobility
