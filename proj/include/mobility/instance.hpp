#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mobility/errors.hpp"
#include "mobility/model.hpp"

namespace mobility {

// Feasible services sharing one (type, link); their combined load is capped
// by the link capacity.
struct TypeGroup {
  int type = 0;
  LinkId link;
  Decimal gamma;
  std::vector<std::size_t> service_index;
};

// One subclass market ready to solve: members and feasible services sorted
// by id, link groups resolved, optionally one traveler excluded.
struct WelfareInstance {
  Subclass subclass;
  std::vector<Traveler> members;           // aligned with subclass.members
  std::vector<MobilityService> services;   // aligned with subclass.feasible
  std::vector<TypeGroup> groups;
  std::optional<TravelerId> excluded;

  std::optional<std::size_t> excluded_row() const {
    if (!excluded) return std::nullopt;
    auto it = std::lower_bound(subclass.members.begin(), subclass.members.end(), *excluded);
    if (it == subclass.members.end() || *it != *excluded) return std::nullopt;
    return static_cast<std::size_t>(it - subclass.members.begin());
  }

  Assignment zero_assignment() const {
    return Assignment::zeros(subclass.id, subclass.members, subclass.feasible);
  }

  WelfareInstance excluding(const TravelerId& traveler) const {
    WelfareInstance copy = *this;
    copy.excluded = traveler;
    if (!copy.excluded_row())
      throw StructuralError("excluded traveler '" + traveler + "' is not a subclass member");
    return copy;
  }

  // Drops a member entirely (outside-option path); the excluded marker is cleared.
  WelfareInstance without_member(const TravelerId& traveler) const {
    WelfareInstance copy = *this;
    copy.excluded.reset();
    auto it = std::find(copy.subclass.members.begin(), copy.subclass.members.end(), traveler);
    if (it == copy.subclass.members.end())
      throw StructuralError("traveler '" + traveler + "' is not a subclass member");
    auto idx = static_cast<std::size_t>(it - copy.subclass.members.begin());
    copy.subclass.members.erase(it);
    copy.members.erase(copy.members.begin() + static_cast<std::ptrdiff_t>(idx));
    return copy;
  }

  std::string descriptor() const {
    std::string d = "subclass " + subclass.id + " (" +
                    std::to_string(members.size()) + " travelers, " +
                    std::to_string(services.size()) + " services";
    if (excluded) d += ", excluding '" + *excluded + "'";
    return d + ")";
  }
};

// Assembles the instance for one subclass. The subclass's feasible list must
// already be populated; members/services are resolved and sorted by id.
inline WelfareInstance make_instance(const CityNetwork& network,
                                     const std::vector<MobilityService>& all_services,
                                     const std::vector<Traveler>& all_travelers,
                                     const Subclass& subclass) {
  WelfareInstance inst;
  inst.subclass = subclass;
  std::sort(inst.subclass.members.begin(), inst.subclass.members.end());
  std::sort(inst.subclass.feasible.begin(), inst.subclass.feasible.end());

  for (const auto& id : inst.subclass.members) {
    auto it = std::find_if(all_travelers.begin(), all_travelers.end(),
                           [&](const Traveler& t) { return t.id == id; });
    if (it == all_travelers.end())
      throw StructuralError("subclass member '" + id + "' is not a known traveler");
    inst.members.push_back(*it);
  }
  for (const auto& id : inst.subclass.feasible) {
    auto it = std::find_if(all_services.begin(), all_services.end(),
                           [&](const MobilityService& s) { return s.id == id; });
    if (it == all_services.end())
      throw StructuralError("feasible service '" + id + "' is not a known service");
    inst.services.push_back(*it);
  }

  std::map<std::pair<int, LinkId>, TypeGroup> groups;
  for (std::size_t c = 0; c < inst.services.size(); ++c) {
    const auto& svc = inst.services[c];
    auto key = std::make_pair(svc.type, svc.link);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) {
      const Link* link = network.find_link(svc.link);
      if (link == nullptr)
        throw StructuralError("service '" + svc.id + "' references unknown link '" +
                              svc.link + "'");
      it->second.type = svc.type;
      it->second.link = svc.link;
      it->second.gamma = link->gamma;
    }
    it->second.service_index.push_back(c);
  }
  for (auto& [key, g] : groups) inst.groups.push_back(std::move(g));
  return inst;
}

}  // namespace mobility
