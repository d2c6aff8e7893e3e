#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobility/decimal.hpp"
#include "mobility/errors.hpp"
#include "mobility/instance.hpp"
#include "mobility/model.hpp"

namespace mobility {

struct ScenarioMeta {
  std::string name;
  std::string description;
  std::optional<std::uint64_t> seed;
};

struct Scenario {
  ScenarioMeta meta;
  CityNetwork network;
  std::vector<MobilityService> services;
  std::vector<Traveler> travelers;
  std::set<TravelerId> rejecters;  // travelers settled via the outside option
};

struct ScenarioDiagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& obj, const char* key,
                                   const std::string& ctx) {
  if (!obj.is_object()) throw ParseError(ctx + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(ctx + ": missing field '" + key + "'");
  return *it;
}

inline std::string as_string(const nlohmann::json& v, const std::string& ctx) {
  if (!v.is_string()) throw ParseError(ctx + ": expected a string");
  return v.get<std::string>();
}

inline std::int64_t as_int(const nlohmann::json& v, const std::string& ctx) {
  if (!v.is_number_integer()) throw ParseError(ctx + ": expected an integer");
  return v.get<std::int64_t>();
}

// Money and time fields travel as decimal strings; plain integers are also
// exact and accepted. Binary floats are rejected.
inline Decimal as_decimal(const nlohmann::json& v, const std::string& ctx) {
  try {
    if (v.is_string()) return Decimal::parse(v.get<std::string>());
    if (v.is_number_integer()) return Decimal::from_int(v.get<std::int64_t>());
  } catch (const ParseError& e) {
    throw ParseError(ctx + ": " + e.what());
  }
  throw ParseError(ctx + ": expected a decimal string");
}

}  // namespace detail

inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json meta;
  meta["name"] = s.meta.name;
  meta["description"] = s.meta.description;
  if (s.meta.seed) meta["seed"] = *s.meta.seed;

  nlohmann::json net;
  net["zones"] = s.network.zones;
  net["links"] = nlohmann::json::array();
  for (const auto& l : s.network.links) {
    net["links"].push_back({{"id", l.id},
                            {"endpoints", nlohmann::json::array({l.a, l.b})},
                            {"gamma", l.gamma.str()}});
  }

  nlohmann::json services = nlohmann::json::array();
  for (const auto& svc : s.services) {
    services.push_back({{"id", svc.id},
                        {"type", svc.type},
                        {"link", svc.link},
                        {"pair", nlohmann::json::array({svc.origin, svc.destination})},
                        {"epsilon", svc.capacity},
                        {"t0_min", svc.base_time.str()},
                        {"delta_min_per_rider", svc.delay_per_rider.str()},
                        {"cseat", svc.seat_cost.str()},
                        {"fare", svc.fare.str()}});
  }

  nlohmann::json travelers = nlohmann::json::array();
  for (const auto& t : s.travelers) {
    nlohmann::json row = {{"id", t.id},
                          {"origin", t.origin},
                          {"dest", t.destination},
                          {"alpha", t.requirements.value_of_time.str()},
                          {"theta_min", t.requirements.preferred_time.str()},
                          {"vbar", t.requirements.max_wtp.str()}};
    if (s.rejecters.count(t.id)) row["rejects"] = true;
    travelers.push_back(std::move(row));
  }

  return nlohmann::json{{"meta", std::move(meta)},
                        {"network", std::move(net)},
                        {"services", std::move(services)},
                        {"travelers", std::move(travelers)}};
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
  using detail::as_decimal;
  using detail::as_int;
  using detail::as_string;
  using detail::field;

  Scenario s;
  const auto& meta = field(j, "meta", "document");
  s.meta.name = as_string(field(meta, "name", "meta"), "meta.name");
  if (meta.contains("description"))
    s.meta.description = as_string(meta["description"], "meta.description");
  if (meta.contains("seed")) {
    if (!meta["seed"].is_number_unsigned() && !meta["seed"].is_number_integer())
      throw ParseError("meta.seed: expected an integer");
    s.meta.seed = meta["seed"].get<std::uint64_t>();
  }

  const auto& net = field(j, "network", "document");
  const auto& zones = field(net, "zones", "network");
  if (!zones.is_array()) throw ParseError("network.zones: expected an array");
  for (std::size_t i = 0; i < zones.size(); ++i)
    s.network.zones.push_back(as_string(zones[i], "network.zones[" + std::to_string(i) + "]"));
  const auto& links = field(net, "links", "network");
  if (!links.is_array()) throw ParseError("network.links: expected an array");
  for (std::size_t i = 0; i < links.size(); ++i) {
    std::string ctx = "network.links[" + std::to_string(i) + "]";
    const auto& lj = links[i];
    Link l;
    l.id = as_string(field(lj, "id", ctx), ctx + ".id");
    const auto& ends = field(lj, "endpoints", ctx);
    if (!ends.is_array() || ends.size() != 2)
      throw ParseError(ctx + ".endpoints: expected an array of two zones");
    l.a = as_string(ends[0], ctx + ".endpoints[0]");
    l.b = as_string(ends[1], ctx + ".endpoints[1]");
    l.gamma = as_decimal(field(lj, "gamma", ctx), ctx + ".gamma");
    s.network.links.push_back(std::move(l));
  }

  const auto& services = field(j, "services", "document");
  if (!services.is_array()) throw ParseError("services: expected an array");
  for (std::size_t i = 0; i < services.size(); ++i) {
    std::string ctx = "services[" + std::to_string(i) + "]";
    const auto& sj = services[i];
    MobilityService svc;
    svc.id = as_string(field(sj, "id", ctx), ctx + ".id");
    svc.type = static_cast<int>(as_int(field(sj, "type", ctx), ctx + ".type"));
    svc.link = as_string(field(sj, "link", ctx), ctx + ".link");
    const auto& pair = field(sj, "pair", ctx);
    if (!pair.is_array() || pair.size() != 2)
      throw ParseError(ctx + ".pair: expected an array of two zones");
    svc.origin = as_string(pair[0], ctx + ".pair[0]");
    svc.destination = as_string(pair[1], ctx + ".pair[1]");
    svc.capacity = as_int(field(sj, "epsilon", ctx), ctx + ".epsilon");
    svc.base_time = as_decimal(field(sj, "t0_min", ctx), ctx + ".t0_min");
    svc.delay_per_rider =
        as_decimal(field(sj, "delta_min_per_rider", ctx), ctx + ".delta_min_per_rider");
    svc.seat_cost = as_decimal(field(sj, "cseat", ctx), ctx + ".cseat");
    svc.fare = as_decimal(field(sj, "fare", ctx), ctx + ".fare");
    s.services.push_back(std::move(svc));
  }

  const auto& travelers = field(j, "travelers", "document");
  if (!travelers.is_array()) throw ParseError("travelers: expected an array");
  for (std::size_t i = 0; i < travelers.size(); ++i) {
    std::string ctx = "travelers[" + std::to_string(i) + "]";
    const auto& tj = travelers[i];
    Traveler t;
    t.id = as_string(field(tj, "id", ctx), ctx + ".id");
    t.origin = as_string(field(tj, "origin", ctx), ctx + ".origin");
    t.destination = as_string(field(tj, "dest", ctx), ctx + ".dest");
    t.requirements.value_of_time = as_decimal(field(tj, "alpha", ctx), ctx + ".alpha");
    t.requirements.preferred_time = as_decimal(field(tj, "theta_min", ctx), ctx + ".theta_min");
    t.requirements.max_wtp = as_decimal(field(tj, "vbar", ctx), ctx + ".vbar");
    if (tj.contains("rejects")) {
      if (!tj["rejects"].is_boolean()) throw ParseError(ctx + ".rejects: expected a boolean");
      if (tj["rejects"].get<bool>()) s.rejecters.insert(t.id);
    }
    s.travelers.push_back(std::move(t));
  }
  return s;
}

// All structural and invariant problems at once, plus modeling warnings:
// the aggregate-capacity identity, per-subclass capacity cover, and a
// normalization heuristic on the monetary magnitudes.
inline ScenarioDiagnostics validate_scenario(const Scenario& s) {
  ScenarioDiagnostics diag;
  auto push_all = [&](const std::vector<std::string>& v) {
    diag.errors.insert(diag.errors.end(), v.begin(), v.end());
  };

  push_all(s.network.problems());

  std::set<ServiceId> service_ids;
  for (const auto& svc : s.services) {
    if (!service_ids.insert(svc.id).second)
      diag.errors.push_back("duplicate service '" + svc.id + "'");
    push_all(svc.problems(s.network));
  }
  std::set<TravelerId> traveler_ids;
  for (const auto& t : s.travelers) {
    if (!traveler_ids.insert(t.id).second)
      diag.errors.push_back("duplicate traveler '" + t.id + "'");
    push_all(t.problems(s.network));
  }
  for (const auto& id : s.rejecters) {
    if (!traveler_ids.count(id))
      diag.errors.push_back("rejecting traveler '" + id + "' is not declared");
  }

  // Services of one type serving one pair must share a route link.
  std::map<std::tuple<int, ZoneId, ZoneId>, std::set<LinkId>> type_pair_links;
  for (const auto& svc : s.services)
    type_pair_links[{svc.type, svc.origin, svc.destination}].insert(svc.link);
  for (const auto& [key, link_set] : type_pair_links) {
    if (link_set.size() > 1) {
      diag.errors.push_back("type " + std::to_string(std::get<0>(key)) + " services on pair " +
                            subclass_label(std::get<1>(key), std::get<2>(key)) +
                            " use " + std::to_string(link_set.size()) +
                            " different links; one route link per type and pair");
    }
  }

  if (!diag.errors.empty()) return diag;

  // Aggregate capacity identity: supply meets demand exactly.
  std::int64_t total_capacity = 0;
  for (const auto& svc : s.services) total_capacity += svc.capacity;
  if (total_capacity != static_cast<std::int64_t>(s.travelers.size())) {
    diag.warnings.push_back("aggregate service capacity " + std::to_string(total_capacity) +
                            " differs from traveler count " +
                            std::to_string(s.travelers.size()));
  }

  auto subclasses = partition_travelers(s.network, s.travelers);
  for (auto& k : subclasses) {
    try {
      k.feasible = feasible_services(k, s.services);
    } catch (const ValidationError& e) {
      diag.errors.push_back(e.what());
      continue;
    }
    std::int64_t feasible_capacity = 0;
    for (const auto& id : k.feasible) {
      for (const auto& svc : s.services)
        if (svc.id == id) feasible_capacity += svc.capacity;
    }
    if (feasible_capacity < static_cast<std::int64_t>(k.members.size())) {
      diag.warnings.push_back("subclass " + k.id + " capacity " +
                              std::to_string(feasible_capacity) + " cannot cover its " +
                              std::to_string(k.members.size()) + " travelers");
    }

    // Normalization heuristic: inconvenience, fares, and cost shares should
    // be of comparable magnitude.
    Money max_phi, max_fare, max_cseat;
    for (const auto& id : k.feasible) {
      for (const auto& svc : s.services) {
        if (svc.id != id) continue;
        max_fare = max(max_fare, svc.fare);
        max_cseat = max(max_cseat, svc.seat_cost);
        Minutes full = experienced_travel_time(svc, svc.capacity);
        for (const auto& tid : k.members) {
          for (const auto& t : s.travelers)
            if (t.id == tid) max_phi = max(max_phi, inconvenience(t.requirements, full));
        }
      }
    }
    std::vector<Money> magnitudes;
    for (Money v : {max_phi, max_fare, max_cseat})
      if (!v.is_zero()) magnitudes.push_back(v);
    if (magnitudes.size() >= 2) {
      Money lo = magnitudes[0], hi = magnitudes[0];
      for (Money v : magnitudes) {
        lo = min(lo, v);
        hi = max(hi, v);
      }
      if (lo * 100 < hi) {
        diag.warnings.push_back("subclass " + k.id +
                                " monetary terms differ by more than 100x (largest " +
                                hi.str() + ", smallest " + lo.str() +
                                "); check the normalization of the scenario");
      }
    }
  }
  return diag;
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

inline Scenario load_scenario_text(const std::string& text,
                                   std::vector<std::string>* warnings = nullptr) {
  Scenario s = scenario_from_json(parse_json_text(text, "scenario"));
  ScenarioDiagnostics diag = validate_scenario(s);
  if (!diag.errors.empty()) {
    std::ostringstream msg;
    msg << "scenario '" << s.meta.name << "' is invalid:";
    for (const auto& e : diag.errors) msg << "\n  - " << e;
    throw ValidationError(msg.str());
  }
  if (warnings) *warnings = diag.warnings;
  return s;
}

inline Scenario load_scenario(const std::string& path,
                              std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario_text(buf.str(), warnings);
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write scenario file '" + path + "'");
  out << scenario_to_json(s).dump(2) << '\n';
}

// One solver-ready instance per subclass, in subclass order. The scenario
// must already validate.
inline std::vector<WelfareInstance> compile_scenario(const Scenario& s) {
  std::vector<WelfareInstance> out;
  auto subclasses = partition_travelers(s.network, s.travelers);
  for (auto& k : subclasses) {
    k.feasible = feasible_services(k, s.services);
    out.push_back(make_instance(s.network, s.services, s.travelers, k));
  }
  return out;
}

}  // namespace mobility
