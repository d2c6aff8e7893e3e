#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mobility/decimal.hpp"
#include "mobility/dynamics.hpp"
#include "mobility/errors.hpp"
#include "mobility/instance.hpp"

namespace mobility {

struct SolveResult {
  Assignment assignment;
  Money welfare;
  std::uint64_t nodes_explored = 0;
  bool proved_optimal = false;
};

namespace detail {

// First feasibility violation of `a` against the instance, if any. Checks the
// three constraint families plus the exclusion row when one is set.
inline std::optional<std::string> first_violation(const WelfareInstance& inst,
                                                  const Assignment& a) {
  for (std::size_t r = 0; r < a.rows(); ++r) {
    int row_sum = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) row_sum += a.at(r, c) ? 1 : 0;
    if (row_sum > 1) return "traveler '" + a.travelers[r] + "' assigned to several services";
  }
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (a.load(c) > inst.services[c].capacity)
      return "service '" + a.services[c] + "' over capacity";
  }
  for (const auto& g : inst.groups) {
    std::int64_t load = 0;
    for (auto c : g.service_index) load += a.load(c);
    if (Decimal::from_int(load) > g.gamma)
      return "type " + std::to_string(g.type) + " on link '" + g.link + "' over capacity";
  }
  if (auto row = inst.excluded_row()) {
    if (a.assigned_service(*row))
      return "excluded traveler '" + *inst.excluded + "' has a nonzero row";
  }
  return std::nullopt;
}

}  // namespace detail

// Objective value of a feasible assignment: sum over travelers of
// (valuation - fare) minus total operating cost. The exclusion variant of
// the problem evaluates the same formula.
inline Money welfare_value(const WelfareInstance& inst, const Assignment& a) {
  if (a.travelers != inst.subclass.members || a.services != inst.subclass.feasible)
    throw StructuralError("assignment labels do not match the instance");
  if (auto why = detail::first_violation(inst, a))
    throw ConstraintError("infeasible assignment: " + *why);
  DynamicsReport rep = compute_dynamics(inst.members, inst.services, a);
  return rep.total_valuation() - rep.total_min_payment() - rep.total_operating_cost();
}

namespace detail {

// Shared search state. Both the branch-and-bound solver and the exhaustive
// oracle walk complete assignments in ascending order of the flattened
// row-major bit vector and keep the first strict maximum, which makes the
// reported optimum the lexicographically smallest one. Per row that order
// is: unassigned, then services from the highest column index down.
struct Search {
  const WelfareInstance& inst;
  std::size_t n, m;
  std::optional<std::size_t> excluded_row;
  std::vector<int> col_group;                // service column -> group index
  std::vector<std::int64_t> group_cap;       // floor(gamma), capped at n
  std::vector<std::vector<Money>> net_alone; // traveler x service, solo net value
  std::vector<Money> suffix_best;            // admissible bound on rows >= r

  std::vector<int> choice;                   // -1 none, else column
  std::vector<std::int64_t> load;
  std::vector<std::int64_t> group_load;
  std::uint64_t nodes = 0;

  bool have_best = false;
  Money best_welfare;
  std::vector<int> best_choice;

  explicit Search(const WelfareInstance& instance)
      : inst(instance),
        n(instance.members.size()),
        m(instance.services.size()),
        excluded_row(instance.excluded_row()) {
    col_group.assign(m, -1);
    for (std::size_t g = 0; g < inst.groups.size(); ++g)
      for (auto c : inst.groups[g].service_index) col_group[c] = static_cast<int>(g);
    group_cap.resize(inst.groups.size());
    for (std::size_t g = 0; g < inst.groups.size(); ++g) {
      // gamma is a non-negative real; integer loads make floor(gamma) the cap.
      std::int64_t cap = inst.groups[g].gamma.units() / Decimal::kScale;
      group_cap[g] = cap;
    }
    net_alone.assign(n, std::vector<Money>(m));
    suffix_best.assign(n + 1, Money{});
    for (std::size_t i = 0; i < n; ++i) {
      const auto& req = inst.members[i].requirements;
      for (std::size_t j = 0; j < m; ++j) {
        const auto& svc = inst.services[j];
        Money v = req.max_wtp - inconvenience(req, svc.base_time);
        net_alone[i][j] = v - svc.fare - svc.seat_cost;
      }
    }
    for (std::size_t i = n; i-- > 0;) {
      Money best;  // unassigned contributes zero
      if (!(excluded_row && *excluded_row == i)) {
        for (std::size_t j = 0; j < m; ++j) best = max(best, net_alone[i][j]);
        best = max(best, Money{});
      }
      suffix_best[i] = suffix_best[i + 1] + best;
    }
    choice.assign(n, -1);
    load.assign(m, 0);
    group_load.assign(inst.groups.size(), 0);
  }

  // Welfare of rows [0, upto) at current loads, remaining rows unassigned.
  Money partial_value(std::size_t upto) const {
    Money v;
    for (std::size_t i = 0; i < upto; ++i) {
      int c = choice[i];
      if (c < 0) continue;
      const auto& svc = inst.services[static_cast<std::size_t>(c)];
      const auto& req = inst.members[i].requirements;
      Minutes t = svc.base_time + svc.delay_per_rider * (load[static_cast<std::size_t>(c)] - 1);
      v += req.max_wtp - inconvenience(req, t) - svc.fare - svc.seat_cost;
    }
    return v;
  }

  bool can_take(std::size_t col) const {
    if (load[col] + 1 > inst.services[col].capacity) return false;
    int g = col_group[col];
    if (g >= 0 && group_load[static_cast<std::size_t>(g)] + 1 > group_cap[static_cast<std::size_t>(g)])
      return false;
    return true;
  }

  void push(std::size_t row, int col) {
    choice[row] = col;
    if (col >= 0) {
      ++load[static_cast<std::size_t>(col)];
      int g = col_group[static_cast<std::size_t>(col)];
      if (g >= 0) ++group_load[static_cast<std::size_t>(g)];
    }
  }

  void pop(std::size_t row) {
    int col = choice[row];
    if (col >= 0) {
      --load[static_cast<std::size_t>(col)];
      int g = col_group[static_cast<std::size_t>(col)];
      if (g >= 0) --group_load[static_cast<std::size_t>(g)];
    }
    choice[row] = -1;
  }

  void record(Money value) {
    have_best = true;
    best_welfare = value;
    best_choice = choice;
  }

  // Depth-first branch and bound. Assigned travelers' valuations only drop
  // as later rows add congestion, so partial value plus the solo-best suffix
  // is an admissible upper bound.
  void dfs(std::size_t row) {
    ++nodes;
    Money value = partial_value(row);
    if (have_best && !(best_welfare < value + suffix_best[row])) return;
    if (row == n) {
      record(value);
      return;
    }
    if (excluded_row && *excluded_row == row) {
      push(row, -1);
      dfs(row + 1);
      pop(row);
      return;
    }
    push(row, -1);
    dfs(row + 1);
    pop(row);
    for (std::size_t j = m; j-- > 0;) {
      if (!can_take(j)) continue;
      push(row, static_cast<int>(j));
      dfs(row + 1);
      pop(row);
    }
  }

  // Exhaustive enumeration of every traveler -> (service or none) mapping in
  // the same order; infeasible mappings count as enumerated candidates.
  void enumerate(std::size_t row) {
    if (row == n) {
      ++nodes;
      if (!feasible_now()) return;
      Money value = partial_value(n);
      if (!have_best || best_welfare < value) record(value);
      return;
    }
    if (excluded_row && *excluded_row == row) {
      push(row, -1);
      enumerate(row + 1);
      pop(row);
      return;
    }
    push(row, -1);
    enumerate(row + 1);
    pop(row);
    for (std::size_t j = m; j-- > 0;) {
      push(row, static_cast<int>(j));
      enumerate(row + 1);
      pop(row);
    }
  }

  bool feasible_now() const {
    for (std::size_t c = 0; c < m; ++c)
      if (load[c] > inst.services[c].capacity) return false;
    for (std::size_t g = 0; g < inst.groups.size(); ++g)
      if (group_load[g] > group_cap[g]) return false;
    return true;
  }

  SolveResult result() const {
    SolveResult res;
    res.assignment = inst.zero_assignment();
    if (have_best) {
      for (std::size_t i = 0; i < n; ++i)
        if (best_choice[i] >= 0)
          res.assignment.set(i, static_cast<std::size_t>(best_choice[i]), true);
      res.welfare = best_welfare;
    }
    res.nodes_explored = nodes;
    res.proved_optimal = true;
    return res;
  }
};

}  // namespace detail

// Exact maximizer of the subclass welfare over all feasible assignments.
// Deterministic: ties resolve to the lexicographically smallest assignment.
inline SolveResult solve_welfare_max(const WelfareInstance& inst) {
  if (inst.excluded)
    throw StructuralError("instance has an excluded traveler; use solve_exclusion");
  detail::Search search(inst);
  search.dfs(0);
  return search.result();
}

// Same objective with the excluded traveler's row fixed to zero.
inline SolveResult solve_exclusion(const WelfareInstance& inst) {
  if (!inst.excluded)
    throw StructuralError("solve_exclusion requires an excluded traveler");
  if (!inst.excluded_row())
    throw StructuralError("excluded traveler '" + *inst.excluded +
                          "' is not a subclass member");
  detail::Search search(inst);
  search.dfs(0);
  return search.result();
}

// Exhaustive verification oracle; identical objective, ordering and
// tie-breaking as the solvers above. nodes_explored counts every enumerated
// candidate mapping, feasible or not.
inline SolveResult brute_force_oracle(const WelfareInstance& inst) {
  std::size_t n = inst.members.size();
  std::size_t m = inst.services.size();
  if (n * m > 24)
    throw SizeError("oracle budget exceeded: " + std::to_string(n) + " travelers x " +
                    std::to_string(m) + " services > 24");
  if (inst.excluded && !inst.excluded_row())
    throw StructuralError("excluded traveler '" + *inst.excluded +
                          "' is not a subclass member");
  detail::Search search(inst);
  search.enumerate(0);
  return search.result();
}

}  // namespace mobility
