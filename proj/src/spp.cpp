#include "cppweave/spp.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace cppweave {

namespace {

int total_width(const std::vector<SpareUnit>& units) {
  int n = 0;
  for (const SpareUnit& u : units) n += u.width;
  return n;
}

// Units activated on one link by the worst single failure elsewhere.
int activation_bound(const SppSolution& sol, const std::vector<DemandId>& occupants) {
  std::map<LinkId, int> load;
  for (DemandId d : occupants)
    for (LinkId f : sol.pairs.at(d).primary.links) load[f] += sol.demands.at(d).units;
  int best = 0;
  for (const auto& [f, n] : load) best = std::max(best, n);
  return best;
}

// Least total width over all valid assignments of `occupants` to units;
// the first optimum in first-fit order wins. Only called when first-fit
// overshoots the activation bound.
std::vector<SpareUnit> exact_sharing(const SppSolution& sol,
                                     const std::vector<DemandId>& occupants,
                                     std::vector<SpareUnit> incumbent, int bound) {
  int best = total_width(incumbent);
  std::vector<SpareUnit> units;
  std::function<void(std::size_t, int)> go = [&](std::size_t k, int cost) {
    if (cost >= best) return;
    if (k == occupants.size()) {
      best = cost;
      incumbent = units;
      return;
    }
    const DemandId d = occupants[k];
    const int need = sol.demands.at(d).units;
    for (std::size_t i = 0; i < units.size() && best > bound; ++i) {
      SpareUnit& u = units[i];
      bool fits = std::all_of(u.sharers.begin(), u.sharers.end(), [&](DemandId o) {
        return link_disjoint(sol.pairs.at(o).primary, sol.pairs.at(d).primary);
      });
      if (!fits) continue;
      const int was = u.width;
      u.sharers.insert(d);
      u.width = std::max(was, need);
      go(k + 1, cost + u.width - was);
      units[i].sharers.erase(d);
      units[i].width = was;
    }
    if (best <= bound) return;
    units.push_back(SpareUnit{static_cast<int>(units.size()), {d}, need});
    go(k + 1, cost + need);
    units.pop_back();
  };
  go(0, 0);
  return incumbent;
}

constexpr std::size_t kExactSharingLimit = 24;

}  // namespace

SppSolution share_spare_capacity(const Topology& t, std::span<const Demand> demands,
                                 const PairMap& pairs) {
  SppSolution sol;
  for (const Demand& d : demands) sol.demands.emplace(d.id, d);
  for (const auto& [id, d] : sol.demands) {
    const PathPair& pair = pairs.at(id);
    validate_pair(t, d, pair);
    sol.pairs.emplace(id, pair);
    for (LinkId link : pair.protection.links) {
      auto& units = sol.spare[link];
      auto fits = [&](const SpareUnit& u) {
        return std::all_of(u.sharers.begin(), u.sharers.end(), [&](DemandId other) {
          return link_disjoint(sol.pairs.at(other).primary, pair.primary);
        });
      };
      auto it = std::find_if(units.begin(), units.end(), fits);
      if (it == units.end()) {
        units.push_back(SpareUnit{static_cast<int>(units.size()), {}, 0});
        it = std::prev(units.end());
      }
      it->sharers.insert(id);
      it->width = std::max(it->width, d.units);
    }
  }
  for (auto& [link, units] : sol.spare) {
    std::vector<DemandId> occupants;
    for (const SpareUnit& u : units) occupants.insert(occupants.end(), u.sharers.begin(), u.sharers.end());
    std::sort(occupants.begin(), occupants.end());
    const int bound = activation_bound(sol, occupants);
    if (total_width(units) > bound && occupants.size() <= kExactSharingLimit)
      units = exact_sharing(sol, occupants, units, bound);
  }
  return sol;
}

SppSolution solve_spp(const Topology& t, const DemandSet& demands, Metric metric) {
  PairMap pairs;
  for (const Demand& d : demands.demands) {
    if (auto it = demands.pinned.find(d.id); it != demands.pinned.end()) {
      pairs.emplace(d.id, it->second);
      continue;
    }
    try {
      PathPair p = disjoint_pair(t, d.a, d.b, metric);
      p.demand = d.id;
      pairs.emplace(d.id, std::move(p));
    } catch (const NoDisjointPair& e) {
      throw NoDisjointPair(d.id, "demand " + std::to_string(d.id) + ": " + e.what());
    }
  }
  std::vector<Demand> sorted = demands.demands;
  std::sort(sorted.begin(), sorted.end(),
            [](const Demand& x, const Demand& y) { return x.id < y.id; });
  return share_spare_capacity(t, sorted, pairs);
}

double working_capacity(const SppSolution& sol, const Topology& t) {
  double total = 0.0;
  for (const auto& [id, pair] : sol.pairs)
    total += sol.demands.at(id).units * t.length_of(pair.primary.links);
  return total;
}

double spare_capacity(const SppSolution& sol, const Topology& t) {
  double total = 0.0;
  for (const auto& [link, units] : sol.spare)
    for (const SpareUnit& u : units) total += u.width * t.link(link).length;
  return total;
}

double scap_percent(double spare, double working) {
  double denom = spare + working;
  return denom > 0.0 ? 100.0 * spare / denom : 0.0;
}

ScapResult scap(const SppSolution& sol, const Topology& t) {
  ScapResult r;
  r.spare = spare_capacity(sol, t);
  r.working = working_capacity(sol, t);
  r.percent = scap_percent(r.spare, r.working);
  return r;
}

}  // namespace cppweave
