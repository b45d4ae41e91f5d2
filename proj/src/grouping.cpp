#include "cppweave/grouping.hpp"

#include <algorithm>
#include <functional>

#include "cppweave/serialize.hpp"

namespace cppweave {

namespace {

std::optional<LinkId> first_shared(const Path& p, const Path& q) {
  auto qs = q.link_set();
  std::optional<LinkId> best;
  for (LinkId l : p.links)
    if (qs.contains(l) && (!best || l < *best)) best = l;
  return best;
}

bool compatible(const PathPair& x, const PathPair& y, Mode mode) {
  if (!link_disjoint(x.primary, y.primary)) return false;
  if (mode == Mode::Relaxed) return true;
  return link_disjoint(x.primary, y.protection) && link_disjoint(y.primary, x.protection);
}

// All member protection paths lie in one node-connected piece.
bool protection_connected(const Topology& t, const SppSolution& sol,
                          const std::set<DemandId>& members) {
  std::map<NodeId, NodeId> parent;
  std::function<NodeId(const NodeId&)> find = [&](const NodeId& x) -> NodeId {
    auto it = parent.find(x);
    if (it == parent.end()) return parent[x] = x;
    if (it->second == x) return x;
    NodeId r = find(it->second);
    parent[x] = r;
    return r;
  };
  for (DemandId m : members) {
    for (LinkId l : sol.pairs.at(m).protection.links) {
      const Link& k = t.link(l);
      NodeId ra = find(k.a), rb = find(k.b);
      if (ra != rb) parent[ra] = rb;
    }
  }
  std::set<NodeId> roots;
  for (const auto& [n, p] : parent) roots.insert(find(n));
  return roots.size() <= 1;
}

}  // namespace

GroupCheck validate_group(const CodingGroup& g, const PairMap& pairs) {
  GroupCheck check;
  std::vector<DemandId> ms(g.members.begin(), g.members.end());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      const PathPair& x = pairs.at(ms[i]);
      const PathPair& y = pairs.at(ms[j]);
      if (auto l = first_shared(x.primary, y.primary))
        check.violations.push_back({ms[i], ms[j], "rule-1", *l});
      if (g.mode == Mode::Relaxed) continue;
      if (auto l = first_shared(x.primary, y.protection))
        check.violations.push_back({ms[i], ms[j], "rule-2", *l});
      if (auto l = first_shared(y.primary, x.protection))
        check.violations.push_back({ms[j], ms[i], "rule-2", *l});
    }
  }
  return check;
}

std::vector<std::vector<DemandId>> CppDesign::partition() const {
  std::vector<std::vector<DemandId>> out;
  for (const auto& g : groups) out.emplace_back(g.members.begin(), g.members.end());
  return out;
}

std::optional<double> GroupCostCache::cost(const std::set<DemandId>& members) {
  if (auto it = cache_.find(members); it != cache_.end()) return it->second;
  std::optional<double> result;
  CodingGroup g = make_group(0, members, mode_, sol_.pairs);
  if (validate_group(g, sol_.pairs).ok() && protection_connected(t_, sol_, members))
    result = tree_capacity(t_, sol_, eliminate_cycles(t_, sol_, g));
  cache_.emplace(members, result);
  return result;
}

CppDesign make_design(const Topology& t, const SppSolution& sol, Mode mode,
                      const std::vector<std::vector<DemandId>>& partition) {
  CppDesign d;
  d.mode = mode;
  int next_id = 1;
  for (const auto& block : partition) {
    CodingGroup g = make_group(next_id++, {block.begin(), block.end()}, mode, sol.pairs);
    ProtectionTree tree = eliminate_cycles(t, sol, g);
    for (const auto& [l, u] : tree_link_units(sol, tree)) d.capacity[l] += u;
    d.protection_capacity += tree_capacity(t, sol, tree);
    d.cep_savings += tree.saving();
    d.groups.push_back(std::move(g));
    d.trees.push_back(std::move(tree));
  }
  d.spp_spare = spare_capacity(sol, t);
  d.spp_hash = spp_fingerprint(sol);
  return d;
}

namespace {

using Partition = std::vector<std::vector<DemandId>>;

Partition canonical(std::vector<std::set<DemandId>> blocks) {
  Partition p;
  for (auto& b : blocks) p.emplace_back(b.begin(), b.end());
  std::sort(p.begin(), p.end());
  return p;
}

double partition_cost(GroupCostCache& cache, const Partition& p) {
  double total = 0.0;
  for (const auto& b : p) total += *cache.cost({b.begin(), b.end()});
  return total;
}

Partition greedy_partition(GroupCostCache& cache, const SppSolution& sol) {
  std::vector<std::set<DemandId>> groups;
  for (const auto& [id, d] : sol.demands) groups.push_back({id});
  for (;;) {
    double best_saving = 1e-9;
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        std::set<DemandId> merged = groups[i];
        merged.insert(groups[j].begin(), groups[j].end());
        auto c = cache.cost(merged);
        if (!c) continue;
        double saving = *cache.cost(groups[i]) + *cache.cost(groups[j]) - *c;
        if (saving > best_saving + 1e-9) {
          best_saving = saving;
          best = {i, j};
        }
      }
    }
    if (!best) break;
    groups[best->first].insert(groups[best->second].begin(), groups[best->second].end());
    groups.erase(groups.begin() + static_cast<long>(best->second));
  }
  return canonical(std::move(groups));
}

}  // namespace

CppDesign form_groups(const Topology& t, const SppSolution& sol, Mode mode) {
  GroupCostCache cache(t, sol, mode);
  Partition p = greedy_partition(cache, sol);
  if (mode == Mode::Relaxed) {
    GroupCostCache strict_cache(t, sol, Mode::Strict);
    Partition q = greedy_partition(strict_cache, sol);
    if (partition_cost(cache, q) < partition_cost(cache, p) - 1e-9) p = std::move(q);
  }
  return make_design(t, sol, mode, p);
}

CppDesign brute_force_groups(const Topology& t, const SppSolution& sol, Mode mode,
                             std::size_t cap) {
  if (sol.demands.size() > cap)
    throw TooLarge("brute_force_groups: " + std::to_string(sol.demands.size()) +
                   " demands exceed the cap of " + std::to_string(cap));
  GroupCostCache cache(t, sol, mode);
  std::vector<DemandId> ids;
  for (const auto& [id, d] : sol.demands) ids.push_back(id);
  const std::size_t n = ids.size();
  std::vector<std::vector<bool>> ok(n, std::vector<bool>(n, true));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      ok[i][j] = ok[j][i] = compatible(sol.pairs.at(ids[i]), sol.pairs.at(ids[j]), mode);

  std::optional<Partition> best;
  double best_cost = 0.0;
  std::vector<std::vector<std::size_t>> blocks;
  std::function<void(std::size_t)> search = [&](std::size_t k) {
    if (k == n) {
      Partition p;
      double total = 0.0;
      for (const auto& b : blocks) {
        std::set<DemandId> members;
        for (std::size_t i : b) members.insert(ids[i]);
        auto c = cache.cost(members);
        if (!c) return;
        total += *c;
        p.emplace_back(members.begin(), members.end());
      }
      std::sort(p.begin(), p.end());
      if (!best || total < best_cost - 1e-9 ||
          (total <= best_cost + 1e-9 && p < *best)) {
        best = std::move(p);
        best_cost = total;
      }
      return;
    }
    // Index loop: the recursion grows `blocks`.
    for (std::size_t bi = 0, nb = blocks.size(); bi < nb; ++bi) {
      if (!std::all_of(blocks[bi].begin(), blocks[bi].end(),
                       [&](std::size_t i) { return ok[i][k]; }))
        continue;
      blocks[bi].push_back(k);
      search(k + 1);
      blocks[bi].pop_back();
    }
    blocks.push_back({k});
    search(k + 1);
    blocks.pop_back();
  };
  search(0);
  return make_design(t, sol, mode, best ? *best : Partition{});
}

double extra_capacity(const CppDesign& d) { return d.protection_capacity - d.spp_spare; }

}  // namespace cppweave
