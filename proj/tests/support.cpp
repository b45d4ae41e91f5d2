#include "support.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace testing_support {

std::string data_path(const std::string& name) { return std::string(TEST_DATA_DIR) + "/" + name; }

Instance load_instance(const std::string& topology_file, const std::string& demands_file) {
  Instance inst;
  inst.topology = load_topology(read_file(data_path(topology_file)));
  inst.demands = load_demands(read_file(data_path(demands_file)), inst.topology);
  return inst;
}

Instance load_instance(const std::string& stem) {
  return load_instance(stem + "_topology.txt", stem + "_demands.txt");
}

Instance random_instance(std::mt19937_64& rng, int min_nodes, int max_nodes, int min_demands,
                         int max_demands) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  Instance inst;
  const int n = pick(min_nodes, max_nodes);
  for (int i = 0; i < n; ++i) inst.topology.add_node("n" + std::to_string(i));
  int id = 1;
  for (int i = 0; i < n; ++i)
    inst.topology.add_link({id++, "n" + std::to_string(i), "n" + std::to_string((i + 1) % n),
                            static_cast<double>(pick(1, 9))});
  const int chords = pick(1, n / 2);
  for (int k = 0; k < chords * 4 && id <= n + chords; ++k) {
    int a = pick(0, n - 1), b = pick(0, n - 1);
    if (a == b) continue;
    std::string na = "n" + std::to_string(a), nb = "n" + std::to_string(b);
    if (inst.topology.find_link(na, nb)) continue;
    inst.topology.add_link({id++, na, nb, static_cast<double>(pick(1, 9))});
  }
  const int m = pick(min_demands, max_demands);
  for (int d = 1; d <= m; ++d) {
    int a = pick(0, n - 1), b = pick(0, n - 2);
    if (b >= a) ++b;
    inst.demands.demands.push_back({d, "n" + std::to_string(a), "n" + std::to_string(b), 1});
  }
  return inst;
}

std::vector<Path> all_simple_paths(const Topology& t, const NodeId& a, const NodeId& b) {
  std::vector<Path> out;
  std::set<NodeId> on_path{a};
  std::vector<LinkId> links;
  std::function<void(const NodeId&)> go = [&](const NodeId& x) {
    if (x == b) {
      out.push_back(Path{links});
      return;
    }
    for (LinkId l : t.incident(x)) {
      const NodeId& y = t.link(l).other(x);
      if (on_path.contains(y)) continue;
      on_path.insert(y);
      links.push_back(l);
      go(y);
      links.pop_back();
      on_path.erase(y);
    }
  };
  go(a);
  return out;
}

std::optional<double> brute_force_pair_cost(const Topology& t, const NodeId& a,
                                            const NodeId& b, Metric metric) {
  auto paths = all_simple_paths(t, a, b);
  std::optional<double> best;
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      if (!link_disjoint(paths[i], paths[j])) continue;
      double c = path_cost(t, paths[i], metric) + path_cost(t, paths[j], metric);
      if (!best || c < *best) best = c;
    }
  return best;
}

std::vector<std::vector<LinkId>> all_cycles(const Topology& t, const std::set<LinkId>& links) {
  // Every subset whose links form one cycle: all degrees 2 and connected.
  std::vector<LinkId> ids(links.begin(), links.end());
  std::vector<std::vector<LinkId>> out;
  const std::size_t n = ids.size();
  for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
    std::map<NodeId, int> degree;
    std::vector<LinkId> chosen;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        chosen.push_back(ids[i]);
        ++degree[t.link(ids[i]).a];
        ++degree[t.link(ids[i]).b];
      }
    if (chosen.size() < 3) continue;
    if (!std::all_of(degree.begin(), degree.end(), [](auto& kv) { return kv.second == 2; }))
      continue;
    std::set<NodeId> seen{t.link(chosen[0]).a};
    bool grew = true;
    while (grew) {
      grew = false;
      for (LinkId l : chosen) {
        const Link& k = t.link(l);
        if (seen.contains(k.a) != seen.contains(k.b)) {
          seen.insert(k.a);
          seen.insert(k.b);
          grew = true;
        }
      }
    }
    if (seen.size() == degree.size()) out.push_back(chosen);
  }
  return out;
}

int max_activation(const Topology& t, const SppSolution& sol, LinkId link) {
  int best = 0;
  for (const auto& [f, l] : t.links()) {
    if (f == link) continue;
    int active = 0;
    for (const auto& [id, pair] : sol.pairs) {
      auto prot = pair.protection.link_set();
      auto prim = pair.primary.link_set();
      if (prot.contains(link) && prim.contains(f)) active += sol.demands.at(id).units;
    }
    best = std::max(best, active);
  }
  return best;
}

int spare_units(const SppSolution& sol, LinkId link) {
  auto it = sol.spare.find(link);
  if (it == sol.spare.end()) return 0;
  int n = 0;
  for (const SpareUnit& u : it->second) n += u.width;
  return n;
}

CppDesign single_group_design(const Topology& t, const SppSolution& sol, Mode mode) {
  std::vector<DemandId> all;
  for (const auto& [id, d] : sol.demands) all.push_back(id);
  return make_design(t, sol, mode, {all});
}

double recount_capacity(const Topology& t, const SppSolution& sol, const CppDesign& d) {
  double total = 0.0;
  for (const ProtectionTree& tree : d.trees) {
    std::set<LinkId> used;
    for (const auto& [m, route] : tree.routes) used.insert(route.links.begin(), route.links.end());
    for (LinkId l : used) {
      int width = 0;
      for (const auto& [m, route] : tree.routes)
        if (std::count(route.links.begin(), route.links.end(), l))
          width = std::max(width, sol.demands.at(m).units);
      total += width * t.link(l).length;
    }
    for (DemandId m : tree.apsed)
      total += sol.demands.at(m).units * t.length_of(sol.pairs.at(m).protection.links);
  }
  return total;
}

}  // namespace testing_support
