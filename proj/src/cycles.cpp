#include "cppweave/cycles.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace cppweave {

std::string to_string(Mode m) { return m == Mode::Strict ? "strict" : "relaxed"; }

Mode mode_from_string(const std::string& s) {
  if (s == "strict") return Mode::Strict;
  if (s == "relaxed") return Mode::Relaxed;
  throw InputError("mode", "expected 'strict' or 'relaxed', got '" + s + "'");
}

CodingGroup make_group(int id, std::set<DemandId> members, Mode mode,
                       const PairMap& pairs) {
  CodingGroup g{id, std::move(members), mode, {}};
  for (DemandId m : g.members)
    for (LinkId l : pairs.at(m).protection.links) ++g.protection_topology[l];
  return g;
}

double ProtectionTree::saving() const {
  double total = 0.0;
  for (const auto& r : removed_links) total += r.saving;
  return total;
}

std::string coding_vertex(const ProtectionTree& tree, LinkId link, const NodeId& node) {
  auto it = tree.vertex_override.find({node, link});
  return it == tree.vertex_override.end() ? node : it->second;
}

const std::string& CodingTopology::other(LinkId link, const std::string& vertex) const {
  const Edge& e = edges.at(link);
  return e.u == vertex ? e.v : e.u;
}

namespace {

struct EdgeView {
  LinkId id;
  std::string u, v;
  double length;
};

std::vector<EdgeView> edge_views(const CodingTopology& ct) {
  std::vector<EdgeView> out;
  for (const auto& [id, e] : ct.edges) out.push_back({id, e.u, e.v, e.length});
  return out;
}

std::optional<std::vector<LinkId>> dfs_cycle(const std::vector<EdgeView>& edges) {
  std::map<std::string, std::vector<std::pair<LinkId, std::string>>> adj;
  std::vector<std::string> starts;
  for (const auto& e : edges) {  // edges arrive in ascending id order
    adj[e.u].push_back({e.id, e.v});
    adj[e.v].push_back({e.id, e.u});
    starts.push_back(e.u);
  }
  for (auto& [v, list] : adj) std::sort(list.begin(), list.end());

  enum class State { Fresh, Open, Done };
  std::map<std::string, State> state;
  std::vector<std::string> stack_vertices;
  std::vector<LinkId> stack_links;
  std::optional<std::vector<LinkId>> found;

  std::function<bool(const std::string&, LinkId)> visit = [&](const std::string& x,
                                                              LinkId via) {
    state[x] = State::Open;
    stack_vertices.push_back(x);
    for (const auto& [id, y] : adj[x]) {
      if (id == via) continue;
      if (state[y] == State::Open) {
        auto pos = std::find(stack_vertices.begin(), stack_vertices.end(), y);
        std::size_t k = static_cast<std::size_t>(pos - stack_vertices.begin());
        std::vector<LinkId> cycle(stack_links.begin() + static_cast<long>(k),
                                  stack_links.end());
        cycle.push_back(id);
        found = std::move(cycle);
        return true;
      }
      if (state[y] == State::Fresh) {
        stack_links.push_back(id);
        if (visit(y, id)) return true;
        stack_links.pop_back();
      }
    }
    state[x] = State::Done;
    stack_vertices.pop_back();
    return false;
  };
  for (const auto& s : starts) {
    if (state[s] != State::Fresh) continue;
    if (visit(s, -1)) return found;
  }
  return std::nullopt;
}

int cyclomatic_number(const CodingTopology& ct) {
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) {
    auto& p = parent[x];
    if (p.empty() || p == x) return p = x;
    return p = find(p);
  };
  int vertices = 0;
  for (const auto& [v, list] : ct.adjacency)
    if (!list.empty()) ++vertices, find(v);
  int components = vertices;
  for (const auto& [id, e] : ct.edges) {
    auto a = find(e.u), b = find(e.v);
    if (a != b) parent[a] = b, --components;
  }
  return static_cast<int>(ct.edges.size()) - vertices + components;
}

int link_width(const SppSolution& sol, const ProtectionTree& tree, LinkId link) {
  int width = 0;
  for (const auto& [m, route] : tree.routes)
    if (std::find(route.links.begin(), route.links.end(), link) != route.links.end())
      width = std::max(width, sol.demands.at(m).units);
  return width;
}

// Coding-vertex sequence of `route` for demand `d`.
std::vector<std::string> route_vertices(const Topology& t, const ProtectionTree& tree,
                                        const Demand& d, const Path& route) {
  std::vector<std::string> out{coding_vertex(tree, route.links.front(), d.a)};
  for (LinkId l : route.links) {
    const Link& link = t.link(l);
    std::string u = coding_vertex(tree, l, link.a), v = coding_vertex(tree, l, link.b);
    if (out.back() == u) out.push_back(v);
    else if (out.back() == v) out.push_back(u);
    else throw Error("route of demand " + std::to_string(d.id) + " breaks at link " +
                     std::to_string(l));
  }
  return out;
}

// Drops every closed sub-walk so the result visits each vertex once.
Path reduce_walk(const std::vector<std::string>& vertices, const std::vector<LinkId>& links) {
  std::vector<std::string> vs{vertices.front()};
  std::vector<LinkId> ls;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string& next = vertices[i + 1];
    auto pos = std::find(vs.begin(), vs.end(), next);
    if (pos != vs.end()) {
      std::size_t k = static_cast<std::size_t>(pos - vs.begin());
      vs.resize(k + 1);
      ls.resize(k);
    } else {
      vs.push_back(next);
      ls.push_back(links[i]);
    }
  }
  return Path{ls};
}

// Rebuilds tree_links/reroutes from routes and logs every link that fell out.
void refresh(const Topology& t, const SppSolution& sol, ProtectionTree& tree,
             const ProtectionTree& before, LinkId target, const std::string& reason) {
  tree.tree_links.clear();
  for (const auto& [m, route] : tree.routes)
    tree.tree_links.insert(route.links.begin(), route.links.end());
  for (LinkId l : before.tree_links) {
    if (tree.tree_links.contains(l)) continue;
    double saving = link_width(sol, before, l) * t.link(l).length;
    tree.removed_links.push_back({l, saving, l == target ? reason : "pruned"});
  }
  tree.reroutes.clear();
  for (const auto& [m, route] : tree.routes)
    if (route != sol.pairs.at(m).protection) tree.reroutes.emplace(m, route);
  for (auto it = tree.vertex_override.begin(); it != tree.vertex_override.end();)
    it = tree.tree_links.contains(it->first.second) ? std::next(it)
                                                    : tree.vertex_override.erase(it);
}

// New routes for every member that uses `cycle.links[index]`, sent around
// the rest of the cycle instead.
std::map<DemandId, Path> reroute_over_cycle(const Topology& t, const SppSolution& sol,
                                            const ProtectionTree& tree, const Cycle& cycle,
                                            std::size_t index) {
  const std::size_t n = cycle.links.size();
  const LinkId removed = cycle.links[index];
  const std::string& from = cycle.vertices[index];
  // Remainder from `from` back around to the link's other end.
  std::vector<std::string> rem_vertices{from};
  std::vector<LinkId> rem_links;
  for (std::size_t k = 1; k < n; ++k) {
    std::size_t li = (index + n - k) % n;
    rem_links.push_back(cycle.links[li]);
    rem_vertices.push_back(cycle.vertices[li]);
  }

  std::map<DemandId, Path> out;
  for (const auto& [m, route] : tree.routes) {
    auto pos = std::find(route.links.begin(), route.links.end(), removed);
    if (pos == route.links.end()) continue;
    const Demand& d = sol.demands.at(m);
    auto vs = route_vertices(t, tree, d, route);
    std::vector<std::string> walk_v{vs.front()};
    std::vector<LinkId> walk_l;
    for (std::size_t i = 0; i < route.links.size(); ++i) {
      if (route.links[i] != removed) {
        walk_l.push_back(route.links[i]);
        walk_v.push_back(vs[i + 1]);
        continue;
      }
      if (vs[i] == from) {
        for (std::size_t k = 0; k < rem_links.size(); ++k) {
          walk_l.push_back(rem_links[k]);
          walk_v.push_back(rem_vertices[k + 1]);
        }
      } else {
        for (std::size_t k = rem_links.size(); k-- > 0;) {
          walk_l.push_back(rem_links[k]);
          walk_v.push_back(rem_vertices[k]);
        }
      }
    }
    out.emplace(m, reduce_walk(walk_v, walk_l));
  }
  return out;
}

std::set<DemandId> own_primary_conflicts(const SppSolution& sol,
                                         const std::map<DemandId, Path>& routes) {
  std::set<DemandId> out;
  for (const auto& [m, route] : routes)
    if (!link_disjoint(route, sol.pairs.at(m).primary)) out.insert(m);
  return out;
}

std::vector<std::size_t> removal_order(const Topology& t, const Cycle& cycle) {
  std::vector<std::size_t> order(cycle.links.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    double lx = t.link(cycle.links[x]).length, ly = t.link(cycle.links[y]).length;
    if (lx != ly) return lx > ly;
    return cycle.links[x] < cycle.links[y];
  });
  return order;
}

std::string describe(const Cycle& c) {
  std::ostringstream s;
  for (std::size_t i = 0; i < c.links.size(); ++i) s << (i ? "," : "") << c.links[i];
  return "[" + s.str() + "]";
}

// Separation point: a cycle vertex whose two cycle links are not joined by
// any chain of member routes passing through it.
bool split_separation_point(const Topology& t, const SppSolution& sol,
                            ProtectionTree& tree, const CodingTopology& ct,
                            const Cycle& cycle) {
  const std::size_t n = cycle.links.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& x = cycle.vertices[i];
    LinkId a = cycle.links[(i + n - 1) % n], b = cycle.links[i];
    std::map<LinkId, LinkId> parent;
    std::function<LinkId(LinkId)> find = [&](LinkId l) {
      auto it = parent.find(l);
      if (it == parent.end() || it->second == l) return parent[l] = l;
      return it->second = find(it->second);
    };
    for (LinkId l : ct.adjacency.at(x)) find(l);
    for (const auto& [m, route] : tree.routes) {
      auto vs = route_vertices(t, tree, sol.demands.at(m), route);
      for (std::size_t k = 1; k + 1 < vs.size(); ++k)
        if (vs[k] == x) parent[find(route.links[k - 1])] = find(route.links[k]);
    }
    if (find(a) == find(b)) continue;

    std::map<LinkId, std::vector<LinkId>> by_root;
    for (LinkId l : ct.adjacency.at(x)) by_root[find(l)].push_back(l);
    std::vector<std::vector<LinkId>> classes;
    for (auto& [root, links] : by_root) classes.push_back(links);
    std::sort(classes.begin(), classes.end());
    const NodeId& phys = ct.physical.at(x);
    int counter = 0;
    for (const auto& [key, name] : tree.vertex_override)
      if (key.first == phys) {
        auto hash = name.rfind('#');
        counter = std::max(counter, std::stoi(name.substr(hash + 1)));
      }
    for (std::size_t c = 1; c < classes.size(); ++c) {
      std::string name = phys + "#" + std::to_string(++counter);
      for (LinkId l : classes[c]) tree.vertex_override[{phys, l}] = name;
    }
    tree.splits.push_back({phys, classes});
    tree.log.push_back("cycle " + describe(cycle) + ": separation point at " + x);
    return true;
  }
  return false;
}

// Reroutes `conflicts` off the cycle: each gets the cheapest route whose
// links outside the current topology are paid for, avoiding its own primary
// and every split node. Accepted only if the topology loses a cycle.
bool detour(const Topology& t, const SppSolution& sol, ProtectionTree& tree,
            const Cycle& cycle, std::size_t index, const std::set<DemandId>& conflicts) {
  const LinkId removed = cycle.links[index];
  ProtectionTree trial = tree;
  for (auto& [m, route] : reroute_over_cycle(t, sol, tree, cycle, index))
    if (!conflicts.contains(m)) trial.routes[m] = route;
  for (DemandId m : conflicts) trial.routes.erase(m);

  std::set<NodeId> split_nodes;
  for (const auto& s : tree.splits) split_nodes.insert(s.node);
  std::set<LinkId> existing;
  for (const auto& [m, route] : trial.routes) existing.insert(route.links.begin(), route.links.end());

  for (DemandId m : conflicts) {
    const Demand& d = sol.demands.at(m);
    auto primary = sol.pairs.at(m).primary.link_set();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::map<NodeId, double> dist;
    std::map<NodeId, LinkId> pred;
    for (const auto& v : t.nodes()) dist[v] = inf;
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[d.a] = 0.0;
    queue.emplace(0.0, d.a);
    while (!queue.empty()) {
      auto [du, u] = queue.top();
      queue.pop();
      if (du > dist[u]) continue;
      if (u != d.a && split_nodes.contains(u)) continue;  // no transit through splits
      for (LinkId l : t.incident(u)) {
        if (l == removed || primary.contains(l)) continue;
        const Link& link = t.link(l);
        const NodeId& v = link.other(u);
        bool in_topology = existing.contains(l);
        if (!in_topology && (split_nodes.contains(u) || split_nodes.contains(v))) continue;
        double nd = du + (in_topology ? 0.0 : link.length);
        if (nd < dist[v]) {
          dist[v] = nd;
          pred[v] = l;
          queue.emplace(nd, v);
        }
      }
    }
    if (dist[d.b] == inf) return false;
    Path route;
    for (NodeId v = d.b; v != d.a;) {
      LinkId l = pred.at(v);
      route.links.push_back(l);
      v = t.link(l).other(v);
    }
    std::reverse(route.links.begin(), route.links.end());
    trial.routes[m] = route;
    existing.insert(route.links.begin(), route.links.end());
  }
  try {
    for (const auto& [m, route] : trial.routes)
      route_vertices(t, trial, sol.demands.at(m), route);
  } catch (const Error&) {
    return false;
  }
  ProtectionTree probe = trial;
  refresh(t, sol, probe, tree, removed, "cep");
  if (cyclomatic_number(coding_topology(t, sol, probe)) >=
      cyclomatic_number(coding_topology(t, sol, tree)))
    return false;
  tree = std::move(probe);
  std::ostringstream s;
  s << "cycle " << describe(cycle) << ": removed link " << removed << ", detoured";
  for (DemandId m : conflicts) s << " " << m;
  tree.log.push_back(s.str());
  return true;
}

void remove_cycle_link(const Topology& t, const SppSolution& sol, ProtectionTree& tree,
                       const Cycle& cycle, std::size_t index) {
  ProtectionTree before = tree;
  for (auto& [m, route] : reroute_over_cycle(t, sol, tree, cycle, index))
    tree.routes[m] = route;
  refresh(t, sol, tree, before, cycle.links[index], "cep");
  tree.log.push_back("cycle " + describe(cycle) + ": removed link " +
                     std::to_string(cycle.links[index]));
}

std::size_t iteration_cap(const Topology& t, const CodingGroup& g) {
  return 4 * (t.links().size() + g.members.size()) + 16;
}

}  // namespace

CodingTopology coding_topology(const Topology& t, const SppSolution& sol,
                               const ProtectionTree& tree) {
  CodingTopology ct;
  for (LinkId l : tree.tree_links) {
    const Link& link = t.link(l);
    CodingTopology::Edge e{l, coding_vertex(tree, l, link.a),
                           coding_vertex(tree, l, link.b), link.length};
    ct.adjacency[e.u].push_back(l);
    ct.adjacency[e.v].push_back(l);
    ct.physical[e.u] = link.a;
    ct.physical[e.v] = link.b;
    ct.edges.emplace(l, std::move(e));
  }
  for (auto& [v, list] : ct.adjacency) std::sort(list.begin(), list.end());
  for (const auto& [m, route] : tree.routes) {
    if (route.empty()) continue;
    const Demand& d = sol.demands.at(m);
    ct.ends[{m, Side::S}] = coding_vertex(tree, route.links.front(), d.a);
    ct.ends[{m, Side::T}] = coding_vertex(tree, route.links.back(), d.b);
  }
  return ct;
}

std::optional<std::vector<LinkId>> find_cycle(const Topology& t,
                                              const std::set<LinkId>& fragment) {
  std::vector<EdgeView> edges;
  for (LinkId id : fragment) {
    const Link& l = t.link(id);
    edges.push_back({id, l.a, l.b, l.length});
  }
  return dfs_cycle(edges);
}

std::optional<std::vector<LinkId>> find_cycle(const CodingTopology& ct) {
  return dfs_cycle(edge_views(ct));
}

std::optional<Cycle> smallest_cycle(const CodingTopology& ct) {
  std::optional<Cycle> best;
  double best_len = 0.0;
  std::vector<LinkId> best_key;
  for (const auto& [id, e] : ct.edges) {
    // Shortest u -> v path avoiding this edge closes a cycle through it.
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::map<std::string, double> dist;
    std::map<std::string, LinkId> pred;
    using Item = std::pair<double, std::string>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[e.u] = 0.0;
    queue.emplace(0.0, e.u);
    while (!queue.empty()) {
      auto [d, x] = queue.top();
      queue.pop();
      if (d > dist[x]) continue;
      for (LinkId l : ct.adjacency.at(x)) {
        if (l == id) continue;
        const std::string& y = ct.other(l, x);
        double nd = d + ct.edges.at(l).length;
        auto it = dist.find(y);
        if (it == dist.end() || nd < it->second) {
          dist[y] = nd;
          pred[y] = l;
          queue.emplace(nd, y);
        }
      }
    }
    if (!dist.contains(e.v)) continue;
    Cycle c;
    // vertices: u, then walk back from v to u reversed gives u ... v
    std::vector<std::string> vs{e.v};
    std::vector<LinkId> ls;
    for (std::string x = e.v; x != e.u;) {
      LinkId l = pred.at(x);
      ls.push_back(l);
      x = ct.other(l, x);
      vs.push_back(x);
    }
    std::reverse(vs.begin(), vs.end());  // u ... v
    std::reverse(ls.begin(), ls.end());
    c.vertices = vs;
    c.links = ls;
    c.links.push_back(id);  // closes v -> u
    double len = dist.at(e.v) + e.length;
    std::vector<LinkId> key = c.links;
    std::sort(key.begin(), key.end());
    if (!best || len < best_len - 1e-9 || (len <= best_len + 1e-9 && key < best_key)) {
      best = std::move(c);
      best_len = len;
      best_key = std::move(key);
    }
    (void)inf;
  }
  return best;
}

ProtectionTree initial_tree(const Topology&, const SppSolution& sol, const CodingGroup& g) {
  ProtectionTree tree;
  tree.group_id = g.id;
  tree.mode = g.mode;
  tree.members = g.members;
  for (DemandId m : g.members) {
    const Path& p = sol.pairs.at(m).protection;
    tree.routes.emplace(m, p);
    tree.tree_links.insert(p.links.begin(), p.links.end());
  }
  return tree;
}

ProtectionTree cep_basic(const Topology& t, const SppSolution& sol, ProtectionTree tree,
                         const Cycle& cycle) {
  remove_cycle_link(t, sol, tree, cycle, removal_order(t, cycle).front());
  return tree;
}

ProtectionTree cep_extended(const Topology& t, const SppSolution& sol,
                            const CodingGroup& g) {
  ProtectionTree tree = initial_tree(t, sol, g);
  for (std::size_t iter = 0;; ++iter) {
    if (iter > iteration_cap(t, g)) throw Error("cycle elimination did not converge");
    CodingTopology ct = coding_topology(t, sol, tree);
    auto cycle = smallest_cycle(ct);
    if (!cycle) break;

    // Steps 1-2: longest link whose reroute keeps members off their primaries.
    std::optional<std::size_t> chosen;
    std::size_t fewest = 0;
    std::set<DemandId> fewest_conflicts;
    bool have_fewest = false;
    for (std::size_t index : removal_order(t, *cycle)) {
      auto conflicts =
          own_primary_conflicts(sol, reroute_over_cycle(t, sol, tree, *cycle, index));
      if (conflicts.empty()) {
        chosen = index;
        break;
      }
      if (!have_fewest || conflicts.size() < fewest_conflicts.size()) {
        have_fewest = true;
        fewest = index;
        fewest_conflicts = std::move(conflicts);
      }
    }
    if (chosen) {
      remove_cycle_link(t, sol, tree, *cycle, *chosen);
      continue;
    }
    // Step 3: separation point.
    if (split_separation_point(t, sol, tree, ct, *cycle)) continue;
    // Step 4: detour the conflicting portions.
    if (detour(t, sol, tree, *cycle, fewest, fewest_conflicts)) continue;
    // Step 5: dedicated protection for the conflicting members.
    ProtectionTree before = tree;
    for (DemandId m : fewest_conflicts) {
      tree.routes.erase(m);
      tree.members.erase(m);
      tree.apsed.insert(m);
    }
    refresh(t, sol, tree, before, -1, "aps");
    for (auto& r : tree.removed_links)
      if (r.reason == "pruned" &&
          std::find(before.removed_links.begin(), before.removed_links.end(), r) ==
              before.removed_links.end())
        r.reason = "aps";
    std::ostringstream s;
    s << "cycle " << describe(*cycle) << ": demoted to 1+1 APS";
    for (DemandId m : fewest_conflicts) s << " " << m;
    tree.log.push_back(s.str());
  }
  return tree;
}

ProtectionTree eliminate_cycles(const Topology& t, const SppSolution& sol,
                                const CodingGroup& g) {
  if (g.mode == Mode::Relaxed) return cep_extended(t, sol, g);
  ProtectionTree tree = initial_tree(t, sol, g);
  for (std::size_t iter = 0;; ++iter) {
    if (iter > iteration_cap(t, g)) throw Error("cycle elimination did not converge");
    auto cycle = smallest_cycle(coding_topology(t, sol, tree));
    if (!cycle) break;
    tree = cep_basic(t, sol, std::move(tree), *cycle);
  }
  return tree;
}

std::map<LinkId, int> tree_link_units(const SppSolution& sol, const ProtectionTree& tree) {
  std::map<LinkId, int> units;
  for (LinkId l : tree.tree_links) units[l] += link_width(sol, tree, l);
  for (DemandId m : tree.apsed)
    for (LinkId l : sol.pairs.at(m).protection.links) units[l] += sol.demands.at(m).units;
  return units;
}

double tree_capacity(const Topology& t, const SppSolution& sol, const ProtectionTree& tree) {
  double total = 0.0;
  for (const auto& [l, u] : tree_link_units(sol, tree)) total += u * t.link(l).length;
  return total;
}

}  // namespace cppweave
