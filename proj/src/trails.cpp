#include "cppweave/trails.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace cppweave {

EndExpr complement(const EndExpr& e) {
  EndExpr out;
  out.reserve(e.size());
  for (const EndRef& r : e) out.push_back({r.demand, opposite(r.side), !r.complemented});
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(const EndExpr& e) {
  if (e.empty()) return "0";
  std::string out;
  for (const EndRef& r : e) {
    if (!out.empty()) out += " ⊕ ";
    out += side_char(r.side);
    if (r.complemented) out += '\'';
    out += std::to_string(r.demand);
  }
  return out;
}

std::string to_string(TrailEntity::Kind k) {
  switch (k) {
    case TrailEntity::Kind::RealOnTrail: return "real-on-trail";
    case TrailEntity::Kind::DirectAttached: return "direct-attached";
    case TrailEntity::Kind::BranchPoint: return "branch-point";
    case TrailEntity::Kind::Origin: return "origin";
  }
  return "?";
}

std::vector<LinkId> Trail::owned_links() const {
  std::vector<LinkId> out = links;
  for (const auto& e : entities)
    if (e.kind == TrailEntity::Kind::DirectAttached)
      out.insert(out.end(), e.spur.begin(), e.spur.end());
  return out;
}

namespace {

class Builder {
 public:
  Builder(const ProtectionTree& tree, CodingTopology ct, std::uint64_t seed)
      : ct_(std::move(ct)), rng_(seed * 1000003ULL + static_cast<std::uint64_t>(tree.group_id)) {
    h_.group_id = tree.group_id;
    for (const auto& [key, v] : ct_.ends) ends_at_[v].push_back(key);
  }

  TrailHierarchy run() {
    std::set<LinkId> covered;
    for (;;) {
      // Longest link not yet covered (ties: lowest id) seeds the next truck.
      std::optional<LinkId> start;
      for (const auto& [id, e] : ct_.edges) {
        if (covered.contains(id)) continue;
        if (!start || e.length > ct_.edges.at(*start).length) start = id;
      }
      if (!start) break;
      int id = truck(*start);
      for (std::size_t k = static_cast<std::size_t>(id); k < h_.trails.size(); ++k)
        for (LinkId l : h_.trails[k].owned_links()) covered.insert(l);
    }
    // An end sitting on an isolated vertex (possible only for an empty tree).
    for (const auto& [key, v] : ct_.ends)
      if (!h_.placement.contains(key))
        throw MalformedTree("end node of demand " + std::to_string(key.demand) +
                            " is not on the protection tree");
    return std::move(h_);
  }

 private:
  // Walk away from `from` over `prev` until a leaf, choosing at random
  // where the tree forks.
  void extend(std::string at, LinkId prev, std::vector<std::string>& vs,
              std::vector<LinkId>& ls) {
    for (;;) {
      std::vector<LinkId> options;
      for (LinkId l : ct_.adjacency.at(at))
        if (l != prev) options.push_back(l);
      if (options.empty()) return;
      LinkId pick = options.size() == 1 ? options.front() : options[rng_() % options.size()];
      at = ct_.other(pick, at);
      prev = pick;
      ls.push_back(pick);
      vs.push_back(at);
    }
  }

  // Ends inside the subtree entered from `v` over `l`, and its links.
  void subtree(const std::string& v, LinkId l, std::vector<EndKey>& ends,
               std::vector<LinkId>& links) const {
    std::vector<std::pair<std::string, LinkId>> stack{{ct_.other(l, v), l}};
    links.push_back(l);
    while (!stack.empty()) {
      auto [x, via] = stack.back();
      stack.pop_back();
      if (auto it = ends_at_.find(x); it != ends_at_.end())
        ends.insert(ends.end(), it->second.begin(), it->second.end());
      for (LinkId k : ct_.adjacency.at(x)) {
        if (k == via) continue;
        links.push_back(k);
        stack.push_back({ct_.other(k, x), k});
      }
    }
    std::sort(ends.begin(), ends.end());
  }

  int truck(LinkId start) {
    const auto& e = ct_.edges.at(start);
    std::vector<std::string> left{e.u}, right{e.v};
    std::vector<LinkId> left_links, right_links;
    extend(e.u, start, left, left_links);
    extend(e.v, start, right, right_links);
    Trail t;
    t.vertices.assign(left.rbegin(), left.rend());
    t.vertices.insert(t.vertices.end(), right.begin(), right.end());
    t.links.assign(left_links.rbegin(), left_links.rend());
    t.links.push_back(start);
    t.links.insert(t.links.end(), right_links.begin(), right_links.end());
    return emit(std::move(t), 0);
  }

  int branch(int parent, const std::string& v, LinkId first, const EndExpr& seen) {
    Trail t;
    t.level = h_.trails[static_cast<std::size_t>(parent)].level + 1;
    t.parent = Trail::Parent{parent, v};
    t.origin_complement = complement(seen);
    t.vertices = {v, ct_.other(first, v)};
    t.links = {first};
    extend(t.vertices.back(), first, t.vertices, t.links);
    TrailEntity origin;
    origin.kind = TrailEntity::Kind::Origin;
    origin.vertex = v;
    origin.represents = t.origin_complement;
    t.entities.push_back(std::move(origin));
    return emit(std::move(t), 1);
  }

  // Registers the trail, then places entities from vertex `from` on,
  // recursing into branches as they are met.
  int emit(Trail t, std::size_t from) {
    const int id = static_cast<int>(h_.trails.size());
    t.id = id;
    h_.trails.push_back(std::move(t));
    const std::vector<std::string> vertices = h_.trails.back().vertices;
    const std::vector<LinkId> links = h_.trails.back().links;
    for (std::size_t i = from; i < vertices.size(); ++i) {
      const std::string& v = vertices[i];
      if (auto it = ends_at_.find(v); it != ends_at_.end()) {
        for (const EndKey& k : it->second) {
          TrailEntity ent;
          ent.vertex = v;
          ent.represents = {{k.demand, k.side, false}};
          ent.spans = {k};
          place(id, k);
          h_.trails[static_cast<std::size_t>(id)].entities.push_back(std::move(ent));
        }
      }
      for (LinkId l : ct_.adjacency.at(v)) {
        bool on_trail = (i > 0 && links[i - 1] == l) || (i < links.size() && links[i] == l);
        if (on_trail) continue;
        TrailEntity ent;
        ent.vertex = v;
        std::vector<LinkId> spur;
        subtree(v, l, ent.spans, spur);
        if (ent.spans.size() == 1) {
          ent.kind = TrailEntity::Kind::DirectAttached;
          ent.represents = {{ent.spans[0].demand, ent.spans[0].side, false}};
          ent.spur = std::move(spur);
          place(id, ent.spans[0]);
          h_.trails[static_cast<std::size_t>(id)].entities.push_back(std::move(ent));
          continue;
        }
        ent.kind = TrailEntity::Kind::BranchPoint;
        std::set<DemandId> seen_once, seen_twice;
        for (const EndKey& k : ent.spans)
          if (!seen_once.insert(k.demand).second) seen_twice.insert(k.demand);
        for (const EndKey& k : ent.spans)
          if (!seen_twice.contains(k.demand)) ent.represents.push_back({k.demand, k.side, false});
        ent.spur = {l};
        const EndExpr seen = ent.represents;
        std::size_t slot = h_.trails[static_cast<std::size_t>(id)].entities.size();
        h_.trails[static_cast<std::size_t>(id)].entities.push_back(std::move(ent));
        int child = branch(id, v, l, seen);
        h_.trails[static_cast<std::size_t>(id)].entities[slot].child_trail = child;
      }
    }
    return id;
  }

  void place(int trail, const EndKey& k) {
    if (!h_.placement.emplace(k, trail).second)
      throw MalformedTree("end node of demand " + std::to_string(k.demand) +
                          " placed twice");
  }

  CodingTopology ct_;
  std::mt19937_64 rng_;
  std::map<std::string, std::vector<EndKey>> ends_at_;
  TrailHierarchy h_;
};

}  // namespace

TrailHierarchy build_trails(const Topology& t, const SppSolution& sol,
                            const ProtectionTree& tree, std::uint64_t seed) {
  for (DemandId m : tree.members) {
    if (tree.apsed.contains(m)) continue;
    auto it = tree.routes.find(m);
    if (it == tree.routes.end() || it->second.empty())
      throw MalformedTree("demand " + std::to_string(m) + " has no route on the tree");
    const Demand& d = sol.demands.at(m);
    const Link& first = t.link(it->second.links.front());
    const Link& last = t.link(it->second.links.back());
    if (!first.touches(d.a) || !last.touches(d.b))
      throw MalformedTree("end node of demand " + std::to_string(m) +
                          " is not on the protection tree");
  }
  return Builder(tree, coding_topology(t, sol, tree), seed).run();
}

Trail merge_adjacent(const Trail& t) {
  Trail out = t;
  out.entities.clear();
  auto is_bp = [](const TrailEntity& e) { return e.kind == TrailEntity::Kind::BranchPoint; };
  for (std::size_t i = 0; i < t.entities.size();) {
    std::size_t j = i;
    while (j < t.entities.size() && is_bp(t.entities[j])) ++j;
    if (j - i < 2) {
      out.entities.push_back(t.entities[i]);
      ++i;
      continue;
    }
    TrailEntity fused = t.entities[i];
    for (std::size_t k = i + 1; k < j; ++k) {
      const TrailEntity& e = t.entities[k];
      fused.represents.insert(fused.represents.end(), e.represents.begin(), e.represents.end());
      fused.spans.insert(fused.spans.end(), e.spans.begin(), e.spans.end());
      fused.spur.insert(fused.spur.end(), e.spur.begin(), e.spur.end());
    }
    std::sort(fused.represents.begin(), fused.represents.end());
    std::sort(fused.spans.begin(), fused.spans.end());
    out.entities.push_back(std::move(fused));
    i = j;
  }
  return out;
}

std::vector<std::string> check_hierarchy(const Topology& t, const SppSolution& sol,
                                         const ProtectionTree& tree,
                                         const TrailHierarchy& h) {
  std::vector<std::string> issues;
  const CodingTopology ct = coding_topology(t, sol, tree);
  const std::string g = "group " + std::to_string(h.group_id) + ": ";

  std::map<EndKey, int> singles;
  std::map<LinkId, int> owner;
  for (const Trail& tr : h.trails) {
    const std::string where = g + "trail " + std::to_string(tr.id) + ": ";
    for (const TrailEntity& e : tr.entities)
      if (e.kind == TrailEntity::Kind::RealOnTrail || e.kind == TrailEntity::Kind::DirectAttached)
        for (const EndKey& k : e.spans) ++singles[k];
    for (LinkId l : tr.owned_links())
      if (!owner.emplace(l, tr.id).second)
        issues.push_back(where + "link " + std::to_string(l) + " already on trail " +
                         std::to_string(owner[l]));
    if (tr.vertices.size() != tr.links.size() + 1) {
      issues.push_back(where + "vertex and link counts disagree");
      continue;
    }
    std::set<std::string> distinct(tr.vertices.begin(), tr.vertices.end());
    if (distinct.size() != tr.vertices.size()) issues.push_back(where + "revisits a vertex");
    for (std::size_t i = 0; i < tr.links.size(); ++i) {
      auto it = ct.edges.find(tr.links[i]);
      if (it == ct.edges.end() || it->second.u == it->second.v ||
          !((it->second.u == tr.vertices[i] && it->second.v == tr.vertices[i + 1]) ||
            (it->second.v == tr.vertices[i] && it->second.u == tr.vertices[i + 1])))
        issues.push_back(where + "link " + std::to_string(tr.links[i]) + " is not a tree step");
    }
    if (tr.level == 0 && !tr.links.empty()) {
      if (ct.adjacency.at(tr.vertices.front()).size() != 1 ||
          ct.adjacency.at(tr.vertices.back()).size() != 1)
        issues.push_back(where + "truck trail does not reach the tree edges");
    }
    if (tr.parent) {
      const Trail& p = h.trails.at(static_cast<std::size_t>(tr.parent->trail_id));
      auto bp = std::find_if(p.entities.begin(), p.entities.end(),
                             [&](const TrailEntity& e) { return e.child_trail == tr.id; });
      if (bp == p.entities.end())
        issues.push_back(where + "no branch point on the parent trail");
      else if (complement(tr.origin_complement) != bp->represents)
        issues.push_back(where + "origin is not the complement of the parent's view");
    }
  }
  for (const auto& [key, v] : ct.ends) {
    if (singles[key] != 1)
      issues.push_back(g + "end " + side_char(key.side) + std::to_string(key.demand) +
                       " placed " + std::to_string(singles[key]) + " times");
    else if (!h.placement.contains(key))
      issues.push_back(g + "end " + side_char(key.side) + std::to_string(key.demand) +
                       " missing from the placement map");
  }
  if (h.placement.size() != ct.ends.size()) issues.push_back(g + "placement size mismatch");
  for (LinkId l : tree.tree_links)
    if (!owner.contains(l)) issues.push_back(g + "link " + std::to_string(l) + " on no trail");
  for (const auto& [l, id] : owner)
    if (!tree.tree_links.contains(l))
      issues.push_back(g + "link " + std::to_string(l) + " is not a tree link");
  return issues;
}

}  // namespace cppweave
