#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cppweave/coding_group.hpp"

namespace cppweave {

struct RemovedLink {
  LinkId link = 0;
  double saving = 0.0;  // length-weighted units released
  std::string reason;   // "cep", "pruned" or "aps"

  friend bool operator==(const RemovedLink&, const RemovedLink&) = default;
};

/// A node whose incident group links were partitioned into independent
/// coding vertices because no member route crosses between the classes.
struct NodeSplit {
  NodeId node;
  std::vector<std::vector<LinkId>> classes;

  friend bool operator==(const NodeSplit&, const NodeSplit&) = default;
};

/// Cycle-free coding topology of one group together with the route each
/// member's protection signal takes over it.
struct ProtectionTree {
  int group_id = 0;
  Mode mode = Mode::Strict;
  std::set<DemandId> members;
  /// Member routes, oriented S -> T. A route is the unique path between the
  /// member's end nodes in the coding topology.
  std::map<DemandId, Path> routes;
  std::set<LinkId> tree_links;
  std::vector<RemovedLink> removed_links;
  /// Members whose route no longer equals their original protection path.
  std::map<DemandId, Path> reroutes;
  /// Members demoted to dedicated 1+1 protection.
  std::set<DemandId> apsed;
  std::vector<NodeSplit> splits;
  /// (physical node, link) -> coding vertex name for split nodes.
  std::map<std::pair<NodeId, LinkId>, std::string> vertex_override;
  std::vector<std::string> log;

  double saving() const;
  friend bool operator==(const ProtectionTree&, const ProtectionTree&) = default;
};

/// Coding vertex that `link` attaches to at physical `node`.
std::string coding_vertex(const ProtectionTree& tree, LinkId link, const NodeId& node);

/// Graph view of a ProtectionTree with split nodes expanded.
struct CodingTopology {
  struct Edge {
    LinkId link = 0;
    std::string u;  // vertex at Link::a
    std::string v;  // vertex at Link::b
    double length = 0.0;
  };
  std::map<LinkId, Edge> edges;
  std::map<std::string, std::vector<LinkId>> adjacency;  // ascending ids
  std::map<std::string, NodeId> physical;
  std::map<EndKey, std::string> ends;

  const std::string& other(LinkId link, const std::string& vertex) const;
};

CodingTopology coding_topology(const Topology& t, const SppSolution& sol,
                               const ProtectionTree& tree);

/// Some cycle in `fragment`, as an ordered link sequence, or none. The
/// search is a DFS started from the lowest-id link, visiting neighbours in
/// ascending link-id order; the first back edge closes the cycle.
std::optional<std::vector<LinkId>> find_cycle(const Topology& t,
                                              const std::set<LinkId>& fragment);
std::optional<std::vector<LinkId>> find_cycle(const CodingTopology& ct);

/// A cycle of minimum total length (ties: lexicographically smallest sorted
/// link ids), with its vertex sequence: links[i] joins vertices[i] and
/// vertices[i+1 mod n].
struct Cycle {
  std::vector<LinkId> links;
  std::vector<std::string> vertices;
};
std::optional<Cycle> smallest_cycle(const CodingTopology& ct);

/// Members' protection paths as routes, nothing removed yet.
ProtectionTree initial_tree(const Topology& t, const SppSolution& sol,
                            const CodingGroup& g);

/// One basic elimination step: the longest link of `cycle` (ties: lowest
/// id) leaves the coding topology and its members are rerouted over the rest
/// of the cycle. Links no longer used by any route are pruned.
ProtectionTree cep_basic(const Topology& t, const SppSolution& sol,
                         ProtectionTree tree, const Cycle& cycle);

/// Relaxed-mode elimination of every cycle: remove the longest link whose
/// reroute keeps each member's route off its own primary; else split a
/// separation point; else detour the conflicting members; else demote them
/// to 1+1 APS.
ProtectionTree cep_extended(const Topology& t, const SppSolution& sol,
                            const CodingGroup& g);

/// Dispatches on the group's mode and iterates until the coding topology
/// is cycle-free, smallest cycle first.
ProtectionTree eliminate_cycles(const Topology& t, const SppSolution& sol,
                                const CodingGroup& g);

/// Length-weighted protection capacity of a group after elimination: one
/// unit (times the widest member) per tree link plus the dedicated
/// protection paths of apsed members.
double tree_capacity(const Topology& t, const SppSolution& sol,
                     const ProtectionTree& tree);

/// Per-link capacity units of one group (tree links and APS paths).
std::map<LinkId, int> tree_link_units(const SppSolution& sol, const ProtectionTree& tree);

}  // namespace cppweave
