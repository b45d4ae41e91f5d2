#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cppweave/errors.hpp"

namespace cppweave {

using NodeId = std::string;
using LinkId = int;
using DemandId = int;

/// A bidirectional span between two distinct nodes.
struct Link {
  LinkId id = 0;
  NodeId a;
  NodeId b;
  double length = 1.0;

  bool touches(const NodeId& n) const { return n == a || n == b; }
  const NodeId& other(const NodeId& n) const { return n == a ? b : a; }

  friend bool operator==(const Link&, const Link&) = default;
};

/// Undirected mesh with at most one link per node pair and no self-loops.
class Topology {
 public:
  void add_node(const NodeId& n);
  /// Throws InputError (locus "link <id>") on a duplicate id, unknown
  /// endpoint, self-loop, parallel link, or non-positive length.
  void add_link(const Link& link);

  const std::set<NodeId>& nodes() const { return nodes_; }
  const std::map<LinkId, Link>& links() const { return links_; }

  bool has_node(const NodeId& n) const { return nodes_.contains(n); }
  bool has_link(LinkId id) const { return links_.contains(id); }
  /// Throws UnknownLink.
  const Link& link(LinkId id) const;
  std::optional<LinkId> find_link(const NodeId& a, const NodeId& b) const;
  /// Incident link ids in ascending order.
  const std::vector<LinkId>& incident(const NodeId& n) const;

  double length_of(std::span<const LinkId> links) const;

  friend bool operator==(const Topology& x, const Topology& y) {
    return x.nodes_ == y.nodes_ && x.links_ == y.links_;
  }

 private:
  std::set<NodeId> nodes_;
  std::map<LinkId, Link> links_;
  std::map<NodeId, std::vector<LinkId>> adjacency_;
  std::map<std::pair<NodeId, NodeId>, LinkId> by_pair_;
};

struct Demand {
  DemandId id = 0;
  NodeId a;  // S side
  NodeId b;  // T side
  int units = 1;

  friend bool operator==(const Demand&, const Demand&) = default;
};

/// Ordered link sequence; orientation is implied by the start node the
/// caller walks it from.
struct Path {
  std::vector<LinkId> links;

  bool empty() const { return links.empty(); }
  std::set<LinkId> link_set() const { return {links.begin(), links.end()}; }
  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

/// Primary and protection paths of one demand, both oriented S -> T.
struct PathPair {
  DemandId demand = 0;
  Path primary;
  Path protection;

  friend bool operator==(const PathPair&, const PathPair&) = default;
};

using PairMap = std::map<DemandId, PathPair>;

enum class Metric { Length, Hops };

/// Node sequence visited by `path` when walked from `start`. Throws
/// InputError if consecutive links do not share a node.
std::vector<NodeId> walk_nodes(const Topology& t, const Path& path,
                               const NodeId& start);

/// True when `path` walks from `from` to `to` without repeating a link or
/// a node.
bool is_simple_path(const Topology& t, const Path& path, const NodeId& from,
                    const NodeId& to);

double path_cost(const Topology& t, const Path& path, Metric metric);

bool link_disjoint(const Path& p, const Path& q);

/// Minimum total cost pair of link-disjoint a-b paths, computed jointly
/// (Suurballe/Bhandari). The cheaper path becomes the primary. Throws
/// NoDisjointPair when a and b are not 2-link-connected.
PathPair disjoint_pair(const Topology& t, const NodeId& a, const NodeId& b,
                       Metric metric = Metric::Length);

/// Checks the PathPair invariants against a demand; throws InputError.
void validate_pair(const Topology& t, const Demand& d, const PathPair& pair);

// ---------------------------------------------------------------------------
// Documents

enum class Format { Text, Json };

Format format_for_path(std::string_view path);

/// Demands plus optional pre-routed (pinned) path pairs.
struct DemandSet {
  std::vector<Demand> demands;
  PairMap pinned;
};

/// Parses the node/link records of a document; other record kinds are
/// ignored so one file can carry both topology and demands.
Topology load_topology(std::string_view text, Format format = Format::Text);

/// Parses demand and path records, validated against `t`.
DemandSet load_demands(std::string_view text, const Topology& t,
                       Format format = Format::Text);

std::string serialize_topology(const Topology& t, Format format = Format::Text);
std::string serialize_demands(const DemandSet& d, Format format = Format::Text);

std::string read_file(const std::string& path);

}  // namespace cppweave
