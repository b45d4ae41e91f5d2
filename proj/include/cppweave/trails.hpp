#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cppweave/cycles.hpp"

namespace cppweave {

/// Reference to one end node of a demand. `complemented` marks references
/// seen through a branch point from the branch side.
struct EndRef {
  DemandId demand = 0;
  Side side = Side::S;
  bool complemented = false;

  EndKey key() const { return {demand, side}; }
  friend auto operator<=>(const EndRef&, const EndRef&) = default;
  friend bool operator==(const EndRef&, const EndRef&) = default;
};

using EndExpr = std::vector<EndRef>;  // XOR-merge, kept sorted

/// S <-> T on every reference, complemented flag toggled.
EndExpr complement(const EndExpr& e);

/// "S'3 ⊕ T5", primes on complemented references; "0" when empty.
std::string to_string(const EndExpr& e);

struct TrailEntity {
  enum class Kind { RealOnTrail, DirectAttached, BranchPoint, Origin };
  Kind kind = Kind::RealOnTrail;
  std::string vertex;  // coding vertex on the trail
  EndExpr represents;
  /// Branch points: every end node inside the subtree, omitted pairs
  /// included. Direct-attached: the single end node.
  std::vector<EndKey> spans;
  /// Links leading off the trail: the spur of a direct-attached entity, or
  /// the first link of a branch point's subtree.
  std::vector<LinkId> spur;
  int child_trail = -1;  // branch points

  friend bool operator==(const TrailEntity&, const TrailEntity&) = default;
};

std::string to_string(TrailEntity::Kind k);

struct Trail {
  int id = 0;
  int level = 0;
  std::vector<std::string> vertices;  // coding vertices in trail order
  std::vector<LinkId> links;          // links[i] joins vertices[i], vertices[i+1]
  std::vector<TrailEntity> entities;  // trail order; an Origin first on branches
  struct Parent {
    int trail_id = 0;
    std::string vertex;
    friend bool operator==(const Parent&, const Parent&) = default;
  };
  std::optional<Parent> parent;
  EndExpr origin_complement;  // branches only

  /// Links owned by this trail: its own links and direct-attached spurs.
  std::vector<LinkId> owned_links() const;
  friend bool operator==(const Trail&, const Trail&) = default;
};

struct TrailHierarchy {
  int group_id = 0;
  std::vector<Trail> trails;  // trail id == index; parents precede children
  std::map<EndKey, int> placement;

  friend bool operator==(const TrailHierarchy&, const TrailHierarchy&) = default;
};

/// Turns a cycle-free protection tree into linear coding trails. The initial
/// link is the longest tree link (ties: lowest id); `seed` drives every
/// choice of how a trail is extended. A forest gets one level-0 trail per
/// component.
TrailHierarchy build_trails(const Topology& t, const SppSolution& sol,
                            const ProtectionTree& tree, std::uint64_t seed);

/// Fuses maximal runs of two or more adjacent branch-point entities at the
/// same position into one. Singly placed ends are never touched.
Trail merge_adjacent(const Trail& t);

/// Problems with a hierarchy: placement totality, link partition, simple
/// trail paths and branch origin consistency. Empty when sound.
std::vector<std::string> check_hierarchy(const Topology& t, const SppSolution& sol,
                                         const ProtectionTree& tree,
                                         const TrailHierarchy& h);

}  // namespace cppweave
