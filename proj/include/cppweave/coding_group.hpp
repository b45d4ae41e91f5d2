#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>

#include "cppweave/spp.hpp"

namespace cppweave {

/// Strict: a member's primary avoids every groupmate's primary and
/// protection path. Relaxed: it only has to avoid groupmates' primaries.
enum class Mode { Strict, Relaxed };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// Which end of a demand: S is Demand::a, T is Demand::b.
enum class Side { S, T };

inline Side opposite(Side s) { return s == Side::S ? Side::T : Side::S; }
inline char side_char(Side s) { return s == Side::S ? 'S' : 'T'; }

struct EndKey {
  DemandId demand = 0;
  Side side = Side::S;

  friend auto operator<=>(const EndKey&, const EndKey&) = default;
  friend bool operator==(const EndKey&, const EndKey&) = default;
};

inline const NodeId& end_node(const Demand& d, Side s) { return s == Side::S ? d.a : d.b; }

/// Demands whose protection paths are XOR-coded over a shared topology.
struct CodingGroup {
  int id = 0;
  std::set<DemandId> members;
  Mode mode = Mode::Strict;
  /// Number of member protection paths on each link, before cycle
  /// elimination.
  std::map<LinkId, int> protection_topology;

  friend bool operator==(const CodingGroup&, const CodingGroup&) = default;
};

CodingGroup make_group(int id, std::set<DemandId> members, Mode mode,
                       const PairMap& pairs);

}  // namespace cppweave
