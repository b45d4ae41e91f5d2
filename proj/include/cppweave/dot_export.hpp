#pragma once

#include <string>
#include <vector>

#include "cppweave/grouping.hpp"
#include "cppweave/trails.hpp"

namespace cppweave {

/// Physical topology with each demand's primary path drawn solid and its
/// protection path dashed.
std::string topology_dot(const Topology& t, const SppSolution& sol);

/// Trail hierarchy of one group: the truck trail as a left-to-right chain,
/// each branch trail as its own cluster labelled with its origin.
std::string trails_dot(const TrailHierarchy& h);

struct DotDocuments {
  std::string topology;
  std::vector<std::string> trails;  // aligned with the hierarchies
};

DotDocuments export_dot(const Topology& t, const SppSolution& sol,
                        const std::vector<TrailHierarchy>& hierarchies);

}  // namespace cppweave
