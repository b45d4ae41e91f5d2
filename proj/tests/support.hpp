#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cppweave/pipeline.hpp"

namespace testing_support {

using namespace cppweave;

std::string data_path(const std::string& name);

struct Instance {
  Topology topology;
  DemandSet demands;
};

Instance load_instance(const std::string& stem);  // tests/data/<stem>_{topology,demands}.txt
Instance load_instance(const std::string& topology_file, const std::string& demands_file);

/// Ring of n nodes plus random chords (2-connected), integer lengths 1..9
/// and `demands` unit demands between distinct random nodes.
Instance random_instance(std::mt19937_64& rng, int min_nodes, int max_nodes,
                         int min_demands, int max_demands);

/// Every simple path between a and b, as link sequences.
std::vector<Path> all_simple_paths(const Topology& t, const NodeId& a, const NodeId& b);

/// Minimum total cost over all link-disjoint pairs of simple paths, or none.
std::optional<double> brute_force_pair_cost(const Topology& t, const NodeId& a,
                                            const NodeId& b, Metric metric);

/// Every simple cycle of the sub-graph, as sorted link-id sets.
std::vector<std::vector<LinkId>> all_cycles(const Topology& t, const std::set<LinkId>& links);

/// For a link: the largest number of protection units on it that a single
/// failure elsewhere activates.
int max_activation(const Topology& t, const SppSolution& sol, LinkId link);

/// Total spare units on a link.
int spare_units(const SppSolution& sol, LinkId link);

/// Group containing all demands of the instance, after cycle elimination.
CppDesign single_group_design(const Topology& t, const SppSolution& sol, Mode mode);

/// Capacity recomputed from scratch: per group, each tree link once at the
/// widest member's units, plus dedicated protection of apsed members.
double recount_capacity(const Topology& t, const SppSolution& sol, const CppDesign& d);

}  // namespace testing_support
