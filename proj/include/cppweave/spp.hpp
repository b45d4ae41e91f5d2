#pragma once

#include <map>
#include <set>
#include <span>
#include <vector>

#include "cppweave/net_model.hpp"

namespace cppweave {

/// One unit of spare capacity on a link, shared by demands whose primary
/// paths are pairwise link-disjoint.
struct SpareUnit {
  int index = 0;
  std::set<DemandId> sharers;
  int width = 1;  // parallel positions: max units among sharers

  friend bool operator==(const SpareUnit&, const SpareUnit&) = default;
};

/// Shared path protection baseline: one path pair per demand and the
/// per-link spare-unit sharing assignment.
struct SppSolution {
  std::map<DemandId, Demand> demands;
  PairMap pairs;
  std::map<LinkId, std::vector<SpareUnit>> spare;

  friend bool operator==(const SppSolution&, const SppSolution&) = default;
};

/// First-fit sharing over fixed path pairs. Demands are processed in
/// ascending id; on each protection link a demand joins the lowest-indexed
/// unit whose sharers all have primaries link-disjoint from its own.
SppSolution share_spare_capacity(const Topology& t, std::span<const Demand> demands,
                                 const PairMap& pairs);

/// Routes every demand with `disjoint_pair` (pinned pairs are taken as
/// given) and assigns spare capacity first-fit. NoDisjointPair carries the
/// offending demand id.
SppSolution solve_spp(const Topology& t, const DemandSet& demands,
                      Metric metric = Metric::Length);

struct ScapResult {
  double spare = 0.0;    // length-weighted spare units
  double working = 0.0;  // length-weighted working units
  double percent = 0.0;  // 100 * spare / (spare + working)
};

/// Spare capacity percentage. Zero demands gives 0%.
ScapResult scap(const SppSolution& sol, const Topology& t);

double scap_percent(double spare, double working);

/// Length-weighted working capacity: sum over demands of units times
/// primary length.
double working_capacity(const SppSolution& sol, const Topology& t);

/// Length-weighted spare capacity: sum over links and units of
/// width times link length.
double spare_capacity(const SppSolution& sol, const Topology& t);

}  // namespace cppweave
