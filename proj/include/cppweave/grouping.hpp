#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cppweave/cycles.hpp"

namespace cppweave {

struct GroupViolation {
  DemandId first = 0;   // demand whose primary path is involved
  DemandId second = 0;
  std::string rule;     // "rule-1" or "rule-2"
  LinkId link = 0;      // a shared link
};

struct GroupCheck {
  std::vector<GroupViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Rule 1 (pairwise link-disjoint primaries) in both modes; in strict mode
/// also Rule 2 (no member primary touches a groupmate's protection path).
GroupCheck validate_group(const CodingGroup& g, const PairMap& pairs);

/// Coding groups of a design and the cycle-free topology of each.
struct CppDesign {
  Mode mode = Mode::Strict;
  std::vector<CodingGroup> groups;
  std::vector<ProtectionTree> trees;  // aligned with groups
  std::map<LinkId, int> capacity;     // protection units per link, all groups
  double protection_capacity = 0.0;   // length-weighted
  double spp_spare = 0.0;             // length-weighted spare of the source SPP
  double cep_savings = 0.0;
  std::string spp_hash;               // provenance of the source SPP solution

  std::vector<std::vector<DemandId>> partition() const;
  friend bool operator==(const CppDesign&, const CppDesign&) = default;
};

/// Builds groups, runs cycle elimination on each and totals capacity.
/// Group ids follow the order of the partition, starting at 1.
CppDesign make_design(const Topology& t, const SppSolution& sol, Mode mode,
                      const std::vector<std::vector<DemandId>>& partition);

/// Greedy merging from singletons: repeatedly merge the valid pair with the
/// largest length-weighted saving (ties: lowest group ids) until no merge
/// saves capacity. In relaxed mode the strict greedy partition is also
/// evaluated and the cheaper of the two is kept.
CppDesign form_groups(const Topology& t, const SppSolution& sol, Mode mode);

/// Exhaustive search over partitions into valid, connected groups,
/// minimising total capacity after cycle elimination. Ties go to the
/// lexicographically smallest partition. Throws TooLarge above `cap`
/// demands.
CppDesign brute_force_groups(const Topology& t, const SppSolution& sol, Mode mode,
                             std::size_t cap = 10);

/// CPP protection capacity minus SPP spare capacity, length-weighted.
/// Negative when coding and cycle elimination undercut the SPP sharing.
double extra_capacity(const CppDesign& d);

/// Capacity of one candidate group after cycle elimination, or nullopt when
/// it breaks the mode's rules or its protection paths are not connected.
class GroupCostCache {
 public:
  GroupCostCache(const Topology& t, const SppSolution& sol, Mode mode)
      : t_(t), sol_(sol), mode_(mode) {}
  std::optional<double> cost(const std::set<DemandId>& members);

 private:
  const Topology& t_;
  const SppSolution& sol_;
  Mode mode_;
  std::map<std::set<DemandId>, std::optional<double>> cache_;
};

}  // namespace cppweave
