#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cppweave/grouping.hpp"
#include "cppweave/trails.hpp"

namespace cppweave {

/// s_i (side S) or d_i (side T).
struct SymbolAtom {
  DemandId demand = 0;
  Side side = Side::S;

  friend auto operator<=>(const SymbolAtom&, const SymbolAtom&) = default;
  friend bool operator==(const SymbolAtom&, const SymbolAtom&) = default;
};

/// XOR of atoms over GF(2); the empty expression is the zero signal.
struct SymbolExpr {
  std::set<SymbolAtom> atoms;

  SymbolExpr& operator^=(const SymbolExpr& o);
  friend SymbolExpr operator^(SymbolExpr a, const SymbolExpr& b) { return a ^= b; }
  bool empty() const { return atoms.empty(); }
  friend bool operator==(const SymbolExpr&, const SymbolExpr&) = default;
};

SymbolExpr atom(DemandId d, Side s);
SymbolExpr parity(DemandId d);  // c_i = s_i + d_i

/// "s1 ⊕ d1 ⊕ s2"; "0" when empty.
std::string to_string(const SymbolExpr& e);

/// Direction of travel over a link: from Link::a to Link::b or back.
enum class Dir { AtoB, BtoA };
using DirectedLink = std::pair<LinkId, Dir>;
using LinkSymbols = std::map<DirectedLink, SymbolExpr>;

/// Steady-state symbols read off the trails: every directed trail link
/// carries the parities of the entities behind it, spurs carry the parity
/// of their end node.
LinkSymbols steady_state(const Topology& t, const SppSolution& sol,
                         const ProtectionTree& tree, const TrailHierarchy& h);

/// The same quantity computed straight from the tree: each directed link
/// carries the XOR of the parities injected on its tail side.
LinkSymbols steady_state(const Topology& t, const SppSolution& sol,
                         const ProtectionTree& tree);

/// An XOR of named received signals summing to the wanted atom.
struct Witness {
  std::vector<std::string> terms;
  SymbolExpr sum;
};

/// GF(2) span test: a subset of `available` whose XOR equals `target`, or
/// none.
std::optional<Witness> span_witness(
    const std::vector<std::pair<std::string, SymbolExpr>>& available,
    const SymbolExpr& target);

enum class Verdict { Unaffected, Recovered, Unrecovered };
std::string to_string(Verdict v);

struct DemandVerdict {
  Verdict verdict = Verdict::Unaffected;
  std::optional<Side> end;  // failing end when unrecovered
  std::string reason;
  std::map<Side, Witness> witnesses;  // per recovered end
};

struct FailureReport {
  LinkId failed = 0;
  std::map<DemandId, DemandVerdict> verdicts;
  std::set<DemandId> muted;

  bool pass() const;
};

/// Every single-link failure of the topology, by ascending link id, plus
/// structural problems found in the trail hierarchies.
struct VerificationReport {
  std::vector<FailureReport> failures;
  std::vector<std::string> issues;

  std::size_t unrecovered() const;
  bool pass() const { return unrecovered() == 0 && issues.empty(); }
};

FailureReport simulate_failure(const Topology& t, const SppSolution& sol,
                               const CppDesign& design, LinkId failed);

/// `hierarchies` (aligned with design.groups) are checked for soundness and
/// against the tree-based steady state; pass an empty vector to skip.
VerificationReport verify_all(const Topology& t, const SppSolution& sol,
                              const CppDesign& design,
                              const std::vector<TrailHierarchy>& hierarchies);

using BitVector = std::vector<std::uint64_t>;

/// c = b_1 + ... + b_N.
BitVector diversity_encode(const std::vector<BitVector>& data);

/// b_i from c and the survivors (i is 1-based; data[i-1] is ignored).
BitVector diversity_decode(const std::vector<BitVector>& data, const BitVector& c,
                           std::size_t i);

}  // namespace cppweave
