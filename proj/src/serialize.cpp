#include "cppweave/serialize.hpp"

#include <cstdint>
#include <cstdio>

namespace cppweave {

namespace {

std::string side_name(Side s) { return std::string(1, side_char(s)); }

json refs(const EndExpr& e) {
  json out = json::array();
  for (const EndRef& r : e)
    out.push_back({{"demand", r.demand}, {"side", side_name(r.side)},
                   {"complemented", r.complemented}});
  return out;
}

json keys(const std::vector<EndKey>& ks) {
  json out = json::array();
  for (const EndKey& k : ks) out.push_back(side_name(k.side) + std::to_string(k.demand));
  return out;
}

json expr(const SymbolExpr& e) {
  json out = json::array();
  for (const SymbolAtom& a : e.atoms)
    out.push_back((a.side == Side::S ? "s" : "d") + std::to_string(a.demand));
  return out;
}

}  // namespace

json to_json(const SppSolution& sol) {
  json demands = json::array();
  for (const auto& [id, d] : sol.demands) {
    const PathPair& p = sol.pairs.at(id);
    demands.push_back({{"id", id}, {"a", d.a}, {"b", d.b}, {"units", d.units},
                       {"primary", p.primary.links}, {"protection", p.protection.links}});
  }
  json spare = json::array();
  for (const auto& [l, units] : sol.spare) {
    json us = json::array();
    for (const SpareUnit& u : units)
      us.push_back({{"index", u.index}, {"sharers", u.sharers}, {"width", u.width}});
    spare.push_back({{"link", l}, {"units", us}});
  }
  return {{"demands", demands}, {"spare", spare}};
}

SppSolution spp_from_json(const json& j) {
  SppSolution sol;
  for (const json& d : j.at("demands")) {
    Demand dem{d.at("id").get<int>(), d.at("a").get<std::string>(), d.at("b").get<std::string>(),
               d.at("units").get<int>()};
    sol.demands[dem.id] = dem;
    sol.pairs[dem.id] = PathPair{dem.id, Path{d.at("primary").get<std::vector<LinkId>>()},
                                 Path{d.at("protection").get<std::vector<LinkId>>()}};
  }
  for (const json& s : j.at("spare")) {
    auto& units = sol.spare[s.at("link").get<LinkId>()];
    for (const json& u : s.at("units"))
      units.push_back({u.at("index").get<int>(), u.at("sharers").get<std::set<DemandId>>(),
                       u.at("width").get<int>()});
  }
  return sol;
}

json to_json(const ProtectionTree& tree) {
  json routes = json::object();
  for (const auto& [m, p] : tree.routes) routes[std::to_string(m)] = p.links;
  json reroutes = json::object();
  for (const auto& [m, p] : tree.reroutes) reroutes[std::to_string(m)] = p.links;
  json removed = json::array();
  for (const auto& r : tree.removed_links)
    removed.push_back({{"link", r.link}, {"saving", r.saving}, {"reason", r.reason}});
  json splits = json::array();
  for (const auto& s : tree.splits) splits.push_back({{"node", s.node}, {"classes", s.classes}});
  return {{"group", tree.group_id},
          {"mode", to_string(tree.mode)},
          {"members", tree.members},
          {"tree_links", tree.tree_links},
          {"routes", routes},
          {"reroutes", reroutes},
          {"removed_links", removed},
          {"apsed", tree.apsed},
          {"splits", splits},
          {"saving", tree.saving()},
          {"log", tree.log}};
}

json to_json(const CppDesign& d) {
  json groups = json::array();
  for (std::size_t i = 0; i < d.groups.size(); ++i) {
    const CodingGroup& g = d.groups[i];
    json topo = json::object();
    for (const auto& [l, n] : g.protection_topology) topo[std::to_string(l)] = n;
    groups.push_back({{"id", g.id},
                      {"members", g.members},
                      {"protection_topology", topo},
                      {"tree", to_json(d.trees.at(i))}});
  }
  json capacity = json::object();
  for (const auto& [l, u] : d.capacity) capacity[std::to_string(l)] = u;
  return {{"mode", to_string(d.mode)},
          {"spp_hash", d.spp_hash},
          {"groups", groups},
          {"capacity", capacity},
          {"protection_capacity", d.protection_capacity},
          {"spp_spare", d.spp_spare},
          {"cep_savings", d.cep_savings},
          {"extra_capacity", extra_capacity(d)}};
}

json to_json(const TrailHierarchy& h) {
  json trails = json::array();
  for (const Trail& t : h.trails) {
    json ents = json::array();
    for (const TrailEntity& e : t.entities) {
      json je = {{"kind", to_string(e.kind)},
                 {"vertex", e.vertex},
                 {"represents", refs(e.represents)},
                 {"label", to_string(e.represents)},
                 {"spans", keys(e.spans)},
                 {"spur", e.spur}};
      if (e.child_trail >= 0) je["child_trail"] = e.child_trail;
      ents.push_back(std::move(je));
    }
    json jt = {{"id", t.id},
               {"level", t.level},
               {"vertices", t.vertices},
               {"links", t.links},
               {"entities", ents}};
    if (t.parent) {
      jt["parent"] = {{"trail", t.parent->trail_id}, {"vertex", t.parent->vertex}};
      jt["origin_complement"] = refs(t.origin_complement);
      jt["origin_label"] = to_string(t.origin_complement);
    }
    trails.push_back(std::move(jt));
  }
  json placement = json::object();
  for (const auto& [k, id] : h.placement)
    placement[side_name(k.side) + std::to_string(k.demand)] = id;
  return {{"group", h.group_id}, {"trails", trails}, {"placement", placement}};
}

json to_json(const FailureReport& r) {
  json verdicts = json::object();
  for (const auto& [id, v] : r.verdicts) {
    json jv = {{"verdict", to_string(v.verdict)}};
    if (v.end) jv["end"] = side_name(*v.end);
    if (!v.reason.empty()) jv["reason"] = v.reason;
    json ws = json::object();
    for (const auto& [side, w] : v.witnesses)
      ws[side_name(side)] = {{"terms", w.terms}, {"sum", expr(w.sum)}};
    if (!ws.empty()) jv["witnesses"] = ws;
    verdicts[std::to_string(id)] = jv;
  }
  return {{"failed_link", r.failed}, {"pass", r.pass()}, {"muted", r.muted},
          {"verdicts", verdicts}};
}

json to_json(const VerificationReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back(to_json(f));
  return {{"pass", r.pass()},
          {"unrecovered", r.unrecovered()},
          {"issues", r.issues},
          {"failures", failures}};
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string spp_fingerprint(const SppSolution& sol) { return fnv1a_hex(to_json(sol).dump()); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace cppweave
