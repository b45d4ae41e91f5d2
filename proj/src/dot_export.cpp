#include "cppweave/dot_export.hpp"

#include <sstream>

namespace cppweave {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

const char* colour(DemandId d) {
  static const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                  "#66a61e", "#e6ab02", "#a6761d", "#666666"};
  return palette[static_cast<std::size_t>(d) % 8];
}

std::string entity_id(int trail, std::size_t k) {
  return quote("t" + std::to_string(trail) + "e" + std::to_string(k));
}

}  // namespace

std::string topology_dot(const Topology& t, const SppSolution& sol) {
  std::ostringstream out;
  out << "graph topology {\n  node [shape=circle];\n";
  for (const NodeId& n : t.nodes()) out << "  " << quote(n) << ";\n";
  for (const auto& [id, l] : t.links())
    out << "  " << quote(l.a) << " -- " << quote(l.b) << " [color=gray80, label="
        << quote(std::to_string(id)) << "];\n";
  for (const auto& [id, pair] : sol.pairs) {
    auto draw = [&](const Path& p, const char* style) {
      for (LinkId l : p.links) {
        const Link& link = t.link(l);
        out << "  " << quote(link.a) << " -- " << quote(link.b) << " [style=" << style
            << ", color=" << quote(colour(id)) << ", tooltip="
            << quote("demand " + std::to_string(id)) << "];\n";
      }
    };
    draw(pair.primary, "bold");
    draw(pair.protection, "dashed");
  }
  out << "}\n";
  return out.str();
}

std::string trails_dot(const TrailHierarchy& h) {
  std::ostringstream out;
  out << "graph " << quote("group " + std::to_string(h.group_id)) << " {\n";
  out << "  rankdir=LR;\n  node [shape=box];\n";
  for (const Trail& raw : h.trails) {
    const Trail tr = merge_adjacent(raw);
    std::string label = tr.level == 0 ? "truck trail " + std::to_string(tr.id)
                                      : "branch trail " + std::to_string(tr.id) + " from " +
                                            tr.parent->vertex + ": " +
                                            to_string(tr.origin_complement);
    out << "  subgraph " << quote("cluster_" + std::to_string(tr.id)) << " {\n";
    out << "    label=" << quote(label) << ";\n";
    for (std::size_t k = 0; k < tr.entities.size(); ++k) {
      const TrailEntity& e = tr.entities[k];
      std::string shape = e.kind == TrailEntity::Kind::BranchPoint ? "diamond"
                          : e.kind == TrailEntity::Kind::Origin    ? "doubleoctagon"
                                                                   : "box";
      out << "    " << entity_id(tr.id, k) << " [shape=" << shape
          << ", label=" << quote(e.vertex + ": " + to_string(e.represents)) << "];\n";
    }
    for (std::size_t k = 1; k < tr.entities.size(); ++k)
      out << "    " << entity_id(tr.id, k - 1) << " -- " << entity_id(tr.id, k) << ";\n";
    out << "  }\n";
  }
  // Branch points to the origin of the trail they spawn.
  for (const Trail& raw : h.trails) {
    const Trail tr = merge_adjacent(raw);
    for (std::size_t k = 0; k < tr.entities.size(); ++k)
      if (tr.entities[k].child_trail >= 0)
        out << "  " << entity_id(tr.id, k) << " -- " << entity_id(tr.entities[k].child_trail, 0)
            << " [style=dotted];\n";
  }
  out << "}\n";
  return out.str();
}

DotDocuments export_dot(const Topology& t, const SppSolution& sol,
                        const std::vector<TrailHierarchy>& hierarchies) {
  DotDocuments docs{topology_dot(t, sol), {}};
  for (const auto& h : hierarchies) docs.trails.push_back(trails_dot(h));
  return docs;
}

}  // namespace cppweave
