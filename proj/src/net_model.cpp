#include "cppweave/net_model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace cppweave {

namespace {

std::pair<NodeId, NodeId> ordered(const NodeId& a, const NodeId& b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

void Topology::add_node(const NodeId& n) {
  if (nodes_.insert(n).second) adjacency_[n];
}

void Topology::add_link(const Link& link) {
  const std::string locus = "link " + std::to_string(link.id);
  if (links_.contains(link.id))
    throw InputError(locus, "duplicate link id " + std::to_string(link.id));
  if (!has_node(link.a)) throw InputError(locus, "unknown node '" + link.a + "'");
  if (!has_node(link.b)) throw InputError(locus, "unknown node '" + link.b + "'");
  if (link.a == link.b) throw InputError(locus, "self-loop at '" + link.a + "'");
  if (!(link.length > 0.0))
    throw InputError(locus, "non-positive length " + format_number(link.length));
  auto key = ordered(link.a, link.b);
  if (by_pair_.contains(key))
    throw InputError(locus, "parallel link between '" + link.a + "' and '" +
                                link.b + "'");
  links_.emplace(link.id, link);
  by_pair_.emplace(key, link.id);
  for (const NodeId* n : {&link.a, &link.b}) {
    auto& adj = adjacency_[*n];
    adj.insert(std::upper_bound(adj.begin(), adj.end(), link.id), link.id);
  }
}

const Link& Topology::link(LinkId id) const {
  auto it = links_.find(id);
  if (it == links_.end()) throw UnknownLink("unknown link " + std::to_string(id));
  return it->second;
}

std::optional<LinkId> Topology::find_link(const NodeId& a, const NodeId& b) const {
  auto it = by_pair_.find(ordered(a, b));
  if (it == by_pair_.end()) return std::nullopt;
  return it->second;
}

const std::vector<LinkId>& Topology::incident(const NodeId& n) const {
  static const std::vector<LinkId> none;
  auto it = adjacency_.find(n);
  return it == adjacency_.end() ? none : it->second;
}

double Topology::length_of(std::span<const LinkId> ids) const {
  double total = 0.0;
  for (LinkId id : ids) total += link(id).length;
  return total;
}

std::vector<NodeId> walk_nodes(const Topology& t, const Path& path,
                               const NodeId& start) {
  std::vector<NodeId> nodes{start};
  for (LinkId id : path.links) {
    const Link& l = t.link(id);
    if (!l.touches(nodes.back()))
      throw InputError("path", "link " + std::to_string(id) +
                                   " does not continue from '" + nodes.back() + "'");
    nodes.push_back(l.other(nodes.back()));
  }
  return nodes;
}

bool is_simple_path(const Topology& t, const Path& path, const NodeId& from,
                    const NodeId& to) {
  std::vector<NodeId> nodes;
  try {
    nodes = walk_nodes(t, path, from);
  } catch (const Error&) {
    return false;
  }
  if (nodes.back() != to) return false;
  std::set<NodeId> seen(nodes.begin(), nodes.end());
  return seen.size() == nodes.size() && path.link_set().size() == path.links.size();
}

double path_cost(const Topology& t, const Path& path, Metric metric) {
  if (metric == Metric::Hops) return static_cast<double>(path.links.size());
  return t.length_of(path.links);
}

bool link_disjoint(const Path& p, const Path& q) {
  auto ps = p.link_set();
  return std::none_of(q.links.begin(), q.links.end(),
                      [&](LinkId id) { return ps.contains(id); });
}

namespace {

struct Arc {
  NodeId from;
  NodeId to;
  LinkId link;
  double cost;
};

double link_cost(const Link& l, Metric metric) {
  return metric == Metric::Hops ? 1.0 : l.length;
}

// Dijkstra over the undirected topology; returns the predecessor link per
// node. Ties resolve towards the lower link id for determinism.
std::optional<Path> shortest_path(const Topology& t, const NodeId& a,
                                  const NodeId& b, Metric metric) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::map<NodeId, double> dist;
  std::map<NodeId, LinkId> pred;
  for (const auto& n : t.nodes()) dist[n] = inf;
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[a] = 0.0;
  queue.emplace(0.0, a);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (LinkId id : t.incident(u)) {
      const Link& l = t.link(id);
      const NodeId& v = l.other(u);
      double nd = d + link_cost(l, metric);
      if (nd < dist[v]) {
        dist[v] = nd;
        pred[v] = id;
        queue.emplace(nd, v);
      }
    }
  }
  if (dist[b] == inf) return std::nullopt;
  Path p;
  for (NodeId v = b; v != a;) {
    LinkId id = pred.at(v);
    p.links.push_back(id);
    v = t.link(id).other(v);
  }
  std::reverse(p.links.begin(), p.links.end());
  return p;
}

}  // namespace

PathPair disjoint_pair(const Topology& t, const NodeId& a, const NodeId& b,
                       Metric metric) {
  if (a == b) throw InputError("demand", "end nodes must differ");
  if (!t.has_node(a) || !t.has_node(b))
    throw InputError("demand", "unknown end node");
  auto no_pair = [&] {
    return NoDisjointPair(0, "no link-disjoint path pair between '" + a +
                                 "' and '" + b + "'");
  };
  auto first = shortest_path(t, a, b, metric);
  if (!first) throw no_pair();

  // Residual digraph: arcs of the first path are reversed with negated cost.
  std::map<LinkId, NodeId> first_dir;  // link -> tail node in path direction
  {
    auto nodes = walk_nodes(t, *first, a);
    for (std::size_t i = 0; i < first->links.size(); ++i)
      first_dir[first->links[i]] = nodes[i];
  }
  std::vector<Arc> arcs;
  for (const auto& [id, l] : t.links()) {
    double c = link_cost(l, metric);
    auto it = first_dir.find(id);
    if (it == first_dir.end()) {
      arcs.push_back({l.a, l.b, id, c});
      arcs.push_back({l.b, l.a, id, c});
    } else {
      const NodeId& tail = it->second;
      arcs.push_back({l.other(tail), tail, id, -c});
    }
  }

  // Bellman-Ford from a.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::map<NodeId, double> dist;
  std::map<NodeId, const Arc*> pred;
  for (const auto& n : t.nodes()) dist[n] = inf;
  dist[a] = 0.0;
  for (std::size_t round = 0; round + 1 < t.nodes().size(); ++round) {
    bool changed = false;
    for (const Arc& arc : arcs) {
      if (dist[arc.from] == inf) continue;
      double nd = dist[arc.from] + arc.cost;
      if (nd < dist[arc.to] - 1e-12) {
        dist[arc.to] = nd;
        pred[arc.to] = &arc;
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (dist[b] == inf) throw no_pair();

  // Union of both paths with interlacing links cancelled.
  std::map<NodeId, std::vector<std::pair<LinkId, NodeId>>> out;
  std::set<LinkId> cancelled;
  std::vector<const Arc*> second;
  for (NodeId v = b; v != a;) {
    const Arc* arc = pred.at(v);
    second.push_back(arc);
    v = arc->from;
    if (second.size() > t.links().size() * 2)
      throw Error("disjoint_pair: residual path did not terminate");
  }
  for (const Arc* arc : second)
    if (first_dir.contains(arc->link)) cancelled.insert(arc->link);
  for (const auto& [id, tail] : first_dir)
    if (!cancelled.contains(id)) out[tail].push_back({id, t.link(id).other(tail)});
  for (const Arc* arc : second)
    if (!cancelled.contains(arc->link)) out[arc->from].push_back({arc->link, arc->to});
  for (auto& [n, v] : out) std::sort(v.begin(), v.end());

  std::vector<Path> paths;
  for (int k = 0; k < 2; ++k) {
    Path p;
    NodeId v = a;
    while (v != b) {
      auto& options = out[v];
      if (options.empty()) throw Error("disjoint_pair: broken flow decomposition");
      auto [id, next] = options.front();
      options.erase(options.begin());
      p.links.push_back(id);
      v = next;
      if (p.links.size() > t.links().size())
        throw Error("disjoint_pair: cyclic flow decomposition");
    }
    paths.push_back(std::move(p));
  }
  auto key = [&](const Path& p) {
    return std::tuple(path_cost(t, p, metric), p.links.size(), p.links);
  };
  if (key(paths[1]) < key(paths[0])) std::swap(paths[0], paths[1]);
  return PathPair{0, std::move(paths[0]), std::move(paths[1])};
}

void validate_pair(const Topology& t, const Demand& d, const PathPair& pair) {
  const std::string locus = "demand " + std::to_string(d.id);
  if (!is_simple_path(t, pair.primary, d.a, d.b))
    throw InputError(locus, "primary path is not a simple path from '" + d.a +
                                "' to '" + d.b + "'");
  if (!is_simple_path(t, pair.protection, d.a, d.b))
    throw InputError(locus, "protection path is not a simple path from '" + d.a +
                                "' to '" + d.b + "'");
  if (!link_disjoint(pair.primary, pair.protection))
    throw InputError(locus, "primary and protection paths share a link");
}

// ---------------------------------------------------------------------------
// Documents

Format format_for_path(std::string_view path) {
  return path.ends_with(".json") ? Format::Json : Format::Text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

struct Record {
  std::string locus;
  std::vector<std::string> fields;
};

struct RawDocument {
  std::vector<Record> nodes, links, demands, paths;
};

int parse_int(const Record& r, std::size_t i, const char* what) {
  if (i >= r.fields.size()) throw InputError(r.locus, std::string("missing ") + what);
  const std::string& s = r.fields[i];
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw InputError(r.locus, std::string("bad ") + what + " '" + s + "'");
  return v;
}

double parse_double(const Record& r, std::size_t i, const char* what) {
  if (i >= r.fields.size()) throw InputError(r.locus, std::string("missing ") + what);
  const std::string& s = r.fields[i];
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw InputError(r.locus, std::string("bad ") + what + " '" + s + "'");
  return v;
}

const std::string& field(const Record& r, std::size_t i, const char* what) {
  if (i >= r.fields.size()) throw InputError(r.locus, std::string("missing ") + what);
  return r.fields[i];
}

RawDocument parse_text(std::string_view text) {
  RawDocument doc;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string kind;
    if (!(words >> kind)) continue;
    Record r{"line " + std::to_string(lineno), {}};
    for (std::string w; words >> w;) r.fields.push_back(w);
    if (kind == "node") doc.nodes.push_back(std::move(r));
    else if (kind == "link") doc.links.push_back(std::move(r));
    else if (kind == "demand") doc.demands.push_back(std::move(r));
    else if (kind == "path") doc.paths.push_back(std::move(r));
    else throw InputError(r.locus, "unknown record '" + kind + "'");
  }
  return doc;
}

std::string json_scalar(const nlohmann::json& v, const std::string& locus) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  throw InputError(locus, "expected a scalar");
}

RawDocument parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("json", e.what());
  }
  if (!j.is_object()) throw InputError("json", "document must be an object");
  RawDocument doc;
  auto records = [&](const char* key, std::vector<const char*> names,
                     std::size_t required, std::vector<Record>& dst) {
    if (!j.contains(key)) return;
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw InputError(key, "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string locus = std::string(key) + "[" + std::to_string(i) + "]";
      Record r{locus, {}};
      const auto& item = arr[i];
      if (std::string(key) == "nodes" && item.is_string()) {
        r.fields.push_back(item.get<std::string>());
      } else {
        if (!item.is_object()) throw InputError(locus, "expected an object");
        for (std::size_t f = 0; f < names.size(); ++f) {
          if (!item.contains(names[f])) {
            if (f < required) throw InputError(locus + "." + names[f], "missing field");
            break;
          }
          const auto& v = item.at(names[f]);
          if (v.is_array()) {
            for (std::size_t k = 0; k < v.size(); ++k)
              r.fields.push_back(json_scalar(v[k], locus + "." + names[f]));
          } else {
            r.fields.push_back(json_scalar(v, locus + "." + names[f]));
          }
        }
      }
      dst.push_back(std::move(r));
    }
  };
  records("nodes", {"name"}, 1, doc.nodes);
  records("links", {"id", "a", "b", "length"}, 4, doc.links);
  records("demands", {"id", "a", "b", "units"}, 3, doc.demands);
  records("paths", {"demand", "role", "links"}, 3, doc.paths);
  return doc;
}

RawDocument parse(std::string_view text, Format format) {
  return format == Format::Json ? parse_json(text) : parse_text(text);
}

}  // namespace

Topology load_topology(std::string_view text, Format format) {
  RawDocument doc = parse(text, format);
  Topology t;
  for (const auto& r : doc.nodes) {
    if (r.fields.size() != 1) throw InputError(r.locus, "expected 'node <name>'");
    t.add_node(r.fields[0]);
  }
  for (const auto& r : doc.links) {
    if (r.fields.size() != 4)
      throw InputError(r.locus, "expected 'link <id> <nodeA> <nodeB> <length>'");
    Link l{parse_int(r, 0, "link id"), r.fields[1], r.fields[2],
           parse_double(r, 3, "length")};
    try {
      t.add_link(l);
    } catch (const InputError& e) {
      // Re-anchor the error at the document locus.
      std::string msg = e.what();
      throw InputError(r.locus, msg.substr(msg.find(": ") + 2));
    }
  }
  return t;
}

DemandSet load_demands(std::string_view text, const Topology& t, Format format) {
  RawDocument doc = parse(text, format);
  DemandSet set;
  std::set<DemandId> ids;
  for (const auto& r : doc.demands) {
    if (r.fields.size() < 3 || r.fields.size() > 4)
      throw InputError(r.locus, "expected 'demand <id> <nodeA> <nodeB> [units]'");
    Demand d{parse_int(r, 0, "demand id"), r.fields[1], r.fields[2], 1};
    if (r.fields.size() == 4) d.units = parse_int(r, 3, "units");
    if (!ids.insert(d.id).second)
      throw InputError(r.locus, "duplicate demand id " + std::to_string(d.id));
    if (!t.has_node(d.a)) throw InputError(r.locus, "unknown node '" + d.a + "'");
    if (!t.has_node(d.b)) throw InputError(r.locus, "unknown node '" + d.b + "'");
    if (d.a == d.b) throw InputError(r.locus, "demand end nodes must differ");
    if (d.units <= 0) throw InputError(r.locus, "units must be positive");
    set.demands.push_back(d);
  }
  std::sort(set.demands.begin(), set.demands.end(),
            [](const Demand& x, const Demand& y) { return x.id < y.id; });

  std::map<DemandId, std::pair<std::optional<Path>, std::optional<Path>>> routes;
  std::map<DemandId, std::string> route_locus;
  for (const auto& r : doc.paths) {
    DemandId id = parse_int(r, 0, "demand id");
    if (!ids.contains(id))
      throw InputError(r.locus, "path for unknown demand " + std::to_string(id));
    const std::string& role = field(r, 1, "role");
    Path p;
    for (std::size_t i = 2; i < r.fields.size(); ++i) {
      LinkId l = parse_int(r, i, "link id");
      if (!t.has_link(l)) throw InputError(r.locus, "unknown link " + std::to_string(l));
      p.links.push_back(l);
    }
    auto& slot = routes[id];
    if (role == "primary") slot.first = p;
    else if (role == "protection") slot.second = p;
    else throw InputError(r.locus, "role must be 'primary' or 'protection'");
    route_locus[id] = r.locus;
  }
  for (const auto& [id, slot] : routes) {
    if (!slot.first || !slot.second)
      throw InputError(route_locus[id], "demand " + std::to_string(id) +
                                            " needs both primary and protection paths");
    const Demand& d = *std::find_if(set.demands.begin(), set.demands.end(),
                                    [&](const Demand& x) { return x.id == id; });
    PathPair pair{id, *slot.first, *slot.second};
    try {
      validate_pair(t, d, pair);
    } catch (const InputError& e) {
      throw InputError(route_locus[id], e.what());
    }
    set.pinned.emplace(id, std::move(pair));
  }
  return set;
}

std::string serialize_topology(const Topology& t, Format format) {
  if (format == Format::Json) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : t.nodes()) j["nodes"].push_back(n);
    j["links"] = nlohmann::json::array();
    for (const auto& [id, l] : t.links())
      j["links"].push_back({{"id", id}, {"a", l.a}, {"b", l.b}, {"length", l.length}});
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  for (const auto& n : t.nodes()) out << "node " << n << "\n";
  for (const auto& [id, l] : t.links())
    out << "link " << id << " " << l.a << " " << l.b << " " << format_number(l.length)
        << "\n";
  return out.str();
}

std::string serialize_demands(const DemandSet& d, Format format) {
  if (format == Format::Json) {
    nlohmann::json j;
    j["demands"] = nlohmann::json::array();
    for (const auto& x : d.demands)
      j["demands"].push_back({{"id", x.id}, {"a", x.a}, {"b", x.b}, {"units", x.units}});
    j["paths"] = nlohmann::json::array();
    for (const auto& [id, p] : d.pinned) {
      j["paths"].push_back({{"demand", id}, {"role", "primary"}, {"links", p.primary.links}});
      j["paths"].push_back(
          {{"demand", id}, {"role", "protection"}, {"links", p.protection.links}});
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  for (const auto& x : d.demands)
    out << "demand " << x.id << " " << x.a << " " << x.b << " " << x.units << "\n";
  for (const auto& [id, p] : d.pinned) {
    out << "path " << id << " primary";
    for (LinkId l : p.primary.links) out << " " << l;
    out << "\npath " << id << " protection";
    for (LinkId l : p.protection.links) out << " " << l;
    out << "\n";
  }
  return out.str();
}

}  // namespace cppweave
