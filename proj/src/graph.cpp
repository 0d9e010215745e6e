#include "kirchhoff/graph.hpp"

#include <algorithm>
#include <numeric>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::NotUnicyclic: return "NotUnicyclic";
    case ErrorCode::MissingPhase: return "MissingPhase";
    case ErrorCode::ForeignCircuit: return "ForeignCircuit";
    case ErrorCode::NotEulerZero: return "NotEulerZero";
    case ErrorCode::MissingGaugeValue: return "MissingGaugeValue";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::StaleCorrespondence: return "StaleCorrespondence";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NonPositiveResistance: return "NonPositiveResistance";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::SingularTreeSystem: return "SingularTreeSystem";
    case ErrorCode::NoForests: return "NoForests";
    case ErrorCode::InvalidW: return "InvalidW";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SemanticError: return "SemanticError";
  }
  return "Unknown";
}

Graph::Graph() : data_(std::make_shared<const Data>()) {}

Graph Graph::build(const std::vector<std::string>& vertex_ids,
                   const std::vector<EdgeTriple>& edges) {
  Data data;
  data.vertices.reserve(vertex_ids.size());
  for (const auto& id : vertex_ids) {
    if (!data.vertex_index.emplace(id, data.vertices.size()).second)
      throw Error(ErrorCode::DuplicateId, "duplicate vertex id '" + id + "'");
    data.vertices.push_back(id);
  }
  data.edges.reserve(edges.size());
  for (const auto& e : edges) {
    if (data.vertex_index.count(e.id) != 0 || data.edge_index.count(e.id) != 0)
      throw Error(ErrorCode::DuplicateId, "duplicate id '" + e.id + "'");
    auto tail = data.vertex_index.find(e.tail);
    if (tail == data.vertex_index.end())
      throw Error(ErrorCode::UnknownEndpoint,
                  "edge '" + e.id + "' has undeclared tail '" + e.tail + "'");
    auto head = data.vertex_index.find(e.head);
    if (head == data.vertex_index.end())
      throw Error(ErrorCode::UnknownEndpoint,
                  "edge '" + e.id + "' has undeclared head '" + e.head + "'");
    data.edge_index.emplace(e.id, data.edges.size());
    data.edges.push_back(Edge{e.id, tail->second, head->second});
  }
  Graph g;
  g.data_ = std::make_shared<const Data>(std::move(data));
  return g;
}

std::vector<std::string> Graph::edge_ids() const {
  std::vector<std::string> ids;
  ids.reserve(num_edges());
  for (const auto& e : data_->edges) ids.push_back(e.id);
  return ids;
}

std::optional<std::size_t> Graph::find_vertex(const std::string& id) const {
  auto it = data_->vertex_index.find(id);
  if (it == data_->vertex_index.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Graph::find_edge(const std::string& id) const {
  auto it = data_->edge_index.find(id);
  if (it == data_->edge_index.end()) return std::nullopt;
  return it->second;
}

std::size_t Graph::edge_index(const std::string& id) const {
  auto found = find_edge(id);
  if (!found) throw Error(ErrorCode::UnknownEdge, "unknown edge '" + id + "'");
  return *found;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.same_graph(b)) return true;
  if (a.vertex_ids() != b.vertex_ids() || a.num_edges() != b.num_edges()) return false;
  for (std::size_t i = 0; i < a.num_edges(); ++i) {
    const auto& x = a.edge(i);
    const auto& y = b.edge(i);
    if (x.id != y.id || x.tail != y.tail || x.head != y.head) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Subcomplex::Subcomplex(Graph parent, std::vector<std::size_t> vertices,
                       std::vector<std::size_t> edges)
    : parent_(std::move(parent)), vertices_(std::move(vertices)), edges_(std::move(edges)) {
  std::sort(vertices_.begin(), vertices_.end());
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end() ||
      std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw Error(ErrorCode::DuplicateId, "subcomplex lists a cell twice");
  if (!vertices_.empty() && vertices_.back() >= parent_.num_vertices())
    throw Error(ErrorCode::UnknownEndpoint, "subcomplex vertex out of range");
  for (std::size_t e : edges_) {
    if (e >= parent_.num_edges())
      throw Error(ErrorCode::UnknownEdge, "subcomplex edge out of range");
    const Edge& edge = parent_.edge(e);
    if (!contains_vertex(edge.tail) || !contains_vertex(edge.head))
      throw Error(ErrorCode::UnknownEndpoint,
                  "subcomplex is not closed: endpoint of '" + edge.id + "' missing");
  }
}

Subcomplex Subcomplex::whole(const Graph& g) {
  std::vector<std::size_t> v(g.num_vertices());
  std::vector<std::size_t> e(g.num_edges());
  std::iota(v.begin(), v.end(), std::size_t{0});
  std::iota(e.begin(), e.end(), std::size_t{0});
  return Subcomplex(g, std::move(v), std::move(e));
}

Subcomplex Subcomplex::spanning(const Graph& g, std::vector<std::size_t> edges) {
  std::vector<std::size_t> v(g.num_vertices());
  std::iota(v.begin(), v.end(), std::size_t{0});
  return Subcomplex(g, std::move(v), std::move(edges));
}

bool Subcomplex::contains_vertex(std::size_t v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Subcomplex::contains_edge(std::size_t e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

// ---------------------------------------------------------------------------

namespace {

std::size_t step_source(const Edge& e, int sign) { return sign > 0 ? e.tail : e.head; }
std::size_t step_target(const Edge& e, int sign) { return sign > 0 ? e.head : e.tail; }

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

OrientedCircuit OrientedCircuit::reversed() const {
  OrientedCircuit r{graph, start, {}};
  r.steps.reserve(steps.size());
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) r.steps.push_back({it->edge, -it->sign});
  return r;
}

std::size_t OrientedCircuit::vertex_before(std::size_t i) const {
  const auto& s = steps.at(i);
  return step_source(graph.edge(s.edge), s.sign);
}

OrientedCircuit make_circuit(const Graph& g, std::size_t start, std::vector<CircuitStep> steps) {
  if (steps.empty()) throw Error(ErrorCode::NotUnicyclic, "circuit has no edges");
  std::vector<bool> seen_vertex(g.num_vertices(), false);
  std::vector<bool> seen_edge(g.num_edges(), false);
  std::size_t at = start;
  for (const auto& s : steps) {
    if (s.edge >= g.num_edges() || (s.sign != 1 && s.sign != -1))
      throw Error(ErrorCode::NotUnicyclic, "invalid circuit step");
    const Edge& e = g.edge(s.edge);
    if (step_source(e, s.sign) != at)
      throw Error(ErrorCode::NotUnicyclic, "circuit steps are not consecutive at '" + e.id + "'");
    if (seen_vertex[at] || seen_edge[s.edge])
      throw Error(ErrorCode::NotUnicyclic, "circuit is not simple");
    seen_vertex[at] = true;
    seen_edge[s.edge] = true;
    at = step_target(e, s.sign);
  }
  if (at != start) throw Error(ErrorCode::NotUnicyclic, "circuit is not closed");
  return OrientedCircuit{g, start, std::move(steps)};
}

std::vector<Subcomplex> components(const Subcomplex& subc) {
  const Graph& g = subc.parent();
  DisjointSets sets(g.num_vertices());
  for (std::size_t e : subc.edges()) sets.unite(g.edge(e).tail, g.edge(e).head);

  // Vertices are sorted, so roots appear in order of their least vertex.
  std::vector<std::size_t> root_order;
  std::vector<std::vector<std::size_t>> verts, edges;
  std::vector<std::size_t> slot(g.num_vertices(), SIZE_MAX);
  for (std::size_t v : subc.vertices()) {
    std::size_t r = sets.find(v);
    if (slot[r] == SIZE_MAX) {
      slot[r] = verts.size();
      verts.emplace_back();
      edges.emplace_back();
    }
    verts[slot[r]].push_back(v);
  }
  for (std::size_t e : subc.edges()) edges[slot[sets.find(g.edge(e).tail)]].push_back(e);

  std::vector<Subcomplex> out;
  out.reserve(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i)
    out.emplace_back(g, std::move(verts[i]), std::move(edges[i]));
  return out;
}

bool is_connected(const Subcomplex& subc) { return components(subc).size() <= 1; }

long euler_characteristic(const Subcomplex& component) {
  return static_cast<long>(component.vertices().size()) -
         static_cast<long>(component.edges().size());
}

OrientedCircuit circuit_of_unicyclic(const Subcomplex& component) {
  const Graph& g = component.parent();
  if (component.vertices().empty() || euler_characteristic(component) != 0 ||
      !is_connected(component))
    throw Error(ErrorCode::NotUnicyclic,
                "component must be connected with as many edges as vertices");

  // Peel leaves until only the circuit remains.
  std::vector<int> degree(g.num_vertices(), 0);
  std::vector<bool> alive(g.num_edges(), false);
  for (std::size_t e : component.edges()) {
    alive[e] = true;
    ++degree[g.edge(e).tail];
    ++degree[g.edge(e).head];
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t e : component.edges()) {
      if (!alive[e]) continue;
      const Edge& edge = g.edge(e);
      if (!edge.is_loop() && (degree[edge.tail] == 1 || degree[edge.head] == 1)) {
        alive[e] = false;
        --degree[edge.tail];
        --degree[edge.head];
        changed = true;
      }
    }
  }

  std::size_t start = SIZE_MAX;
  for (std::size_t e : component.edges())
    if (alive[e]) start = std::min({start, g.edge(e).tail, g.edge(e).head});

  std::vector<CircuitStep> steps;
  std::vector<bool> used(g.num_edges(), false);
  std::size_t at = start;
  do {
    std::size_t next = SIZE_MAX;
    for (std::size_t e : component.edges()) {
      if (alive[e] && !used[e] && (g.edge(e).tail == at || g.edge(e).head == at)) {
        next = e;
        break;
      }
    }
    if (next == SIZE_MAX) throw Error(ErrorCode::NotUnicyclic, "circuit walk got stuck");
    const Edge& edge = g.edge(next);
    int sign = edge.tail == at ? 1 : -1;
    used[next] = true;
    steps.push_back({next, sign});
    at = step_target(edge, sign);
  } while (at != start);
  return make_circuit(g, start, std::move(steps));
}

Subdivision subdivide_edge(const Graph& g, const std::string& edge_id) {
  const std::size_t b = g.edge_index(edge_id);
  auto fresh = [&](std::string id) {
    while (g.find_vertex(id) || g.find_edge(id)) id += '\'';
    return id;
  };
  const std::string mid = fresh(edge_id + "_mid");
  const std::string first = fresh(edge_id + "_0");
  const std::string second = fresh(edge_id + "_1");

  std::vector<std::string> vertices = g.vertex_ids();
  vertices.push_back(mid);
  std::vector<EdgeTriple> edges;
  std::vector<std::size_t> edge_map(g.num_edges(), SIZE_MAX);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const Edge& e = g.edge(i);
    if (i == b) {
      edges.push_back({first, g.vertex_id(e.tail), mid});
      edges.push_back({second, mid, g.vertex_id(e.head)});
    } else {
      edge_map[i] = edges.size();
      edges.push_back({e.id, g.vertex_id(e.tail), g.vertex_id(e.head)});
    }
  }
  Graph result = Graph::build(vertices, edges);
  return Subdivision{g, result, b, b, b + 1, vertices.size() - 1, std::move(edge_map)};
}

}  // namespace kirchhoff
