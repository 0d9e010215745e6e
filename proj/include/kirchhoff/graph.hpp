#pragma once

// Finite multigraphs viewed as one-dimensional cell complexes.
//
// A Graph is an immutable, cheaply copyable handle. Copies share the same
// underlying data, and `same_graph` tests that identity; objects derived
// from a graph (subcomplexes, circuits, bundles) remember which graph they
// belong to so mixing them up is reported instead of silently computed.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kirchhoff {

struct EdgeTriple {
  std::string id;
  std::string tail;
  std::string head;
};

struct Edge {
  std::string id;
  std::size_t tail;  // d0
  std::size_t head;  // d1

  bool is_loop() const noexcept { return tail == head; }
};

class Graph {
 public:
  Graph();

  /// Throws DuplicateId or UnknownEndpoint.
  static Graph build(const std::vector<std::string>& vertex_ids,
                     const std::vector<EdgeTriple>& edges);

  std::size_t num_vertices() const noexcept { return data_->vertices.size(); }
  std::size_t num_edges() const noexcept { return data_->edges.size(); }

  const std::vector<std::string>& vertex_ids() const noexcept { return data_->vertices; }
  const std::vector<Edge>& edges() const noexcept { return data_->edges; }
  const Edge& edge(std::size_t index) const { return data_->edges.at(index); }
  const std::string& vertex_id(std::size_t index) const { return data_->vertices.at(index); }
  std::vector<std::string> edge_ids() const;

  std::optional<std::size_t> find_vertex(const std::string& id) const;
  std::optional<std::size_t> find_edge(const std::string& id) const;
  /// Throws UnknownEdge.
  std::size_t edge_index(const std::string& id) const;

  bool same_graph(const Graph& other) const noexcept { return data_ == other.data_; }

  /// Structural equality: same ids in the same order with the same endpoints.
  friend bool operator==(const Graph& a, const Graph& b);

 private:
  struct Data {
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    std::unordered_map<std::string, std::size_t> vertex_index;
    std::unordered_map<std::string, std::size_t> edge_index;
  };
  std::shared_ptr<const Data> data_;
};

/// A set of cells closed under taking endpoints. Indices refer to the
/// parent graph and are kept sorted.
class Subcomplex {
 public:
  /// Throws if an index is out of range or an edge endpoint is missing.
  Subcomplex(Graph parent, std::vector<std::size_t> vertices, std::vector<std::size_t> edges);

  static Subcomplex whole(const Graph& g);
  /// All vertices together with the given edges.
  static Subcomplex spanning(const Graph& g, std::vector<std::size_t> edges);

  const Graph& parent() const noexcept { return parent_; }
  const std::vector<std::size_t>& vertices() const noexcept { return vertices_; }
  const std::vector<std::size_t>& edges() const noexcept { return edges_; }

  bool contains_vertex(std::size_t v) const;
  bool contains_edge(std::size_t e) const;

 private:
  Graph parent_;
  std::vector<std::size_t> vertices_;
  std::vector<std::size_t> edges_;
};

struct CircuitStep {
  std::size_t edge;
  int sign;  // +1 when traversed from tail to head

  friend bool operator==(const CircuitStep&, const CircuitStep&) = default;
};

/// A simple closed walk. Steps are listed in traversal order starting from
/// `start`.
struct OrientedCircuit {
  Graph graph;
  std::size_t start = 0;
  std::vector<CircuitStep> steps;

  OrientedCircuit reversed() const;
  /// Vertex visited before step i.
  std::size_t vertex_before(std::size_t i) const;
};

/// Throws unless `steps` form a simple closed walk in `g`.
OrientedCircuit make_circuit(const Graph& g, std::size_t start, std::vector<CircuitStep> steps);

/// Maximal connected pieces of `subc`, ordered by their least vertex index.
std::vector<Subcomplex> components(const Subcomplex& subc);

bool is_connected(const Subcomplex& subc);

/// |vertices| - |edges|.
long euler_characteristic(const Subcomplex& component);

/// The unique circuit of a connected subcomplex with Euler characteristic 0.
/// Canonical orientation: start at the least vertex on the circuit and leave
/// it along the least circuit edge incident to it. Throws NotUnicyclic.
OrientedCircuit circuit_of_unicyclic(const Subcomplex& component);

/// Records how `subdivide_edge` split one edge.
struct Subdivision {
  Graph source;
  Graph result;
  std::size_t original_edge;   // index in source
  std::size_t first_half;      // index in result, tail -> midpoint
  std::size_t second_half;     // index in result, midpoint -> head
  std::size_t midpoint;        // vertex index in result
  /// Source edge index -> result edge index for untouched edges.
  std::vector<std::size_t> edge_map;
};

/// Replaces edge `edge_id` by two edges through a new midpoint vertex.
/// The new ids are `<id>_0`, `<id>_1` and `<id>_mid`, suffixed with primes
/// until unique. Throws UnknownEdge.
Subdivision subdivide_edge(const Graph& g, const std::string& edge_id);

}  // namespace kirchhoff
