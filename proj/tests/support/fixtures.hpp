#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "kirchhoff/bundle.hpp"
#include "kirchhoff/chain_complex.hpp"
#include "kirchhoff/graph.hpp"

namespace fixtures {

using namespace kirchhoff;

inline constexpr double pi = std::numbers::pi;

struct Network {
  Graph graph;
  LineBundle bundle;
  ResistanceMap r;
};

inline Network make_network(std::vector<std::string> vertices, std::vector<EdgeTriple> edges,
                            std::vector<double> angles, std::vector<double> resistances) {
  Graph g = Graph::build(vertices, edges);
  LineBundle bundle(g, std::move(angles));
  ResistanceMap r(g, std::move(resistances));
  return {g, bundle, r};
}

// One vertex v with loop b.
inline Network loop(double theta, double r = 1.0) {
  return make_network({"v"}, {{"b", "v", "v"}}, {theta}, {r});
}

// Two loops b1, b2 at one vertex v.
inline Network two_loops(double theta1 = pi / 2, double theta2 = pi, double r1 = 1.0,
                         double r2 = 2.0) {
  return make_network({"v"}, {{"b1", "v", "v"}, {"b2", "v", "v"}}, {theta1, theta2}, {r1, r2});
}

// Three parallel edges e1, e2, e3 from u to v.
inline Network theta(std::vector<double> angles = {0.0, 2 * pi / 3, 4 * pi / 3},
                     std::vector<double> r = {1.0, 1.0, 1.0}) {
  return make_network({"u", "v"}, {{"e1", "u", "v"}, {"e2", "u", "v"}, {"e3", "u", "v"}},
                      std::move(angles), std::move(r));
}

inline ChainVector unit_edge(const Graph& g, std::size_t e, Complex c = 1.0) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(g.num_edges()));
  v(static_cast<Eigen::Index>(e)) = c;
  return ChainVector::on_edges(g, v);
}

}  // namespace fixtures
