#pragma once

// Flat U(1) line bundles on a graph: one unit complex phase per edge.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kirchhoff/graph.hpp"
#include "kirchhoff/linalg.hpp"

namespace kirchhoff {

/// Holonomies closer to 1 than this are treated as trivial.
inline constexpr double kDefaultHolonomyEpsilon = 1e-9;

/// Reduces an angle to [0, 2 pi).
double reduce_angle(double radians);

class LineBundle {
 public:
  /// `angles` is indexed like g.edges().
  LineBundle(Graph g, std::vector<double> angles);

  const Graph& graph() const noexcept { return graph_; }
  const std::vector<double>& angles() const noexcept { return angles_; }
  double angle(std::size_t edge) const { return angles_.at(edge); }
  Complex phase(std::size_t edge) const { return phases_.at(edge); }
  const std::vector<Complex>& phases() const noexcept { return phases_; }

 private:
  Graph graph_;
  std::vector<double> angles_;
  std::vector<Complex> phases_;
};

/// rho_b = exp(i theta_b). Throws MissingPhase or UnknownEdge.
LineBundle attach_phases(const Graph& g, const std::map<std::string, double>& angles);

/// A U(1) value per vertex.
class Gauge {
 public:
  /// `values` is indexed like g.vertex_ids(); every entry must have modulus 1.
  Gauge(Graph g, std::vector<Complex> values);

  static Gauge identity(const Graph& g);
  /// Throws MissingGaugeValue.
  static Gauge from_angles(const Graph& g, const std::map<std::string, double>& angles);

  const Graph& graph() const noexcept { return graph_; }
  Complex at(std::size_t vertex) const { return values_.at(vertex); }
  const std::vector<Complex>& values() const noexcept { return values_; }

 private:
  Graph graph_;
  std::vector<Complex> values_;
};

/// Product of rho_b^{s_b} along the circuit. Throws ForeignCircuit.
Complex holonomy(const LineBundle& bundle, const OrientedCircuit& circuit);

/// Sum of s_b * theta_b along the circuit (not reduced).
double holonomy_angle(const LineBundle& bundle, const OrientedCircuit& circuit);

/// |rho_C - 1|, evaluated from the holonomy angle.
double holonomy_defect(const LineBundle& bundle, const OrientedCircuit& circuit);

/// Product over components of |rho_C - 1|^2. Throws NotEulerZero.
double rho_hat(const LineBundle& bundle, const Subcomplex& a);

/// rho^g(b) = g(d0 b) conj(g(d1 b)) rho_b. Throws MissingGaugeValue when the
/// gauge lives on another graph.
LineBundle gauge_transform(const LineBundle& bundle, const Gauge& gauge);

struct H0Report {
  bool trivial = false;            // rank(boundary) == |vertices|
  std::size_t rank = 0;
  double smallest_singular_value = 0.0;
  double rank_tolerance = 0.0;
  /// Holonomies of the fundamental cycles of a breadth-first spanning tree,
  /// one per non-tree edge, read off after gauging the tree edges to 1.
  std::vector<std::string> cycle_edges;
  std::vector<Complex> fundamental_holonomies;
  bool holonomy_criterion = false;  // some fundamental holonomy is nontrivial
  bool criteria_agree = false;
  std::vector<std::string> warnings;
};

/// Throws Disconnected. `rank_tol` overrides the singular value cutoff and
/// `eps_hol` the holonomy threshold of the cross-check.
H0Report h0_trivial(const LineBundle& bundle, std::optional<double> rank_tol = std::nullopt,
                    double eps_hol = kDefaultHolonomyEpsilon);

/// Phases on a subdivided graph: theta'_{b0} = split, theta'_{b1} = theta_b -
/// split (mod 2 pi). Throws StaleCorrespondence.
LineBundle split_phase(const LineBundle& bundle, const Subdivision& sub, double split);

}  // namespace kirchhoff
