#pragma once

// The twisted cellular chain complex C1 -> C0 of a graph with coefficients in
// a line bundle, its inner products and Laplacian.
//
// Inner products are linear in the first argument and conjugate-linear in
// the second: <x, y> = sum_b x_b conj(y_b).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kirchhoff/bundle.hpp"
#include "kirchhoff/graph.hpp"
#include "kirchhoff/linalg.hpp"

namespace kirchhoff {

struct ChainVector {
  int degree = 1;
  std::vector<std::string> basis;
  Vector coeffs;

  static ChainVector zero(int degree, std::vector<std::string> basis);
  /// Degree-1 chain on all edges of g.
  static ChainVector on_edges(const Graph& g, Vector coeffs);
  /// Throws UnknownEdge when `cell` is not in the basis.
  Complex at(const std::string& cell) const;
  double norm() const { return coeffs.norm(); }
};

struct LinearOperator {
  int domain_degree = 1;
  int codomain_degree = 0;
  std::vector<std::string> domain;
  std::vector<std::string> codomain;
  Matrix matrix;

  /// Throws BasisMismatch.
  ChainVector apply(const ChainVector& x) const;
};

class ResistanceMap {
 public:
  /// `values` is indexed like g.edges(); every entry must be positive.
  ResistanceMap(Graph g, std::vector<double> values);

  static ResistanceMap uniform(const Graph& g, double r = 1.0);
  /// Every edge must be listed. Throws UnknownEdge for ids outside g and
  /// NonPositiveResistance for missing or non-positive values.
  static ResistanceMap from_map(const Graph& g, const std::map<std::string, double>& r);

  const Graph& graph() const noexcept { return graph_; }
  double at(std::size_t edge) const { return values_.at(edge); }
  double at(const std::string& edge_id) const { return values_.at(graph_.edge_index(edge_id)); }
  const std::vector<double>& values() const noexcept { return values_; }
  /// Diagonal entries aligned with an edge basis.
  Eigen::VectorXd on(const std::vector<std::string>& basis) const;

 private:
  Graph graph_;
  std::vector<double> values_;
};

/// Resistances on a subdivided graph: the two halves get `fraction` and
/// `1 - fraction` of the original value.
ResistanceMap split_resistance(const ResistanceMap& r, const Subdivision& sub,
                               double fraction = 0.5);

/// Column b holds rho_b at row d0(b) and -1 at row d1(b) (a single entry
/// rho_b - 1 for a loop). With `restrict_to`, rows and columns are the cells
/// of the subcomplex.
LinearOperator boundary_operator(const LineBundle& bundle,
                                 const std::optional<Subcomplex>& restrict_to = std::nullopt);

/// Raw boundary matrix with all vertices as rows and the listed edges as
/// columns, in the given order.
Matrix boundary_columns(const LineBundle& bundle, const std::vector<std::size_t>& edges);

Complex standard_ip(const ChainVector& x, const ChainVector& y);
Complex modified_ip(const ChainVector& x, const ChainVector& y, const ResistanceMap& r);

/// R^{-1} d^dagger: the adjoint for the standard product on C0 and the
/// modified product on C1.
LinearOperator adjoint_r(const LinearOperator& boundary, const ResistanceMap& r);

/// d d*_R on C0.
LinearOperator laplacian(const LinearOperator& boundary, const ResistanceMap& r);

/// Orthonormal basis of the numerical kernel, as chains on the domain basis.
std::vector<ChainVector> kernel_basis(const LinearOperator& a,
                                      std::optional<double> tol = std::nullopt);

struct HomologyDims {
  std::size_t h0 = 0;
  std::size_t h1 = 0;
  friend bool operator==(const HomologyDims&, const HomologyDims&) = default;
};

HomologyDims homology_dims(const LineBundle& bundle,
                           const std::optional<Subcomplex>& restrict_to = std::nullopt,
                           std::optional<double> tol = std::nullopt);

/// Throws NonSquare.
LogDeterminant determinant(const LinearOperator& a);

}  // namespace kirchhoff
