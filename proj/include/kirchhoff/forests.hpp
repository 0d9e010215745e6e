#pragma once

// rho-spanning trees: spanning subcomplexes whose components each carry exactly
// one circuit, with nontrivial holonomy around it. Also called cycle-rooted
// spanning forests with nontrivial holonomy.

#include <optional>
#include <string>
#include <vector>

#include "kirchhoff/bundle.hpp"
#include "kirchhoff/chain_complex.hpp"
#include "kirchhoff/graph.hpp"

namespace kirchhoff {

struct ForestRecord {
  std::vector<std::size_t> edges;  // sorted edge indices
  std::vector<std::string> edge_ids;
  std::vector<Subcomplex> components;
  std::vector<OrientedCircuit> circuits;  // one per component, canonical orientation
  std::vector<Complex> holonomies;
  double rho_hat = 0.0;
  double weight = 0.0;      // rho_hat / prod r_b over tree edges
  double log_weight = 0.0;
  /// T-bar as an |edges| x |edges| matrix, when computed.
  std::optional<Matrix> tbar;

  bool contains(std::size_t edge) const;
};

struct ForestOptions {
  double eps_hol = kDefaultHolonomyEpsilon;
  bool cache_tbar = false;
  std::optional<double> rank_tol;
};

struct ForestEnumeration {
  std::vector<ForestRecord> forests;
  std::vector<std::string> warnings;
};

/// Looks up edge ids. Throws UnknownEdge.
std::vector<std::size_t> edge_indices(const Graph& g, const std::vector<std::string>& ids);

/// |edges| == |vertices| and the square restricted boundary matrix is
/// numerically invertible. Throws AssumptionViolated when H0 of the whole
/// graph is nonzero.
bool is_tree_homological(const LineBundle& bundle, const std::vector<std::size_t>& edges,
                         std::optional<double> tol = std::nullopt);

/// Every component of the spanning subcomplex has Euler characteristic 0 and
/// its circuit satisfies |rho_C - 1| > eps_hol.
bool is_tree_combinatorial(const LineBundle& bundle, const std::vector<std::size_t>& edges,
                           double eps_hol = kDefaultHolonomyEpsilon);

/// The record for `edges`, or nothing if they do not form a rho-spanning tree.
std::optional<ForestRecord> make_forest(const LineBundle& bundle, const ResistanceMap& r,
                                        std::vector<std::size_t> edges,
                                        const ForestOptions& options = {});

/// All rho-spanning trees, in lexicographic order of their edge index lists.
/// Throws AssumptionViolated when H0 is nonzero.
ForestEnumeration enumerate_forests(const LineBundle& bundle, const ResistanceMap& r,
                                    const ForestOptions& options = {});

/// T-bar as a matrix on the edge basis: column b is the unique cycle in T + b
/// with coefficient 1 at b, or zero when b is in T. Uses `forest.tbar` when
/// present. Throws SingularTreeSystem.
Matrix tbar_matrix(const LineBundle& bundle, const ForestRecord& forest);

/// Fills `forest.tbar`.
void cache_tbar(const LineBundle& bundle, ForestRecord& forest);

ChainVector tbar_chain(const LineBundle& bundle, const ForestRecord& forest, std::size_t edge);
LinearOperator tbar_operator(const LineBundle& bundle, const ForestRecord& forest);

/// <T-bar(b_i), b_j>.
Complex tbar_coefficient(const LineBundle& bundle, const ForestRecord& forest, std::size_t b_i,
                         std::size_t b_j);

/// (T \ b_j) + b_i when |<T-bar(b_i), b_j>| > eps, nothing otherwise. Also
/// nothing when b_i is in T or b_j is not.
std::optional<ForestRecord> exchange(const LineBundle& bundle, const ResistanceMap& r,
                                     const ForestRecord& forest, std::size_t b_i,
                                     std::size_t b_j, double eps = kDefaultHolonomyEpsilon,
                                     const ForestOptions& options = {});

}  // namespace kirchhoff
