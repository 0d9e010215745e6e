#pragma once

// Executable versions of the twisted Kirchhoff identities. Each computation
// pairs the forest-sum route with an independent dense linear algebra route
// and reports the discrepancy instead of trusting either side.

#include <optional>
#include <string>
#include <vector>

#include "kirchhoff/bundle.hpp"
#include "kirchhoff/chain_complex.hpp"
#include "kirchhoff/forests.hpp"

namespace kirchhoff {

inline constexpr double kDefaultTheoremTolerance = 1e-9;

struct TheoremOptions {
  double tol = kDefaultTheoremTolerance;
  double eps_hol = kDefaultHolonomyEpsilon;
  std::optional<double> rank_tol;
};

// --- projection onto the twisted cycle space ---------------------------------

struct ProjectionReport {
  LinearOperator p_kirchhoff;  // (1 / Delta) sum_T w_T T-bar
  LinearOperator p_oracle;     // least squares in the modified product
  double delta = 0.0;
  std::size_t forest_count = 0;
  double scale = 1.0;          // max(1, max(m, n) * sigma_max(P_oracle))
  double max_entry_discrepancy = 0.0;
  double idempotence_defect = 0.0;    // max |P P - P|
  double self_adjoint_defect = 0.0;   // max |R P - P^dagger R| / max r
  double kernel_fix_defect = 0.0;     // max over kernel basis |P z - z|
  double boundary_defect = 0.0;       // max |d P| / sigma_max(d)

  /// All defects at most tol * scale.
  bool passed(double tol) const;
};

/// Throws AssumptionViolated; NoForests only on an internal inconsistency.
ProjectionReport kirchhoff_projection(const LineBundle& bundle, const ResistanceMap& r,
                                      const TheoremOptions& options = {});

/// Sends x to the closest cycle in the modified norm, built from an SVD
/// kernel basis and its Gram matrix.
LinearOperator oracle_projection(const LineBundle& bundle, const ResistanceMap& r,
                                 std::optional<double> rank_tol = std::nullopt);

/// (1 / Delta) sum_T w_T T-bar over precomputed forests.
Matrix forest_projection(const LineBundle& bundle, const std::vector<ForestRecord>& forests);

// --- network theorem ---------------------------------------------------------

struct NetworkSolution {
  ChainVector voltage;
  ChainVector current;          // P(R^{-1} V) via the forest projection
  ChainVector current_formula;  // per-edge forest sum
  ChainVector residual;         // V - R z
  double route_discrepancy = 0.0;     // max |current - current_formula|
  double orthogonality_defect = 0.0;  // max over kernel basis |<V - R z, z'>|
  std::size_t dim_h1 = 0;
};

/// Throws AssumptionViolated, BasisMismatch.
NetworkSolution solve_network(const LineBundle& bundle, const ResistanceMap& r,
                              const ChainVector& voltage, const TheoremOptions& options = {});

// --- matrix-tree theorem -----------------------------------------------------

struct ForestWeightRow {
  std::vector<std::string> edge_ids;
  double rho_hat = 0.0;
  double weight = 0.0;
};

struct MatrixTreeReport {
  bool h0_trivial = false;
  LogDeterminant log_det;
  double det_laplacian = 0.0;        // real part
  double det_imag_relative = 0.0;    // |Im det| / |det|
  double sum_weights = 0.0;
  /// |det - sum| / sum; with an empty sum, |det| over Hadamard's bound
  /// (product of the Laplacian's diagonal).
  double relative_error = 0.0;
  std::vector<ForestWeightRow> forests;
  std::vector<std::string> warnings;
};

/// Never throws on degenerate bundles: with H0 != 0 the forest sum is
/// reported empty next to the (vanishing) determinant.
MatrixTreeReport matrix_tree_report(const LineBundle& bundle, const ResistanceMap& r,
                                    const TheoremOptions& options = {});

struct TreeLaplacianIdentity {
  double det = 0.0;
  double rho_hat = 0.0;
  double relative_error = 0.0;
};

/// det(d_T d_T^dagger) against rho_hat_T, unit resistances on T.
TreeLaplacianIdentity tree_laplacian_identity(const LineBundle& bundle, const ForestRecord& forest);

// --- low temperature limit ---------------------------------------------------

/// 1 on tree edges, |edges| + 2 elsewhere.
std::vector<double> auto_low_temp_weights(const Graph& g, const ForestRecord& forest);

/// W_b > sum_{a in T} W_a - k min_{a in T} W_a for every non-tree b, with k
/// the number of edges. Throws InvalidW.
void validate_low_temp_weights(const Graph& g, const ForestRecord& forest,
                               const std::vector<double>& w);

struct LowTempPoint {
  double beta = 0.0;
  double log_ratio = 0.0;  // log det L^T - log det L
  double ratio = 1.0;
  double deviation = 0.0;  // |ratio - 1|, from the spectrum of (L^T)^{-1} dL
};

struct LowTempReport {
  std::vector<double> weights;
  std::vector<LowTempPoint> points;
  bool monotone = true;  // deviation non-increasing along the beta list
};

/// With R_beta = exp(beta W): ratio det(d_T exp(-beta W_T) d_T^dagger) /
/// det(d R_beta^{-1} d^dagger) for each beta. `weights` defaults to
/// auto_low_temp_weights. Throws InvalidW.
LowTempReport low_temp_demo(const LineBundle& bundle, const ForestRecord& forest,
                            std::optional<std::vector<double>> weights,
                            const std::vector<double>& betas);

struct PrefactorCheck {
  double det_tree_laplacian = 0.0;  // det(d_T e^{-W} d_T^dagger)
  double predicted = 0.0;           // w_T det(d_T d_T^dagger) / rho_hat_T, R = e^W
  double relative_error = 0.0;
};

PrefactorCheck prefactor_check(const LineBundle& bundle, const ForestRecord& forest,
                               const std::vector<double>& weights);

// --- gauge invariance --------------------------------------------------------

struct GaugeCheckReport {
  double det_before = 0.0;
  double det_after = 0.0;
  double relative_difference = 0.0;
  bool forests_equal = false;
  std::size_t forest_count = 0;
  HomologyDims dims_before;
  HomologyDims dims_after;

  bool passed(double tol) const;
};

GaugeCheckReport gauge_invariance_check(const LineBundle& bundle, const ResistanceMap& r,
                                        const Gauge& gauge, const TheoremOptions& options = {});

}  // namespace kirchhoff
