#include "kirchhoff/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

namespace {

void require_same_graph(const LineBundle& bundle, const ResistanceMap& r) {
  if (!(bundle.graph() == r.graph()))
    throw Error(ErrorCode::BasisMismatch, "resistances belong to a different graph");
}

void require_h0_trivial(const LineBundle& bundle, const TheoremOptions& options) {
  if (!h0_trivial(bundle, options.rank_tol, options.eps_hol).trivial)
    throw Error(ErrorCode::AssumptionViolated, "H0 of the twisted complex is nonzero");
}

ForestOptions forest_options(const TheoremOptions& options) {
  ForestOptions f;
  f.eps_hol = options.eps_hol;
  f.cache_tbar = true;
  f.rank_tol = options.rank_tol;
  return f;
}

Matrix full_boundary(const LineBundle& bundle) {
  std::vector<std::size_t> all(bundle.graph().num_edges());
  for (std::size_t e = 0; e < all.size(); ++e) all[e] = e;
  return boundary_columns(bundle, all);
}

Eigen::VectorXd resistance_vector(const ResistanceMap& r) {
  return Eigen::Map<const Eigen::VectorXd>(r.values().data(),
                                           static_cast<Eigen::Index>(r.values().size()));
}

double relative(double a, double b) {
  const double denom = std::max(std::abs(a), std::abs(b));
  return denom > 0 ? std::abs(a - b) / denom : 0.0;
}

}  // namespace

// --- projection --------------------------------------------------------------

bool ProjectionReport::passed(double tol) const {
  const double bound = tol * scale;
  return max_entry_discrepancy <= bound && idempotence_defect <= bound &&
         self_adjoint_defect <= bound && kernel_fix_defect <= bound && boundary_defect <= bound;
}

Matrix forest_projection(const LineBundle& bundle, const std::vector<ForestRecord>& forests) {
  const auto m = static_cast<Eigen::Index>(bundle.graph().num_edges());
  Matrix sum = Matrix::Zero(m, m);
  double delta = 0.0;
  // Fixed summation order keeps the result bit-stable.
  for (const auto& f : forests) {
    sum += f.weight * tbar_matrix(bundle, f);
    delta += f.weight;
  }
  if (!(delta > 0.0)) throw Error(ErrorCode::NoForests, "no rho-spanning trees to sum over");
  return sum / delta;
}

LinearOperator oracle_projection(const LineBundle& bundle, const ResistanceMap& r,
                                 std::optional<double> rank_tol) {
  require_same_graph(bundle, r);
  const auto ids = bundle.graph().edge_ids();
  const auto m = static_cast<Eigen::Index>(ids.size());
  const Matrix k = kernel(full_boundary(bundle), rank_tol);
  LinearOperator p{1, 1, ids, ids, Matrix::Zero(m, m)};
  if (k.cols() == 0) return p;
  const Eigen::VectorXd d = resistance_vector(r);
  const Matrix dk = d.asDiagonal() * k;
  const Matrix gram = k.adjoint() * dk;
  p.matrix = k * gram.llt().solve(dk.adjoint());
  return p;
}

ProjectionReport kirchhoff_projection(const LineBundle& bundle, const ResistanceMap& r,
                                      const TheoremOptions& options) {
  require_same_graph(bundle, r);
  require_h0_trivial(bundle, options);
  const auto forests = enumerate_forests(bundle, r, forest_options(options)).forests;
  if (forests.empty())
    throw Error(ErrorCode::NoForests, "H0 vanishes but no rho-spanning tree was found");

  ProjectionReport rep;
  const auto ids = bundle.graph().edge_ids();
  rep.forest_count = forests.size();
  for (const auto& f : forests) rep.delta += f.weight;
  rep.p_kirchhoff = LinearOperator{1, 1, ids, ids, forest_projection(bundle, forests)};
  rep.p_oracle = oracle_projection(bundle, r, options.rank_tol);
  rep.scale = std::max(1.0, operator_scale(rep.p_oracle.matrix));

  const Matrix& p = rep.p_kirchhoff.matrix;
  rep.max_entry_discrepancy = max_abs(p - rep.p_oracle.matrix);
  rep.idempotence_defect = max_abs(p * p - p);

  const Eigen::VectorXd d = resistance_vector(r);
  const Matrix rp = d.asDiagonal() * p;
  rep.self_adjoint_defect = max_abs(rp - rp.adjoint()) / d.maxCoeff();

  const Matrix boundary = full_boundary(bundle);
  const Matrix k = kernel(boundary, options.rank_tol);
  for (Eigen::Index j = 0; j < k.cols(); ++j)
    rep.kernel_fix_defect = std::max(rep.kernel_fix_defect, (p * k.col(j) - k.col(j)).norm());
  const Eigen::VectorXd sv = singular_values(boundary);
  const double smax = sv.size() ? sv(0) : 1.0;
  rep.boundary_defect = max_abs(boundary * p) / (smax > 0 ? smax : 1.0);
  return rep;
}

// --- network -----------------------------------------------------------------

NetworkSolution solve_network(const LineBundle& bundle, const ResistanceMap& r,
                              const ChainVector& voltage, const TheoremOptions& options) {
  require_same_graph(bundle, r);
  const Graph& g = bundle.graph();
  const auto ids = g.edge_ids();
  if (voltage.degree != 1 || voltage.basis != ids)
    throw Error(ErrorCode::BasisMismatch, "voltage must be a 1-chain on the graph's edges");
  require_h0_trivial(bundle, options);

  const auto forests = enumerate_forests(bundle, r, forest_options(options)).forests;
  if (forests.empty())
    throw Error(ErrorCode::NoForests, "H0 vanishes but no rho-spanning tree was found");

  const Eigen::VectorXd d = resistance_vector(r);
  const Vector& v = voltage.coeffs;
  const auto m = static_cast<Eigen::Index>(ids.size());

  NetworkSolution sol;
  sol.voltage = voltage;
  const Matrix p = forest_projection(bundle, forests);
  sol.current = ChainVector{1, ids, p * d.cwiseInverse().asDiagonal() * v};

  // <z, b> = (1 / Delta) sum_T (w_T / r_b) <V, T-bar(b)>
  double delta = 0.0;
  for (const auto& f : forests) delta += f.weight;
  Vector formula = Vector::Zero(m);
  for (Eigen::Index b = 0; b < m; ++b) {
    Complex acc(0.0, 0.0);
    for (const auto& f : forests) {
      const Vector column = f.tbar->col(b);
      acc += (f.weight / d(b)) * column.dot(v);
    }
    formula(b) = acc / delta;
  }
  sol.current_formula = ChainVector{1, ids, formula};
  sol.route_discrepancy = (sol.current.coeffs - formula).cwiseAbs().maxCoeff();

  sol.residual = ChainVector{1, ids, v - d.asDiagonal() * sol.current.coeffs};
  const Matrix k = kernel(full_boundary(bundle), options.rank_tol);
  sol.dim_h1 = static_cast<std::size_t>(k.cols());
  for (Eigen::Index j = 0; j < k.cols(); ++j)
    sol.orthogonality_defect =
        std::max(sol.orthogonality_defect, std::abs(k.col(j).dot(sol.residual.coeffs)));
  return sol;
}

// --- matrix-tree -------------------------------------------------------------

MatrixTreeReport matrix_tree_report(const LineBundle& bundle, const ResistanceMap& r,
                                    const TheoremOptions& options) {
  require_same_graph(bundle, r);
  MatrixTreeReport rep;
  const LinearOperator lap = laplacian(boundary_operator(bundle), r);
  rep.log_det = determinant(lap);
  const Complex det = rep.log_det.value();
  rep.det_laplacian = det.real();
  rep.det_imag_relative = std::abs(det) > 0 ? std::abs(det.imag()) / std::abs(det) : 0.0;

  const H0Report h0 = h0_trivial(bundle, options.rank_tol, options.eps_hol);
  rep.h0_trivial = h0.trivial;
  rep.warnings = h0.warnings;
  if (h0.trivial) {
    ForestOptions fo;
    fo.eps_hol = options.eps_hol;
    fo.rank_tol = options.rank_tol;
    auto forests = enumerate_forests(bundle, r, fo);
    for (auto& w : forests.warnings) rep.warnings.push_back(std::move(w));
    for (const auto& f : forests.forests) {
      rep.sum_weights += f.weight;
      rep.forests.push_back({f.edge_ids, f.rho_hat, f.weight});
    }
  } else {
    rep.warnings.push_back("H0 is nonzero: the determinant vanishes and the forest sum is empty");
  }
  if (rep.sum_weights > 0) {
    rep.relative_error = std::abs(rep.det_laplacian - rep.sum_weights) / rep.sum_weights;
  } else {
    // Hadamard's bound for a PSD matrix is the product of its diagonal.
    double bound = 1.0;
    for (Eigen::Index i = 0; i < lap.matrix.rows(); ++i) bound *= lap.matrix(i, i).real();
    rep.relative_error = bound > 0 ? std::abs(rep.det_laplacian) / bound : 0.0;
  }
  return rep;
}

TreeLaplacianIdentity tree_laplacian_identity(const LineBundle& bundle, const ForestRecord& forest) {
  const Matrix d = boundary_columns(bundle, forest.edges);
  TreeLaplacianIdentity out;
  out.det = log_determinant(d * d.adjoint()).value().real();
  out.rho_hat = forest.rho_hat;
  out.relative_error = relative(out.det, out.rho_hat);
  return out;
}

// --- low temperature ---------------------------------------------------------

std::vector<double> auto_low_temp_weights(const Graph& g, const ForestRecord& forest) {
  std::vector<double> w(g.num_edges(), static_cast<double>(g.num_edges()) + 2.0);
  for (std::size_t e : forest.edges) w[e] = 1.0;
  return w;
}

void validate_low_temp_weights(const Graph& g, const ForestRecord& forest,
                               const std::vector<double>& w) {
  if (w.size() != g.num_edges())
    throw Error(ErrorCode::InvalidW, "need exactly one weight per edge");
  for (double x : w)
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidW, "weights must be finite");
  double tree_sum = 0.0;
  double tree_min = std::numeric_limits<double>::infinity();
  for (std::size_t e : forest.edges) {
    tree_sum += w[e];
    tree_min = std::min(tree_min, w[e]);
  }
  const double bound = tree_sum - static_cast<double>(g.num_edges()) * tree_min;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    if (!forest.contains(e) && !(w[e] > bound))
      throw Error(ErrorCode::InvalidW, "weight of non-tree edge '" + g.edge(e).id +
                                           "' does not exceed the tree bound");
}

LowTempReport low_temp_demo(const LineBundle& bundle, const ForestRecord& forest,
                            std::optional<std::vector<double>> weights,
                            const std::vector<double>& betas) {
  const Graph& g = bundle.graph();
  LowTempReport rep;
  rep.weights = weights ? std::move(*weights) : auto_low_temp_weights(g, forest);
  validate_low_temp_weights(g, forest, rep.weights);

  std::vector<std::size_t> outside;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    if (!forest.contains(e)) outside.push_back(e);
  const Matrix d_tree = boundary_columns(bundle, forest.edges);
  const Matrix d_rest = boundary_columns(bundle, outside);
  const double w_min = *std::min_element(rep.weights.begin(), rep.weights.end());

  // Conductances exp(-beta W); a common factor exp(-beta w_min) cancels in
  // the ratio and is dropped to keep the entries in range.
  auto conductances = [&](const std::vector<std::size_t>& edges, double beta) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(edges.size()));
    for (std::size_t i = 0; i < edges.size(); ++i)
      c(static_cast<Eigen::Index>(i)) = std::exp(-beta * (rep.weights[edges[i]] - w_min));
    return c;
  };

  double previous = std::numeric_limits<double>::infinity();
  for (double beta : betas) {
    const Matrix lap_tree = d_tree * conductances(forest.edges, beta).asDiagonal() * d_tree.adjoint();
    const Matrix lap_rest = d_rest * conductances(outside, beta).asDiagonal() * d_rest.adjoint();
    LowTempPoint pt;
    pt.beta = beta;
    pt.log_ratio = log_determinant(lap_tree).log_abs - log_determinant(lap_tree + lap_rest).log_abs;
    pt.ratio = std::exp(pt.log_ratio);

    // det L^T / det L = 1 / det(I + M) with M = (L^T)^{-1} dL, whose spectrum
    // is real and non-negative. Summing log1p over it keeps |ratio - 1|
    // accurate long after the log-determinant difference rounds to zero.
    if (outside.empty()) {
      pt.deviation = 0.0;
    } else {
      const Matrix mm = lap_tree.partialPivLu().solve(lap_rest);
      Eigen::ComplexEigenSolver<Matrix> es(mm, false);
      double log_det = 0.0;
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        log_det += std::log1p(std::max(0.0, es.eigenvalues()(i).real()));
      pt.deviation = -std::expm1(-log_det);
    }
    if (pt.deviation > previous) rep.monotone = false;
    previous = pt.deviation;
    rep.points.push_back(pt);
  }
  return rep;
}

PrefactorCheck prefactor_check(const LineBundle& bundle, const ForestRecord& forest,
                               const std::vector<double>& weights) {
  const Graph& g = bundle.graph();
  if (weights.size() != g.num_edges())
    throw Error(ErrorCode::InvalidW, "need exactly one weight per edge");
  std::vector<double> r(g.num_edges());
  for (std::size_t e = 0; e < r.size(); ++e) r[e] = std::exp(weights[e]);
  const auto rec = make_forest(bundle, ResistanceMap(g, r), forest.edges);
  if (!rec) throw Error(ErrorCode::NotUnicyclic, "edge set is not a rho-spanning tree");

  const Matrix d = boundary_columns(bundle, forest.edges);
  Eigen::VectorXd c(static_cast<Eigen::Index>(forest.edges.size()));
  for (std::size_t i = 0; i < forest.edges.size(); ++i)
    c(static_cast<Eigen::Index>(i)) = std::exp(-weights[forest.edges[i]]);

  PrefactorCheck out;
  out.det_tree_laplacian = log_determinant(d * c.asDiagonal() * d.adjoint()).value().real();
  out.predicted =
      rec->weight * log_determinant(d * d.adjoint()).value().real() / rec->rho_hat;
  out.relative_error = relative(out.det_tree_laplacian, out.predicted);
  return out;
}

// --- gauge -------------------------------------------------------------------

bool GaugeCheckReport::passed(double tol) const {
  return relative_difference <= tol && forests_equal && dims_before == dims_after;
}

GaugeCheckReport gauge_invariance_check(const LineBundle& bundle, const ResistanceMap& r,
                                        const Gauge& gauge, const TheoremOptions& options) {
  require_same_graph(bundle, r);
  const LineBundle moved = gauge_transform(bundle, gauge);
  auto det_of = [&](const LineBundle& b) {
    return determinant(laplacian(boundary_operator(b), r)).value().real();
  };
  auto census = [&](const LineBundle& b) {
    std::vector<std::vector<std::size_t>> sets;
    if (!h0_trivial(b, options.rank_tol, options.eps_hol).trivial) return sets;
    ForestOptions fo;
    fo.eps_hol = options.eps_hol;
    fo.rank_tol = options.rank_tol;
    for (const auto& f : enumerate_forests(b, r, fo).forests) sets.push_back(f.edges);
    return sets;
  };

  GaugeCheckReport rep;
  rep.det_before = det_of(bundle);
  rep.det_after = det_of(moved);
  rep.relative_difference = relative(rep.det_before, rep.det_after);
  const auto before = census(bundle);
  rep.forests_equal = before == census(moved);
  rep.forest_count = before.size();
  rep.dims_before = homology_dims(bundle, std::nullopt, options.rank_tol);
  rep.dims_after = homology_dims(moved, std::nullopt, options.rank_tol);
  return rep;
}

}  // namespace kirchhoff
