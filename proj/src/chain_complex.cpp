#include "kirchhoff/chain_complex.hpp"

#include <cmath>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

ChainVector ChainVector::zero(int degree, std::vector<std::string> basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  return ChainVector{degree, std::move(basis), Vector::Zero(n)};
}

ChainVector ChainVector::on_edges(const Graph& g, Vector coeffs) {
  if (coeffs.size() != static_cast<Eigen::Index>(g.num_edges()))
    throw Error(ErrorCode::BasisMismatch, "coefficient count differs from edge count");
  return ChainVector{1, g.edge_ids(), std::move(coeffs)};
}

Complex ChainVector::at(const std::string& cell) const {
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i] == cell) return coeffs(static_cast<Eigen::Index>(i));
  throw Error(ErrorCode::UnknownEdge, "cell '" + cell + "' is not in the basis");
}

ChainVector LinearOperator::apply(const ChainVector& x) const {
  if (x.degree != domain_degree || x.basis != domain)
    throw Error(ErrorCode::BasisMismatch, "operator domain does not match the chain");
  return ChainVector{codomain_degree, codomain, matrix * x.coeffs};
}

// ---------------------------------------------------------------------------

ResistanceMap::ResistanceMap(Graph g, std::vector<double> values)
    : graph_(std::move(g)), values_(std::move(values)) {
  if (values_.size() != graph_.num_edges())
    throw Error(ErrorCode::NonPositiveResistance, "need exactly one resistance per edge");
  for (std::size_t e = 0; e < values_.size(); ++e)
    if (!(values_[e] > 0.0) || !std::isfinite(values_[e]))
      throw Error(ErrorCode::NonPositiveResistance,
                  "resistance of '" + graph_.edge(e).id + "' must be positive and finite");
}

ResistanceMap ResistanceMap::uniform(const Graph& g, double r) {
  return ResistanceMap(g, std::vector<double>(g.num_edges(), r));
}

ResistanceMap ResistanceMap::from_map(const Graph& g, const std::map<std::string, double>& r) {
  std::vector<double> values(g.num_edges(), 0.0);
  for (const auto& [id, value] : r) values[g.edge_index(id)] = value;
  return ResistanceMap(g, std::move(values));
}

Eigen::VectorXd ResistanceMap::on(const std::vector<std::string>& basis) const {
  Eigen::VectorXd d(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    d(static_cast<Eigen::Index>(i)) = values_[graph_.edge_index(basis[i])];
  return d;
}

ResistanceMap split_resistance(const ResistanceMap& r, const Subdivision& sub, double fraction) {
  if (!r.graph().same_graph(sub.source))
    throw Error(ErrorCode::StaleCorrespondence, "subdivision was made from a different graph");
  std::vector<double> values(sub.result.num_edges());
  for (std::size_t e = 0; e < sub.source.num_edges(); ++e)
    if (e != sub.original_edge) values[sub.edge_map[e]] = r.at(e);
  values[sub.first_half] = fraction * r.at(sub.original_edge);
  values[sub.second_half] = (1.0 - fraction) * r.at(sub.original_edge);
  return ResistanceMap(sub.result, std::move(values));
}

// ---------------------------------------------------------------------------

Matrix boundary_columns(const LineBundle& bundle, const std::vector<std::size_t>& edges) {
  const Graph& g = bundle.graph();
  Matrix d = Matrix::Zero(static_cast<Eigen::Index>(g.num_vertices()),
                          static_cast<Eigen::Index>(edges.size()));
  for (std::size_t j = 0; j < edges.size(); ++j) {
    const Edge& e = g.edge(edges[j]);
    const auto col = static_cast<Eigen::Index>(j);
    d(static_cast<Eigen::Index>(e.tail), col) += bundle.phase(edges[j]);
    d(static_cast<Eigen::Index>(e.head), col) -= 1.0;
  }
  return d;
}

LinearOperator boundary_operator(const LineBundle& bundle,
                                 const std::optional<Subcomplex>& restrict_to) {
  const Graph& g = bundle.graph();
  const Subcomplex cells = restrict_to.value_or(Subcomplex::whole(g));
  if (!cells.parent().same_graph(g))
    throw Error(ErrorCode::ForeignCircuit, "subcomplex belongs to a different graph");

  const Matrix full = boundary_columns(bundle, cells.edges());
  LinearOperator op;
  op.domain_degree = 1;
  op.codomain_degree = 0;
  for (std::size_t e : cells.edges()) op.domain.push_back(g.edge(e).id);
  for (std::size_t v : cells.vertices()) op.codomain.push_back(g.vertex_id(v));
  op.matrix.resize(static_cast<Eigen::Index>(cells.vertices().size()), full.cols());
  for (std::size_t i = 0; i < cells.vertices().size(); ++i)
    op.matrix.row(static_cast<Eigen::Index>(i)) =
        full.row(static_cast<Eigen::Index>(cells.vertices()[i]));
  return op;
}

namespace {

void check_same_basis(const ChainVector& x, const ChainVector& y) {
  if (x.degree != y.degree || x.basis != y.basis || x.coeffs.size() != y.coeffs.size())
    throw Error(ErrorCode::BasisMismatch, "chains live on different bases");
}

}  // namespace

Complex standard_ip(const ChainVector& x, const ChainVector& y) {
  check_same_basis(x, y);
  // Eigen's dot conjugates its first operand.
  return y.coeffs.dot(x.coeffs);
}

Complex modified_ip(const ChainVector& x, const ChainVector& y, const ResistanceMap& r) {
  check_same_basis(x, y);
  if (x.degree != 1) throw Error(ErrorCode::BasisMismatch, "modified product needs 1-chains");
  const Eigen::VectorXd d = r.on(x.basis);
  return y.coeffs.dot(d.asDiagonal() * x.coeffs);
}

LinearOperator adjoint_r(const LinearOperator& boundary, const ResistanceMap& r) {
  const Eigen::VectorXd inv = r.on(boundary.domain).cwiseInverse();
  return LinearOperator{boundary.codomain_degree, boundary.domain_degree, boundary.codomain,
                        boundary.domain, inv.asDiagonal() * boundary.matrix.adjoint()};
}

LinearOperator laplacian(const LinearOperator& boundary, const ResistanceMap& r) {
  const LinearOperator adj = adjoint_r(boundary, r);
  return LinearOperator{boundary.codomain_degree, boundary.codomain_degree, boundary.codomain,
                        boundary.codomain, boundary.matrix * adj.matrix};
}

std::vector<ChainVector> kernel_basis(const LinearOperator& a, std::optional<double> tol) {
  const Matrix k = kernel(a.matrix, tol);
  std::vector<ChainVector> out;
  out.reserve(static_cast<std::size_t>(k.cols()));
  for (Eigen::Index j = 0; j < k.cols(); ++j) out.push_back({a.domain_degree, a.domain, k.col(j)});
  return out;
}

HomologyDims homology_dims(const LineBundle& bundle, const std::optional<Subcomplex>& restrict_to,
                           std::optional<double> tol) {
  const LinearOperator d = boundary_operator(bundle, restrict_to);
  const std::size_t rank = numerical_rank(d.matrix, tol);
  return HomologyDims{d.codomain.size() - rank, d.domain.size() - rank};
}

LogDeterminant determinant(const LinearOperator& a) { return log_determinant(a.matrix); }

}  // namespace kirchhoff
