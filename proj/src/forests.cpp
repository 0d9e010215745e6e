#include "kirchhoff/forests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

bool ForestRecord::contains(std::size_t edge) const {
  return std::binary_search(edges.begin(), edges.end(), edge);
}

std::vector<std::size_t> edge_indices(const Graph& g, const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(g.edge_index(id));
  return out;
}

namespace {

void require_h0_trivial(const LineBundle& bundle, std::optional<double> tol) {
  const H0Report h0 = h0_trivial(bundle, tol);
  if (!h0.trivial)
    throw Error(ErrorCode::AssumptionViolated,
                "H0 of the twisted complex is nonzero; rho-spanning trees are undefined");
}

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

// Components' circuits of a spanning edge set, or nothing when some component
// is not unicyclic.
std::optional<std::pair<std::vector<Subcomplex>, std::vector<OrientedCircuit>>> unicyclic_parts(
    const Graph& g, const std::vector<std::size_t>& edges) {
  if (edges.size() != g.num_vertices()) return std::nullopt;
  auto comps = components(Subcomplex::spanning(g, edges));
  std::vector<OrientedCircuit> circuits;
  circuits.reserve(comps.size());
  for (const auto& c : comps) {
    if (euler_characteristic(c) != 0) return std::nullopt;
    circuits.push_back(circuit_of_unicyclic(c));
  }
  return std::make_pair(std::move(comps), std::move(circuits));
}

double condition_number(const Matrix& a) {
  const Eigen::VectorXd sv = singular_values(a);
  if (sv.size() == 0) return 1.0;
  const double lo = sv(sv.size() - 1);
  return lo > 0 ? sv(0) / lo : std::numeric_limits<double>::infinity();
}

}  // namespace

bool is_tree_homological(const LineBundle& bundle, const std::vector<std::size_t>& edges,
                         std::optional<double> tol) {
  require_h0_trivial(bundle, std::nullopt);
  const auto set = sorted_unique(edges);
  if (set.size() != edges.size() || set.size() != bundle.graph().num_vertices()) return false;
  const Matrix d = boundary_columns(bundle, set);
  return numerical_rank(d, tol) == set.size();
}

bool is_tree_combinatorial(const LineBundle& bundle, const std::vector<std::size_t>& edges,
                           double eps_hol) {
  const auto set = sorted_unique(edges);
  if (set.size() != edges.size()) return false;
  const auto parts = unicyclic_parts(bundle.graph(), set);
  if (!parts) return false;
  for (const auto& c : parts->second)
    if (!(holonomy_defect(bundle, c) > eps_hol)) return false;
  return true;
}

std::optional<ForestRecord> make_forest(const LineBundle& bundle, const ResistanceMap& r,
                                        std::vector<std::size_t> edges,
                                        const ForestOptions& options) {
  const Graph& g = bundle.graph();
  edges = sorted_unique(std::move(edges));
  auto parts = unicyclic_parts(g, edges);
  if (!parts) return std::nullopt;

  ForestRecord rec;
  rec.rho_hat = 1.0;
  for (const auto& c : parts->second) {
    const double defect = holonomy_defect(bundle, c);
    if (!(defect > options.eps_hol)) return std::nullopt;
    rec.holonomies.push_back(holonomy(bundle, c));
    rec.rho_hat *= defect * defect;
  }
  rec.edges = std::move(edges);
  for (std::size_t e : rec.edges) rec.edge_ids.push_back(g.edge(e).id);
  rec.components = std::move(parts->first);
  rec.circuits = std::move(parts->second);

  double log_resistance = 0.0;
  rec.weight = rec.rho_hat;
  for (std::size_t e : rec.edges) {
    rec.weight /= r.at(e);
    log_resistance += std::log(r.at(e));
  }
  rec.log_weight = std::log(rec.rho_hat) - log_resistance;
  if (options.cache_tbar) cache_tbar(bundle, rec);
  return rec;
}

ForestEnumeration enumerate_forests(const LineBundle& bundle, const ResistanceMap& r,
                                    const ForestOptions& options) {
  if (!(bundle.graph() == r.graph()))
    throw Error(ErrorCode::BasisMismatch, "resistances belong to a different graph");
  require_h0_trivial(bundle, options.rank_tol);
  const Graph& g = bundle.graph();
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_edges();
  ForestEnumeration out;
  if (m < n) return out;

  // Depth-first over increasing index lists. A component that already has
  // more edges than vertices can never become unicyclic, so such prefixes
  // are cut.
  std::vector<std::size_t> chosen;
  chosen.reserve(n);
  auto overfull = [&]() {
    std::vector<std::size_t> root(n);
    std::iota(root.begin(), root.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (root[x] != x) x = root[x] = root[root[x]];
      return x;
    };
    std::vector<long> excess(n, -1);  // edges - vertices per root
    for (std::size_t e : chosen) {
      std::size_t a = find(g.edge(e).tail), b = find(g.edge(e).head);
      if (a != b) {
        root[b] = a;
        excess[a] += excess[b] + 1;
      } else {
        excess[a] += 1;
      }
      if (excess[a] > 0) return true;
    }
    return false;
  };

  auto visit = [&](auto&& self, std::size_t next) -> void {
    if (chosen.size() == n) {
      if (auto rec = make_forest(bundle, r, chosen, options)) {
        out.forests.push_back(std::move(*rec));
      } else if (auto parts = unicyclic_parts(g, chosen)) {
        for (const auto& c : parts->second) {
          const double defect = holonomy_defect(bundle, c);
          if (defect > 0.0 && defect <= options.eps_hol) {
            std::ostringstream msg;
            msg << "cycle-rooted forest {";
            for (std::size_t i = 0; i < chosen.size(); ++i)
              msg << (i ? "," : "") << g.edge(chosen[i]).id;
            msg << "} rejected: circuit at '" << g.vertex_id(c.start)
                << "' has near-trivial holonomy (|rho_C - 1| = " << defect
                << "), condition number of the tree boundary "
                << condition_number(boundary_columns(bundle, chosen));
            out.warnings.push_back(msg.str());
            break;
          }
        }
      }
      return;
    }
    for (std::size_t e = next; e + (n - chosen.size()) <= m; ++e) {
      chosen.push_back(e);
      if (!overfull()) self(self, e + 1);
      chosen.pop_back();
    }
  };
  visit(visit, 0);
  return out;
}

Matrix tbar_matrix(const LineBundle& bundle, const ForestRecord& forest) {
  if (forest.tbar) return *forest.tbar;
  const Graph& g = bundle.graph();
  const auto m = static_cast<Eigen::Index>(g.num_edges());
  std::vector<std::size_t> outside;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    if (!forest.contains(e)) outside.push_back(e);

  Matrix tbar = Matrix::Zero(m, m);
  if (outside.empty()) return tbar;

  const Matrix d_tree = boundary_columns(bundle, forest.edges);
  Eigen::PartialPivLU<Matrix> lu(d_tree);
  const double rcond = lu.rcond();
  if (!(rcond > static_cast<double>(d_tree.rows()) * std::numeric_limits<double>::epsilon()))
    throw Error(ErrorCode::SingularTreeSystem, "tree boundary matrix is numerically singular");
  const Matrix u = lu.solve(boundary_columns(bundle, outside));

  for (std::size_t j = 0; j < outside.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(outside[j]);
    tbar(col, col) = 1.0;
    for (std::size_t k = 0; k < forest.edges.size(); ++k)
      tbar(static_cast<Eigen::Index>(forest.edges[k]), col) =
          -u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
  }
  return tbar;
}

void cache_tbar(const LineBundle& bundle, ForestRecord& forest) {
  forest.tbar.reset();
  forest.tbar = tbar_matrix(bundle, forest);
}

ChainVector tbar_chain(const LineBundle& bundle, const ForestRecord& forest, std::size_t edge) {
  const Graph& g = bundle.graph();
  if (edge >= g.num_edges()) throw Error(ErrorCode::UnknownEdge, "edge index out of range");
  const Matrix t = tbar_matrix(bundle, forest);
  return ChainVector::on_edges(g, t.col(static_cast<Eigen::Index>(edge)));
}

LinearOperator tbar_operator(const LineBundle& bundle, const ForestRecord& forest) {
  const auto ids = bundle.graph().edge_ids();
  return LinearOperator{1, 1, ids, ids, tbar_matrix(bundle, forest)};
}

Complex tbar_coefficient(const LineBundle& bundle, const ForestRecord& forest, std::size_t b_i,
                         std::size_t b_j) {
  if (forest.contains(b_i)) return Complex(0.0, 0.0);
  return tbar_matrix(bundle, forest)(static_cast<Eigen::Index>(b_j), static_cast<Eigen::Index>(b_i));
}

std::optional<ForestRecord> exchange(const LineBundle& bundle, const ResistanceMap& r,
                                     const ForestRecord& forest, std::size_t b_i,
                                     std::size_t b_j, double eps, const ForestOptions& options) {
  if (forest.contains(b_i) || !forest.contains(b_j)) return std::nullopt;
  if (!(std::abs(tbar_coefficient(bundle, forest, b_i, b_j)) > eps)) return std::nullopt;
  std::vector<std::size_t> edges;
  for (std::size_t e : forest.edges)
    if (e != b_j) edges.push_back(e);
  edges.push_back(b_i);
  return make_forest(bundle, r, std::move(edges), options);
}

}  // namespace kirchhoff
