#include "kirchhoff/bundle.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "kirchhoff/chain_complex.hpp"
#include "kirchhoff/error.hpp"

namespace kirchhoff {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUnitTolerance = 1e-12;

double defect_of_angle(double angle) { return 2.0 * std::abs(std::sin(0.5 * angle)); }

}  // namespace

double reduce_angle(double radians) {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

LineBundle::LineBundle(Graph g, std::vector<double> angles)
    : graph_(std::move(g)), angles_(std::move(angles)) {
  if (angles_.size() != graph_.num_edges())
    throw Error(ErrorCode::MissingPhase, "need exactly one phase per edge");
  phases_.reserve(angles_.size());
  for (std::size_t i = 0; i < angles_.size(); ++i) {
    if (!std::isfinite(angles_[i]))
      throw Error(ErrorCode::MissingPhase, "phase of '" + graph_.edge(i).id + "' is not finite");
    phases_.push_back(std::polar(1.0, angles_[i]));
  }
}

LineBundle attach_phases(const Graph& g, const std::map<std::string, double>& angles) {
  std::vector<double> values(g.num_edges());
  std::vector<bool> seen(g.num_edges(), false);
  for (const auto& [id, theta] : angles) {
    std::size_t e = g.edge_index(id);
    values[e] = theta;
    seen[e] = true;
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    if (!seen[e]) throw Error(ErrorCode::MissingPhase, "no phase for edge '" + g.edge(e).id + "'");
  return LineBundle(g, std::move(values));
}

Gauge::Gauge(Graph g, std::vector<Complex> values) : graph_(std::move(g)), values_(std::move(values)) {
  if (values_.size() != graph_.num_vertices())
    throw Error(ErrorCode::MissingGaugeValue, "need exactly one gauge value per vertex");
  for (std::size_t v = 0; v < values_.size(); ++v)
    if (!(std::abs(std::abs(values_[v]) - 1.0) <= kUnitTolerance))
      throw Error(ErrorCode::MissingGaugeValue,
                  "gauge value at '" + graph_.vertex_id(v) + "' is not a unit complex number");
}

Gauge Gauge::identity(const Graph& g) {
  return Gauge(g, std::vector<Complex>(g.num_vertices(), Complex(1.0, 0.0)));
}

Gauge Gauge::from_angles(const Graph& g, const std::map<std::string, double>& angles) {
  std::vector<Complex> values(g.num_vertices());
  std::vector<bool> seen(g.num_vertices(), false);
  for (const auto& [id, theta] : angles) {
    auto v = g.find_vertex(id);
    if (!v) throw Error(ErrorCode::UnknownEndpoint, "unknown vertex '" + id + "'");
    values[*v] = std::polar(1.0, theta);
    seen[*v] = true;
  }
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    if (!seen[v])
      throw Error(ErrorCode::MissingGaugeValue, "no gauge value at '" + g.vertex_id(v) + "'");
  return Gauge(g, std::move(values));
}

namespace {

void check_circuit(const LineBundle& bundle, const OrientedCircuit& circuit) {
  if (!bundle.graph().same_graph(circuit.graph))
    throw Error(ErrorCode::ForeignCircuit, "circuit belongs to a different graph");
}

}  // namespace

Complex holonomy(const LineBundle& bundle, const OrientedCircuit& circuit) {
  check_circuit(bundle, circuit);
  Complex h(1.0, 0.0);
  for (const auto& step : circuit.steps) {
    const Complex rho = bundle.phase(step.edge);
    h *= step.sign > 0 ? rho : std::conj(rho);
  }
  return h;
}

double holonomy_angle(const LineBundle& bundle, const OrientedCircuit& circuit) {
  check_circuit(bundle, circuit);
  double total = 0.0;
  for (const auto& step : circuit.steps) total += step.sign * bundle.angle(step.edge);
  return total;
}

double holonomy_defect(const LineBundle& bundle, const OrientedCircuit& circuit) {
  return defect_of_angle(holonomy_angle(bundle, circuit));
}

double rho_hat(const LineBundle& bundle, const Subcomplex& a) {
  if (!bundle.graph().same_graph(a.parent()))
    throw Error(ErrorCode::ForeignCircuit, "subcomplex belongs to a different graph");
  double product = 1.0;
  for (const auto& comp : components(a)) {
    if (euler_characteristic(comp) != 0)
      throw Error(ErrorCode::NotEulerZero, "component with nonzero Euler characteristic");
    const double d = holonomy_defect(bundle, circuit_of_unicyclic(comp));
    product *= d * d;
  }
  return product;
}

LineBundle gauge_transform(const LineBundle& bundle, const Gauge& gauge) {
  const Graph& g = bundle.graph();
  if (!g.same_graph(gauge.graph()) && !(g == gauge.graph()))
    throw Error(ErrorCode::MissingGaugeValue, "gauge is defined on a different graph");
  std::vector<double> angles(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    angles[e] = reduce_angle(bundle.angle(e) + std::arg(gauge.at(edge.tail)) -
                             std::arg(gauge.at(edge.head)));
  }
  return LineBundle(g, std::move(angles));
}

H0Report h0_trivial(const LineBundle& bundle, std::optional<double> rank_tol, double eps_hol) {
  const Graph& g = bundle.graph();
  if (g.num_vertices() == 0 || !is_connected(Subcomplex::whole(g)))
    throw Error(ErrorCode::Disconnected, "graph must be connected and non-empty");

  H0Report report;
  std::vector<std::size_t> all(g.num_edges());
  for (std::size_t e = 0; e < all.size(); ++e) all[e] = e;
  const Matrix d = boundary_columns(bundle, all);
  const Eigen::VectorXd sv = singular_values(d);
  report.rank_tolerance = rank_tol.value_or(default_rank_tolerance(d));
  report.rank = numerical_rank(d, report.rank_tolerance);
  report.smallest_singular_value =
      sv.size() == static_cast<Eigen::Index>(g.num_vertices()) ? sv(sv.size() - 1) : 0.0;
  report.trivial = report.rank == g.num_vertices();

  // Gauge the edges of a breadth-first tree to 1; every other edge then
  // carries the holonomy of its fundamental cycle.
  std::vector<double> potential(g.num_vertices(), 0.0);
  std::vector<bool> reached(g.num_vertices(), false);
  std::vector<bool> in_tree(g.num_edges(), false);
  std::vector<std::vector<std::size_t>> incident(g.num_vertices());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    incident[g.edge(e).tail].push_back(e);
    if (!g.edge(e).is_loop()) incident[g.edge(e).head].push_back(e);
  }
  std::queue<std::size_t> frontier;
  frontier.push(0);
  reached[0] = true;
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (std::size_t e : incident[v]) {
      const Edge& edge = g.edge(e);
      const std::size_t other = edge.tail == v ? edge.head : edge.tail;
      if (reached[other]) continue;
      reached[other] = true;
      in_tree[e] = true;
      potential[other] = edge.tail == v ? potential[v] + bundle.angle(e)
                                        : potential[v] - bundle.angle(e);
      frontier.push(other);
    }
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (in_tree[e]) continue;
    const Edge& edge = g.edge(e);
    const double angle = potential[edge.tail] - potential[edge.head] + bundle.angle(e);
    const double defect = defect_of_angle(angle);
    report.cycle_edges.push_back(edge.id);
    report.fundamental_holonomies.push_back(std::polar(1.0, angle));
    if (defect > eps_hol) {
      report.holonomy_criterion = true;
    } else if (defect > 0.0) {
      std::ostringstream msg;
      msg << "fundamental cycle through '" << edge.id << "' has near-trivial holonomy (|rho_C - 1| = "
          << defect << "), treated as trivial";
      report.warnings.push_back(msg.str());
    }
  }
  report.criteria_agree = report.trivial == report.holonomy_criterion;
  return report;
}

LineBundle split_phase(const LineBundle& bundle, const Subdivision& sub, double split) {
  if (!bundle.graph().same_graph(sub.source))
    throw Error(ErrorCode::StaleCorrespondence, "subdivision was made from a different graph");
  std::vector<double> angles(sub.result.num_edges());
  for (std::size_t e = 0; e < sub.source.num_edges(); ++e) {
    if (e == sub.original_edge) continue;
    angles[sub.edge_map[e]] = bundle.angle(e);
  }
  angles[sub.first_half] = split;
  angles[sub.second_half] = reduce_angle(bundle.angle(sub.original_edge) - split);
  return LineBundle(sub.result, std::move(angles));
}

}  // namespace kirchhoff
