#include "kirchhoff/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "kirchhoff/cli/graph_file.hpp"
#include "kirchhoff/cli/report.hpp"
#include "kirchhoff/theorems.hpp"

namespace kirchhoff::cli {

namespace {

struct Settings {
  std::string graph_path;
  double tol = kDefaultTheoremTolerance;
  double eps_hol = kDefaultHolonomyEpsilon;
  std::optional<double> rank_tol;
  std::string format = "json";
  std::string voltage;
  std::vector<std::string> forest;
  std::string weights = "auto";
  std::vector<double> betas{1, 5, 10, 20, 40};
  std::uint64_t seed = 1;
  std::string gauge;
  bool tol_given = false;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

GraphSpec load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph_file(buf.str());
}

TheoremOptions theorem_options(const Settings& s) {
  TheoremOptions o;
  o.tol = s.tol;
  o.eps_hol = s.eps_hol;
  o.rank_tol = s.rank_tol;
  return o;
}

// "id=value, id=value" with real values.
std::map<std::string, double> parse_real_map(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("expected '<id>=<number>' in '" + item + "'");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    const std::string id = trim(item.substr(0, eq));
    const Complex value = parse_complex(trim(item.substr(eq + 1)));
    if (value.imag() != 0.0) throw InputError("value for '" + id + "' must be real");
    if (!out.emplace(id, value.real()).second) throw InputError("'" + id + "' listed twice");
  }
  return out;
}

Json string_array(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

Json circuit_json(const LineBundle& bundle, const OrientedCircuit& c) {
  const Graph& g = bundle.graph();
  Json steps = Json::array();
  for (const auto& s : c.steps) {
    Json step = Json::object();
    step["edge"] = g.edge(s.edge).id;
    step["sign"] = s.sign;
    steps.push_back(std::move(step));
  }
  Json j = Json::object();
  j["start"] = g.vertex_id(c.start);
  j["steps"] = std::move(steps);
  j["holonomy"] = complex_json(holonomy(bundle, c));
  return j;
}

const ForestRecord& pick_forest(const GraphSpec& spec, const std::vector<ForestRecord>& forests,
                                const std::vector<std::string>& wanted,
                                std::optional<ForestRecord>& storage) {
  if (wanted.empty()) {
    if (forests.empty()) throw InputError("graph has no rho-spanning tree");
    return forests.front();
  }
  storage = make_forest(spec.bundle, spec.resistance, edge_indices(spec.graph, wanted));
  if (!storage) throw InputError("--forest does not name a rho-spanning tree");
  return *storage;
}

// --- commands ----------------------------------------------------------------

int cmd_validate(const GraphSpec& spec, const Settings& s, Json& rep) {
  const H0Report h0 = h0_trivial(spec.bundle, s.rank_tol, s.eps_hol);
  const HomologyDims dims = homology_dims(spec.bundle, std::nullopt, s.rank_tol);
  std::size_t loops = 0;
  for (const auto& e : spec.graph.edges()) loops += e.is_loop() ? 1 : 0;
  rep["vertices"] = spec.graph.num_vertices();
  rep["edges"] = spec.graph.num_edges();
  rep["loops"] = loops;
  rep["h0_trivial"] = h0.trivial;
  rep["dim_h0"] = dims.h0;
  rep["dim_h1"] = dims.h1;
  rep["rank"] = h0.rank;
  rep["smallest_singular_value"] = h0.smallest_singular_value;
  rep["rank_tolerance"] = h0.rank_tolerance;
  rep["holonomy_criterion"] = h0.holonomy_criterion;
  rep["criteria_agree"] = h0.criteria_agree;
  Json cycles = Json::array();
  for (std::size_t i = 0; i < h0.cycle_edges.size(); ++i) {
    Json c = Json::object();
    c["edge"] = h0.cycle_edges[i];
    c["holonomy"] = complex_json(h0.fundamental_holonomies[i]);
    c["defect"] = std::abs(h0.fundamental_holonomies[i] - 1.0);
    cycles.push_back(std::move(c));
  }
  rep["fundamental_cycles"] = std::move(cycles);
  rep["warnings"] = string_array(h0.warnings);
  return h0.criteria_agree ? kExitOk : kExitIdentityViolated;
}

int cmd_forests(const GraphSpec& spec, const Settings& s, Json& rep) {
  ForestOptions fo;
  fo.eps_hol = s.eps_hol;
  fo.rank_tol = s.rank_tol;
  const auto found = enumerate_forests(spec.bundle, spec.resistance, fo);
  double delta = 0.0;
  Json list = Json::array();
  for (const auto& f : found.forests) {
    delta += f.weight;
    Json j = Json::object();
    j["edges"] = string_array(f.edge_ids);
    j["components"] = f.components.size();
    j["rho_hat"] = f.rho_hat;
    j["weight"] = f.weight;
    j["log_weight"] = f.log_weight;
    Json circuits = Json::array();
    for (const auto& c : f.circuits) circuits.push_back(circuit_json(spec.bundle, c));
    j["circuits"] = std::move(circuits);
    list.push_back(std::move(j));
  }
  rep["forest_count"] = found.forests.size();
  rep["delta"] = delta;
  rep["forests"] = std::move(list);
  rep["warnings"] = string_array(found.warnings);
  return kExitOk;
}

int cmd_matrix_tree(const GraphSpec& spec, const Settings& s, Json& rep) {
  const MatrixTreeReport mt = matrix_tree_report(spec.bundle, spec.resistance, theorem_options(s));
  const bool passed = mt.relative_error <= s.tol && mt.det_imag_relative <= s.tol;
  rep["h0_trivial"] = mt.h0_trivial;
  rep["det"] = mt.det_laplacian;
  rep["log_abs_det"] = mt.log_det.log_abs;
  rep["det_imag_relative"] = mt.det_imag_relative;
  rep["sum_weights"] = mt.sum_weights;
  rep["relative_error"] = mt.relative_error;
  rep["tolerance"] = s.tol;
  rep["passed"] = passed;
  rep["forest_count"] = mt.forests.size();
  Json rows = Json::array();
  for (const auto& f : mt.forests) {
    Json row = Json::object();
    row["edges"] = string_array(f.edge_ids);
    row["rho_hat"] = f.rho_hat;
    row["weight"] = f.weight;
    rows.push_back(std::move(row));
  }
  rep["forests"] = std::move(rows);
  rep["warnings"] = string_array(mt.warnings);
  return passed ? kExitOk : kExitIdentityViolated;
}

int cmd_project(const GraphSpec& spec, const Settings& s, Json& rep) {
  const ProjectionReport pr = kirchhoff_projection(spec.bundle, spec.resistance, theorem_options(s));
  const bool passed = pr.passed(s.tol);
  rep["forest_count"] = pr.forest_count;
  rep["delta"] = pr.delta;
  rep["scale"] = pr.scale;
  rep["tolerance"] = s.tol;
  rep["max_entry_discrepancy"] = pr.max_entry_discrepancy;
  rep["idempotence_defect"] = pr.idempotence_defect;
  rep["self_adjoint_defect"] = pr.self_adjoint_defect;
  rep["kernel_fix_defect"] = pr.kernel_fix_defect;
  rep["boundary_defect"] = pr.boundary_defect;
  rep["passed"] = passed;
  rep["basis"] = string_array(pr.p_kirchhoff.domain);
  rep["projection"] = matrix_json(pr.p_kirchhoff.matrix);
  return passed ? kExitOk : kExitIdentityViolated;
}

int cmd_solve(const GraphSpec& spec, const Settings& s, Json& rep) {
  const ChainVector v = parse_chain(s.voltage, spec.graph);
  const NetworkSolution sol = solve_network(spec.bundle, spec.resistance, v, theorem_options(s));
  const double vnorm = v.norm();
  const bool passed = sol.route_discrepancy <= s.tol * std::max(vnorm, 1e-300) &&
                      sol.orthogonality_defect <= s.tol * std::max(vnorm, 1e-300);
  rep["dim_h1"] = sol.dim_h1;
  rep["voltage_norm"] = vnorm;
  rep["route_discrepancy"] = sol.route_discrepancy;
  rep["orthogonality_defect"] = sol.orthogonality_defect;
  rep["tolerance"] = s.tol;
  rep["passed"] = passed;
  Json currents = Json::array();
  for (std::size_t b = 0; b < spec.graph.num_edges(); ++b) {
    const auto i = static_cast<Eigen::Index>(b);
    Json row = Json::object();
    row["edge"] = spec.graph.edge(b).id;
    row["voltage"] = complex_json(v.coeffs(i));
    row["current"] = complex_json(sol.current.coeffs(i));
    row["current_formula"] = complex_json(sol.current_formula.coeffs(i));
    row["residual"] = complex_json(sol.residual.coeffs(i));
    currents.push_back(std::move(row));
  }
  rep["currents"] = std::move(currents);
  return passed ? kExitOk : kExitIdentityViolated;
}

int cmd_lowtemp(const GraphSpec& spec, const Settings& s, Json& rep) {
  ForestOptions fo;
  fo.eps_hol = s.eps_hol;
  fo.rank_tol = s.rank_tol;
  const auto found = enumerate_forests(spec.bundle, spec.resistance, fo);
  std::optional<ForestRecord> storage;
  const ForestRecord& forest = pick_forest(spec, found.forests, s.forest, storage);

  std::optional<std::vector<double>> weights;
  if (s.weights != "auto") {
    const auto given = parse_real_map(s.weights);
    std::vector<double> w(spec.graph.num_edges(), NAN);
    for (const auto& [id, value] : given) w[spec.graph.edge_index(id)] = value;
    for (std::size_t e = 0; e < w.size(); ++e)
      if (std::isnan(w[e])) throw InputError("no weight for edge '" + spec.graph.edge(e).id + "'");
    weights = std::move(w);
  }
  const LowTempReport lt = low_temp_demo(spec.bundle, forest, weights, s.betas);
  const PrefactorCheck pre = prefactor_check(spec.bundle, forest, lt.weights);
  const bool passed = lt.monotone && pre.relative_error <= s.tol;

  rep["forest"] = string_array(forest.edge_ids);
  Json w = Json::object();
  for (std::size_t e = 0; e < spec.graph.num_edges(); ++e) w[spec.graph.edge(e).id] = lt.weights[e];
  rep["weights"] = std::move(w);
  rep["weights_auto"] = !weights.has_value();
  rep["monotone"] = lt.monotone;
  Json pf = Json::object();
  pf["det_tree_laplacian"] = pre.det_tree_laplacian;
  pf["predicted"] = pre.predicted;
  pf["relative_error"] = pre.relative_error;
  rep["prefactor"] = std::move(pf);
  rep["passed"] = passed;
  Json points = Json::array();
  for (const auto& p : lt.points) {
    Json row = Json::object();
    row["beta"] = p.beta;
    row["ratio"] = p.ratio;
    row["log_ratio"] = p.log_ratio;
    row["deviation"] = p.deviation;
    points.push_back(std::move(row));
  }
  rep["points"] = std::move(points);
  return passed ? kExitOk : kExitIdentityViolated;
}

int cmd_gauge_check(const GraphSpec& spec, const Settings& s, Json& rep) {
  std::optional<Gauge> gauge;
  if (!s.gauge.empty()) {
    gauge = Gauge::from_angles(spec.graph, parse_real_map(s.gauge));
  } else {
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<Complex> values;
    for (std::size_t v = 0; v < spec.graph.num_vertices(); ++v)
      values.push_back(std::polar(1.0, angle(rng)));
    gauge = Gauge(spec.graph, std::move(values));
  }
  const double tol = s.tol_given ? s.tol : 1e-10;
  const GaugeCheckReport gc =
      gauge_invariance_check(spec.bundle, spec.resistance, *gauge, theorem_options(s));
  const bool passed = gc.passed(tol);
  Json g = Json::object();
  for (std::size_t v = 0; v < spec.graph.num_vertices(); ++v)
    g[spec.graph.vertex_id(v)] = std::arg(gauge->at(v));
  rep["gauge_angles"] = std::move(g);
  rep["det_before"] = gc.det_before;
  rep["det_after"] = gc.det_after;
  rep["relative_difference"] = gc.relative_difference;
  rep["forests_equal"] = gc.forests_equal;
  rep["forest_count"] = gc.forest_count;
  rep["dims_before"] = Json::array({gc.dims_before.h0, gc.dims_before.h1});
  rep["dims_after"] = Json::array({gc.dims_after.h0, gc.dims_after.h1});
  rep["tolerance"] = tol;
  rep["passed"] = passed;
  return passed ? kExitOk : kExitIdentityViolated;
}

void emit(const Json& rep, const Settings& s, std::ostream& out) {
  out << (s.format == "table" ? dump_table(rep) : dump_json(rep));
}

int input_error(const std::string& code, const std::string& message, std::ostream& out,
                std::ostream& err, std::optional<std::pair<std::size_t, std::size_t>> where = {}) {
  Json e = Json::object();
  e["code"] = code;
  e["message"] = message;
  if (where) {
    e["line"] = where->first;
    e["column"] = where->second;
  }
  Json rep = Json::object();
  rep["error"] = std::move(e);
  out << dump_json(rep);
  err << "kirchhoff: " << message << "\n";
  return kExitInputError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Twisted Kirchhoff theorems on graphs with a U(1) line bundle", "kirchhoff"};
  app.require_subcommand(1);
  app.fallthrough();
  auto* tol_opt = app.add_option("--tol", s.tol, "Identity tolerance (relative)");
  app.add_option("--eps-hol", s.eps_hol, "Holonomy triviality threshold on |rho_C - 1|");
  app.add_option("--rank-tol", s.rank_tol, "Singular value cutoff for ranks and kernels");
  app.add_option("--format", s.format, "Report format")->check(CLI::IsMember({"json", "table"}));

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const GraphSpec&, const Settings&, Json&);
  };
  const std::vector<Command> commands = {
      {"validate", "Check connectivity, H0 triviality and homology dimensions", cmd_validate},
      {"forests", "List all rho-spanning trees with weights", cmd_forests},
      {"matrix-tree", "Compare det of the twisted Laplacian with the forest sum", cmd_matrix_tree},
      {"project", "Forest-sum projection onto cycles against the least-squares oracle", cmd_project},
      {"solve", "Currents for a voltage source, two routes", cmd_solve},
      {"lowtemp", "Low temperature ratio sweep for one forest", cmd_lowtemp},
      {"gauge-check", "Invariance of determinant and forests under a gauge", cmd_gauge_check},
  };
  std::map<CLI::App*, const Command*> dispatch;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("graph", s.graph_path, "Graph file")->required();
    dispatch[sub] = &c;
    if (std::string(c.name) == "solve")
      sub->add_option("--voltage", s.voltage, "Voltage chain, e.g. \"b1=1+0.5i, b2=-2\"")
          ->required();
    if (std::string(c.name) == "lowtemp") {
      sub->add_option("--forest", s.forest, "Tree edges (default: first forest)")->delimiter(',');
      sub->add_option("--weights", s.weights, "\"auto\" or \"b1=1, b2=4\"");
      sub->add_option("--beta", s.betas, "Comma separated beta values")->delimiter(',');
    }
    if (std::string(c.name) == "gauge-check") {
      sub->add_option("--seed", s.seed, "Seed of the random gauge");
      sub->add_option("--gauge", s.gauge, "Explicit gauge angles, e.g. \"u=0.5, v=1\"");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return input_error("UsageError", e.what(), out, err);
  }
  s.tol_given = tol_opt->count() > 0;

  const Command* chosen = nullptr;
  for (auto* sub : app.get_subcommands()) chosen = dispatch.at(sub);

  try {
    const GraphSpec spec = load(s.graph_path);
    Json rep = Json::object();
    rep["command"] = chosen->name;
    const int code = chosen->fn(spec, s, rep);
    emit(rep, s, out);
    return code;
  } catch (const ParseError& e) {
    return input_error(std::string(to_string(e.code())), e.what(), out, err,
                       std::make_pair(e.line(), e.column()));
  } catch (const Error& e) {
    return input_error(std::string(to_string(e.code())), e.what(), out, err);
  } catch (const InputError& e) {
    return input_error("InputError", e.what(), out, err);
  }
}

}  // namespace kirchhoff::cli
