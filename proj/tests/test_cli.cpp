#include "kirchhoff/cli/commands.hpp"
#include "kirchhoff/cli/graph_file.hpp"
#include "kirchhoff/cli/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/random_graphs.hpp"

using namespace kirchhoff;
using namespace kirchhoff::cli;
using fixtures::pi;

namespace {

const char* kTheta =
    "# theta graph with cube-root phases\n"
    "vertex u\n"
    "vertex v\n"
    "edge e1 u v phase 0 resistance 1\n"
    "edge e2 u v phase 2.0943951023931957 resistance 1\n"
    "edge e3 u v phase 4.1887902047863905 resistance 1\n";

const char* kTwoLoops =
    "vertex v\n"
    "edge b1 v v phase 1.5707963267948966 resistance 1\n"
    "edge b2 v v phase 3.141592653589793 resistance 2\n";

struct Outcome {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("kirchhoff_cli_" + name);
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

ErrorCode parse_code(const std::string& text, std::size_t* line = nullptr) {
  try {
    parse_graph_file(text);
  } catch (const ParseError& e) {
    if (line) *line = e.line();
    return e.code();
  }
  FAIL("expected a ParseError");
  return ErrorCode::SemanticError;
}

}  // namespace

TEST_CASE("parse a loop graph") {
  GraphSpec s = parse_graph_file("vertex v\nedge b v v phase 3.141592653589793 resistance 1.0");
  CHECK(s.graph.num_vertices() == 1);
  CHECK(s.graph.num_edges() == 1);
  CHECK(std::abs(s.bundle.phase(0) - Complex(-1.0, 0.0)) <= 1e-15);
  CHECK(s.resistance.at(0) == 1.0);
}

TEST_CASE("parse errors carry codes and lines") {
  CHECK(parse_code("vertex v\nedge b v v phase 1 resistance -1\n") == ErrorCode::SemanticError);
  std::size_t line = 0;
  CHECK(parse_code("vertex v\n\n# c\nedge b v w phase 1 resistance 1\n", &line) ==
        ErrorCode::SemanticError);
  CHECK(line == 4);
  CHECK(parse_code("vertex v\nedge b v v phase x resistance 1\n") == ErrorCode::SyntaxError);
  CHECK(parse_code("vertex v-1\n") == ErrorCode::SyntaxError);
  CHECK(parse_code("vertex v\nvertex v\n") == ErrorCode::SemanticError);
  CHECK(parse_code("vertex v\nedge b v v phase 1\n") == ErrorCode::SyntaxError);
  CHECK(parse_code("node v\n") == ErrorCode::SyntaxError);
}

TEST_CASE("comments, blank lines and phase reduction") {
  GraphSpec s = parse_graph_file("  # header\n\nvertex v   # trailing\r\n"
                                 "edge b v v phase -1.5707963267948966 resistance 2.5\n");
  CHECK(s.bundle.angle(0) == doctest::Approx(3 * pi / 2));
  CHECK(s.resistance.at(0) == 2.5);
}

TEST_CASE("complex literals and chains") {
  CHECK(parse_complex("2") == Complex(2, 0));
  CHECK(parse_complex("-0.5i") == Complex(0, -0.5));
  CHECK(parse_complex("1+0.5i") == Complex(1, 0.5));
  CHECK(parse_complex("1e-3-2i") == Complex(1e-3, -2));
  CHECK_THROWS_AS(parse_complex("1+"), Error);
  CHECK_THROWS_AS(parse_complex("i"), Error);

  Graph g = parse_graph_file(kTwoLoops).graph;
  ChainVector a = parse_chain("b1=1", g);
  CHECK(a.at("b1") == Complex(1, 0));
  CHECK(a.at("b2") == Complex(0, 0));
  ChainVector b = parse_chain("b1=1+0.5i, b2=-2", g);
  CHECK(b.at("b1") == Complex(1, 0.5));
  CHECK(b.at("b2") == Complex(-2, 0));
  try {
    parse_chain("bz=1", g);
    FAIL("expected UnknownEdge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownEdge);
  }
  CHECK_THROWS_AS(parse_chain("b1=1,b1=2", g), Error);
  CHECK_THROWS_AS(parse_chain("b1=1,,b2=1", g), Error);
  CHECK(parse_chain("  ", g).norm() == 0.0);
}

TEST_CASE("property: emit then parse is the identity") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    gen::Case c = gen::random_case(seed);
    GraphSpec spec{c.graph(), c.bundle, c.r};
    const std::string text = emit_graph_file(spec);
    GraphSpec back = parse_graph_file(text);
    CHECK(back.graph == spec.graph);
    CHECK(back.bundle.angles() == spec.bundle.angles());
    CHECK(back.resistance.values() == spec.resistance.values());
    CHECK(emit_graph_file(back) == text);
  }
}

TEST_CASE("validate reports H0 and H1") {
  const auto path = write_temp("two_loops.txt", kTwoLoops);
  Outcome o = run_cli({"validate", path});
  CHECK(o.code == kExitOk);
  Json j = o.json();
  CHECK(j["h0_trivial"] == true);
  CHECK(j["dim_h1"] == 1);
  CHECK(j["criteria_agree"] == true);
}

TEST_CASE("matrix-tree on the theta graph") {
  const auto path = write_temp("theta.txt", kTheta);
  Outcome o = run_cli({"matrix-tree", path});
  CHECK(o.code == kExitOk);
  Json j = o.json();
  CHECK(j["det"].get<double>() == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(j["sum_weights"].get<double>() == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(j["relative_error"].get<double>() < 1e-9);
  CHECK(j["forest_count"] == 3);
}

TEST_CASE("solve on two loops") {
  const auto path = write_temp("two_loops_solve.txt", kTwoLoops);
  Outcome o = run_cli({"solve", path, "--voltage", "b1=1"});
  CHECK(o.code == kExitOk);
  Json j = o.json();
  REQUIRE(j["currents"].size() == 2);
  CHECK(j["currents"][0]["edge"] == "b1");
  CHECK(j["orthogonality_defect"].get<double>() <= 1e-9);
  CHECK(j["route_discrepancy"].get<double>() <= 1e-10);
  CHECK(j["currents"][0]["current"]["re"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("remaining commands succeed on the theta graph") {
  const auto path = write_temp("theta_all.txt", kTheta);
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"forests", path}, {"project", path}, {"lowtemp", path},
        {"lowtemp", path, "--forest", "e1,e3", "--beta", "1,10,40"},
        {"gauge-check", path, "--seed", "9"}, {"gauge-check", path, "--gauge", "u=0.3, v=2"},
        {"--format", "table", "forests", path}}) {
    Outcome o = run_cli(args);
    CHECK_MESSAGE(o.code == kExitOk, o.out);
  }
}

TEST_CASE("global flags may follow the command") {
  const auto path = write_temp("theta_flags.txt", kTheta);
  Outcome o = run_cli({"matrix-tree", path, "--tol", "1e-6"});
  CHECK(o.code == kExitOk);
  CHECK(o.json()["tolerance"].get<double>() == 1e-6);
}

TEST_CASE("input errors exit with code 2 and a JSON error") {
  const auto bad = write_temp("bad.txt", "vertex v\nedge b v w phase 1 resistance 1\n");
  Outcome o = run_cli({"validate", bad});
  CHECK(o.code == kExitInputError);
  Json j = o.json();
  CHECK(j["error"]["code"] == "SemanticError");
  CHECK(j["error"]["line"] == 2);
  CHECK_FALSE(o.err.empty());

  CHECK(run_cli({"validate", "/nonexistent/graph.txt"}).code == kExitInputError);
  CHECK(run_cli({"frobnicate"}).code == kExitInputError);
  CHECK(run_cli({}).code == kExitInputError);
  const auto path = write_temp("two_loops_bad.txt", kTwoLoops);
  CHECK(run_cli({"solve", path, "--voltage", "bz=1"}).json()["error"]["code"] == "UnknownEdge");
  CHECK(run_cli({"lowtemp", path, "--weights", "b1=1, b2=-5"}).json()["error"]["code"] == "InvalidW");
  const auto flat = write_temp("flat.txt", "vertex v\nedge b v v phase 0 resistance 1\n");
  CHECK(run_cli({"project", flat}).code == kExitInputError);
}

TEST_CASE("degenerate bundle: matrix-tree still reports") {
  const auto flat = write_temp("flat_mt.txt", "vertex v\nedge b v v phase 0 resistance 1\n");
  Outcome o = run_cli({"matrix-tree", flat});
  CHECK(o.code == kExitOk);
  CHECK(o.json()["h0_trivial"] == false);
  CHECK(o.json()["forest_count"] == 0);
}

TEST_CASE("reports are byte-stable") {
  const auto path = write_temp("theta_stable.txt", kTheta);
  for (const char* cmd : {"validate", "forests", "matrix-tree", "project", "lowtemp", "gauge-check"}) {
    Outcome a = run_cli({cmd, path});
    Outcome b = run_cli({cmd, path});
    CHECK(a.out == b.out);
  }
}

TEST_CASE("float formatting") {
  Json j = Json::object();
  j["x"] = 9.0;
  j["y"] = 0.1;
  j["z"] = std::numeric_limits<double>::infinity();
  j["v"] = Json::array({1.0, 2.5});
  CHECK(dump_json(j) == "{\n  \"x\": 9.0,\n  \"y\": 0.10000000000000001,\n  \"z\": null,\n"
                        "  \"v\": [1.0, 2.5]\n}\n");
}
