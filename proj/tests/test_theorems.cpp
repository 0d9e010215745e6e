#include "kirchhoff/error.hpp"
#include "kirchhoff/theorems.hpp"

#include <doctest.h>

#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_graphs.hpp"

using namespace kirchhoff;
using fixtures::pi;

namespace {

bool near(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

const std::vector<double> kBetas{1, 5, 10, 20, 40};

}  // namespace

TEST_CASE("projection examples") {
  auto loop = fixtures::loop(pi);
  ProjectionReport pl = kirchhoff_projection(loop.bundle, loop.r);
  CHECK(pl.delta == doctest::Approx(4.0));
  CHECK(max_abs(pl.p_kirchhoff.matrix) == 0.0);
  CHECK(max_abs(oracle_projection(loop.bundle, loop.r).matrix) <= 1e-15);

  auto two = fixtures::two_loops();
  ProjectionReport pt = kirchhoff_projection(two.bundle, two.r);
  CHECK(pt.delta == doctest::Approx(4.0));
  Matrix expected(2, 2);
  expected << 1.0, -Complex(1, 1), -Complex(1, -1) / 2.0, 1.0;
  expected /= 2.0;
  CHECK(max_abs(pt.p_kirchhoff.matrix - expected) <= 1e-12);
  CHECK(max_abs(expected * expected - expected) <= 1e-15);
  CHECK(max_abs(pt.p_oracle.matrix - expected) <= 1e-10);
  CHECK(pt.passed(1e-9));

  auto th = fixtures::theta();
  ProjectionReport ph = kirchhoff_projection(th.bundle, th.r);
  CHECK(ph.delta == doctest::Approx(9.0));
  CHECK(ph.forest_count == 3);
  CHECK(numerical_rank(ph.p_kirchhoff.matrix) == 1);
  CHECK(ph.passed(1e-9));
}

TEST_CASE("oracle projection fixes cycles") {
  auto th = fixtures::theta({0.2, 1.9, 4.0}, {0.5, 2.0, 3.0});
  LinearOperator p = oracle_projection(th.bundle, th.r);
  for (const auto& z : kernel_basis(boundary_operator(th.bundle)))
    CHECK((p.matrix * z.coeffs - z.coeffs).norm() <= 1e-12);
}

TEST_CASE("projection refuses a nontrivial H0") {
  auto flat = fixtures::theta({0.0, 0.0, 0.0});
  CHECK_THROWS_AS(kirchhoff_projection(flat.bundle, flat.r), Error);
  CHECK_THROWS_AS(solve_network(flat.bundle, flat.r, fixtures::unit_edge(flat.graph, 0)), Error);
}

TEST_CASE("network examples") {
  auto loop = fixtures::loop(pi, 3.0);
  ChainVector v = fixtures::unit_edge(loop.graph, 0, 2.0);
  NetworkSolution s = solve_network(loop.bundle, loop.r, v);
  CHECK(s.dim_h1 == 0);
  CHECK(s.current.norm() <= 1e-15);
  CHECK((s.residual.coeffs - v.coeffs).norm() <= 1e-15);

  auto th = fixtures::theta({0.4, 2.0, 5.0}, {0.5, 2.0, 3.0});
  ChainVector z0 = kernel_basis(boundary_operator(th.bundle)).at(0);
  Vector rz = z0.coeffs;
  for (Eigen::Index b = 0; b < rz.size(); ++b) rz(b) *= th.r.at(static_cast<std::size_t>(b));
  NetworkSolution u = solve_network(th.bundle, th.r, ChainVector::on_edges(th.graph, rz));
  CHECK((u.current.coeffs - z0.coeffs).norm() <= 1e-12);

  auto two = fixtures::two_loops();
  NetworkSolution n = solve_network(two.bundle, two.r, fixtures::unit_edge(two.graph, 0));
  CHECK(n.route_discrepancy <= 1e-10);
  const Vector ref = oracle::projection(two.bundle, two.r) *
                     (Vector(2) << 1.0, 0.0).finished();
  CHECK((n.current.coeffs - ref).norm() <= 1e-12);
  CHECK((n.current_formula.coeffs - ref).norm() <= 1e-12);
}

TEST_CASE("matrix-tree examples") {
  auto loop = fixtures::loop(pi);
  MatrixTreeReport a = matrix_tree_report(loop.bundle, loop.r);
  CHECK(a.det_laplacian == doctest::Approx(4.0));
  CHECK(a.sum_weights == doctest::Approx(4.0));

  auto two = fixtures::two_loops();
  MatrixTreeReport b = matrix_tree_report(two.bundle, two.r);
  CHECK(std::abs(b.det_laplacian - 4.0) <= 1e-12);
  REQUIRE(b.forests.size() == 2);
  CHECK(std::abs(b.forests[0].weight - 2.0) <= 1e-12);
  CHECK(std::abs(b.forests[1].weight - 2.0) <= 1e-12);

  auto th = fixtures::theta();
  MatrixTreeReport c = matrix_tree_report(th.bundle, th.r);
  CHECK(std::abs(c.det_laplacian - 9.0) <= 1e-12);
  CHECK(std::abs(c.sum_weights - 9.0) <= 1e-12);
  CHECK(c.relative_error <= 1e-12);
}

TEST_CASE("matrix-tree on a flat bundle reports a vanishing determinant") {
  auto flat = fixtures::theta({0.0, 0.0, 0.0});
  MatrixTreeReport m = matrix_tree_report(flat.bundle, flat.r);
  CHECK_FALSE(m.h0_trivial);
  CHECK(m.forests.empty());
  CHECK(m.sum_weights == 0.0);
  CHECK(std::abs(m.det_laplacian) <= 1e-12);
  CHECK(m.relative_error <= 1e-9);
}

TEST_CASE("tree laplacian identity examples") {
  auto loop = fixtures::loop(pi);
  auto t = make_forest(loop.bundle, loop.r, {0});
  TreeLaplacianIdentity a = tree_laplacian_identity(loop.bundle, *t);
  CHECK(a.det == doctest::Approx(4.0));
  CHECK(a.rho_hat == doctest::Approx(4.0));
  CHECK(a.relative_error <= 1e-14);

  auto th = fixtures::theta();
  auto te = make_forest(th.bundle, th.r, {0, 1});
  TreeLaplacianIdentity b = tree_laplacian_identity(th.bundle, *te);
  CHECK(b.det == doctest::Approx(3.0));
  CHECK(b.rho_hat == doctest::Approx(3.0));
  CHECK(b.relative_error <= 1e-12);

  // Two components: loops at v and w plus a bridge outside the forest.
  auto two = fixtures::make_network({"v", "w"}, {{"a", "v", "v"}, {"e", "v", "w"}, {"c", "w", "w"}},
                                    {pi / 2, 0.3, pi}, {1, 1, 1});
  auto tf = make_forest(two.bundle, two.r, {0, 2});
  REQUIRE(tf);
  CHECK(tf->components.size() == 2);
  TreeLaplacianIdentity c = tree_laplacian_identity(two.bundle, *tf);
  CHECK(c.rho_hat == doctest::Approx(2.0 * 4.0));
  CHECK(c.relative_error <= 1e-12);
}

TEST_CASE("low temperature examples") {
  auto loop = fixtures::loop(pi);
  auto t = make_forest(loop.bundle, loop.r, {0});
  LowTempReport a = low_temp_demo(loop.bundle, *t, std::nullopt, kBetas);
  for (const auto& p : a.points) {
    CHECK(p.ratio == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.deviation <= 1e-14);
  }

  auto two = fixtures::two_loops();
  auto t1 = make_forest(two.bundle, two.r, {0});
  LowTempReport b = low_temp_demo(two.bundle, *t1, std::nullopt, kBetas);
  CHECK(b.weights == std::vector<double>{1.0, 4.0});
  CHECK(b.monotone);
  REQUIRE(b.points.size() == 5);
  for (std::size_t i = 1; i < b.points.size(); ++i)
    CHECK(b.points[i].deviation < b.points[i - 1].deviation);
  CHECK(b.points.back().deviation < 1e-3);
  // Closed form: L = |rho_1 - 1|^2 e^{-beta} + |rho_2 - 1|^2 e^{-4 beta}, L^T keeps the first term.
  for (const auto& p : b.points) {
    const double lt = 2.0 * std::exp(-p.beta), dl = 4.0 * std::exp(-4 * p.beta);
    CHECK(p.deviation == doctest::Approx(dl / (lt + dl)).epsilon(1e-9));
  }

  CHECK_THROWS_AS(low_temp_demo(two.bundle, *t1, std::vector<double>{1.0, -2.0}, kBetas), Error);
  try {
    validate_low_temp_weights(two.graph, *t1, {3.0, -5.0});
    FAIL("expected InvalidW");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidW);
  }
}

TEST_CASE("gauge check examples") {
  auto th = fixtures::theta();
  GaugeCheckReport id = gauge_invariance_check(th.bundle, th.r, Gauge::identity(th.graph));
  CHECK(id.det_before == id.det_after);
  CHECK(id.forests_equal);

  std::mt19937_64 rng(5);
  Gauge g(th.graph, {std::polar(1.0, gen::phase(rng)), std::polar(1.0, gen::phase(rng))});
  GaugeCheckReport rg = gauge_invariance_check(th.bundle, th.r, g);
  CHECK(rg.relative_difference <= 1e-10);
  CHECK(rg.forests_equal);
  CHECK(rg.passed(1e-10));
}

TEST_CASE("property: projection formula against the complement-projection oracle") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    gen::Case c = gen::random_case(seed);
    ProjectionReport pr = kirchhoff_projection(c.bundle, c.r);
    const Matrix ref = oracle::projection(c.bundle, c.r);
    CHECK(max_abs(pr.p_kirchhoff.matrix - ref) <= 1e-9 * pr.scale);
    CHECK(pr.passed(1e-9));

    std::mt19937_64 rng(seed);
    const Graph& g = c.graph();
    for (int k = 0; k < 10; ++k) {
      ChainVector x = ChainVector::on_edges(g, gen::random_vector(rng, g.num_edges()));
      ChainVector y = ChainVector::on_edges(g, gen::random_vector(rng, g.num_edges()));
      const Complex lhs = modified_ip(pr.p_kirchhoff.apply(x), y, c.r);
      const Complex rhs = modified_ip(x, pr.p_kirchhoff.apply(y), c.r);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * pr.scale * x.norm() * y.norm() * 10.0);
    }
  }
}

TEST_CASE("property: matrix-tree theorem against Leibniz determinant and brute-force forests") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    gen::Case c = gen::random_case(seed);
    const double det = oracle::leibniz_det(oracle::laplacian(c.bundle, c.r)).real();
    const double sum = oracle::weight_sum(oracle::forests(c.bundle, c.r));
    CHECK(std::abs(det - sum) <= 1e-9 * sum);
    MatrixTreeReport m = matrix_tree_report(c.bundle, c.r);
    CHECK(m.relative_error <= 1e-9);
    CHECK(std::abs(m.det_laplacian - det) <= 1e-9 * det);

    ResistanceMap one = ResistanceMap::uniform(c.graph());
    MatrixTreeReport u = matrix_tree_report(c.bundle, one);
    double rho_sum = 0.0;
    for (const auto& f : u.forests) rho_sum += f.rho_hat;
    CHECK(std::abs(u.det_laplacian - rho_sum) <= 1e-9 * rho_sum);
  }
}

TEST_CASE("property: network uniqueness by perturbation") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    gen::Case c = gen::random_case(seed);
    const Graph& g = c.graph();
    std::mt19937_64 rng(seed + 77);
    ChainVector v = ChainVector::on_edges(g, gen::random_vector(rng, g.num_edges()));
    NetworkSolution s = solve_network(c.bundle, c.r, v);
    auto ker = kernel_basis(boundary_operator(c.bundle));
    if (ker.empty()) continue;
    CHECK(s.orthogonality_defect <= 1e-9 * v.norm());
    // Moving z along a kernel direction makes the residual defect grow linearly.
    const Vector& dir = ker[0].coeffs;
    double previous = 0.0;
    for (double t : {1e-3, 1e-2, 1e-1, 1.0}) {
      Vector z2 = s.current.coeffs + t * dir;
      Vector res = v.coeffs;
      for (Eigen::Index b = 0; b < res.size(); ++b) res(b) -= c.r.at(static_cast<std::size_t>(b)) * z2(b);
      const double defect = std::abs(dir.dot(res));
      double rz = 0.0;
      for (Eigen::Index b = 0; b < dir.size(); ++b)
        rz += c.r.at(static_cast<std::size_t>(b)) * std::norm(dir(b));
      CHECK(defect == doctest::Approx(t * rz).epsilon(1e-6));
      CHECK(defect > previous);
      previous = defect;
    }
  }
}

TEST_CASE("property: tree laplacian lemma and low-temperature prefactor") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    gen::Case c = gen::random_case(seed);
    auto found = enumerate_forests(c.bundle, c.r).forests;
    for (const auto& f : found) {
      TreeLaplacianIdentity id = tree_laplacian_identity(c.bundle, f);
      CHECK(id.relative_error <= 1e-9);
      Matrix dt = oracle::boundary(c.bundle)(Eigen::all, std::vector<Eigen::Index>(f.edges.begin(), f.edges.end()));
      CHECK(std::norm(oracle::leibniz_det(dt)) == doctest::Approx(f.rho_hat).epsilon(1e-9));
    }
    const ForestRecord& t = found.front();
    const std::vector<double> w = auto_low_temp_weights(c.graph(), t);
    CHECK_NOTHROW(validate_low_temp_weights(c.graph(), t, w));
    PrefactorCheck pc = prefactor_check(c.bundle, t, w);
    CHECK(pc.relative_error <= 1e-9);
  }
}

TEST_CASE("property: gauge invariance on random graphs") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    gen::Case c = gen::random_case(seed);
    std::mt19937_64 rng(seed);
    std::vector<Complex> values;
    for (std::size_t v = 0; v < c.graph().num_vertices(); ++v)
      values.push_back(std::polar(1.0, gen::phase(rng)));
    GaugeCheckReport r = gauge_invariance_check(c.bundle, c.r, Gauge(c.graph(), values));
    CHECK(r.passed(1e-10));
    CHECK(r.dims_before == r.dims_after);
  }
}

TEST_CASE("determinant and forest sum vanish together as the bundle flattens") {
  double previous = std::numeric_limits<double>::infinity();
  for (double s : {1.0, 1e-1, 1e-2, 1e-3}) {
    auto th = fixtures::theta({0.0, s, 2 * s});
    MatrixTreeReport m = matrix_tree_report(th.bundle, th.r);
    CHECK(m.det_laplacian < previous);
    CHECK(m.relative_error <= 1e-6);
    previous = m.det_laplacian;
  }
  CHECK(previous == doctest::Approx(6e-6).epsilon(1e-3));
}
