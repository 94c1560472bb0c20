#include <doctest.h>

#include <cmath>

#include "rwpoly/dense_oracle.hpp"
#include "rwpoly/generators.hpp"
#include "rwpoly/poly_sparsifier.hpp"
#include "rwpoly/resistance.hpp"
#include "test_util.hpp"

using namespace rwpoly;

TEST_CASE("stage one budget") {
  CHECK(stage_one_edge_budget(PolyCoeffs({1.0}), 3, 3, 0.5, 4.0) == 106);
  const auto m1 = stage_one_edge_budget(PolyCoeffs({0.0, 0.0, 1.0}), 100, 50, 0.5, 4.0);
  const auto m2 = stage_one_edge_budget(PolyCoeffs({0.0, 0.0, 1.0}), 100, 50, 0.25, 4.0);
  CHECK(m2 >= 4 * m1 - 4);
  CHECK(m2 <= 4 * m1);
  // Doubling the edge count doubles the budget.
  const auto m3 = stage_one_edge_budget(PolyCoeffs({0.0, 0.0, 1.0}), 200, 50, 0.5, 4.0);
  CHECK(m3 >= 2 * m1 - 2);
  CHECK(m3 <= 2 * m1);
}

TEST_CASE("stage plan") {
  SparsifyConfig cfg;
  auto small = plan_stages(cfg, 3);
  CHECK_FALSE(small.second_stage);
  CHECK(small.eps1 == 0.5);
  CHECK(small.eps2 == 0.0);
  auto large = plan_stages(cfg, 5000);
  CHECK(large.second_stage);
  CHECK(large.eps1 == doctest::Approx(0.25));
  CHECK(large.eps2 == doctest::Approx(0.25));
  cfg.second_stage = false;
  CHECK_FALSE(plan_stages(cfg, 5000).second_stage);
}

TEST_CASE("config validation") {
  SparsifyConfig cfg;
  cfg.epsilon = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.epsilon = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.epsilon = 0.5;
  cfg.split = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("r=1 reproduces the graph") {
  auto g = testutil::triangle();
  SparsifyConfig cfg;
  cfg.second_stage = false;
  auto h = sparsify_monomial(g, 1, cfg, {1, 0});
  auto rep = similarity_check(dense_laplacian(h), dense_laplacian(g), cfg.epsilon);
  CHECK(rep.pass);
}

TEST_CASE("triangle r=2") {
  auto g = testutil::triangle();
  SparsifyConfig cfg;
  SparsifyStats st;
  auto h = sparsify_monomial(g, 2, cfg, {7, 0}, &st);
  CHECK(st.samples > 0);
  auto rep = similarity_check(dense_laplacian(h), dense_monomial(g, 2), cfg.epsilon);
  CHECK(rep.pass);
}

TEST_CASE("degenerate mixture equals r=1") {
  auto g = gen::erdos_renyi(40, 0.2, {0.5, 2.0}, {2, 31});
  SparsifyConfig cfg;
  auto a = sparsify_poly(g, PolyCoeffs({1.0}), cfg, {3, 0});
  auto b = sparsify_monomial(g, 1, cfg, {3, 0});
  REQUIRE(a.num_edges() == b.num_edges());
  for (std::size_t i = 0; i < a.num_edges(); ++i) CHECK(a.edges()[i] == b.edges()[i]);
}

TEST_CASE("mixture on the triangle") {
  auto g = testutil::triangle();
  SparsifyConfig cfg;
  PolyCoeffs alpha({0.5, 0.5});
  auto h = sparsify_poly(g, alpha, cfg, {4, 0});
  DenseMatrix target = 0.5 * dense_laplacian(g) + 0.5 * dense_monomial(g, 2);
  CHECK((target - dense_poly(g, alpha)).norm() < 1e-12);
  CHECK(similarity_check(dense_laplacian(h), target, cfg.epsilon).pass);
}

TEST_CASE("50-vertex r=5") {
  auto g = gen::erdos_renyi(50, 0.15, {0.5, 2.0}, {5, 32});
  auto target = dense_monomial(g, 5);
  SparsifyConfig cfg;
  int passed = 0;
  for (std::uint64_t s = 0; s < 10; ++s)
    passed += similarity_check(dense_laplacian(sparsify_monomial(g, 5, cfg, {s, 5})), target,
                               cfg.epsilon)
                  .pass;
  CHECK(passed >= 9);
}

TEST_CASE("sparse mixture on 100 vertices") {
  auto g = gen::erdos_renyi(100, 0.06, {0.5, 2.0}, {6, 33});
  PolyCoeffs alpha({0.0, 0.0, 0.25, 0.0, 0.75});
  SparsifyConfig cfg;
  SparsifyStats st;
  auto h = sparsify_poly(g, alpha, cfg, {6, 1}, &st);
  CHECK(similarity_check(dense_laplacian(h), dense_poly(g, alpha), cfg.epsilon).pass);
  if (st.second_stage_ran)
    CHECK(h.num_edges() <= resparsify_budget(100, st.eps2, cfg.c_s));
}

TEST_CASE("second stage bounds the edge count") {
  auto g = gen::erdos_renyi(300, 0.1, {0.5, 2.0}, {7, 34});
  PolyCoeffs alpha({0.0, 1.0});
  SparsifyConfig cfg;
  cfg.epsilon = 1.0;  // eps2 = 0.5 makes the stage-two budget smaller than n(n-1)/2
  SparsifyStats st;
  auto h = sparsify_poly(g, alpha, cfg, {7, 1}, &st);
  REQUIRE(st.second_stage_ran);
  CHECK(h.num_edges() <= resparsify_budget(300, st.eps2, cfg.c_s));
  CHECK(similarity_check(dense_laplacian(h), dense_poly(g, alpha), cfg.epsilon).pass);
}

TEST_CASE("kernel is preserved") {
  auto g = gen::ring(60, 2, {0.5, 2.0}, {8, 35});
  SparsifyConfig cfg;
  auto h = sparsify_poly(g, PolyCoeffs({0.0, 0.5, 0.5}), cfg, {8, 0});
  auto y = laplacian_matvec(h, std::vector<double>(60, 1.0));
  for (double v : y) CHECK(std::abs(v) < 1e-9);
  CHECK(is_connected(h));
}

TEST_CASE("disconnected input") {
  auto g = testutil::make(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
  SparsifyConfig cfg;
  try {
    sparsify_poly(g, PolyCoeffs({0.0, 1.0}), cfg, {9, 0});
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Disconnected);
  }
  cfg.allow_disconnected = true;
  auto h = sparsify_poly(g, PolyCoeffs({0.0, 1.0}), cfg, {9, 0});
  CHECK(similarity_check(dense_laplacian(h), dense_monomial(g, 2), cfg.epsilon).pass);
}
