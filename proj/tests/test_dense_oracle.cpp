#include <doctest.h>

#include <cmath>

#include "rwpoly/dense_oracle.hpp"
#include "rwpoly/generators.hpp"
#include "test_util.hpp"

using namespace rwpoly;
using testutil::make;

TEST_CASE("dense polynomial examples") {
  auto tri = testutil::triangle();
  auto L2 = dense_poly(tri, PolyCoeffs({0.0, 1.0}));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(L2(i, j) == doctest::Approx(i == j ? 1.0 : -0.5));
  CHECK((dense_poly(tri, PolyCoeffs({1.0})) - dense_laplacian(tri)).norm() < 1e-14);
  auto edge = make(2, {{0, 1, 4}});
  CHECK(dense_poly(edge, PolyCoeffs({0.0, 1.0})).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((dense_monomial(tri, 2) - L2).norm() < 1e-14);
}

TEST_CASE("polynomial of a laplacian stays a laplacian") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto g = gen::erdos_renyi(40, 0.2, {0.1, 3.0}, {s, 21});
    auto L = dense_poly(g, PolyCoeffs({0.1, 0.2, 0.3, 0.4}));
    CHECK(is_laplacian(L, g.degrees()));
    auto back = graph_from_laplacian(L);
    CHECK((dense_laplacian(back) - L).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("similarity report") {
  auto g = gen::erdos_renyi(30, 0.3, {0.5, 2.0}, {1, 22});
  auto L = dense_laplacian(g);
  auto same = similarity_check(L, L, 0.0);
  CHECK(same.pass);
  CHECK(same.eps_required < 1e-10);
  CHECK(same.rank == 29);

  auto scaled = similarity_check(1.3 * L, L, 0.5);
  CHECK(scaled.eps_required == doctest::Approx(std::log(1.3)));
  CHECK(scaled.linear_eps == doctest::Approx(0.3));
  CHECK(scaled.pass);
  CHECK_FALSE(similarity_check(1.3 * L, L, 0.2).pass);
  CHECK(linear_similarity_check(1.3 * L, L, 0.31).pass);
  CHECK_FALSE(linear_similarity_check(1.3 * L, L, 0.29).pass);

  auto split = make(4, {{0, 1, 1}, {2, 3, 1}});
  auto joined = make(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
  auto bad = similarity_check(dense_laplacian(split), dense_laplacian(joined), 1.0);
  CHECK(bad.kernel_mismatch);
  CHECK_FALSE(bad.pass);
  CHECK(std::isinf(bad.eps_required));
}

TEST_CASE("similarity is symmetric in its arguments") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto g = gen::erdos_renyi(25, 0.3, {0.5, 2.0}, {s, 23});
    auto h = gen::erdos_renyi(25, 0.3, {0.5, 2.0}, {s, 24});
    auto a = similarity_check(dense_laplacian(g), dense_laplacian(h), 10.0);
    auto b = similarity_check(dense_laplacian(h), dense_laplacian(g), 10.0);
    CHECK(a.eps_required == doctest::Approx(b.eps_required).epsilon(1e-8));
  }
}

TEST_CASE("asymmetric input throws") {
  DenseMatrix X = DenseMatrix::Identity(3, 3);
  X(0, 1) = 0.5;
  CHECK_THROWS_AS(similarity_check(X, DenseMatrix::Identity(3, 3), 0.1), Error);
}

TEST_CASE("exact effective resistance") {
  auto tri = dense_laplacian(testutil::triangle());
  CHECK(exact_er(tri, 0, 1) == doctest::Approx(2.0 / 3));
  auto path = dense_laplacian(make(3, {{0, 1, 1.0}, {1, 2, 0.5}}));
  CHECK(exact_er(path, 0, 2) == doctest::Approx(3.0));
  auto split = dense_laplacian(make(4, {{0, 1, 1}, {2, 3, 1}}));
  CHECK(std::isinf(exact_er(split, 0, 3)));
  CHECK(exact_er(split, 2, 2) == 0.0);
}

TEST_CASE("rank-one graph resistance") {
  // L = D - a a^T / d with D_ii = a_i s / d is the graph with weights a_i a_j / d.
  const std::vector<double> a = {1.0, 2.0, 0.5, 3.0};
  const double d = 2.0;
  double s = 0;
  for (double x : a) s += x;
  std::vector<Edge> e;
  for (Vertex i = 0; i < a.size(); ++i)
    for (Vertex j = i + 1; j < a.size(); ++j) e.push_back({i, j, a[i] * a[j] / d});
  auto L = dense_laplacian(make(a.size(), e));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      CHECK(exact_er(L, i, j) == doctest::Approx(d / s * (1 / a[i] + 1 / a[j])));
  auto pair = dense_laplacian(make(2, {{0, 1, 1.0}}));
  CHECK(exact_er(pair, 0, 1) == doctest::Approx(1.0));
}

TEST_CASE("resistance is a metric") {
  auto g = gen::erdos_renyi(30, 0.2, {0.2, 4.0}, {2, 25});
  auto R = exact_er_matrix(dense_laplacian(g));
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j)
      for (int k = 0; k < 30; k += 3) CHECK(R(i, j) <= R(i, k) + R(k, j) + 1e-9);
}

TEST_CASE("two-step supports") {
  auto tri = testutil::triangle();
  CHECK(support_check(tri, 1).pass);
  auto r3 = support_check(tri, 3);
  CHECK(r3.pass);
  CHECK(r3.pencil.lambda_min == doctest::Approx(0.75));
  CHECK(r3.pencil.lambda_max == doctest::Approx(0.75));
  auto g = gen::erdos_renyi(80, 0.1, {0.5, 2.0}, {3, 26});
  for (std::size_t r : {2, 4, 6}) {
    auto rep = support_check(g, r);
    CHECK(rep.pass);
    CHECK(rep.lower == 1.0);
    CHECK(rep.upper == doctest::Approx(r / 2.0));
  }
}

TEST_CASE("enumeration") {
  auto edge = make(2, {{0, 1, 1}});
  auto e2 = enumerate_paths(edge, 2);
  CHECK(e2.walks.size() == 2);
  CHECK(e2.total_mass == doctest::Approx(4.0));
  auto tri = testutil::triangle();
  CHECK(enumerate_paths(tri, 2).walks.size() == 12);
  CHECK(enumerate_paths(tri, 2).total_mass == doctest::Approx(12.0));
  CHECK(enumerate_paths(tri, 1).walks.size() == 6);
  CHECK(enumerate_paths(tri, 1).total_mass == doctest::Approx(6.0));
  CHECK_THROWS_AS(enumerate_paths(gen::path(9), 2), Error);
  CHECK_THROWS_AS(enumerate_paths(tri, 6), Error);
}

TEST_CASE("scalar inequalities") {
  auto res = scalar_inequality_suite();
  CHECK(res.checks > 0);
  CHECK(res.ok());
  // Edge values.
  const double l1 = 1 - 1e-6;
  for (int r : {1, 3, 8}) {
    CHECK((1 - std::pow(l1, 2 * r + 1)) / (1 - l1) == doctest::Approx(2 * r + 1).epsilon(1e-4));
    CHECK((1 - std::pow(l1, 2 * r)) / (1 - l1 * l1) == doctest::Approx(r).epsilon(1e-4));
  }
  const double lm = -1 + 1e-6;
  CHECK(0.5 * (1 - lm) <= 1 - std::pow(lm, 3));
}

TEST_CASE("size guard") {
  auto big = gen::path(600);
  CHECK_THROWS_AS(dense_poly(big, PolyCoeffs({1.0})), Error);
  CHECK_NOTHROW(dense_poly(big, PolyCoeffs({1.0}), 1000));
}
