#include <doctest.h>

#include <random>

#include "distrecon/exact.hpp"
#include "distrecon/geometry.hpp"
#include "oracles.hpp"

using namespace distrecon;

namespace {

SquaredDistanceMatrix triangle(double a, double b, double c) {
  // a = |v1 v2|, b = |v1 v3|, c = |v2 v3|
  Eigen::MatrixXd m(3, 3);
  m << 0, a * a, b * b, a * a, 0, c * c, b * b, c * c, 0;
  return SquaredDistanceMatrix(m);
}

SquaredDistanceMatrix line(std::vector<double> xs) {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) p(static_cast<Eigen::Index>(i), 0) = xs[i];
  return SquaredDistanceMatrix::from_points(PointConfig(1, p));
}

PointConfig pts2(std::initializer_list<std::pair<double, double>> xs) {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(xs.size()), 2);
  Eigen::Index i = 0;
  for (auto [x, y] : xs) {
    p(i, 0) = x;
    p(i, 1) = y;
    ++i;
  }
  return PointConfig(2, p);
}

}  // namespace

TEST_CASE("gram matrix examples") {
  const GramMatrix g = gram_from_distances(triangle(3, 4, 5), 2);
  CHECK(g.entries.isApprox((Eigen::Matrix2d() << 16, 16, 16, 25).finished()));
  CHECK(g.order == std::vector<int>{0, 1});

  Eigen::MatrixXd twin = Eigen::MatrixXd::Zero(2, 2);
  CHECK(gram_from_distances(SquaredDistanceMatrix(twin), 1).entries == Eigen::MatrixXd::Zero(1, 1));

  const GramMatrix c = gram_from_distances(line({0, 1, 3}), 2);
  CHECK(c.entries.isApprox((Eigen::Matrix2d() << 9, 6, 6, 4).finished()));
  CHECK(c.entries.determinant() == doctest::Approx(0.0));
}

TEST_CASE("gram matrix rejects bad input") {
  SquaredDistanceMatrix d(3);
  CHECK_THROWS_AS(gram_from_distances(d, 0), Error);
  Eigen::MatrixXd neg(2, 2);
  neg << 0, -1, -1, 0;
  CHECK_THROWS_AS(SquaredDistanceMatrix{neg}, Error);
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 2, 0;
  CHECK_THROWS_AS(SquaredDistanceMatrix{asym}, Error);
}

TEST_CASE("positive definiteness examples") {
  for (bool exact : {false, true}) {
    Tolerance tol;
    tol.exact_mode = exact;
    CHECK(is_positive_definite((Eigen::MatrixXd(2, 2) << 16, 16, 16, 25).finished(), tol));
    CHECK_FALSE(is_positive_definite((Eigen::MatrixXd(2, 2) << 9, 6, 6, 4).finished(), tol));
    CHECK(is_positive_definite((Eigen::MatrixXd(1, 1) << 1).finished(), tol));
  }
}

TEST_CASE("independence examples") {
  CHECK(is_independent(triangle(3, 4, 5), 2));
  CHECK_FALSE(is_independent(line({0, 1, 3}), 2));
  CHECK(is_independent(SquaredDistanceMatrix(Eigen::MatrixXd::Zero(1, 1)), 0));
  CHECK_THROWS_AS(is_independent(triangle(3, 4, 5), 1), Error);
}

TEST_CASE("independence verdict does not depend on the anchor") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 4;
    auto pts = oracle::random_integer_points(rng, d + 1, d, -3, 3);
    const auto D = SquaredDistanceMatrix::from_points(oracle::to_config(pts, d));
    const bool first = is_positive_definite(gram_from_distances(D, 0));
    for (int a = 1; a <= d; ++a) CHECK(is_positive_definite(gram_from_distances(D, a)) == first);
  }
}

TEST_CASE("embedding examples") {
  Eigen::MatrixXd sq(4, 4);
  sq << 0, 1, 2, 1, 1, 0, 1, 2, 2, 1, 0, 1, 1, 2, 1, 0;
  const PointConfig p = embed_from_distances(SquaredDistanceMatrix(sq), 2);
  CHECK(p.dim == 2);
  CHECK(p.coords.row(0).norm() == doctest::Approx(0.0));
  const auto back = SquaredDistanceMatrix::from_points(p);
  CHECK((back.entries() - sq).cwiseAbs().maxCoeff() < 1e-9);

  const PointConfig single = embed_from_distances(SquaredDistanceMatrix(Eigen::MatrixXd::Zero(1, 1)), 0);
  CHECK(single.size() == 1);
  CHECK(single.dim == 0);

  CHECK_THROWS_WITH_AS(embed_from_distances(triangle(3, 4, 5), 1), doctest::Contains("RankTooHigh"), Error);
}

TEST_CASE("embedding rejects non-Euclidean input") {
  // Triangle inequality violated.
  CHECK_THROWS_WITH_AS(embed_from_distances(triangle(1, 1, 3), 2), doctest::Contains("NonEuclidean"), Error);
}

TEST_CASE("embedding is deterministic and round-trips integer configurations") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 4;
    const int n = 2 + trial % 30;
    const auto cfg = oracle::to_config(oracle::random_integer_points(rng, n, d), d);
    const auto D = SquaredDistanceMatrix::from_points(cfg);
    const PointConfig a = embed_from_distances(D, d);
    const PointConfig b = embed_from_distances(D, d);
    CHECK(a.coords == b.coords);
    CHECK((SquaredDistanceMatrix::from_points(a).entries() - D.entries()).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("missing distance examples") {
  {
    // T = {0, 1} on a line, u = 3, v = 5.
    auto D = line({0, 1, 3, 5});
    D.forget(2, 3);
    const Recovery r = recover_missing_distance(D, 1, 2, 3);
    REQUIRE(r.determined());
    CHECK(r.dist2 == doctest::Approx(4.0));
  }
  {
    auto D = SquaredDistanceMatrix::from_points(pts2({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}}));
    CHECK(D(3, 0) == 2);
    CHECK(D(4, 2) == 5);
    D.forget(3, 4);
    const Recovery r = recover_missing_distance(D, 2);
    REQUIRE(r.determined());
    CHECK(r.dist2 == doctest::Approx(2.0));
  }
  {
    auto D = SquaredDistanceMatrix::from_points(pts2({{0, 0}, {1, 0}, {0, 1}, {0.3, 0.7}, {0.3, 0.7}}));
    D.forget(3, 4);
    const Recovery r = recover_missing_distance(D, 2);
    REQUIRE(r.determined());
    CHECK(r.dist2 == doctest::Approx(0.0));
  }
}

TEST_CASE("missing distance refuses to choose on a dependent base") {
  // u and its mirror image across the line through T give two candidates.
  auto D = SquaredDistanceMatrix::from_points(pts2({{0, 0}, {1, 0}, {2, 0}, {1, 1}, {3, 2}}));
  auto mirrored = SquaredDistanceMatrix::from_points(pts2({{0, 0}, {1, 0}, {2, 0}, {1, -1}, {3, 2}}));
  CHECK(D(3, 4) != mirrored(3, 4));
  D.forget(3, 4);
  CHECK_FALSE(recover_missing_distance(D, 2).determined());
}

TEST_CASE("missing distance detects inconsistent input") {
  // u claims distance 1 to both ends of a segment of length 3: not placeable.
  Eigen::MatrixXd m(4, 4);
  const double nan = SquaredDistanceMatrix::kUnknown;
  m << 0, 9, 1, 4, 9, 0, 1, 1, 1, 1, 0, nan, 4, 1, nan, 0;
  CHECK_THROWS_WITH_AS(recover_missing_distance(SquaredDistanceMatrix(m), 1, 2, 3),
                       doctest::Contains("InconsistentDistances"), Error);
}

TEST_CASE("missing distance in dimension zero") {
  Eigen::MatrixXd m(3, 3);
  const double nan = SquaredDistanceMatrix::kUnknown;
  m << 0, 0, 0, 0, 0, nan, 0, nan, 0;
  const Recovery r = recover_missing_distance(SquaredDistanceMatrix(m), 0, 1, 2);
  REQUIRE(r.determined());
  CHECK(r.dist2 == 0.0);
}

TEST_CASE("missing distance matches ground truth on random integer bases") {
  std::mt19937_64 rng(17);
  int determined = 0, dependent = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 1 + trial % 4;
    auto pts = oracle::random_integer_points(rng, d + 3, d, -2, 2);
    const auto cfg = oracle::to_config(pts, d);
    auto D = SquaredDistanceMatrix::from_points(cfg);
    const double truth = D(d + 1, d + 2);
    D.forget(d + 1, d + 2);
    std::vector<int> base(static_cast<std::size_t>(d + 1));
    std::iota(base.begin(), base.end(), 0);
    const bool independent = oracle::affine_rank(pts, base) == d;
    const Recovery r = recover_missing_distance(D, d, d + 1, d + 2);
    CHECK(r.determined() == independent);
    if (r.determined()) {
      CHECK(std::abs(r.dist2 - truth) < 1e-6);
      ++determined;
    } else {
      ++dependent;
    }
  }
  CHECK(determined > 0);
  CHECK(dependent > 0);
}

TEST_CASE("affine dimension examples") {
  CHECK(affine_dimension(pts2({{0, 0}, {1, 1}, {3, 3}})) == 1);
  CHECK(affine_dimension(pts2({{4, 2}})) == 0);
  CHECK(affine_dimension(pts2({{0, 0}, {1, 0}, {0, 1}})) == 2);
  CHECK(affine_dimension(pts2({{1, 1}, {1, 1}, {1, 1}})) == 0);
  CHECK_THROWS_AS(affine_dimension(PointConfig::zeros(0, 2)), Error);
  Tolerance exact;
  exact.exact_mode = true;
  CHECK(affine_dimension(pts2({{0, 0}, {1, 1}, {3, 3}}), exact) == 1);
}

TEST_CASE("projection examples") {
  const PointConfig axis = pts2({{0, 0}, {1, 0}});
  const Projection a = project_onto_span(Eigen::Vector2d(3, 4), axis);
  CHECK(a.point.isApprox(Eigen::Vector2d(3, 0)));
  CHECK(a.dist2 == doctest::Approx(16.0));

  const Projection b = project_onto_span(Eigen::Vector2d(5, 0), axis);
  CHECK(b.dist2 == doctest::Approx(0.0));

  const Projection c = project_onto_span(Eigen::Vector2d(0, 2), axis);
  CHECK(c.point.norm() == doctest::Approx(0.0));
  CHECK(c.dist2 == doctest::Approx(4.0));

  CHECK_THROWS_WITH_AS(project_onto_span(Eigen::Vector2d(0, 2), pts2({{0, 0}, {0, 0}})),
                       doctest::Contains("DegenerateBasis"), Error);
}

TEST_CASE("projection satisfies Pythagoras") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const PointConfig basis = pts2({{u(rng), u(rng)}, {u(rng), u(rng)}});
    const Eigen::Vector2d x(u(rng), u(rng));
    const Projection p = project_onto_span(x, basis);
    for (int i = 0; i < 2; ++i) {
      const Eigen::Vector2d b = basis.point(i);
      CHECK((x - b).squaredNorm() == doctest::Approx((p.point - b).squaredNorm() + p.dist2));
    }
  }
}

TEST_CASE("exact rank agrees with the integer oracle") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 1 + trial % 4;
    auto pts = oracle::random_integer_points(rng, d + 1, d, -2, 2);
    Eigen::MatrixXd diffs(d, d);
    for (int a = 1; a <= d; ++a)
      for (int c = 0; c < d; ++c) diffs(a - 1, c) = static_cast<double>(pts[a][c] - pts[0][c]);
    std::vector<int> all(static_cast<std::size_t>(d + 1));
    std::iota(all.begin(), all.end(), 0);
    CHECK(exact::rank(diffs) == oracle::affine_rank(pts, all));
  }
}

TEST_CASE("tolerance validation") {
  Tolerance t;
  CHECK_NOTHROW(t.validate());
  t.eps_rel = 0.0;
  CHECK_THROWS_AS(t.validate(), Error);
  t.eps_rel = 1.0;
  CHECK_THROWS_AS(t.validate(), Error);
}

TEST_CASE("reference scale floors relative thresholds") {
  // Two points 1e-9 apart: independent on their own scale, not inside a unit instance.
  SquaredDistanceMatrix tiny(2);
  tiny.set(0, 1, 1e-18);
  CHECK(is_independent(tiny, 1));
  Tolerance unit;
  unit.reference_scale = 1.0;
  CHECK_FALSE(is_independent(tiny, 1, unit));

  Tolerance bad;
  bad.reference_scale = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}
