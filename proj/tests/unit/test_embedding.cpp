#include <doctest.h>

#include <cmath>
#include <random>

#include "fuzzycoarse/embedding.hpp"
#include "support.hpp"

using namespace fuzzycoarse;

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dist_sq(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

std::vector<HeightRow> sliding(std::size_t n, std::size_t half) {
  std::vector<HeightRow> rows(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x >= half ? x - half : 0; y <= std::min(n - 1, x + half); ++y) rows[x].push_back({y, 1});
  return rows;
}

// Two clusters {0,1,2} and {3,4,5} at distance 1000; A_x is the cluster of x.
FuzzySpace two_clusters() {
  Matrix d(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      d(i, j) = i == j ? 0.0 : ((i < 3) == (j < 3) ? 1.0 : 1000.0);
  return FuzzySpace::standard("clusters", PointSet::numbered(6), d);
}

WitnessFamily cluster_witness() {
  std::vector<HeightRow> rows(6);
  for (std::size_t x = 0; x < 6; ++x) rows[x] = {{x < 3 ? 0 : 3, 1}};
  return WitnessFamily::from_heights(rows);
}

Family whole_plus_blocks(std::size_t n, std::size_t block) {
  Family f(1);
  for (std::size_t x = 0; x < n; ++x) f[0].push_back(x);
  for (std::size_t lo = 0; lo < n; lo += block) {
    PointSubset b;
    for (std::size_t x = lo; x < std::min(n, lo + block); ++x) b.push_back(x);
    f.push_back(b);
  }
  return f;
}

}  // namespace

TEST_CASE("unit vectors from a witness") {
  FuzzySpace p = fctest::path_space(2);
  const ParamTuple close{1.0, Radius::from_r(0.6), 1.0};
  SUBCASE("equal sets") {
    auto f = ace_vectors(p, WitnessFamily::from_heights({{{0, 3}}, {{0, 3}}}), close);
    CHECK(f.inner(0, 1) == 1.0);
    CHECK(f.distance_sq(0, 1) == 0.0);
  }
  SUBCASE("four and four sharing three") {
    auto f = ace_vectors(p, WitnessFamily::from_pairs({{{0, 1}, {0, 2}, {0, 3}, {0, 4}}, {{0, 1}, {0, 2}, {0, 3}, {1, 1}}}),
                         close);
    CHECK(f.inner(0, 1) == doctest::Approx(0.75));
    CHECK(f.distance_sq(0, 1) == doctest::Approx(0.5));
    CHECK(f.lemma_check(p).passed);
  }
  SUBCASE("disjoint sets") {
    auto f = ace_vectors(p, WitnessFamily::from_heights({{{0, 2}}, {{1, 5}}}), ParamTuple{1.0, Radius::from_r(0.1), 1.0});
    CHECK(f.inner(0, 1) == 0.0);
    CHECK(f.distance_sq(0, 1) == 2.0);
    CHECK(f.disjoint(0, 1));
  }
  CHECK_THROWS_AS(ace_vectors(p, WitnessFamily::from_heights({{{0, 2}}, {{1, 5}}}), close), DomainError);
}

TEST_CASE("unit vectors agree with dense coordinates") {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<std::uint64_t> h(20, 40);
  FuzzySpace p = fctest::path_space(10);
  const ParamTuple par{2.0, Radius::from_r(0.6), 1.0};
  int used = 0;
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<HeightRow> rows(10);
    for (std::size_t x = 0; x < 10; ++x)
      for (std::size_t y = x >= 1 ? x - 1 : 0; y <= std::min<std::size_t>(9, x + 1); ++y) rows[x].push_back({y, h(rng)});
    const WitnessFamily w = WitnessFamily::from_heights(rows);
    if (!verify_witness(p, w, par).passed) continue;
    auto f = ace_vectors(p, w, par);
    ++used;
    std::vector<std::vector<double>> v;
    for (std::size_t x = 0; x < 10; ++x) v.push_back(f.dense(x));
    for (std::size_t x = 0; x < 10; ++x) {
      CHECK(dot(v[x], v[x]) == doctest::Approx(1.0).epsilon(1e-14));
      for (std::size_t y = 0; y < 10; ++y) {
        CHECK(f.inner(x, y) == doctest::Approx(dot(v[x], v[y])).epsilon(1e-13));
        CHECK(f.distance_sq(x, y) == doctest::Approx(dist_sq(v[x], v[y])).epsilon(1e-12).scale(1e-12));
      }
    }
    auto lc = f.lemma_check(p);
    CHECK(lc.passed);
    CHECK(lc.close_pairs == 9);
    CHECK(lc.max_distance_sq < 2.0 * 2.0 / 4.0);
  }
  CHECK(used > 5);
}

TEST_CASE("embedding configuration") {
  EmbeddingConfig cfg;
  CHECK(cfg.r(3) == doctest::Approx(0.75));
  CHECK(cfg.eps(3) == 0.125);
  CHECK(cfg.level_params(2).eps == 1.0 / 16.0);
  CHECK(cfg.level_params(2).t == 2.0);
  cfg.r_ladder = {0.5, 0.4, 0.9, 0.95, 0.96, 0.97};
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.r_ladder = {0.5, 0.6};
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.levels = 0;
  cfg.r_ladder.clear();
  CHECK_THROWS_AS(cfg.validate(), DomainError);

  FuzzySpace p = fctest::path_space(4);
  EmbeddingConfig three;
  three.levels = 3;
  CHECK_THROWS_AS(build_embedding(p, {WitnessFamily::from_heights(std::vector<HeightRow>(4, HeightRow{{0, 1}}))}, three),
                  DomainError);
}

TEST_CASE("constant witness collapses the embedding") {
  FuzzySpace p = fctest::path_space(8);
  EmbeddingConfig cfg;
  cfg.levels = 4;
  cfg.base = 3;
  const WitnessFamily w = WitnessFamily::from_heights(std::vector<HeightRow>(8, HeightRow{{5, 2}}));
  auto e = build_embedding(p, std::vector<WitnessFamily>(4, w), cfg);
  for (std::size_t x = 0; x < 8; ++x) {
    CHECK(e.base_norm_sq[x] == 0.0);
    for (std::size_t y = 0; y < 8; ++y) CHECK(e.distance(x, y) == 0.0);
  }
  CHECK(e.tail_bound == 1.0 / 16.0);
}

TEST_CASE("separated clusters give sqrt2 blocks") {
  FuzzySpace s = two_clusters();
  EmbeddingConfig cfg;
  cfg.levels = 2;
  const WitnessFamily w = cluster_witness();
  auto e = build_embedding(s, {w, w}, cfg);
  CHECK(e.base_norm_sq[0] == 0.0);
  CHECK(e.window_without_sqrt2 == 0);
  CHECK(e.sqrt2_without_window == 0);
  CHECK(e.bound_failures == 0);
  for (std::size_t x = 0; x < 6; ++x)
    for (std::size_t y = x + 1; y < 6; ++y) {
      const auto& d = e.pair(x, y);
      const bool across = (x < 3) != (y < 3);
      CHECK(d.sqrt2_count == (across ? 2u : 0u));
      CHECK(d.window_count == (across ? 2u : 0u));
      CHECK(d.dist_sq == (across ? 4.0 : 0.0));
      // close at level n iff n/(n+d) > 1/(n+1)
      std::size_t npp = 0;
      for (std::size_t n = 1; n <= 2; ++n) {
        const double dd = across ? 1000.0 : 1.0;
        if (!(n / (n + dd) - 1.0 / (n + 1.0) > 1e-12)) npp = n;
      }
      CHECK(d.n_double_prime == npp);
    }
  // Distance exactly 2 with two sqrt2 blocks meets the R = 2 cap of 2.
  CHECK(e.count_failures == std::vector<std::size_t>{0, 0, 0});

  for (std::size_t n = 1; n <= 2; ++n) {
    const auto a = e.block(1, n), b = e.block(4, n);
    CHECK(dist_sq(a, b) == doctest::Approx(e.pair(1, 4).blocks_sq[n - 1]));
    CHECK(dot(e.block(0, n), e.block(0, n)) == 0.0);
  }
  CHECK(e.orthogonality_error < 1e-12);

  auto rep = distortion_report(s, e);
  CHECK(rep.passed);
  CHECK(rep.max_window_count == std::vector<std::size_t>{0, 2, 2});
  for (const auto& row : rep.rows) {
    if (row.x == row.y) {
      CHECK(row.sup_m == 1.0);
      CHECK(row.distance == 0.0);
    } else {
      CHECK(row.sup_m < 1.0);
    }
  }
}

TEST_CASE("distortion report monotonicity scan") {
  FuzzySpace p = fctest::path_space(16);
  EmbeddingConfig cfg;
  cfg.levels = 1;
  std::vector<HeightRow> rows = sliding(16, 2);
  auto e = build_embedding(p, {WitnessFamily::from_heights(rows)}, cfg);
  // |A_x| and |A_x ∩ A_0| by hand: A_0 = {0,1,2}
  const std::vector<double> inter{3, 3, 3, 2, 1, 0, 0};
  const std::vector<double> size{3, 4, 5, 5, 5, 5, 5};
  for (std::size_t x = 1; x < 7; ++x)
    CHECK(e.distance(0, x) * e.distance(0, x) == doctest::Approx(2.0 - 2.0 * inter[x] / std::sqrt(3.0 * size[x])));
  auto rep = distortion_report(p, e);
  CHECK(rep.monotone_violations == 0);
  CHECK(rep.passed);

  rows[5] = rows[0];
  auto bent = build_embedding(p, {WitnessFamily::from_heights(rows)}, cfg);
  CHECK(bent.distance(0, 5) == 0.0);
  CHECK(distortion_report(p, bent).monotone_violations == 1);
}

TEST_CASE("cover witnesses on the path") {
  FuzzySpace p = fctest::path_space(64);
  EmbeddingConfig cfg;
  const auto ws = level_witnesses_from_cover(p, whole_plus_blocks(64, 16), cfg, 1);
  REQUIRE(ws.size() == 6);
  auto e = build_embedding(p, ws, cfg);
  CHECK(e.window_without_sqrt2 == 0);
  CHECK(e.sqrt2_without_window == 0);
  CHECK(e.bound_failures == 0);
  CHECK(e.count_failures == std::vector<std::size_t>{0, 0, 0});
  CHECK(e.orthogonality_error < 1e-12);
  for (const auto& f : e.levels) CHECK(f.lemma_check(p).passed);

  for (const auto& d : e.pairs) {
    const double dd = static_cast<double>(d.y - d.x);
    std::size_t npp = 0;
    for (std::size_t n = 1; n <= 6; ++n)
      if (!(n / (n + dd) - 1.0 / (n + 1.0) > 1e-12)) npp = n;
    CHECK(d.n_double_prime == npp);
    CHECK(d.dist_sq < 4.0 * static_cast<double>(npp) + 1.0);
  }

  // Dense recomputation of the two lowest levels on a sample of pairs.
  for (auto [x, y] : std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {15, 16}, {3, 40}, {31, 63}}) {
    for (std::size_t n = 1; n <= 2; ++n) {
      const auto a = e.levels[n - 1].dense(x), b = e.levels[n - 1].dense(y);
      CHECK(dist_sq(a, b) == doctest::Approx(e.pair(x, y).blocks_sq[n - 1]).epsilon(1e-12).scale(1e-12));
    }
  }

  auto rep = distortion_report(p, e);
  CHECK(rep.expansive_failures == 0);
  CHECK(rep.boundary_cases > 0);
  CHECK(rep.passed);
}
