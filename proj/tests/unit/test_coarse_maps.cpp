#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fuzzycoarse/coarse_maps.hpp"
#include "support.hpp"

using namespace fuzzycoarse;

namespace {

PointMap doubling(std::size_t n) {
  PointMap f;
  for (std::size_t x = 0; x < n; ++x) f.image.push_back(2 * x);
  return f;
}

PointMap constant(std::size_t n, std::size_t v) { return PointMap{std::vector<std::size_t>(n, v)}; }

// Path space relabeled by pi: the point at position k is pi[k] on the line.
FuzzySpace relabeled_path(const std::vector<std::size_t>& pi) {
  const std::size_t n = pi.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d(i, j) = std::abs(static_cast<double>(pi[i]) - static_cast<double>(pi[j]));
  return FuzzySpace::standard("relabeled", PointSet::numbered(n), d);
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

TEST_CASE("uniformly expansive examples") {
  FuzzySpace p = fctest::path_space(16);
  SUBCASE("identity dominates its threshold") {
    auto tab = check_uniformly_expansive(p, p, PointMap::identity(16));
    CHECK(tab.passed);
    CHECK(tab.rows.size() == 5 * p.grid().size());
    for (const auto& r : tab.rows) CHECK(r.value >= r.threshold);
  }
  SUBCASE("constant map") {
    auto tab = check_uniformly_expansive(p, p, constant(16, 3));
    for (const auto& r : tab.rows) CHECK(r.value == 1.0);
  }
  SUBCASE("inclusion matches pair enumeration") {
    FuzzySpace small = fctest::path_space(32);
    FuzzySpace big = fctest::path_space(64);
    auto tab = check_uniformly_expansive(small, big, PointMap::identity(32));
    const double tp = big.grid_max();
    for (const auto& r : tab.rows) {
      double b = 1.0;
      for (int x = 0; x < 32; ++x)
        for (int y = 0; y < 32; ++y) {
          const double d = std::abs(x - y);
          if (r.t / (r.t + d) >= r.threshold) b = std::min(b, tp / (tp + d));
        }
      CHECK(r.value == doctest::Approx(b).epsilon(1e-14));
    }
  }
}

TEST_CASE("effectively proper examples") {
  FuzzySpace p = fctest::path_space(16);
  auto id = check_effectively_proper(p, p, PointMap::identity(16));
  CHECK(id.passed);
  CHECK(id.trend_ok);
  for (const auto& r : id.rows) CHECK(r.value >= r.threshold);

  FuzzySpace two = fctest::path_space(2);
  auto c = check_effectively_proper(two, two, constant(2, 0));
  CHECK(c.passed);
  CHECK_FALSE(c.trend_ok);
  for (const auto& r : c.rows) CHECK(r.value == doctest::Approx(1000.0 / 1001.0));

  auto dbl = check_effectively_proper(fctest::path_space(32), fctest::path_space(64), doubling(32));
  CHECK(dbl.passed);
  CHECK(dbl.trend_ok);
  auto rep = check_coarse_map(fctest::path_space(32), fctest::path_space(64), doubling(32));
  CHECK(rep.embedding);
  CHECK_FALSE(check_coarse_map(two, two, constant(2, 1)).embedding);
}

TEST_CASE("closeness and coarse surjectivity") {
  FuzzySpace p = fctest::path_space(64);
  auto same = check_closeness(p, doubling(32), doubling(32));
  REQUIRE(same);
  CHECK(same->min_closeness == 1.0);

  auto surj = check_coarsely_onto(p, PointMap::identity(64));
  REQUIRE(surj);
  CHECK(coarsely_onto_at(p, PointMap::identity(64), Scale{Radius::from_r(1e-9), 1e-3}));

  CHECK(coarsely_onto_at(p, doubling(32), Scale{Radius::from_r(0.6), 1.0}));
  CHECK_FALSE(coarsely_onto_at(p, doubling(32), Scale{Radius::from_r(0.4), 1.0}));
  auto onto = check_coarsely_onto(p, doubling(32));
  REQUIRE(onto);
  CHECK(onto->min_closeness == doctest::Approx(1000.0 / 1001.0));
  CHECK(coarsely_onto_at(p, doubling(32), onto->scale));

  auto shifted = check_closeness(p, PointMap::identity(64), PointMap{[] {
                                   std::vector<std::size_t> v(64);
                                   for (std::size_t i = 0; i < 64; ++i) v[i] = std::min<std::size_t>(63, i + 2);
                                   return v;
                                 }()});
  REQUIRE(shifted);
  CHECK(shifted->min_closeness == doctest::Approx(1000.0 / 1002.0));
}

TEST_CASE("coarse inverse search") {
  FuzzySpace p = fctest::path_space(12);
  auto id = find_coarse_inverse(p, p, PointMap::identity(12));
  REQUIRE(id.inverse);
  CHECK(*id.inverse == PointMap::identity(12));

  std::vector<std::size_t> pi{3, 7, 0, 11, 5, 1, 9, 2, 10, 4, 8, 6};
  FuzzySpace q = relabeled_path(pi);
  // f sends position k of the relabeled space to line point pi[k].
  auto rel = find_coarse_inverse(q, p, PointMap{pi});
  REQUIRE(rel.inverse);
  for (std::size_t k = 0; k < 12; ++k) CHECK((*rel.inverse)(pi[k]) == k);

  auto dbl = find_coarse_inverse(fctest::path_space(32), fctest::path_space(64), doubling(32));
  REQUIRE(dbl.inverse);
  CHECK(dbl.failures.empty());
  for (std::size_t y = 0; y < 64; ++y) CHECK((*dbl.inverse)(y) == y / 2);
}

TEST_CASE("transport along the identity canonicalizes") {
  FuzzySpace p = fctest::path_space(6);
  std::vector<PairRow> rows(6);
  for (std::size_t x = 0; x < 6; ++x) rows[x] = {{x, 2}, {x, 5}, {(x + 1) % 6, 3}};
  WitnessFamily w = WitnessFamily::from_pairs(rows);
  auto tr = transport_witness(PointMap::identity(6), PointMap::identity(6), w, 6);
  CHECK(tr.structural_ok);
  CHECK(tr.cardinality_preserved);
  for (std::size_t x = 0; x < 6; ++x) {
    CHECK(tr.witness[x].size() == w[x].size());
    CHECK(tr.witness[x].projection() == w[x].projection());
    CHECK(tr.witness[x].at(x)->prefix_height() == 2u);
  }
}

TEST_CASE("transport along a relabeling keeps every ratio") {
  std::vector<std::size_t> pi(20);
  std::iota(pi.begin(), pi.end(), 0);
  std::mt19937_64 rng(5);
  std::shuffle(pi.begin(), pi.end(), rng);
  FuzzySpace x = fctest::path_space(20);
  FuzzySpace y = relabeled_path(pi);
  // f: line point v goes to the position holding v.
  PointMap f, g{pi};
  f.image.resize(20);
  for (std::size_t k = 0; k < 20; ++k) f.image[pi[k]] = k;
  ParamTuple p{1.0, Radius::from_r(0.6), 1.0};
  auto built = construct_from_cover(x, whole_plus_blocks(20, 5), p, 1);
  REQUIRE(built.passed);
  auto tr = transport_witness(f, g, built.witness, 20);
  auto cx = verify_witness(x, built.witness, p);
  auto cy = verify_witness(y, tr.witness, p);
  CHECK(cy.passed);
  CHECK(cy.worst_ratio == doctest::Approx(cx.worst_ratio).epsilon(1e-15));
  CHECK(cy.close_pairs == cx.close_pairs);
}

TEST_CASE("transport from a net into the path space") {
  FuzzySpace big = fctest::path_space(64);
  PointSubset evens;
  for (std::size_t v = 0; v < 64; v += 2) evens.push_back(v);
  FuzzySpace net = big.subspace(evens, "evens");
  PointMap inclusion{evens};
  PointMap retract = nearest_retraction(big, evens);
  ParamTuple pn{1.0, Radius::from_r(0.6), 2.0};
  auto built = construct_from_cover(net, whole_plus_blocks(32, 8), pn, 1);
  REQUIRE(built.passed);

  auto tr = transport_witness(inclusion, retract, built.witness, 64);
  CHECK(tr.structural_ok);
  CHECK(tr.cardinality_preserved);
  ParamTuple py{1.0, Radius::from_r(0.6), 1.0};
  auto cert = verify_witness(big, tr.witness, py);
  CHECK(cert.passed);

  // Matched-pair inequality: counts on Y dominate those of the pulled-back pair.
  for (std::size_t a = 0; a < 64; ++a)
    for (std::size_t b = a + 1; b < 64; ++b) {
      if (!big.close(a, b, py.scale())) continue;
      const auto cy = compare_sets(tr.witness[a], tr.witness[b]);
      const auto cx = compare_sets(built.witness[retract(a)], built.witness[retract(b)]);
      CHECK(cy.symmetric_difference <= cx.symmetric_difference);
      CHECK(cy.intersection >= cx.intersection);
    }
}

TEST_CASE("restriction to subspaces") {
  FuzzySpace p = fctest::path_space(64);
  ParamTuple par{1.0, Radius::from_r(0.7), 1.0};
  auto built = construct_from_cover(p, whole_plus_blocks(64, 16), par, 1);
  REQUIRE(built.passed);

  PointSubset all(64);
  std::iota(all.begin(), all.end(), 0);
  auto same = restrict_witness(p, all, built.witness);
  CHECK(same.retraction == PointMap::identity(64));
  for (std::size_t x = 0; x < 64; ++x) CHECK(same.transport.witness[x].size() == built.witness[x].size());
  CHECK(verify_witness(same.subspace, same.transport.witness, par).worst_ratio ==
        doctest::Approx(built.certificate.worst_ratio));

  auto single = restrict_witness(p, {17}, built.witness);
  auto cs = verify_witness(single.subspace, single.transport.witness, par);
  CHECK(cs.passed);
  CHECK(cs.close_pairs == 0);

  PointSubset evens;
  for (std::size_t v = 0; v < 64; v += 2) evens.push_back(v);
  auto ev = restrict_witness(p, evens, built.witness);
  auto ce = verify_witness(ev.subspace, ev.transport.witness, par);
  CHECK(ce.close_pairs == 31);
  CHECK(ce.passed);
  CHECK_THROWS_AS(restrict_witness(p, {}, built.witness), DomainError);
}

TEST_CASE("metric-unit moduli") {
  FuzzySpace p = fctest::path_space(16);
  auto id = metric_target_moduli(p, p, PointMap::identity(16));
  CHECK(id.agrees);
  for (const auto& r : id.expansive) {
    double s = 0.0;
    for (int x = 0; x < 16; ++x)
      for (int y = 0; y < 16; ++y)
        if (r.t / (r.t + std::abs(x - y)) >= r.a) s = std::max<double>(s, std::abs(x - y));
    CHECK(r.S == s);
  }

  auto sc = metric_target_moduli(fctest::path_space(32), fctest::path_space(64), doubling(32));
  auto id32 = metric_target_moduli(fctest::path_space(32), fctest::path_space(32), PointMap::identity(32));
  CHECK(sc.agrees);
  for (std::size_t i = 0; i < sc.expansive.size(); ++i) CHECK(sc.expansive[i].S == 2.0 * id32.expansive[i].S);
  CHECK_THROWS_AS(metric_target_moduli(p, FuzzySpace::builtin(BuiltinId::nat_ratio, 4), constant(16, 0)),
                  DomainError);

  std::mt19937_64 rng(44);
  std::size_t disagreements = 0;
  for (int rep = 0; rep < 50; ++rep) {
    FuzzySpace src = fctest::random_standard_space(12, rng);
    FuzzySpace dst = fctest::random_standard_space(10, rng);
    PointMap f;
    for (int x = 0; x < 12; ++x) f.image.push_back(rng() % 10);
    if (!metric_target_moduli(src, dst, f).agrees) ++disagreements;
  }
  CHECK(disagreements == 0);
}
