#include <doctest.h>

#include <random>

#include "fuzzycoarse/covers.hpp"
#include "support.hpp"

using namespace fuzzycoarse;

namespace {

Scale scale(double r, double t) { return Scale{Radius::from_r(r), t}; }

PointSubset interval(std::size_t lo, std::size_t hi, std::size_t n) {
  PointSubset s;
  for (std::size_t x = lo; x <= hi && x < n; ++x) s.push_back(x);
  return s;
}

PointSubset everything(std::size_t n) { return interval(0, n - 1, n); }

// Independent oracle: the least multiplicity over *every* family of subsets
// of a tiny space (2^(2^n - 1) families) satisfying the Lebesgue condition
// and the member bound.
std::optional<std::size_t> brute_force_adx(const FuzzySpace& s, Scale leb, Scale bound) {
  const std::size_t n = s.size();
  const std::size_t nsub = (std::size_t{1} << n) - 1;
  std::vector<unsigned> balls(n, 0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (x == y || s.close(x, y, leb)) balls[x] |= 1u << y;
  std::vector<char> ok(nsub + 1, 0);
  for (unsigned m = 1; m <= nsub; ++m) {
    bool b = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if ((m >> i & 1u) && (m >> j & 1u) && !s.close(i, j, bound)) b = false;
    ok[m] = b;
  }
  std::optional<std::size_t> best;
  for (std::uint64_t fam = 1; fam < (std::uint64_t{1} << nsub); ++fam) {
    bool valid = true;
    std::vector<std::size_t> count(n, 0);
    for (unsigned m = 1; m <= nsub && valid; ++m) {
      if (!(fam >> (m - 1) & 1u)) continue;
      if (!ok[m]) valid = false;
      for (std::size_t x = 0; x < n; ++x)
        if (m >> x & 1u) ++count[x];
    }
    if (!valid) continue;
    for (std::size_t x = 0; x < n && valid; ++x) {
      bool inside = false;
      for (unsigned m = 1; m <= nsub && !inside; ++m)
        if ((fam >> (m - 1) & 1u) && (balls[x] & ~m) == 0) inside = true;
      valid = inside;
    }
    if (!valid) continue;
    const std::size_t mult = *std::max_element(count.begin(), count.end());
    if (!best || mult < *best) best = mult;
  }
  if (!best) return std::nullopt;
  return *best - 1;
}

}  // namespace

TEST_CASE("are_rt_disjoint examples") {
  FuzzySpace p = fctest::path_space(10);
  CHECK_FALSE(are_rt_disjoint(p, {2, 3}, {2, 3}, scale(0.5, 1.0)).disjoint);
  auto d = are_rt_disjoint(p, {0}, {5}, scale(0.5, 1.0));
  CHECK(d.disjoint);
  CHECK(d.sup == doctest::Approx(1.0 / 6.0));
  CHECK_FALSE(are_rt_disjoint(p, {0}, {1}, scale(0.6, 1.0)).disjoint);
}

TEST_CASE("are_rt_disjoint is symmetric and antitone in r") {
  std::mt19937_64 rng(4);
  FuzzySpace s = fctest::random_standard_space(16, rng);
  std::uniform_int_distribution<std::size_t> pick(0, 15);
  for (int k = 0; k < 50; ++k) {
    PointSubset u{pick(rng)}, v{pick(rng), pick(rng)};
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (double r : {0.2, 0.5, 0.8}) {
      const bool a = are_rt_disjoint(s, u, v, scale(r, 1.0)).disjoint;
      CHECK(a == are_rt_disjoint(s, v, u, scale(r, 1.0)).disjoint);
      if (a)
        for (double r2 : {0.1, 0.15}) CHECK(are_rt_disjoint(s, u, v, scale(r2, 1.0)).disjoint);
    }
  }
}

TEST_CASE("multiplicity examples") {
  CHECK(multiplicity({{0, 1}, {2}, {3, 4}}, 5) == 1);
  Family iv;
  for (std::size_t k = 0; 4 * k < 64; ++k) iv.push_back(interval(4 * k, 4 * k + 5, 64));
  std::vector<std::size_t> count(64, 0);
  for (const auto& s : iv)
    for (std::size_t x : s) ++count[x];
  CHECK(multiplicity(iv, 64) == *std::max_element(count.begin(), count.end()));
  CHECK(multiplicity(iv, 64) == 2);
  CHECK(multiplicity({everything(4), everything(4)}, 4) >= 2);
  Cover c = Cover::from_sets({everything(4), {3, 2, 1, 0}}, 4);
  CHECK(c.sets.size() == 1);
  CHECK(c.warnings.size() == 1);
  CHECK_THROWS_AS(Cover::from_sets({{}}, 4), DomainError);
}

TEST_CASE("lebesgue_pair_check examples") {
  FuzzySpace p = fctest::path_space(64);
  CHECK(lebesgue_pair_check(p, {everything(64)}, scale(0.99, 100.0)).holds);

  FuzzySpace two = fctest::path_space(2);
  auto res = lebesgue_pair_check(two, {{0}, {1}}, scale(0.9, 10.0));
  CHECK_FALSE(res.holds);
  CHECK(res.first_failure == 0u);

  Family iv;
  for (std::size_t k = 0; 4 * k < 64; ++k) iv.push_back(interval(4 * k, 4 * k + 5, 64));
  auto ok = lebesgue_pair_check(p, iv, scale(0.6, 1.0));
  CHECK(ok.holds);
  for (std::size_t x = 0; x < 64; ++x) {
    REQUIRE(ok.member[x].has_value());
    const auto& m = iv[*ok.member[x]];
    CHECK(std::binary_search(m.begin(), m.end(), x));
  }
}

TEST_CASE("lebesgue_pair_check is antitone in (r,t)") {
  FuzzySpace p = fctest::path_space(40);
  Family iv;
  for (std::size_t k = 0; 5 * k < 40; ++k) iv.push_back(interval(5 * k, 5 * k + 8, 40));
  for (double r : {0.3, 0.6, 0.8})
    for (double t : {0.5, 1.0, 2.0})
      if (lebesgue_pair_check(p, iv, scale(r, t)).holds)
        for (double r2 : {0.1, 0.3})
          for (double t2 : {0.25, 0.5})
            if (r2 <= r && t2 <= t) CHECK(lebesgue_pair_check(p, iv, scale(r2, t2)).holds);
}

TEST_CASE("verify_asdim_witness examples") {
  SUBCASE("separated clusters with n = 0") {
    Matrix d(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j)
        if (i != j) d(i, j) = (i / 2 == j / 2) ? 1.0 : 100.0;
    FuzzySpace s = FuzzySpace::standard("clusters", PointSet::numbered(6), d);
    auto rep = verify_asdim_witness(s, {{{{0, 1}, {2, 3}, {4, 5}}}, scale(0.6, 1.0)});
    CHECK(rep.passed);
    CHECK(rep.n == 0);
  }
  FuzzySpace p = fctest::path_space(64);
  Family f0, f1;
  for (std::size_t k = 0; 8 * k < 64; ++k) {
    f0.push_back(interval(8 * k, 8 * k + 3, 64));
    f1.push_back(interval(8 * k + 4, 8 * k + 7, 64));
  }
  SUBCASE("two interval families at closeness radius 1") {
    auto rep = verify_asdim_witness(p, {{f0, f1}, scale(0.6, 1.0)});
    CHECK(rep.passed);
    CHECK(rep.n == 1);
    CHECK(rep.families[0].worst_sup == doctest::Approx(1.0 / 6.0));
    CHECK(rep.families[0].worst_margin > 0.0);
  }
  SUBCASE("closeness radius 5 fails with the offending pair") {
    // M > 0.15 at t = 1 exactly when d <= 5
    auto rep = verify_asdim_witness(p, {{f0, f1}, scale(0.85, 1.0)});
    CHECK_FALSE(rep.passed);
    REQUIRE(rep.families[0].offending_points.has_value());
    const auto [a, b] = *rep.families[0].offending_points;
    CHECK(p.distance(a, b) == 5.0);
  }
  SUBCASE("non-covering families") {
    auto rep = verify_asdim_witness(p, {{f0}, scale(0.6, 1.0)});
    CHECK_FALSE(rep.covers);
    CHECK_FALSE(rep.passed);
  }
}

TEST_CASE("enlarge_family examples") {
  FuzzySpace p = fctest::path_space(10);
  const Family f{{0, 1, 2, 3}, {7}};
  CHECK(enlarge_family(p, f, scale(1e-9, 1.0)) == f);
  const Family e = enlarge_family(p, f, scale(0.6, 1.0));
  CHECK(e[0] == PointSubset{0, 1, 2, 3, 4});
  CHECK(e[1] == PointSubset{6, 7, 8});

  FuzzySpace p64 = fctest::path_space(64);
  Family f0, f1;
  for (std::size_t k = 0; 8 * k < 64; ++k) {
    f0.push_back(interval(8 * k, 8 * k + 3, 64));
    f1.push_back(interval(8 * k + 4, 8 * k + 7, 64));
  }
  Family all = f0;
  all.insert(all.end(), f1.begin(), f1.end());
  const Family big = enlarge_family(p64, all, scale(0.6, 1.0));
  CHECK(lebesgue_pair_check(p64, big, scale(0.6, 1.0)).holds);
  CHECK(multiplicity(big, 64) == 2);
}

TEST_CASE("ad_x_estimate examples") {
  FuzzySpace one = fctest::path_space(1);
  auto t1 = ad_x_estimate(one, Radius::from_r(0.5), {1.0, 10.0, 100.0});
  for (const auto& e : t1.entries) {
    CHECK(e.available);
    CHECK(e.estimate == 0);
  }

  FuzzySpace p = fctest::path_space(64);
  AdxOptions opt;
  opt.seed = 17;
  opt.member_bound = Scale{Radius::from_level(0.02), 1.0};  // members of diameter at most 48
  auto table = ad_x_estimate(p, Radius::from_r(0.6), {0.25, 0.5, 1.0}, opt);
  CHECK(table.r_prime.level() == doctest::Approx(0.08));
  for (const auto& e : table.entries) {
    REQUIRE(e.available);
    CHECK(e.estimate <= 1);
    CHECK(lebesgue_pair_check(p, e.cover, Scale{table.r_prime, e.t}).holds);
    CHECK(members_bounded_at(p, e.cover, *opt.member_bound));
  }
  CHECK(table.notes.front().find("HEURISTIC UPPER BOUND") != std::string::npos);

  // without a member bound, {X} wins
  auto triv = ad_x_estimate(p, Radius::from_r(0.6), {1.0});
  CHECK(triv.entries[0].estimate == 0);
}

TEST_CASE("ad_x_estimate is deterministic for a fixed seed") {
  std::mt19937_64 rng(2);
  FuzzySpace s = fctest::random_standard_space(20, rng);
  AdxOptions opt{5, 6, Scale{Radius::from_level(0.2), 1.0}};
  auto a = ad_x_estimate(s, Radius::from_r(0.5), {0.5, 1.0}, opt);
  auto b = ad_x_estimate(s, Radius::from_r(0.5), {0.5, 1.0}, opt);
  for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(a.entries[i].cover == b.entries[i].cover);
}

TEST_CASE("exact ad_X agrees with a brute-force family oracle on 4 points") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 12; ++rep) {
    FuzzySpace s = fctest::random_standard_space(4, rng, 6.0);
    const Scale leb{Radius::from_level(0.7), 1.0};
    const Scale bound{Radius::from_level(0.15), 1.0};
    CHECK(ad_x_exact(s, leb, bound) == brute_force_adx(s, leb, bound));
  }
}

TEST_CASE("heuristic estimate never undercuts the exhaustive minimum") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 15; ++rep) {
    FuzzySpace s = fctest::random_standard_space(8, rng, 8.0);
    const Radius r = Radius::from_r(0.4);
    AdxOptions opt{static_cast<std::uint64_t>(rep), 6, Scale{Radius::from_level(0.2), 1.0}};
    auto table = ad_x_estimate(s, r, {1.0}, opt);
    auto exact = ad_x_exact(s, Scale{table.r_prime, 1.0}, opt.member_bound);
    CHECK(table.entries[0].available == exact.has_value());
    if (exact) CHECK(table.entries[0].estimate >= *exact);
  }
}
