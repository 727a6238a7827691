#include <doctest.h>

#include <cmath>
#include <random>

#include "fuzzycoarse/io.hpp"
#include "support.hpp"

using namespace fuzzycoarse;
using io::Json;

namespace {

bool same_values(const FuzzySpace& a, const FuzzySpace& b) {
  if (a.size() != b.size() || a.tnorm() != b.tnorm()) return false;
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (a.points().label(x) != b.points().label(x)) return false;
    for (std::size_t y = 0; y < a.size(); ++y)
      for (double t : {0.01, 0.5, 1.0, 7.0, 300.0})
        if (a.M(x, y, t) != b.M(x, y, t)) return false;
  }
  return true;
}

std::string where_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const io::FormatError& e) {
    return e.where();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("numbers and scales") {
  CHECK(io::number(INFINITY) == "inf");
  CHECK(io::number(-INFINITY) == "-inf");
  CHECK(io::number(0.25) == 0.25);
  CHECK(std::isinf(io::to_number(Json("inf"), "")));
  CHECK_THROWS_AS(io::to_number(Json("x"), ""), io::FormatError);

  const Scale tiny{Radius::from_level(1e-300), 73740.0};
  const Scale back = io::scale_from_json(io::scale_to_json(tiny), "");
  CHECK(back.r.level() == 1e-300);
  CHECK(back.t == 73740.0);
  CHECK(io::scale_from_json(Json{{"r", 0.6}, {"t", 1}}, "").r.level() == doctest::Approx(0.4));
  CHECK(where_of([] { io::scale_from_json(Json{{"r", 0.6}, {"t", -1}}, "/w"); }) == "/w/t");
}

TEST_CASE("space files round trip") {
  std::mt19937_64 rng(3);
  std::vector<FuzzySpace> spaces{fctest::random_standard_space(7, rng), fctest::random_stationary_space(6, rng),
                                 FuzzySpace::builtin(BuiltinId::nat_product, 9), FuzzySpace::builtin(BuiltinId::grid_z, 3)};
  SampledMetric sm;
  sm.t_grid = {0.5, 1.0, 2.0};
  sm.values = {{0.2, 0.4, 0.6}, {0.3, 0.5, 0.7}, {0.4, 0.5, 0.9}};
  spaces.emplace_back("sampled", PointSet({"a", "b,c", "d"}), TNorm(TNormKind::minimum), sm);
  for (const auto& s : spaces) {
    CAPTURE(s.name());
    const Json j = io::space_to_json(s);
    const FuzzySpace back = io::space_from_json(Json::parse(j.dump()));
    CHECK(back.name() == s.name());
    CHECK(same_values(s, back));
    CHECK(io::space_to_json(back).dump() == j.dump());
  }
}

TEST_CASE("space file errors name the field") {
  CHECK(where_of([] { io::space_from_json(Json{{"points", {"a"}}}); }) == "/metric");
  CHECK(where_of([] {
          io::space_from_json(Json::parse(R"({"points":["a","b"],"metric":{"kind":"standard","d":[[0,1],[1]]}})"));
        }) == "/metric/d/1");
  CHECK(where_of([] {
          io::space_from_json(Json::parse(R"({"points":["a","b"],"metric":{"kind":"standard","d":[[0,1],[2,0]]}})"));
        }) == "/metric");
  CHECK(where_of([] { io::space_from_json(Json::parse(R"({"metric":{"kind":"builtin","id":"moon","n":3}})")); }) ==
        "/metric/id");
  CHECK(where_of([] { io::space_from_json(Json::parse(R"({"points":[],"metric":{"kind":"weird"}})")); }) ==
        "/metric/kind");
}

TEST_CASE("entourage, cover and map files") {
  FuzzySpace p = fctest::path_space(6);
  const Entourage e = Entourage::closeness(p, Scale{Radius::from_r(0.6), 1.0});
  CHECK(io::entourage_from_json(p, io::entourage_to_json(p, e)) == e);
  CHECK(where_of([&] { io::entourage_from_json(p, Json::parse(R"({"pairs":[["0","9"]]})")); }) == "/pairs/0/1");

  Cover c = Cover::from_sets({{0, 1, 2}, {2, 3, 4, 5}}, 6);
  c.claims.lebesgue = Scale{Radius::from_r(0.2), 1.0};
  c.claims.multiplicity = 2;
  const Cover back = io::cover_from_json(p, io::cover_to_json(p, c));
  CHECK(back.sets == c.sets);
  CHECK(back.claims.multiplicity == 2u);
  CHECK(back.claims.lebesgue->r.r() == doctest::Approx(0.2));
  CHECK(where_of([&] { io::cover_from_json(p, Json::parse(R"({"sets":[["0"],[]]})")); }) == "/sets");

  FuzzySpace q = FuzzySpace::builtin(BuiltinId::nat_ratio, 4);
  const PointMap f{{0, 0, 1, 3, 3, 2}};
  const Json mj = io::map_to_json(p, q, f);
  CHECK(mj["map"]["3"] == "4");
  CHECK(io::map_from_json(p, q, mj) == f);
  CHECK(where_of([&] { io::map_from_json(p, q, Json::parse(R"({"map":{"0":"1"}})")); }) == "/map");
}

TEST_CASE("witness files") {
  FuzzySpace p = fctest::path_space(4);
  const WitnessFamily h = WitnessFamily::from_heights({{{0, 3}}, {{0, 3}, {1, 2}}, {{2, 1}}, {{3, 5}}});
  const ParamTuple par{0.5, Radius::from_r(0.6), 2.0};
  const Json hj = io::witness_to_json(p, h, par);
  CHECK(hj.contains("heights"));
  auto hb = io::witness_from_json(p, hj);
  CHECK(hb.witness.sets() == h.sets());
  CHECK(hb.params->eps == 0.5);

  const WitnessFamily s = WitnessFamily::from_pairs({{{0, 2}}, {{1, 1}, {1, 4}}, {{2, 1}}, {{3, 1}}});
  const Json sj = io::witness_to_json(p, s, std::nullopt);
  CHECK(sj.contains("sets"));
  CHECK(sj["sets"]["1"].size() == 2);
  CHECK(io::witness_from_json(p, sj).witness.sets() == s.sets());

  CHECK(where_of([&] { io::witness_from_json(p, Json::parse(R"({"sets":{"1":[["0",0]]}})")); }) == "/sets/1/0/1");
  CHECK(where_of([&] { io::witness_from_json(p, Json::parse(R"({"heights":{"7":{}}})")); }) == "/heights/7");
  CHECK(where_of([&] { io::witness_from_json(p, Json::parse(R"({"heights":{}, "sets":{}})")); }) == "");
}

TEST_CASE("kernel, operator and field files") {
  FuzzySpace p = fctest::path_space(3);
  Kernel k{SymMatrix::identity(3), Matrix(3, 3), Scale{Radius::from_r(0.6), 1.0}};
  (*k.imag)(0, 1) = 0.5;
  (*k.imag)(1, 0) = -0.5;
  const Kernel kb = io::kernel_from_json(p, io::kernel_to_json(p, k));
  CHECK(kb.real.to_dense().to_rows() == k.real.to_dense().to_rows());
  CHECK((*kb.imag)(1, 0) == -0.5);

  Matrix m(3, 3);
  m(0, 1) = 2.0;
  const PropagatedOperator op{m, Scale{Radius::from_r(0.6), 1.0}};
  CHECK(io::operator_from_json(p, io::operator_to_json(p, op)).matrix.to_rows() == m.to_rows());
  const Field f{Matrix::identity(3), Scale{Radius::from_r(0.3), 2.0}};
  CHECK(io::field_from_json(p, io::field_to_json(p, f)).window.t == 2.0);

  Json bad = io::operator_to_json(p, op);
  bad["labels"][0] = "2";
  CHECK(where_of([&] { io::operator_from_json(p, bad); }) == "/labels/0");
}
