#include <doctest.h>

#include <cmath>
#include <random>

#include "fuzzycoarse/numerics.hpp"
#include "support.hpp"

using namespace fuzzycoarse;

namespace {

const TNorm kProduct(TNormKind::product);
const TNorm kMinimum(TNormKind::minimum);
const TNorm kLuka(TNormKind::lukasiewicz);

// Dyadic grid: products and sums of these are exact in binary floating point,
// so algebraic laws can be asserted with zero tolerance.
std::vector<double> dyadic_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 8; ++k) g.push_back(k / 8.0);
  return g;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace

TEST_CASE("tnorm_apply examples") {
  CHECK(kProduct.apply(0.5, 0.4) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(kMinimum.apply(0.7, 1.0) == 0.7);
  CHECK(kLuka.apply(0.5, 0.5) == 0.0);
}

TEST_CASE("tnorm_apply rejects arguments outside [0,1]") {
  CHECK_THROWS_AS(kProduct.apply(1.5, 0.2), DomainError);
  CHECK_THROWS_AS(kMinimum.apply(0.2, -0.1), DomainError);
  // within tau is clamped
  CHECK(kProduct.apply(1.0 + 1e-12, 0.5) == 0.5);
}

TEST_CASE("tnorm_power examples") {
  CHECK(kMinimum.power(0.7, 5) == 0.7);
  CHECK(kProduct.power(0.5, 3) == 0.125);
  CHECK(kProduct.power(1.0, 9) == 1.0);
  CHECK_THROWS_AS(kProduct.power(0.5, 0), DomainError);
  CHECK_THROWS_AS(kProduct.power(2.0, 2), DomainError);
}

TEST_CASE("tnorm power agrees with iterated application") {
  for (const TNorm& tn : {kProduct, kMinimum, kLuka}) {
    for (double a : {0.0, 0.25, 0.5, 0.875, 1.0}) {
      double acc = a;
      for (int m = 1; m <= 6; ++m) {
        CHECK(tn.power(a, m) == doctest::Approx(acc).epsilon(1e-14));
        acc = tn.apply(acc, a);
      }
    }
  }
}

TEST_CASE("t-norm laws hold exactly on a dyadic grid") {
  const auto g = dyadic_grid();
  for (const TNorm& tn : {kProduct, kMinimum, kLuka}) {
    CAPTURE(tn.name());
    for (double a : g) {
      CHECK(tn.apply(a, 1.0) == a);
      for (double b : g) {
        CHECK(tn.apply(a, b) == tn.apply(b, a));
        for (double c : g) {
          CHECK(tn.apply(tn.apply(a, b), c) == tn.apply(a, tn.apply(b, c)));
          if (a <= c) CHECK(tn.apply(a, b) <= tn.apply(c, b));
        }
      }
    }
  }
}

TEST_CASE("zero divisors by kind") {
  CHECK_FALSE(kProduct.has_zero_divisors());
  CHECK_FALSE(kMinimum.has_zero_divisors());
  CHECK(kLuka.has_zero_divisors());
  CHECK(kLuka.apply(0.25, 0.5) == 0.0);
  CHECK(TNorm::parse("minimum") == kMinimum);
  CHECK_THROWS_AS(TNorm::parse("drastic"), DomainError);
}

TEST_CASE("Tolerance invariants") {
  CHECK_NOTHROW(Tolerance{}.validate());
  CHECK_THROWS_AS((Tolerance{1e-14, 1e-12}.validate()), DomainError);
  Tolerance tol;
  CHECK(tol.strictly_greater(0.5, 0.4));
  CHECK_FALSE(tol.strictly_greater(0.1, 0.09999999999999998));
}

TEST_CASE("SymMatrix storage is symmetric by construction") {
  SymMatrix s(3);
  s.set(0, 2, 4.0);
  CHECK(s(2, 0) == 4.0);
  Matrix m = Matrix::from_rows({{1, 2}, {3, 1}});
  CHECK_THROWS_AS(SymMatrix::from_dense(m), DomainError);
  CHECK(SymMatrix::symmetrized(m)(0, 1) == 2.5);
}

TEST_CASE("sym_eig examples") {
  SUBCASE("identity") {
    auto e = sym_eig(SymMatrix::identity(3));
    for (double v : e.values) CHECK(v == doctest::Approx(1.0));
  }
  SUBCASE("diag(2,0)") {
    SymMatrix d(2);
    d.set(0, 0, 2.0);
    auto e = sym_eig(d);
    CHECK(e.values[0] == 2.0);
    CHECK(e.values[1] == 0.0);
    CHECK(std::abs(e.vectors(0, 0)) == 1.0);
    CHECK(std::abs(e.vectors(1, 1)) == 1.0);
  }
  SUBCASE("random symmetric 8x8 residual") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
      SymMatrix a = SymMatrix::from_dense(fctest::random_symmetric(8, rng));
      auto e = sym_eig(a);
      Matrix lam(8, 8);
      for (std::size_t k = 0; k < 8; ++k) lam(k, k) = e.values[k];
      Matrix rec = e.vectors * lam * e.vectors.transpose();
      CHECK((a.to_dense() - rec).frobenius_norm() <= 1e-10 * std::max(1.0, a.frobenius_norm()));
      CHECK((e.vectors.transpose() * e.vectors - Matrix::identity(8)).frobenius_norm() <= 1e-10);
      for (std::size_t k = 1; k < 8; ++k) CHECK(e.values[k - 1] >= e.values[k]);
    }
  }
}

TEST_CASE("psd_sqrt examples") {
  SUBCASE("identity") {
    SymMatrix b = psd_sqrt(SymMatrix::identity(4));
    CHECK(max_abs_diff(b.to_dense(), Matrix::identity(4)) < 1e-14);
  }
  SUBCASE("diag(4,9)") {
    SymMatrix a(2);
    a.set(0, 0, 4.0);
    a.set(1, 1, 9.0);
    SymMatrix b = psd_sqrt(a);
    CHECK(b(0, 0) == doctest::Approx(2.0));
    CHECK(b(1, 1) == doctest::Approx(3.0));
    CHECK(b(0, 1) == 0.0);
  }
  SUBCASE("Gram matrix of random unit vectors") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    const std::size_t n = 12;
    const std::size_t dim = 5;
    Matrix v(n, dim);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += (v(i, k) = g(rng)) * v(i, k);
      for (std::size_t k = 0; k < dim; ++k) v(i, k) /= std::sqrt(s);
    }
    SymMatrix a = SymMatrix::symmetrized(v * v.transpose());
    SymMatrix b = psd_sqrt(a);
    Matrix bb = b.to_dense() * b.to_dense();
    CHECK((bb - a.to_dense()).frobenius_norm() <= 1e-8 * std::max(1.0, a.frobenius_norm()));
    CHECK(sym_eig(b).values.back() >= -1e-12);
  }
}

TEST_CASE("psd_sqrt rejects indefinite matrices") {
  SymMatrix a = SymMatrix::from_dense(Matrix::from_rows({{1, 2}, {2, 1}}));
  CHECK_THROWS_AS(psd_sqrt(a), DomainError);
}

TEST_CASE("psd_sqrt inverts squaring on PSD inputs") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    SymMatrix b = psd_sqrt(fctest::random_psd(10, rng));
    SymMatrix sq = SymMatrix::symmetrized(b.to_dense() * b.to_dense());
    SymMatrix back = psd_sqrt(sq);
    CHECK(max_abs_diff(back.to_dense(), b.to_dense()) <= 1e-8 * std::max(1.0, b.frobenius_norm()));
  }
}

TEST_CASE("op_norm_upper examples") {
  CHECK(op_norm_upper(SymMatrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(op_norm_upper(SymMatrix(6)) == 0.0);
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    SymMatrix a = fctest::random_psd(16, rng);
    const double est = op_norm_upper(a);
    CHECK(std::abs(est - sym_eig(a).values.front()) <= 1e-6);
    CHECK(est <= a.row_sum_bound());
  }
}

TEST_CASE("op_norm_upper handles indefinite spectra") {
  SymMatrix a(2);
  a.set(0, 0, 1.0);
  a.set(1, 1, -3.0);
  CHECK(op_norm_upper(a) == doctest::Approx(3.0).epsilon(1e-10));
}
