#include "fuzzycoarse/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fuzzycoarse {

void Tolerance::validate() const {
  if (!(margin >= 0.0) || !(tau >= margin)) {
    throw DomainError("tolerance requires tau >= margin >= 0");
  }
}

TNorm TNorm::parse(std::string_view name) {
  if (name == "product") return TNorm(TNormKind::product);
  if (name == "minimum") return TNorm(TNormKind::minimum);
  if (name == "lukasiewicz") return TNorm(TNormKind::lukasiewicz);
  throw DomainError("unknown t-norm '" + std::string(name) + "'");
}

std::string_view TNorm::name() const {
  switch (kind_) {
    case TNormKind::product: return "product";
    case TNormKind::minimum: return "minimum";
    case TNormKind::lukasiewicz: return "lukasiewicz";
  }
  return "?";
}

namespace {

double clamp_unit(double a, const Tolerance& tol) {
  if (!(a >= -tol.tau && a <= 1.0 + tol.tau)) {
    throw DomainError("t-norm argument " + std::to_string(a) + " outside [0,1]");
  }
  return std::clamp(a, 0.0, 1.0);
}

}  // namespace

double TNorm::apply(double a, double b, const Tolerance& tol) const {
  return combine(clamp_unit(a, tol), clamp_unit(b, tol));
}

double TNorm::power(double a, int m, const Tolerance& tol) const {
  if (m < 1) throw DomainError("t-norm power needs m >= 1");
  a = clamp_unit(a, tol);
  switch (kind_) {
    case TNormKind::minimum: return a;
    case TNormKind::product: return std::pow(a, m);
    case TNormKind::lukasiewicz: return std::max(m * a - (m - 1), 0.0);
  }
  return a;
}

// ---------------------------------------------------------------- Matrix

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw DomainError("ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * c));
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

std::vector<double> Matrix::apply(std::span<const double> v) const {
  if (v.size() != cols_) throw DomainError("matrix-vector size mismatch");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* r = data_.data() + i * cols_;
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += r[j] * v[j];
    out[i] = s;
  }
  return out;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DomainError("matrix product size mismatch");
  Matrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix difference size mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix sum size mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

// ------------------------------------------------------------- SymMatrix

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::from_dense(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("symmetric matrix must be square");
  SymMatrix s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (m(i, j) != m(j, i)) {
        throw DomainError("matrix is not symmetric at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      }
      s.set(i, j, m(i, j));
    }
  }
  return s;
}

SymMatrix SymMatrix::symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("symmetric matrix must be square");
  SymMatrix s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return s;
}

Matrix SymMatrix::to_dense() const {
  Matrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < i; ++j) s += 2.0 * (*this)(i, j) * (*this)(i, j);
    s += (*this)(i, i) * (*this)(i, i);
  }
  return std::sqrt(s);
}

double SymMatrix::row_sum_bound() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

std::vector<double> SymMatrix::apply(std::span<const double> v) const {
  if (v.size() != n_) throw DomainError("matrix-vector size mismatch");
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = data_.data() + i * (i + 1) / 2;
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) {
      s += row[j] * v[j];
      if (j != i) out[j] += row[j] * v[i];
    }
    out[i] += s;
  }
  return out;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  if (a.n_ != b.n_) throw DomainError("symmetric difference size mismatch");
  SymMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

// ------------------------------------------------------ eigen & friends

EigenDecomposition sym_eig(const SymMatrix& input, const Tolerance& tol) {
  tol.validate();
  const std::size_t n = input.size();
  Matrix a = input.to_dense();
  Matrix v = Matrix::identity(n);
  const double frob = input.frobenius_norm();

  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
    return s;
  };

  constexpr int kMaxSweeps = 100;
  const double target = 1e-30 * std::max(frob * frob, 1e-300);
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal() <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }

  // A posteriori residuals: these are the contract, not the sweep count.
  double rec = 0.0;
  double orth = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      double g = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        s += out.vectors(i, k) * out.values[k] * out.vectors(j, k);
        g += out.vectors(k, i) * out.vectors(k, j);
      }
      rec += (input(i, j) - s) * (input(i, j) - s);
      g -= (i == j ? 1.0 : 0.0);
      orth += g * g;
    }
  }
  out.reconstruction_residual = std::sqrt(rec);
  out.orthogonality_residual = std::sqrt(orth);
  if (out.reconstruction_residual > 1e-10 * std::max(1.0, frob) || out.orthogonality_residual > 1e-10) {
    throw ConvergenceError("Jacobi eigendecomposition did not reach residual bound",
                           out.reconstruction_residual);
  }
  return out;
}

SymMatrix psd_sqrt(const SymMatrix& a, const Tolerance& tol) {
  const EigenDecomposition eig = sym_eig(a, tol);
  const std::size_t n = a.size();
  double norm = 0.0;
  for (double lam : eig.values) norm = std::max(norm, std::abs(lam));
  if (n > 0 && eig.values.back() < -kPsdRelativeSlack * norm) {
    throw DomainError("matrix is not positive semidefinite (min eigenvalue " +
                      std::to_string(eig.values.back()) + ")");
  }
  std::vector<double> root(n);
  for (std::size_t k = 0; k < n; ++k) root[k] = std::sqrt(std::max(eig.values[k], 0.0));
  SymMatrix b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += eig.vectors(i, k) * root[k] * eig.vectors(j, k);
      b.set(i, j, s);
    }
  }
  return b;
}

double op_norm_upper(const SymMatrix& a) {
  const std::size_t n = a.size();
  const double cap = a.row_sum_bound();
  if (n == 0 || cap == 0.0) return 0.0;

  // Fixed seed keeps the estimate a pure function of the matrix.
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  std::vector<double> v(n);
  for (double& x : v) x = unif(rng) * ((rng() & 1U) ? 1.0 : -1.0);

  auto normalize = [](std::vector<double>& x) {
    double s = 0.0;
    for (double e : x) s += e * e;
    s = std::sqrt(s);
    if (s > 0.0)
      for (double& e : x) e /= s;
    return s;
  };
  normalize(v);

  // Iterate on A^2 so that +/- eigenvalue pairs do not oscillate.
  constexpr int kMaxIter = 100000;
  double mu = 0.0;
  double resid = 0.0;
  for (int it = 0; it < kMaxIter; ++it) {
    std::vector<double> av = a.apply(v);
    std::vector<double> aav = a.apply(av);
    mu = 0.0;
    for (double e : av) mu += e * e;
    resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = aav[i] - mu * v[i];
      resid += r * r;
    }
    resid = std::sqrt(resid);
    if (mu == 0.0) {
      // Start vector fell into the kernel; perturb deterministically.
      for (std::size_t i = 0; i < n; ++i) v[i] += unif(rng);
      normalize(v);
      continue;
    }
    if (resid <= 1e-13 * mu) break;
    v = std::move(aav);
    normalize(v);
  }
  return std::min(cap, std::sqrt(mu + resid));
}

}  // namespace fuzzycoarse
