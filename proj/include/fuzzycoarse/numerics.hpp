#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzycoarse {

/// Thrown when an argument lies outside the domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterative numerical routine misses its contract.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Comparison policy. `tau` is used for equalities and non-strict bounds,
/// `margin` for strict inequalities: `a > b` is certified only when
/// `a - b > margin`.
struct Tolerance {
  double tau = 1e-9;
  double margin = 1e-12;

  void validate() const;
  bool strictly_greater(double a, double b) const { return a - b > margin; }
  bool strictly_less(double a, double b) const { return b - a > margin; }
};

enum class TNormKind { product, minimum, lukasiewicz };

/// Continuous t-norm on [0,1].
class TNorm {
 public:
  constexpr TNorm() = default;
  constexpr explicit TNorm(TNormKind kind) : kind_(kind) {}

  static TNorm parse(std::string_view name);

  constexpr TNormKind kind() const { return kind_; }
  std::string_view name() const;

  /// a * b. Inputs within `tol.tau` of [0,1] are clamped, others rejected.
  double apply(double a, double b, const Tolerance& tol = {}) const;

  /// a^{*(m)}: the m-fold product a * a * ... * a.
  double power(double a, int m, const Tolerance& tol = {}) const;

  /// True when a * b = 0 is possible with a, b > 0.
  constexpr bool has_zero_divisors() const { return kind_ == TNormKind::lukasiewicz; }

  // Unchecked kernel used in hot loops; inputs must already lie in [0,1].
  double combine(double a, double b) const noexcept {
    switch (kind_) {
      case TNormKind::product: return a * b;
      case TNormKind::minimum: return a < b ? a : b;
      case TNormKind::lukasiewicz: return a + b - 1.0 > 0.0 ? a + b - 1.0 : 0.0;
    }
    return 0.0;
  }

  friend constexpr bool operator==(TNorm, TNorm) = default;

 private:
  TNormKind kind_ = TNormKind::product;
};

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Matrix transpose() const;
  double frobenius_norm() const;
  std::vector<double> apply(std::span<const double> v) const;
  std::vector<std::vector<double>> to_rows() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Real symmetric matrix with packed lower-triangle storage, so
/// (i,j) and (j,i) always read the same stored entry.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * (n + 1) / 2, fill) {}

  static SymMatrix identity(std::size_t n);
  /// Requires exact symmetry of `m`.
  static SymMatrix from_dense(const Matrix& m);
  /// Stores (m + m^T) / 2.
  static SymMatrix symmetrized(const Matrix& m);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[slot(i, j)]; }
  void set(std::size_t i, std::size_t j, double v) { data_[slot(i, j)] = v; }

  Matrix to_dense() const;
  double frobenius_norm() const;
  /// max_i sum_j |a_ij|; an upper bound on the spectral norm.
  double row_sum_bound() const;
  std::vector<double> apply(std::span<const double> v) const;

  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);

 private:
  static std::size_t slot(std::size_t i, std::size_t j) {
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
  }
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k pairs with values[k]
  double reconstruction_residual = 0.0;
  double orthogonality_residual = 0.0;
  int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition. Guarantees
/// ||A - V diag(values) V^T||_F <= 1e-10 max(1, ||A||_F) and
/// ||V^T V - I||_F <= 1e-10, otherwise throws ConvergenceError.
EigenDecomposition sym_eig(const SymMatrix& a, const Tolerance& tol = {});

/// Relative threshold below which negative eigenvalues are treated as zero.
inline constexpr double kPsdRelativeSlack = 1e-8;

/// Positive square root of a PSD matrix. Eigenvalues in
/// [-1e-8 ||A||, 0) are clamped to 0; anything more negative is rejected.
SymMatrix psd_sqrt(const SymMatrix& a, const Tolerance& tol = {});

/// Power-iteration estimate of the spectral norm, capped by the row-sum bound.
double op_norm_upper(const SymMatrix& a);

}  // namespace fuzzycoarse
