#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "fuzzycoarse/numerics.hpp"

namespace fuzzycoarse {

/// A closeness radius r in (0,1). Stored as its level 1 - r so that radii
/// extremely close to 1 (level ~ 1e-120) survive floating point.
class Radius {
 public:
  Radius() = default;  // r = 1/2
  static Radius from_r(double r);
  static Radius from_level(double level);

  double r() const { return 1.0 - level_; }
  /// Threshold 1 - r that M must exceed.
  double level() const { return level_; }

  friend bool operator==(const Radius&, const Radius&) = default;

 private:
  explicit Radius(double level) : level_(level) {}
  double level_ = 0.5;
};

/// Level strictly below `m` by more than the certification margin, so that
/// every point realizing `m` is certified inside the resulting ball.
Radius level_below(double m, const Tolerance& tol);

/// A closeness scale (r, t): x and y are (r,t)-close when M(x,y,t) > 1 - r.
struct Scale {
  Radius r;
  double t = 1.0;
};

/// Sorted list of point indices.
using PointSubset = std::vector<std::size_t>;

/// Ordered list of distinct point labels.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<std::string> labels);
  static PointSet numbered(std::size_t n, std::size_t first = 0);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t index(std::string_view label) const;
  std::optional<std::size_t> find(std::string_view label) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// M(x,y,t) = t / (t + d(x,y)).
struct StandardMetric {
  SymMatrix d;
};

/// M(x,y,t) = V(x,y) for every t.
struct StationaryMetric {
  SymMatrix values;
};

/// Per-pair samples on a shared t grid, piecewise-linear inside the grid and
/// constant outside it.
struct SampledMetric {
  std::vector<double> t_grid;
  // Indexed by packed pair slot i*(i-1)/2 + j for i > j.
  std::vector<std::vector<double>> values;

  static std::size_t pair_slot(std::size_t i, std::size_t j) {
    if (i < j) std::swap(i, j);
    return i * (i - 1) / 2 + j;
  }
};

enum class BuiltinId { nat_ratio, nat_product, grid_z, path };

std::string_view builtin_name(BuiltinId id);
BuiltinId parse_builtin(std::string_view name);

/// Parametric families evaluated on the fly.
///  nat-ratio:   points 1..n, M = min/max
///  nat-product: points 1..n, M = 1/(xy) off the diagonal
///  path:        points 0..n-1 of Z, standard metric of |x - y|
///  grid-z:      n x n block of Z^2 with the l1 distance, standard metric
struct BuiltinMetric {
  BuiltinId id;
  std::size_t n;
};

using FuzzyMetric = std::variant<StandardMetric, StationaryMetric, SampledMetric, BuiltinMetric>;

/// Default verification grid: 61 log-spaced values in [1e-3, 1e3].
const std::vector<double>& default_t_grid();

/// A finite fuzzy metric space (X, M, *). Immutable after construction.
class FuzzySpace {
 public:
  FuzzySpace(std::string name, PointSet points, TNorm tnorm, FuzzyMetric metric,
             Tolerance tol = {});

  static FuzzySpace builtin(BuiltinId id, std::size_t n);
  static FuzzySpace standard(std::string name, PointSet points, const Matrix& d,
                             TNorm tnorm = TNorm(TNormKind::product));
  static FuzzySpace stationary(std::string name, PointSet points, const Matrix& values,
                               TNorm tnorm = TNorm(TNormKind::product));

  const std::string& name() const { return name_; }
  const PointSet& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const TNorm& tnorm() const { return tnorm_; }
  const FuzzyMetric& metric() const { return metric_; }
  const Tolerance& tolerance() const { return tol_; }
  FuzzySpace with_tolerance(Tolerance tol) const;

  /// True when M does not depend on t.
  bool t_invariant() const;
  bool is_standard() const;
  /// Distance d(x,y) of a standard (or path / grid-z) space.
  double distance(std::size_t x, std::size_t y) const;

  double M(std::size_t x, std::size_t y, double t) const;
  /// Label-based evaluation with argument checking.
  double eval(std::string_view x, std::string_view y, double t) const;

  /// Strict closeness M(x,y,t) > 1 - r certified with the margin.
  bool close(std::size_t x, std::size_t y, Scale s) const {
    return tol_.strictly_greater(M(x, y, s.t), s.r.level());
  }

  const std::vector<double>& grid() const { return default_t_grid(); }
  double grid_max() const { return default_t_grid().back(); }

  /// The metric restricted to the given points (labels kept).
  FuzzySpace subspace(std::span<const std::size_t> indices, std::string name) const;

 private:
  std::string name_;
  PointSet points_;
  TNorm tnorm_;
  FuzzyMetric metric_;
  Tolerance tol_;
};

// ---------------------------------------------------------------- axioms

struct TriangleWitness {
  std::size_t x, y, z;
  double t, s;
  double lhs, rhs;
};

struct AxiomCheck {
  std::string name;
  bool passed = true;
  std::size_t violations = 0;
  double worst = 0.0;       // largest violation amount
  std::string witness;      // human readable worst tuple
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  std::optional<TriangleWitness> triangle_witness;
  std::vector<std::string> notes;

  bool all_passed() const;
  const AxiomCheck& check(std::string_view name) const;
};

/// Brute-force verification of positivity, identity of indiscernibles,
/// symmetry, the *-triangle inequality over points^3 x t_grid x s_grid,
/// monotonicity in t, and grid continuity for sampled metrics.
AxiomReport verify_axioms(const FuzzySpace& space, std::span<const double> t_grid,
                          std::span<const double> s_grid);

// --------------------------------------------------------- balls & bounds

/// B(x,r,t) = { y : M(x,y,t) > 1 - r }, sorted.
PointSubset ball(const FuzzySpace& space, std::size_t x, Scale s);

/// Metric ball { y : d(x,y) < R } of a standard space.
PointSubset metric_ball(const FuzzySpace& space, std::size_t x, double R);

/// Checks B_d(x,R) = B(x, R/(t+R), t) = B(x, r, R(1-r)/r) for every x.
bool ball_correspondence_check(const FuzzySpace& space, double R, double t, Radius r);

/// Witness that a set of pairs is bounded: all listed pairs are (r,t)-close.
struct BoundedWitness {
  Scale scale;
  double min_closeness = 1.0;  // min M over the pairs at scale.t
  bool finite_space_trivial = true;
};

/// Bounded witness for a point set: t = grid max, 1 - r just below (min pairwise M)/2.
BoundedWitness is_bounded_set(const FuzzySpace& space, std::span<const std::size_t> a);

/// Recheck that every pair of `a` is close at the witness scale.
bool verify_bounded(const FuzzySpace& space, std::span<const std::size_t> a, const BoundedWitness& w);

struct UlfEntry {
  Scale scale;
  std::size_t bound;  // N_{r,t} = 1 + max_x |B(x,r,t)|
};

struct UlfProfile {
  std::vector<UlfEntry> entries;
};

UlfProfile ulf_profile(const FuzzySpace& space, std::span<const Scale> ladder);

/// N_{r,t} for a single scale.
std::size_t ulf_bound(const FuzzySpace& space, Scale s);

}  // namespace fuzzycoarse
