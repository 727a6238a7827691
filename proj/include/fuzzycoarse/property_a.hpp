#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzycoarse/covers.hpp"
#include "fuzzycoarse/fuzzy_space.hpp"

namespace fuzzycoarse {

/// A finite set of positive levels stored as sorted, disjoint, non-adjacent
/// closed runs [lo, hi]. Prefix sets {1..h} are a single run, so witnesses
/// with very tall heights stay small.
class LevelSet {
 public:
  struct Run {
    std::uint64_t lo, hi;
    friend bool operator==(const Run&, const Run&) = default;
  };

  LevelSet() = default;
  static LevelSet prefix(std::uint64_t h);
  static LevelSet from_levels(std::vector<std::uint64_t> levels);
  static LevelSet from_runs(std::vector<Run> runs);

  const std::vector<Run>& runs() const { return runs_; }
  std::uint64_t count() const;
  bool empty() const { return runs_.empty(); }
  bool contains(std::uint64_t level) const;
  /// Height h when the set is exactly {1..h}.
  std::optional<std::uint64_t> prefix_height() const;
  std::vector<std::uint64_t> levels() const;

  friend std::uint64_t intersection_count(const LevelSet& a, const LevelSet& b);
  friend bool operator==(const LevelSet&, const LevelSet&) = default;

 private:
  std::vector<Run> runs_;
};

/// A_x: nonempty per-point level sets, sorted by point.
struct WitnessSet {
  std::vector<std::pair<std::size_t, LevelSet>> entries;

  std::uint64_t size() const;
  PointSubset projection() const;
  const LevelSet* at(std::size_t point) const;

  friend bool operator==(const WitnessSet&, const WitnessSet&) = default;
};

struct SetCounts {
  std::uint64_t intersection = 0;
  std::uint64_t symmetric_difference = 0;
};

SetCounts compare_sets(const WitnessSet& a, const WitnessSet& b);

using HeightRow = std::vector<std::pair<std::size_t, std::uint64_t>>;  // (point, height)
using PairRow = std::vector<std::pair<std::size_t, std::uint64_t>>;    // (point, level)

class WitnessFamily {
 public:
  WitnessFamily() = default;
  explicit WitnessFamily(std::vector<WitnessSet> sets) : sets_(std::move(sets)) {}

  /// A_x = union over y of {y} x {1..h_x(y)}; zero heights are skipped.
  static WitnessFamily from_heights(const std::vector<HeightRow>& heights);
  /// Explicit (point, level) pairs; duplicates collapse.
  static WitnessFamily from_pairs(const std::vector<PairRow>& pairs);

  std::size_t size() const { return sets_.size(); }
  const WitnessSet& operator[](std::size_t x) const { return sets_.at(x); }
  const std::vector<WitnessSet>& sets() const { return sets_; }

 private:
  std::vector<WitnessSet> sets_;
};

struct ParamTuple {
  double eps = 1.0;
  Radius r;
  double t = 1.0;

  void validate() const;
  Scale scale() const { return Scale{r, t}; }
};

struct WitnessCertificate {
  ParamTuple params;
  bool structural_ok = true;
  Scale support;              // t' = grid max and the tightest certified level
  double support_min = 1.0;   // min over x and y in proj(A_x) of M(x,y,t')
  double worst_ratio = 0.0;   // |A_x Δ A_y| / |A_x ∩ A_y| over close pairs
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
  std::size_t close_pairs = 0;  // unordered distinct close pairs
  bool passed = false;
  std::vector<std::string> failures;
};

/// Checks |A_x Δ A_y| < eps |A_x ∩ A_y| for every pair with M(x,y,t) > 1-r and
/// reports the tightest support window at the largest grid t.
WitnessCertificate verify_witness(const FuzzySpace& space, const WitnessFamily& w, const ParamTuple& p);

// ------------------------------------------------------- nat-product witness

struct Ex39Witness {
  WitnessFamily witness;
  std::size_t N = 1;    // least N with 1/(N+1) < 1 - r
  std::size_t hub = 0;  // point index carrying the shared set
  Radius support;       // claimed support radius
};

Ex39Witness ex39_witness(const FuzzySpace& space, Radius r);

// ------------------------------------------------------------ cover witness

/// K = floor(2 + (2n+1)/eps), snapping to the nearest integer when the
/// quotient lands within floating noise of it.
std::size_t thm37_K(std::size_t n, double eps);

struct Thm37Params {
  std::size_t K = 0;
  Radius R;      // 1 - R = (1-r)^{*(K+1)}
  double T = 0;  // (2 + (2n+1)/eps) t
  bool level_clamped = false;
};

Thm37Params thm37_parameters(const TNorm& tn, std::size_t n, const ParamTuple& p);

/// Shortest (r,t)-chain from x to a point outside U, capped at K.
std::size_t chain_length(const FuzzySpace& space, std::size_t x, const PointSubset& u, Scale s, std::size_t cap);

struct Thm37Result {
  bool accepted = false;  // cover claims verified
  Thm37Params params;
  WitnessFamily witness;
  std::vector<std::size_t> anchors;  // a_U per member
  std::size_t max_projection = 0;
  std::uint64_t max_close_symdiff = 0;
  std::uint64_t min_close_intersection = 0;
  WitnessCertificate certificate;
  bool passed = false;
  std::vector<std::string> failures;
};

Thm37Result construct_from_cover(const FuzzySpace& space, const Family& cover, const ParamTuple& p, std::size_t n);

// ------------------------------------------------------ subexponential field

struct SubexpField {
  std::size_t n = 1;
  Radius r;
  Matrix eta;  // row x is eta^n_x over X
  std::vector<std::size_t> representatives;
  Scale window;  // support window from the cover's uniform bound
  bool support_ok = true;
  double max_norm_error = 0.0;  // max | ||eta_x||_1 - 1 |
  std::size_t multiplicity = 0;
};

/// eta^n_x = J((1/n) sum_{k=n+1}^{2n} xi_{S_x(r,k)}) with S_x(r,k) the members
/// containing B(x,r,k). Integer k only.
SubexpField subexp_field(const FuzzySpace& space, const Family& cover, Radius r, std::size_t n);

/// 2 (1 - mult^{-2t/n}).
double subexp_bound(std::size_t mult, double t, std::size_t n);

// ------------------------------------------------------ metric-side witness

struct MetricWitnessCertificate {
  double eps = 0, R = 0;
  double max_support_distance = 0;  // A_x lies in B_d(x,S) for every S above this
  double worst_ratio = 0;
  std::size_t close_pairs = 0;
  bool passed = false;
};

/// The metric-space definition: ratio < eps whenever d(x,y) < R.
MetricWitnessCertificate verify_metric_witness(const FuzzySpace& space, const WitnessFamily& w, double eps, double R);

/// R = t r / (1 - r).
double metric_radius_for(Radius r, double t);

}  // namespace fuzzycoarse
