#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fuzzycoarse/covers.hpp"
#include "fuzzycoarse/fuzzy_space.hpp"
#include "fuzzycoarse/property_a.hpp"

namespace fuzzycoarse {

/// Unit vectors xi_x = |A_x|^{-1/2} chi_{A_x} over X x {1..L}, kept in set form.
/// Inner products come from exact intersection counts.
class AceField {
 public:
  AceField() = default;

  const WitnessFamily& witness() const { return witness_; }
  const ParamTuple& params() const { return params_; }
  /// Support window (R, T): supp xi_x inside B(x, R, T) x N.
  Scale window() const { return verification_.support; }
  const WitnessCertificate& verification() const { return verification_; }
  std::size_t size() const { return witness_.size(); }
  /// Largest level L appearing in any A_x.
  std::uint64_t max_level() const { return max_level_; }

  double inner(std::size_t x, std::size_t y) const;
  /// ||xi_x - xi_y||^2 as a sum of nonnegative terms, exactly 2 when the supports are disjoint.
  double distance_sq(std::size_t x, std::size_t y) const;
  bool disjoint(std::size_t x, std::size_t y) const;
  /// Dense coordinates, index y * L + (j - 1).
  std::vector<double> dense(std::size_t x) const;

  /// Worst slack of |A_x| + |A_y| < (2 + eps) |A_x ∩ A_y| and of the derived bounds
  /// <xi_x, xi_y> > 2/(2+eps) and ||xi_x - xi_y||^2 < 2 eps/(2+eps) over close pairs.
  struct LemmaCheck {
    std::size_t close_pairs = 0;
    std::size_t count_failures = 0;
    std::size_t inner_failures = 0;
    std::size_t distance_failures = 0;
    double min_inner = 1.0;
    double max_distance_sq = 0.0;
    bool passed = false;
  };
  LemmaCheck lemma_check(const FuzzySpace& space) const;

  friend AceField ace_vectors(const FuzzySpace& space, const WitnessFamily& w, const ParamTuple& p);

 private:
  WitnessFamily witness_;
  ParamTuple params_;
  WitnessCertificate verification_;
  std::vector<std::uint64_t> sizes_;
  std::uint64_t max_level_ = 0;
};

/// p.eps is the ratio bound of the witness, i.e. eps^2 in terms of the resulting
/// distance bound. Throws DomainError when the witness fails verification.
AceField ace_vectors(const FuzzySpace& space, const WitnessFamily& w, const ParamTuple& p);

struct EmbeddingConfig {
  std::size_t levels = 6;
  std::vector<double> r_ladder;  // empty means r_n = n/(n+1)
  std::size_t base = 0;

  void validate() const;
  double r(std::size_t n) const;
  double t(std::size_t n) const { return static_cast<double>(n); }
  /// eps_n = 2^{-n}; the level witness is checked at ratio bound eps_n^2.
  double eps(std::size_t n) const;
  ParamTuple level_params(std::size_t n) const;
};

/// Witness for every level through the cover construction with n = dim.
std::vector<WitnessFamily> level_witnesses_from_cover(const FuzzySpace& space, const Family& cover,
                                                      const EmbeddingConfig& cfg, std::size_t dim);

struct PairDiagnostic {
  std::size_t x = 0, y = 0;
  double dist_sq = 0.0;
  std::vector<double> blocks_sq;  // ||xi^n_x - xi^n_y||^2 per level
  std::size_t sqrt2_count = 0;    // blocks with disjoint supports
  std::size_t window_count = 0;   // levels with M(x,y,2T_n) < (1-R_n)*(1-R_n)
  std::size_t n_double_prime = 0; // last level at which the pair is not (r_n, n)-close
  bool bound_ok = false;          // dist_sq < 4 N'' + 1
};

struct EmbeddingVectors {
  EmbeddingConfig config;
  std::vector<AceField> levels;
  std::vector<Scale> windows;     // (R_n, T_n)
  std::vector<PairDiagnostic> pairs;  // x < y, row-major
  std::vector<double> base_norm_sq;   // ||F(x)||^2

  std::size_t size() const { return base_norm_sq.size(); }
  const PairDiagnostic& pair(std::size_t x, std::size_t y) const;
  double distance(std::size_t x, std::size_t y) const;
  /// Block n of F(x) in dense coordinates (small instances only).
  std::vector<double> block(std::size_t x, std::size_t n) const;

  std::size_t window_without_sqrt2 = 0;  // condition holds, supports still meet
  std::size_t sqrt2_without_window = 0;  // supports disjoint, condition fails
  std::size_t bound_failures = 0;
  /// Pairs with distance <= R and more than R^2/2 sqrt(2)-blocks, for R = 1, 2, 3.
  std::vector<std::size_t> count_failures;
  /// max | ||F(x)-F(y)||^2 - (||F(x)||^2 + ||F(y)||^2 - 2 <F(x),F(y)>) |
  double orthogonality_error = 0.0;
  double tail_bound = 0.0;  // sum over n > N of 2^{-n}
};

/// Throws DomainError when a level witness is missing or fails verification.
EmbeddingVectors build_embedding(const FuzzySpace& space, const std::vector<WitnessFamily>& witnesses,
                                 const EmbeddingConfig& cfg);

struct DistortionRow {
  std::size_t x = 0, y = 0;
  double sup_m = 0.0;  // largest M over the grid, a lower bound for the true sup
  double distance = 0.0;
};

struct DistortionReport {
  std::vector<DistortionRow> rows;
  /// Blocks of (r_n, n)-close pairs whose distance exceeds 2^{-n}.
  std::size_t expansive_failures = 0;
  /// Blocks with M(x,y,n) >= 1 - r_n that are not certified close: the level
  /// witness says nothing there, so these are counted apart.
  std::size_t boundary_cases = 0;
  std::size_t boundary_failures = 0;
  std::vector<double> properness_radii{1.0, 2.0, 3.0};
  std::vector<std::size_t> max_window_count;  // per radius, over pairs within it
  /// Base-row points ordered by source distance whose F-distance drops.
  std::size_t monotone_violations = 0;
  bool passed = false;
};

DistortionReport distortion_report(const FuzzySpace& space, const EmbeddingVectors& e);

}  // namespace fuzzycoarse
