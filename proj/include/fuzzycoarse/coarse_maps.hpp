#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzycoarse/fuzzy_space.hpp"
#include "fuzzycoarse/property_a.hpp"

namespace fuzzycoarse {

/// A total map between the point sets of two spaces, by index.
struct PointMap {
  std::vector<std::size_t> image;

  static PointMap identity(std::size_t n);
  std::size_t size() const { return image.size(); }
  std::size_t operator()(std::size_t x) const { return image.at(x); }
  /// Throws DomainError unless the map has `source_size` entries that all lie below `target_size`.
  void validate(std::size_t source_size, std::size_t target_size) const;
  friend bool operator==(const PointMap&, const PointMap&) = default;
};

PointMap compose(const PointMap& outer, const PointMap& inner);

/// Default threshold ladder for A and C.
const std::vector<double>& default_modulus_ladder();

struct ModulusRow {
  double threshold = 0.0;  // A (expansive) or C (proper)
  double t = 0.0;          // scale on the side carrying the threshold
  double t_prime = 0.0;    // scale of the modulus value
  double value = 1.0;      // B or D
  std::size_t qualifying = 0;  // ordered qualifying pairs, diagonal included
  std::pair<std::size_t, std::size_t> extremal{0, 0};  // a pair realizing the value
  bool passed = false;
};

struct ModulusTable {
  std::vector<double> ladder;
  std::vector<double> t_grid;
  std::vector<ModulusRow> rows;  // ladder-major, then t
  bool passed = false;
  /// Ladder trend of the modulus. For properness: some t where D improves
  /// along the C-ladder or reaches 1 at its top.
  bool trend_ok = false;
  std::string trend_note;

  const ModulusRow& row(std::size_t ladder_index, std::size_t t_index) const {
    return rows.at(ladder_index * t_grid.size() + t_index);
  }
};

/// Rows (A,t) -> B = min of M2(f x, f x', t') over pairs with M1(x,x',t) >= A,
/// t' the target grid max.
ModulusTable check_uniformly_expansive(const FuzzySpace& source, const FuzzySpace& target, const PointMap& f,
                                       const std::vector<double>& ladder = default_modulus_ladder());

/// Rows (C,t) -> D = min of M1(x,x',t') over pairs with M2(f x,f x',t) >= C,
/// t' the source grid max.
ModulusTable check_effectively_proper(const FuzzySpace& source, const FuzzySpace& target, const PointMap& f,
                                      const std::vector<double>& ladder = default_modulus_ladder());

struct CloseWitness {
  Scale scale;
  double min_closeness = 1.0;
  std::size_t worst_point = 0;
};

/// Witness that f and g are close: t = grid max, 1 - r certified below
/// min_x M(f x, g x, t).
std::optional<CloseWitness> check_closeness(const FuzzySpace& target, const PointMap& f, const PointMap& g);

/// Witness that every target point is close to the image: t = grid max and
/// 1 - r below min_y max_x M(f x, y, t).
std::optional<CloseWitness> check_coarsely_onto(const FuzzySpace& target, const PointMap& f);

/// Every target point lies within the given scale of some image point.
bool coarsely_onto_at(const FuzzySpace& target, const PointMap& f, Scale s);

struct CoarseMapReport {
  ModulusTable expansive;
  ModulusTable proper;
  std::optional<CloseWitness> onto;
  bool embedding = false;  // both tables pass and the properness trend holds
};

CoarseMapReport check_coarse_map(const FuzzySpace& source, const FuzzySpace& target, const PointMap& f,
                                 const std::vector<double>& ladder = default_modulus_ladder());

struct CoarseInverseResult {
  PointMap candidate;
  std::optional<PointMap> inverse;  // set when every certificate passes
  ModulusTable candidate_expansive;
  std::optional<CloseWitness> f_after_g;  // f o g close to id on the target
  std::optional<CloseWitness> g_after_f;  // g o f close to id on the source
  std::vector<std::string> failures;
};

/// g(y) = smallest x maximizing M2(f x, y, t_max), then certified.
CoarseInverseResult find_coarse_inverse(const FuzzySpace& source, const FuzzySpace& target, const PointMap& f);

struct TransportResult {
  WitnessFamily witness;
  bool structural_ok = true;
  bool cardinality_preserved = true;  // |B_y| = |A_{g(y)}| everywhere
  std::vector<std::string> failures;
};

/// B_{y0} = union over y of {y} x {1..n_y} with n_y = |(f^{-1}(y) x N) cap A_{g(y0)}|.
TransportResult transport_witness(const PointMap& f, const PointMap& g, const WitnessFamily& w,
                                  std::size_t target_size);

/// Nearest-point retraction of the space onto a subset: x goes to the
/// position (within `subset`) of the smallest-index subset point maximizing
/// M(x, s, t_max).
PointMap nearest_retraction(const FuzzySpace& space, const PointSubset& subset);

struct RestrictionResult {
  FuzzySpace subspace;
  PointMap retraction;
  TransportResult transport;
};

RestrictionResult restrict_witness(const FuzzySpace& space, const PointSubset& subset, const WitnessFamily& w);

// ---------------------------------------------------------- metric targets

struct MetricExpansiveRow {
  double a = 0.0, t = 0.0;
  double S = 0.0;  // max d(f x, f x') over qualifying pairs
};

struct MetricProperRow {
  double R = 0.0;
  double t_prime = 0.0;
  double D = 1.0;  // min M1(x,x',t') over pairs with d(f x, f x') <= R
};

struct MetricModulusTable {
  std::vector<MetricExpansiveRow> expansive;
  std::vector<MetricProperRow> proper;
  /// Both sides agree: B = t'/(t'+S) on expansive rows and D matches the fuzzy
  /// properness row at t = 1 with C = 1/(1+R).
  bool agrees = true;
  std::size_t mismatches = 0;
};

/// Moduli for a map into a standard space in metric units. Properness radii
/// are R = (1 - C)/C for C on the ladder.
MetricModulusTable metric_target_moduli(const FuzzySpace& source, const FuzzySpace& target, const PointMap& f,
                                        const std::vector<double>& ladder = default_modulus_ladder());

}  // namespace fuzzycoarse
