#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzycoarse/coarse_maps.hpp"
#include "fuzzycoarse/covers.hpp"
#include "fuzzycoarse/fuzzy_space.hpp"
#include "fuzzycoarse/property_a.hpp"

namespace fuzzycoarse {

/// A subset of X x X stored as a dense relation matrix.
class Entourage {
 public:
  Entourage() = default;
  explicit Entourage(std::size_t n) : n_(n), bits_(n * n, false) {}

  static Entourage diagonal(std::size_t n);
  static Entourage all_pairs(std::size_t n);
  static Entourage from_pairs(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs);
  /// E_{r,t} = {(x,y) : M(x,y,t) > 1 - r}.
  static Entourage closeness(const FuzzySpace& space, Scale s);
  /// Union of D x D over the members.
  static Entourage of_family(std::size_t n, const Family& members);
  /// {(x,y) : y in proj(A_x)}.
  static Entourage support_of(const WitnessFamily& w);

  std::size_t points() const { return n_; }
  bool contains(std::size_t x, std::size_t y) const { return bits_.at(x * n_ + y); }
  void insert(std::size_t x, std::size_t y);
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

  Entourage inverse() const;
  bool subset_of(const Entourage& other) const;

  friend Entourage compose(const Entourage& e1, const Entourage& e2);
  friend Entourage unite(const Entourage& e1, const Entourage& e2);
  friend bool operator==(const Entourage&, const Entourage&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<bool> bits_;
};

/// (r,t) with M(x,y,t) > 1 - r on every pair: t = grid max and 1 - r just below half the
/// smallest M over E. On a finite space every entourage has one.
BoundedWitness bounded_witness(const FuzzySpace& space, const Entourage& e);

/// Recheck every pair of E at the witness scale.
bool verify_bounded_witness(const FuzzySpace& space, const Entourage& e, const BoundedWitness& w);

struct CoarseAxiomReport {
  std::size_t samples = 0;
  std::size_t diagonal_failures = 0;
  std::size_t inverse_failures = 0;
  std::size_t composition_failures = 0;  // witness (t1+t2, (1-r1)*(1-r2))
  std::size_t union_failures = 0;
  std::size_t subset_failures = 0;
  bool passed = false;
  std::string note;
};

/// Constructive check that the bounded entourages satisfy the coarse-structure
/// axioms on the given samples.
CoarseAxiomReport check_coarse_axioms(const FuzzySpace& space, const std::vector<Entourage>& samples);

struct SakoCertificate {
  double eps = 0.0;
  Entourage support;             // F = {(x,y) : y in proj(A_x)}
  BoundedWitness support_bound;  // witness that F is bounded
  bool support_ok = false;
  bool structural_ok = true;
  double worst_ratio = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
  std::size_t pairs_checked = 0;
  bool passed = false;
  std::vector<std::string> failures;
};

/// Property A in the entourage form: proj(A_x) inside a bounded entourage and
/// |A_x Δ A_y| < eps |A_x ∩ A_y| for every (x,y) in E.
SakoCertificate sako_property_a_verify(const FuzzySpace& space, const Entourage& e, const WitnessFamily& w,
                                       double eps);

struct EFamilyCheck {
  bool disjoint = true;
  std::optional<std::pair<std::size_t, std::size_t>> offending_points;
  std::optional<std::pair<std::size_t, std::size_t>> offending_members;
};

struct CoarseAsdimReport {
  bool covers = false;
  bool passed = false;
  std::size_t n = 0;
  std::vector<EFamilyCheck> families;
  BoundedWitness union_bound;
  bool union_bounded = false;
  std::vector<std::string> failures;
};

/// Each family must be E-disjoint ((D_i x D_j) ∩ E empty for distinct members)
/// and the union of all D x D must be bounded.
CoarseAsdimReport coarse_asdim_verify(const FuzzySpace& space, const Entourage& e,
                                      const std::vector<Family>& families);

struct CoarseMapCheck {
  bool bornologous = false;  // (f x f)(E) bounded for every ledger entourage
  bool proper = false;       // f^{-1}(B) bounded for every ledger set
  std::vector<BoundedWitness> image_bounds;
  std::vector<BoundedWitness> preimage_bounds;
  /// Closeness-ladder cross-check against the fuzzy expansiveness table: each
  /// row's B equals the minimum target M over the image of E = {M1 >= A at t}.
  bool ladder_agrees = false;
  std::size_t ladder_mismatches = 0;
};

CoarseMapCheck coarse_map_check(const FuzzySpace& source, const FuzzySpace& target, const PointMap& f,
                                const std::vector<Entourage>& source_ledger,
                                const std::vector<PointSubset>& target_bounded,
                                const std::vector<double>& ladder = default_modulus_ladder());

}  // namespace fuzzycoarse
