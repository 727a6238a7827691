#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuzzycoarse/fuzzy_space.hpp"

namespace fuzzycoarse {

using Family = std::vector<PointSubset>;

/// Claimed metadata attached to a cover. Claims are never trusted: every
/// consumer re-verifies them against the space.
struct CoverClaims {
  std::optional<Scale> bounded;   // members bounded at this scale
  std::optional<Scale> lebesgue;  // claimed Lebesgue pair
  std::optional<std::size_t> multiplicity;
};

struct Cover {
  Family sets;
  CoverClaims claims;
  std::vector<std::string> warnings;

  /// Sorts each member, drops duplicate members (with a warning) and rejects
  /// empty members or out-of-range points.
  static Cover from_sets(Family sets, std::size_t n);

  bool covers(std::size_t n) const;
};

struct DisjointnessResult {
  bool disjoint = false;
  double sup = 0.0;  // max M(u, v, t), which realizes the supremum
  std::size_t u = 0, v = 0;
};

/// (r,t)-disjointness: sup over U x V of M(u,v,t) < 1 - r, certified with the margin.
DisjointnessResult are_rt_disjoint(const FuzzySpace& space, const PointSubset& u, const PointSubset& v, Scale s);

/// Largest number of members containing a single point.
std::size_t multiplicity(const Family& cover, std::size_t n);

struct LebesgueResult {
  bool holds = true;
  std::vector<std::optional<std::size_t>> member;  // containing member per point
  std::optional<std::size_t> first_failure;
};

/// Checks that every ball B(x,r,t) lies inside some member.
LebesgueResult lebesgue_pair_check(const FuzzySpace& space, const Family& cover, Scale s);

/// True when every pair inside every member is close at `s`.
bool members_bounded_at(const FuzzySpace& space, const Family& cover, Scale s);

/// Uniform bound witness for a family: t = grid max and 1 - r just below half the
/// smallest M over pairs sharing a member.
BoundedWitness uniform_bound(const FuzzySpace& space, const Family& cover);

struct DisjointFamilies {
  std::vector<Family> families;
  Scale scale;
};

struct FamilyCheck {
  bool disjoint = true;
  double worst_sup = 0.0;  // largest M between distinct members
  double worst_margin = 0.0;  // level - worst_sup
  std::optional<std::pair<std::size_t, std::size_t>> offending_points;
  std::optional<std::pair<std::size_t, std::size_t>> offending_members;
};

struct AsdimReport {
  bool covers = false;
  bool passed = false;
  std::size_t n = 0;  // number of families - 1
  std::vector<FamilyCheck> families;
  BoundedWitness union_bound;
  std::vector<std::string> failures;
};

AsdimReport verify_asdim_witness(const FuzzySpace& space, const DisjointFamilies& df);

/// Each member U becomes the union of B(x,r,t) over x in U.
Family enlarge_family(const FuzzySpace& space, const Family& family, Scale s);

// ------------------------------------------------------------ ad_X search

struct AdxOptions {
  std::uint64_t seed = 0;
  std::size_t restarts = 8;
  /// Optional bound every member must satisfy. Without it the single member
  /// X is a uniformly bounded cover of any finite space and the estimate is 0.
  std::optional<Scale> member_bound;
};

struct AdxEntry {
  double t = 0.0;
  bool available = false;
  std::size_t estimate = 0;  // multiplicity - 1
  Family cover;
  std::string note;
};

struct AdxTable {
  Radius r;        // the r of the statement
  Radius r_prime;  // 1 - r' = (1 - r) * (1 - r) / 2
  std::vector<AdxEntry> entries;
  std::vector<std::string> notes;
};

/// r' = 1 - (1/2) (1 - r)^{*(2)}.
Radius adx_r_prime(const TNorm& tn, Radius r);

/// HEURISTIC UPPER BOUND on ad_X(t) for every t of the ladder.
AdxTable ad_x_estimate(const FuzzySpace& space, Radius r, const std::vector<double>& t_ladder,
                       const AdxOptions& opt = {});

/// Exact minimum of multiplicity - 1 over covers with Lebesgue pair (s.r, s.t)
/// whose members satisfy `member_bound`, by enumerating set partitions.
/// Limited to spaces with at most 10 points.
std::optional<std::size_t> ad_x_exact(const FuzzySpace& space, Scale s, const std::optional<Scale>& member_bound);

}  // namespace fuzzycoarse
