#pragma once
// Instance generators shared by the unit and acceptance suites.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fuzzycoarse/fuzzy_space.hpp"
#include "fuzzycoarse/numerics.hpp"

namespace fctest {

using fuzzycoarse::FuzzySpace;
using fuzzycoarse::Matrix;
using fuzzycoarse::PointSet;
using fuzzycoarse::SymMatrix;

inline Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = g(rng);
  return m;
}

/// G G^T for a Gaussian n x k factor.
inline SymMatrix random_psd(std::size_t n, std::mt19937_64& rng, std::size_t rank = 0) {
  if (rank == 0) rank = n;
  std::normal_distribution<double> g;
  Matrix f(n, rank);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < rank; ++k) f(i, k) = g(rng);
  return SymMatrix::symmetrized(f * f.transpose());
}

/// Euclidean distances between random points in the unit cube of R^3,
/// scaled to [0, scale].
inline Matrix random_metric(std::size_t n, std::mt19937_64& rng, double scale = 10.0) {
  std::uniform_real_distribution<double> u(0.0, scale);
  std::vector<std::array<double, 3>> p(n);
  for (auto& q : p)
    for (double& c : q) c = u(rng);
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (p[i][k] - p[j][k]) * (p[i][k] - p[j][k]);
      d(i, j) = std::sqrt(s);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) d(j, i) = d(i, j);
  return d;
}

inline FuzzySpace random_standard_space(std::size_t n, std::mt19937_64& rng, double scale = 10.0) {
  return FuzzySpace::standard("random-standard", PointSet::numbered(n), random_metric(n, rng, scale));
}

/// Stationary metric V = exp(-d) from a random metric d: under the product
/// t-norm, V(x,y) V(y,z) = exp(-(d(x,y)+d(y,z))) <= exp(-d(x,z)).
inline FuzzySpace random_stationary_space(std::size_t n, std::mt19937_64& rng, double scale = 3.0) {
  Matrix d = random_metric(n, rng, scale);
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v(i, j) = i == j ? 1.0 : std::exp(-d(i, j));
  return FuzzySpace::stationary("random-stationary", PointSet::numbered(n), v);
}

inline FuzzySpace path_space(std::size_t n) { return FuzzySpace::builtin(fuzzycoarse::BuiltinId::path, n); }

/// Connected components of the closeness graph at `s`, each sorted.
inline std::vector<std::vector<std::size_t>> closeness_components(const FuzzySpace& space, fuzzycoarse::Scale s) {
  const std::size_t n = space.size();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t root = 0; root < n; ++root) {
    if (comp[root] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<std::size_t> stack{root};
    comp[root] = id;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      out.back().push_back(v);
      for (std::size_t y = 0; y < n; ++y)
        if (comp[y] < 0 && space.close(v, y, s)) {
          comp[y] = id;
          stack.push_back(y);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

/// Two families built from closeness components: a component lands whole in
/// one family (always disjoint there) or, with probability `split`, is cut in
/// two members of the same family (usually not disjoint).
inline std::vector<std::vector<std::vector<std::size_t>>> component_families(const FuzzySpace& space,
                                                                            fuzzycoarse::Scale s, double split,
                                                                            std::mt19937_64& rng) {
  std::vector<std::vector<std::vector<std::size_t>>> fams(2);
  std::bernoulli_distribution cut(split);
  for (auto& c : closeness_components(space, s)) {
    auto& fam = fams[rng() % 2];
    if (c.size() > 1 && cut(rng)) {
      const std::size_t k = 1 + rng() % (c.size() - 1);
      fam.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(k));
      fam.emplace_back(c.begin() + static_cast<std::ptrdiff_t>(k), c.end());
    } else {
      fam.push_back(c);
    }
  }
  for (auto& f : fams)
    for (auto& d : f) std::sort(d.begin(), d.end());
  return fams;
}

}  // namespace fctest
