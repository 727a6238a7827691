#include "fuzzycoarse/coarse_structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fuzzycoarse {

Entourage Entourage::diagonal(std::size_t n) {
  Entourage e(n);
  for (std::size_t x = 0; x < n; ++x) e.insert(x, x);
  return e;
}

Entourage Entourage::all_pairs(std::size_t n) {
  Entourage e(n);
  e.bits_.assign(n * n, true);
  return e;
}

Entourage Entourage::from_pairs(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  Entourage e(n);
  for (const auto& [x, y] : pairs) e.insert(x, y);
  return e;
}

Entourage Entourage::closeness(const FuzzySpace& space, Scale s) {
  const std::size_t n = space.size();
  Entourage e(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (x == y || space.close(x, y, s)) e.insert(x, y);
  return e;
}

Entourage Entourage::of_family(std::size_t n, const Family& members) {
  Entourage e(n);
  for (const auto& d : members)
    for (std::size_t x : d)
      for (std::size_t y : d) e.insert(x, y);
  return e;
}

Entourage Entourage::support_of(const WitnessFamily& w) {
  Entourage e(w.size());
  for (std::size_t x = 0; x < w.size(); ++x)
    for (const auto& entry : w[x].entries) e.insert(x, entry.first);
  return e;
}

void Entourage::insert(std::size_t x, std::size_t y) {
  if (x >= n_ || y >= n_) throw DomainError("entourage pair outside the point set");
  bits_[x * n_ + y] = true;
}

std::size_t Entourage::count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }

std::vector<std::pair<std::size_t, std::size_t>> Entourage::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t x = 0; x < n_; ++x)
    for (std::size_t y = 0; y < n_; ++y)
      if (bits_[x * n_ + y]) out.emplace_back(x, y);
  return out;
}

Entourage Entourage::inverse() const {
  Entourage e(n_);
  for (std::size_t x = 0; x < n_; ++x)
    for (std::size_t y = 0; y < n_; ++y)
      if (bits_[x * n_ + y]) e.bits_[y * n_ + x] = true;
  return e;
}

bool Entourage::subset_of(const Entourage& other) const {
  if (other.n_ != n_) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i]) return false;
  return true;
}

Entourage compose(const Entourage& e1, const Entourage& e2) {
  if (e1.n_ != e2.n_) throw DomainError("composing entourages over different point sets");
  const std::size_t n = e1.n_;
  Entourage out(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t z = 0; z < n; ++z) {
      if (!e1.bits_[x * n + z]) continue;
      for (std::size_t y = 0; y < n; ++y)
        if (e2.bits_[z * n + y]) out.bits_[x * n + y] = true;
    }
  return out;
}

Entourage unite(const Entourage& e1, const Entourage& e2) {
  if (e1.n_ != e2.n_) throw DomainError("uniting entourages over different point sets");
  Entourage out = e1;
  for (std::size_t i = 0; i < out.bits_.size(); ++i)
    if (e2.bits_[i]) out.bits_[i] = true;
  return out;
}

BoundedWitness bounded_witness(const FuzzySpace& space, const Entourage& e) {
  if (e.points() != space.size()) throw DomainError("entourage and space have different point counts");
  const double t = space.grid_max();
  double lo = 1.0;
  for (const auto& [x, y] : e.pairs()) lo = std::min(lo, space.M(x, y, t));
  return BoundedWitness{Scale{level_below(lo / 2.0, space.tolerance()), t}, lo, true};
}

bool verify_bounded_witness(const FuzzySpace& space, const Entourage& e, const BoundedWitness& w) {
  for (const auto& [x, y] : e.pairs())
    if (x != y && !space.close(x, y, w.scale)) return false;
  return true;
}

CoarseAxiomReport check_coarse_axioms(const FuzzySpace& space, const std::vector<Entourage>& samples) {
  CoarseAxiomReport rep;
  rep.samples = samples.size();
  const std::size_t n = space.size();
  const TNorm& tn = space.tnorm();

  const Entourage diag = Entourage::diagonal(n);
  const BoundedWitness any{Scale{}, 1.0, true};
  if (!verify_bounded_witness(space, diag, any)) ++rep.diagonal_failures;

  std::vector<BoundedWitness> w;
  w.reserve(samples.size());
  for (const auto& e : samples) w.push_back(bounded_witness(space, e));

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Entourage& e = samples[i];
    if (!verify_bounded_witness(space, e.inverse(), w[i])) ++rep.inverse_failures;

    // Subsets: drop every other pair and keep the witness.
    Entourage sub(n);
    const auto ps = e.pairs();
    for (std::size_t k = 0; k < ps.size(); k += 2) sub.insert(ps[k].first, ps[k].second);
    if (!verify_bounded_witness(space, sub, w[i])) ++rep.subset_failures;

    for (std::size_t j = 0; j < samples.size(); ++j) {
      const Entourage& f = samples[j];
      const BoundedWitness comp{
          Scale{Radius::from_level(tn.apply(w[i].scale.r.level(), w[j].scale.r.level())), w[i].scale.t + w[j].scale.t},
          0.0, true};
      if (!verify_bounded_witness(space, compose(e, f), comp)) ++rep.composition_failures;
      const BoundedWitness uni{
          Scale{Radius::from_level(std::min(w[i].scale.r.level(), w[j].scale.r.level())),
                std::max(w[i].scale.t, w[j].scale.t)},
          0.0, true};
      if (!verify_bounded_witness(space, unite(e, f), uni)) ++rep.union_failures;
    }
  }
  rep.passed = rep.diagonal_failures + rep.inverse_failures + rep.composition_failures + rep.union_failures +
                   rep.subset_failures ==
               0;
  rep.note = "finite space: every subset of X x X is bounded; the checks exercise the explicit witnesses";
  return rep;
}

SakoCertificate sako_property_a_verify(const FuzzySpace& space, const Entourage& e, const WitnessFamily& w,
                                       double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive and finite");
  if (e.points() != space.size()) throw DomainError("entourage and space have different point counts");
  SakoCertificate cert;
  cert.eps = eps;
  const std::size_t n = space.size();
  if (w.size() != n) {
    cert.structural_ok = false;
    cert.failures.push_back("witness has " + std::to_string(w.size()) + " sets for " + std::to_string(n) + " points");
    return cert;
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (w[x].entries.empty()) {
      cert.structural_ok = false;
      cert.failures.push_back("A_" + space.points().label(x) + " is empty");
    }
    for (const auto& [y, l] : w[x].entries)
      if (y >= n || l.empty()) {
        cert.structural_ok = false;
        cert.failures.push_back("A_" + space.points().label(x) + " has an invalid entry");
        break;
      }
  }
  if (!cert.structural_ok) return cert;

  cert.support = Entourage::support_of(w);
  cert.support_bound = bounded_witness(space, cert.support);
  cert.support_ok = verify_bounded_witness(space, cert.support, cert.support_bound);
  if (!cert.support_ok) cert.failures.push_back("support entourage fails its bounded witness");

  const Tolerance& tol = space.tolerance();
  bool ok = true;
  for (const auto& [x, y] : e.pairs()) {
    ++cert.pairs_checked;
    const SetCounts c = compare_sets(w[x], w[y]);
    double ratio = 0.0;
    if (c.intersection == 0)
      ratio = c.symmetric_difference == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    else
      ratio = static_cast<double>(c.symmetric_difference) / static_cast<double>(c.intersection);
    if (!cert.worst_pair || ratio > cert.worst_ratio) {
      cert.worst_ratio = ratio;
      cert.worst_pair = std::pair{x, y};
    }
    const bool pair_ok =
        tol.strictly_less(static_cast<double>(c.symmetric_difference), eps * static_cast<double>(c.intersection));
    if (!pair_ok && ok)
      cert.failures.push_back("pair (" + space.points().label(x) + "," + space.points().label(y) +
                              ") in E violates the ratio bound");
    ok = ok && pair_ok;
  }
  cert.passed = ok && cert.support_ok;
  return cert;
}

CoarseAsdimReport coarse_asdim_verify(const FuzzySpace& space, const Entourage& e,
                                      const std::vector<Family>& families) {
  if (e.points() != space.size()) throw DomainError("entourage and space have different point counts");
  CoarseAsdimReport rep;
  const std::size_t n = space.size();
  rep.n = families.empty() ? 0 : families.size() - 1;

  std::vector<bool> seen(n, false);
  Family all;
  for (const auto& fam : families)
    for (const auto& d : fam) {
      for (std::size_t x : d) {
        if (x >= n) throw DomainError("family member has a point outside the space");
        seen[x] = true;
      }
      all.push_back(d);
    }
  rep.covers = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  if (!rep.covers) rep.failures.push_back("families do not cover X");

  bool ok = rep.covers;
  for (std::size_t fi = 0; fi < families.size(); ++fi) {
    const Family& fam = families[fi];
    EFamilyCheck fc;
    for (std::size_t i = 0; i < fam.size() && fc.disjoint; ++i)
      for (std::size_t j = 0; j < fam.size() && fc.disjoint; ++j) {
        if (i == j) continue;
        for (std::size_t u : fam[i]) {
          for (std::size_t v : fam[j])
            if (e.contains(u, v)) {
              fc.disjoint = false;
              fc.offending_points = std::pair{u, v};
              fc.offending_members = std::pair{i, j};
              break;
            }
          if (!fc.disjoint) break;
        }
      }
    if (!fc.disjoint) {
      ok = false;
      rep.failures.push_back("family " + std::to_string(fi) + " is not E-disjoint: (" +
                             space.points().label(fc.offending_points->first) + "," +
                             space.points().label(fc.offending_points->second) + ") lies in E");
    }
    rep.families.push_back(fc);
  }

  const Entourage u = Entourage::of_family(n, all);
  rep.union_bound = bounded_witness(space, u);
  rep.union_bounded = verify_bounded_witness(space, u, rep.union_bound);
  if (!rep.union_bounded) {
    ok = false;
    rep.failures.push_back("union family is not uniformly bounded");
  }
  rep.passed = ok;
  return rep;
}

CoarseMapCheck coarse_map_check(const FuzzySpace& source, const FuzzySpace& target, const PointMap& f,
                                const std::vector<Entourage>& source_ledger,
                                const std::vector<PointSubset>& target_bounded, const std::vector<double>& ladder) {
  f.validate(source.size(), target.size());
  CoarseMapCheck out;
  out.bornologous = true;
  for (const auto& e : source_ledger) {
    Entourage img(target.size());
    for (const auto& [x, y] : e.pairs()) img.insert(f(x), f(y));
    const BoundedWitness w = bounded_witness(target, img);
    out.bornologous = out.bornologous && verify_bounded_witness(target, img, w);
    out.image_bounds.push_back(w);
  }
  out.proper = true;
  for (const auto& b : target_bounded) {
    PointSubset pre;
    for (std::size_t x = 0; x < source.size(); ++x)
      if (std::binary_search(b.begin(), b.end(), f(x))) pre.push_back(x);
    const BoundedWitness w = is_bounded_set(source, pre);
    out.proper = out.proper && verify_bounded(source, pre, w);
    out.preimage_bounds.push_back(w);
  }

  const ModulusTable tab = check_uniformly_expansive(source, target, f, ladder);
  const std::size_t n = source.size();
  for (const auto& row : tab.rows) {
    Entourage e(n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (source.M(x, y, row.t) >= row.threshold) e.insert(x, y);
    Entourage img(target.size());
    for (const auto& [x, y] : e.pairs()) img.insert(f(x), f(y));
    const BoundedWitness w = bounded_witness(target, img);
    const bool bornologous = verify_bounded_witness(target, img, w);
    if (bornologous != row.passed || w.min_closeness != row.value) ++out.ladder_mismatches;
  }
  out.ladder_agrees = out.ladder_mismatches == 0;
  return out;
}

}  // namespace fuzzycoarse
