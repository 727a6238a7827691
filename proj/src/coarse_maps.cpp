#include "fuzzycoarse/coarse_maps.hpp"

#include <algorithm>
#include <cmath>

namespace fuzzycoarse {

PointMap PointMap::identity(std::size_t n) {
  PointMap m;
  m.image.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.image[i] = i;
  return m;
}

void PointMap::validate(std::size_t source_size, std::size_t target_size) const {
  if (image.size() != source_size)
    throw DomainError("map has " + std::to_string(image.size()) + " entries for " + std::to_string(source_size) +
                      " source points");
  for (std::size_t x = 0; x < image.size(); ++x)
    if (image[x] >= target_size)
      throw DomainError("map sends point " + std::to_string(x) + " outside the target");
}

PointMap compose(const PointMap& outer, const PointMap& inner) {
  PointMap m;
  m.image.reserve(inner.size());
  for (std::size_t v : inner.image) m.image.push_back(outer(v));
  return m;
}

const std::vector<double>& default_modulus_ladder() {
  static const std::vector<double> ladder{0.1, 0.3, 0.5, 0.7, 0.9};
  return ladder;
}

namespace {

// n x n matrix of M at one scale, row-major.
std::vector<double> m_table(const FuzzySpace& s, double t) {
  const std::size_t n = s.size();
  std::vector<double> out(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out[i * n + j] = out[j * n + i] = s.M(i, j, t);
  return out;
}

// Rows (threshold, t): pairs whose gate value at t reaches the threshold, and
// the minimum of `value` over them.
template <class Gate, class Value>
ModulusTable modulus_table(std::size_t n, const std::vector<double>& ladder, const std::vector<double>& grid,
                           double t_prime, Gate gate_table, Value value) {
  ModulusTable tab;
  tab.ladder = ladder;
  tab.t_grid = grid;
  tab.rows.resize(ladder.size() * grid.size());
  for (std::size_t ti = 0; ti < grid.size(); ++ti) {
    const auto gate = gate_table(grid[ti]);
    for (std::size_t li = 0; li < ladder.size(); ++li) {
      ModulusRow row;
      row.threshold = ladder[li];
      row.t = grid[ti];
      row.t_prime = t_prime;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
          if (gate[x * n + y] < ladder[li]) continue;
          ++row.qualifying;
          const double v = value(x, y);
          if (v < row.value) {
            row.value = v;
            row.extremal = {x, y};
          }
        }
      row.passed = row.value > 0.0;
      tab.rows[li * grid.size() + ti] = row;
    }
  }
  tab.passed = std::all_of(tab.rows.begin(), tab.rows.end(), [](const ModulusRow& r) { return r.passed; });
  return tab;
}

}  // namespace

ModulusTable check_uniformly_expansive(const FuzzySpace& source, const FuzzySpace& target, const PointMap& f,
                                       const std::vector<double>& ladder) {
  f.validate(source.size(), target.size());
  const double tp = target.grid_max();
  const std::size_t m = target.size();
  const auto img = m_table(target, tp);
  ModulusTable tab = modulus_table(
      source.size(), ladder, source.grid(), tp, [&](double t) { return m_table(source, t); },
      [&](std::size_t x, std::size_t y) { return img[f(x) * m + f(y)]; });
  // B is nonincreasing as A decreases by construction; record the range.
  double lo = 1.0;
  for (const auto& r : tab.rows) lo = std::min(lo, r.value);
  tab.trend_ok = tab.passed;
  tab.trend_note = "smallest B over the table: " + std::to_string(lo);
  return tab;
}

ModulusTable check_effectively_proper(const FuzzySpace& source, const FuzzySpace& target, const PointMap& f,
                                      const std::vector<double>& ladder) {
  f.validate(source.size(), target.size());
  const double tp = source.grid_max();
  const std::size_t n = source.size();
  const std::size_t m = target.size();
  const auto src = m_table(source, tp);
  ModulusTable tab = modulus_table(
      n, ladder, target.grid(), tp,
      [&](double t) {
        const auto tt = m_table(target, t);
        std::vector<double> pulled(n * n);
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y) pulled[x * n + y] = tt[f(x) * m + f(y)];
        return pulled;
      },
      [&](std::size_t x, std::size_t y) { return src[x * n + y]; });

  tab.trend_ok = false;
  if (ladder.empty() || n <= 1) {
    tab.trend_ok = true;
    tab.trend_note = "trivial ladder or single source point";
    return tab;
  }
  const std::size_t g = tab.t_grid.size();
  for (std::size_t ti = 0; ti < g && !tab.trend_ok; ++ti) {
    const double bottom = tab.row(0, ti).value;
    const double top = tab.row(ladder.size() - 1, ti).value;
    if (top > bottom || top == 1.0) tab.trend_ok = true;
  }
  tab.trend_note = tab.trend_ok ? "D improves along the C-ladder for some t"
                                : "D does not improve as C grows at any t: not effectively proper";
  return tab;
}

std::optional<CloseWitness> check_closeness(const FuzzySpace& target, const PointMap& f, const PointMap& g) {
  if (f.size() != g.size()) throw DomainError("closeness needs maps on the same source");
  f.validate(f.size(), target.size());
  g.validate(g.size(), target.size());
  const double t = target.grid_max();
  CloseWitness w;
  for (std::size_t x = 0; x < f.size(); ++x) {
    const double v = target.M(f(x), g(x), t);
    if (v < w.min_closeness) {
      w.min_closeness = v;
      w.worst_point = x;
    }
  }
  if (!(w.min_closeness > 0.0)) return std::nullopt;
  w.scale = Scale{level_below(w.min_closeness, target.tolerance()), t};
  return w;
}

std::optional<CloseWitness> check_coarsely_onto(const FuzzySpace& target, const PointMap& f) {
  f.validate(f.size(), target.size());
  if (f.size() == 0) return std::nullopt;
  const double t = target.grid_max();
  CloseWitness w;
  for (std::size_t y = 0; y < target.size(); ++y) {
    double best = 0.0;
    for (std::size_t v : f.image) best = std::max(best, target.M(v, y, t));
    if (best < w.min_closeness) {
      w.min_closeness = best;
      w.worst_point = y;
    }
  }
  if (!(w.min_closeness > 0.0)) return std::nullopt;
  w.scale = Scale{level_below(w.min_closeness, target.tolerance()), t};
  return w;
}

bool coarsely_onto_at(const FuzzySpace& target, const PointMap& f, Scale s) {
  f.validate(f.size(), target.size());
  for (std::size_t y = 0; y < target.size(); ++y) {
    const bool hit = std::any_of(f.image.begin(), f.image.end(), [&](std::size_t v) { return target.close(v, y, s); });
    if (!hit) return false;
  }
  return true;
}

CoarseMapReport check_coarse_map(const FuzzySpace& source, const FuzzySpace& target, const PointMap& f,
                                 const std::vector<double>& ladder) {
  CoarseMapReport rep;
  rep.expansive = check_uniformly_expansive(source, target, f, ladder);
  rep.proper = check_effectively_proper(source, target, f, ladder);
  rep.onto = check_coarsely_onto(target, f);
  rep.embedding = rep.expansive.passed && rep.proper.passed && rep.proper.trend_ok;
  return rep;
}

CoarseInverseResult find_coarse_inverse(const FuzzySpace& source, const FuzzySpace& target, const PointMap& f) {
  f.validate(source.size(), target.size());
  if (source.size() == 0) throw DomainError("coarse inverse of a map from an empty space");
  CoarseInverseResult res;
  const double t = target.grid_max();
  res.candidate.image.resize(target.size());
  for (std::size_t y = 0; y < target.size(); ++y) {
    std::size_t best = 0;
    double best_m = -1.0;
    for (std::size_t x = 0; x < source.size(); ++x) {
      const double v = target.M(f(x), y, t);
      if (v > best_m) {
        best_m = v;
        best = x;
      }
    }
    res.candidate.image[y] = best;
  }

  const CoarseMapReport fr = check_coarse_map(source, target, f);
  if (!fr.embedding) res.failures.push_back("f is not a coarse embedding on the ladder");
  if (!fr.onto) res.failures.push_back("f is not coarsely onto");

  res.candidate_expansive = check_uniformly_expansive(target, source, res.candidate);
  if (!res.candidate_expansive.passed) res.failures.push_back("candidate inverse is not uniformly expansive");
  res.f_after_g = check_closeness(target, compose(f, res.candidate), PointMap::identity(target.size()));
  if (!res.f_after_g) res.failures.push_back("f o g is not close to the identity");
  res.g_after_f = check_closeness(source, compose(res.candidate, f), PointMap::identity(source.size()));
  if (!res.g_after_f) res.failures.push_back("g o f is not close to the identity");
  if (res.failures.empty()) res.inverse = res.candidate;
  return res;
}

TransportResult transport_witness(const PointMap& f, const PointMap& g, const WitnessFamily& w,
                                  std::size_t target_size) {
  if (g.size() != target_size) throw DomainError("inverse map must be defined on every target point");
  f.validate(w.size(), target_size);
  g.validate(target_size, w.size());
  TransportResult res;
  std::vector<HeightRow> rows(target_size);
  for (std::size_t y0 = 0; y0 < target_size; ++y0) {
    const WitnessSet& a = w[g(y0)];
    std::vector<std::uint64_t> counts(target_size, 0);
    for (const auto& [z, levels] : a.entries) counts[f(z)] += levels.count();
    std::uint64_t total = 0;
    for (std::size_t y = 0; y < target_size; ++y)
      if (counts[y] != 0) {
        rows[y0].push_back({y, counts[y]});
        total += counts[y];
      }
    if (rows[y0].empty()) {
      res.structural_ok = false;
      res.failures.push_back("empty transported set at target point " + std::to_string(y0));
    }
    if (total != a.size()) res.cardinality_preserved = false;
  }
  res.witness = WitnessFamily::from_heights(rows);
  return res;
}

PointMap nearest_retraction(const FuzzySpace& space, const PointSubset& subset) {
  if (subset.empty()) throw DomainError("retraction onto an empty subset");
  const double t = space.grid_max();
  PointMap r;
  r.image.resize(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) {
    std::size_t best = 0;
    double best_m = -1.0;
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const double v = space.M(x, subset[k], t);
      if (v > best_m) {
        best_m = v;
        best = k;
      }
    }
    r.image[x] = best;
  }
  return r;
}

RestrictionResult restrict_witness(const FuzzySpace& space, const PointSubset& subset, const WitnessFamily& w) {
  if (subset.empty()) throw DomainError("restriction to an empty subspace");
  if (!std::is_sorted(subset.begin(), subset.end()) ||
      std::adjacent_find(subset.begin(), subset.end()) != subset.end())
    throw DomainError("subspace indices must be sorted and distinct");
  PointMap inclusion;
  inclusion.image = subset;
  PointMap retract = nearest_retraction(space, subset);
  TransportResult tr = transport_witness(retract, inclusion, w, subset.size());
  return RestrictionResult{space.subspace(subset, space.name() + "-sub"), std::move(retract), std::move(tr)};
}

MetricModulusTable metric_target_moduli(const FuzzySpace& source, const FuzzySpace& target, const PointMap& f,
                                        const std::vector<double>& ladder) {
  if (!target.is_standard()) throw DomainError("metric moduli need a standard target");
  f.validate(source.size(), target.size());
  const std::size_t n = source.size();
  MetricModulusTable out;

  const ModulusTable fuzzy_exp = check_uniformly_expansive(source, target, f, ladder);
  const double tp = target.grid_max();
  const auto& grid = source.grid();
  for (std::size_t li = 0; li < ladder.size(); ++li)
    for (std::size_t ti = 0; ti < grid.size(); ++ti) {
      MetricExpansiveRow row{ladder[li], grid[ti], 0.0};
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
          if (source.M(x, y, grid[ti]) >= ladder[li]) row.S = std::max(row.S, target.distance(f(x), f(y)));
      const double b = fuzzy_exp.row(li, ti).value;
      const double expect = tp / (tp + row.S);
      if (std::abs(b - expect) > 1e-12 * std::max(1.0, expect)) {
        out.agrees = false;
        ++out.mismatches;
      }
      out.expansive.push_back(row);
    }

  // Properness in metric units against the fuzzy table at t = 1.
  const double sp = source.grid_max();
  for (double c : ladder) {
    MetricProperRow row{(1.0 - c) / c, sp, 1.0};
    double fuzzy_d = 1.0;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        const double m1 = source.M(x, y, sp);
        if (target.distance(f(x), f(y)) <= row.R) row.D = std::min(row.D, m1);
        if (target.M(f(x), f(y), 1.0) >= c) fuzzy_d = std::min(fuzzy_d, m1);
      }
    if (row.D != fuzzy_d) {
      out.agrees = false;
      ++out.mismatches;
    }
    out.proper.push_back(row);
  }
  return out;
}

}  // namespace fuzzycoarse
