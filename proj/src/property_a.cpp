#include "fuzzycoarse/property_a.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <deque>
#include <limits>
#include <map>

namespace fuzzycoarse {

// -------------------------------------------------------------- LevelSet

LevelSet LevelSet::prefix(std::uint64_t h) {
  LevelSet s;
  if (h > 0) s.runs_.push_back({1, h});
  return s;
}

LevelSet LevelSet::from_levels(std::vector<std::uint64_t> levels) {
  std::vector<Run> runs;
  runs.reserve(levels.size());
  for (std::uint64_t l : levels) runs.push_back({l, l});
  return from_runs(std::move(runs));
}

LevelSet LevelSet::from_runs(std::vector<Run> runs) {
  for (const Run& r : runs)
    if (r.lo == 0 || r.lo > r.hi) throw DomainError("levels must be positive integers with lo <= hi");
  std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) { return a.lo < b.lo; });
  LevelSet s;
  for (const Run& r : runs) {
    if (!s.runs_.empty() && r.lo <= s.runs_.back().hi + 1) {
      s.runs_.back().hi = std::max(s.runs_.back().hi, r.hi);
    } else {
      s.runs_.push_back(r);
    }
  }
  return s;
}

std::uint64_t LevelSet::count() const {
  std::uint64_t c = 0;
  for (const Run& r : runs_) c += r.hi - r.lo + 1;
  return c;
}

bool LevelSet::contains(std::uint64_t level) const {
  auto it = std::upper_bound(runs_.begin(), runs_.end(), level, [](std::uint64_t v, const Run& r) { return v < r.lo; });
  if (it == runs_.begin()) return false;
  --it;
  return level <= it->hi;
}

std::optional<std::uint64_t> LevelSet::prefix_height() const {
  if (runs_.size() == 1 && runs_.front().lo == 1) return runs_.front().hi;
  return std::nullopt;
}

std::vector<std::uint64_t> LevelSet::levels() const {
  std::vector<std::uint64_t> out;
  for (const Run& r : runs_)
    for (std::uint64_t l = r.lo; l <= r.hi; ++l) out.push_back(l);
  return out;
}

std::uint64_t intersection_count(const LevelSet& a, const LevelSet& b) {
  std::uint64_t c = 0;
  std::size_t i = 0, j = 0;
  while (i < a.runs_.size() && j < b.runs_.size()) {
    const auto& p = a.runs_[i];
    const auto& q = b.runs_[j];
    const std::uint64_t lo = std::max(p.lo, q.lo);
    const std::uint64_t hi = std::min(p.hi, q.hi);
    if (lo <= hi) c += hi - lo + 1;
    if (p.hi < q.hi) ++i; else ++j;
  }
  return c;
}

// ------------------------------------------------------------ WitnessSet

std::uint64_t WitnessSet::size() const {
  std::uint64_t c = 0;
  for (const auto& [p, l] : entries) c += l.count();
  return c;
}

PointSubset WitnessSet::projection() const {
  PointSubset out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.first);
  return out;
}

const LevelSet* WitnessSet::at(std::size_t point) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), point,
                             [](const auto& e, std::size_t p) { return e.first < p; });
  if (it == entries.end() || it->first != point) return nullptr;
  return &it->second;
}

SetCounts compare_sets(const WitnessSet& a, const WitnessSet& b) {
  SetCounts c;
  std::size_t i = 0, j = 0;
  const auto& ea = a.entries;
  const auto& eb = b.entries;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
      c.symmetric_difference += ea[i++].second.count();
    } else if (i == ea.size() || eb[j].first < ea[i].first) {
      c.symmetric_difference += eb[j++].second.count();
    } else {
      const std::uint64_t inter = intersection_count(ea[i].second, eb[j].second);
      c.intersection += inter;
      c.symmetric_difference += ea[i].second.count() + eb[j].second.count() - 2 * inter;
      ++i;
      ++j;
    }
  }
  return c;
}

WitnessFamily WitnessFamily::from_heights(const std::vector<HeightRow>& heights) {
  std::vector<WitnessSet> sets;
  sets.reserve(heights.size());
  for (const auto& row : heights) {
    std::map<std::size_t, std::uint64_t> h;
    for (const auto& [p, v] : row)
      if (v > 0) h[p] = std::max(h[p], v);
    WitnessSet s;
    for (const auto& [p, v] : h) s.entries.emplace_back(p, LevelSet::prefix(v));
    sets.push_back(std::move(s));
  }
  return WitnessFamily(std::move(sets));
}

WitnessFamily WitnessFamily::from_pairs(const std::vector<PairRow>& pairs) {
  std::vector<WitnessSet> sets;
  sets.reserve(pairs.size());
  for (const auto& row : pairs) {
    std::map<std::size_t, std::vector<std::uint64_t>> by_point;
    for (const auto& [p, l] : row) by_point[p].push_back(l);
    WitnessSet s;
    for (auto& [p, ls] : by_point) s.entries.emplace_back(p, LevelSet::from_levels(std::move(ls)));
    sets.push_back(std::move(s));
  }
  return WitnessFamily(std::move(sets));
}

void ParamTuple::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive");
}

// -------------------------------------------------------- verify_witness

namespace {

double ratio_of(const SetCounts& c) {
  if (c.intersection == 0) {
    return c.symmetric_difference == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(c.symmetric_difference) / static_cast<double>(c.intersection);
}

}  // namespace

WitnessCertificate verify_witness(const FuzzySpace& space, const WitnessFamily& w, const ParamTuple& p) {
  p.validate();
  WitnessCertificate cert;
  cert.params = p;
  const std::size_t n = space.size();
  const Tolerance& tol = space.tolerance();
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
    for (const auto& [y, l] : w[x].entries) {
      if (y >= n || l.empty()) {
        cert.structural_ok = false;
        cert.failures.push_back("A_" + space.points().label(x) + " has an invalid entry");
        break;
      }
    }
  }
  if (!cert.structural_ok) return cert;

  const double tp = space.grid_max();
  for (std::size_t x = 0; x < n; ++x)
    for (const auto& e : w[x].entries) cert.support_min = std::min(cert.support_min, space.M(x, e.first, tp));
  cert.support = Scale{level_below(cert.support_min, tol), tp};

  bool ok = true;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < x; ++y) {
      if (!space.close(x, y, p.scale())) continue;
      ++cert.close_pairs;
      const SetCounts c = compare_sets(w[x], w[y]);
      const double ratio = ratio_of(c);
      if (!cert.worst_pair || ratio > cert.worst_ratio) {
        cert.worst_ratio = ratio;
        cert.worst_pair = std::pair{y, x};
      }
      const bool pair_ok = tol.strictly_less(static_cast<double>(c.symmetric_difference),
                                             p.eps * static_cast<double>(c.intersection));
      if (!pair_ok && ok) {
        cert.failures.push_back("pair (" + space.points().label(y) + "," + space.points().label(x) +
                                ") has |A_x Δ A_y| = " + std::to_string(c.symmetric_difference) +
                                " against |A_x ∩ A_y| = " + std::to_string(c.intersection));
      }
      ok = ok && pair_ok;
    }
  }
  cert.passed = ok;
  return cert;
}

// ------------------------------------------------------- nat-product witness

Ex39Witness ex39_witness(const FuzzySpace& space, Radius r) {
  const auto* b = std::get_if<BuiltinMetric>(&space.metric());
  if (b == nullptr || b->id != BuiltinId::nat_product) {
    throw DomainError("ex39 witness needs the nat-product builtin space");
  }
  const double level = r.level();
  auto ok = [&](std::size_t N) { return 1.0 / static_cast<double>(N + 1) < level; };
  std::size_t N = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(1.0 / level)));
  while (!ok(N)) ++N;
  while (N > 1 && ok(N - 1)) --N;

  Ex39Witness out;
  out.N = N;
  const std::size_t n = space.size();
  const std::size_t h = std::min(N, n);  // hub label; the space is {1..n}
  out.hub = h - 1;
  std::vector<HeightRow> rows(n);
  for (std::size_t x = 0; x < n; ++x) rows[x] = {{x + 1 <= N ? out.hub : x, 1}};
  out.witness = WitnessFamily::from_heights(rows);
  const double hd = static_cast<double>(h);
  out.support = h == 1 ? Radius{} : Radius::from_level(1.0 / (hd * hd));
  return out;
}

// ------------------------------------------------------------ cover witness

std::size_t thm37_K(std::size_t n, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double q = 2.0 + (2.0 * static_cast<double>(n) + 1.0) / eps;
  if (!std::isfinite(q) || q > 1e15) throw DomainError("K = floor(2 + (2n+1)/eps) is too large");
  const double k = std::round(q);
  if (std::abs(q - k) <= 1e-9 * std::max(1.0, q)) return static_cast<std::size_t>(k);
  return static_cast<std::size_t>(std::floor(q));
}

Thm37Params thm37_parameters(const TNorm& tn, std::size_t n, const ParamTuple& p) {
  p.validate();
  Thm37Params out;
  out.K = thm37_K(n, p.eps);
  double level = tn.power(p.r.level(), static_cast<int>(std::min<std::size_t>(out.K + 1, 1u << 30)));
  if (!(level >= DBL_MIN)) {
    level = DBL_MIN;
    out.level_clamped = true;
  }
  out.R = Radius::from_level(level);
  out.T = (2.0 + (2.0 * static_cast<double>(n) + 1.0) / p.eps) * p.t;
  return out;
}

namespace {

std::vector<std::vector<std::size_t>> closeness_graph(const FuzzySpace& space, Scale s) {
  const std::size_t n = space.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < x; ++y)
      if (space.close(x, y, s)) {
        adj[x].push_back(y);
        adj[y].push_back(x);
      }
  return adj;
}

// Steps from each point of U to the nearest point outside U through chains
// that stay in U until the last step; nullopt when no chain exists.
std::vector<std::optional<std::size_t>> exit_distances(const std::vector<std::vector<std::size_t>>& adj,
                                                       const PointSubset& u) {
  const std::size_t n = adj.size();
  std::vector<char> in(n, 0);
  for (std::size_t x : u) in[x] = 1;
  std::vector<std::optional<std::size_t>> dist(n);
  std::deque<std::size_t> queue;
  for (std::size_t x = 0; x < n; ++x)
    if (!in[x]) {
      dist[x] = 0;
      queue.push_back(x);
    }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[v]) {
      if (in[w] && !dist[w]) {
        dist[w] = *dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace

std::size_t chain_length(const FuzzySpace& space, std::size_t x, const PointSubset& u, Scale s, std::size_t cap) {
  if (cap == 0) throw DomainError("chain length cap must be at least 1");
  if (!std::binary_search(u.begin(), u.end(), x)) throw DomainError("chain length needs x inside U");
  const std::size_t n = space.size();
  std::vector<std::optional<std::size_t>> depth(n);
  depth[x] = 0;
  std::deque<std::size_t> queue{x};
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t y = 0; y < n; ++y) {
      if (depth[y] || !space.close(v, y, s)) continue;
      depth[y] = *depth[v] + 1;
      if (!std::binary_search(u.begin(), u.end(), y)) return std::min(*depth[y], cap);
      queue.push_back(y);
    }
  }
  return cap;
}

Thm37Result construct_from_cover(const FuzzySpace& space, const Family& cover, const ParamTuple& p, std::size_t n) {
  Thm37Result res;
  res.params = thm37_parameters(space.tnorm(), n, p);
  const std::size_t npts = space.size();
  const Scale big{res.params.R, res.params.T};

  for (const auto& u : cover)
    if (u.empty() || !std::is_sorted(u.begin(), u.end()) || u.back() >= npts) {
      res.failures.push_back("cover members must be nonempty sorted point sets");
      return res;
    }
  const LebesgueResult leb = lebesgue_pair_check(space, cover, big);
  if (!leb.holds) {
    res.failures.push_back("claim 'lebesgue pair (R,T)' fails at point " + space.points().label(*leb.first_failure));
  }
  const std::size_t mult = multiplicity(cover, npts);
  if (mult > n + 1) {
    res.failures.push_back("claim 'multiplicity <= n+1' fails: multiplicity is " + std::to_string(mult));
  }
  if (!res.failures.empty()) return res;
  res.accepted = true;

  const std::size_t K = res.params.K;
  const auto adj = closeness_graph(space, p.scale());
  std::vector<std::map<std::size_t, std::uint64_t>> heights(npts);
  for (const auto& u : cover) {
    const std::size_t anchor = u.front();
    res.anchors.push_back(anchor);
    const auto dist = exit_distances(adj, u);
    for (std::size_t x : u) {
      const std::size_t l = dist[x] ? std::min(*dist[x], K) : K;
      auto& h = heights[x][anchor];
      h = std::max<std::uint64_t>(h, l);
    }
  }
  std::vector<HeightRow> rows(npts);
  for (std::size_t x = 0; x < npts; ++x) rows[x].assign(heights[x].begin(), heights[x].end());
  res.witness = WitnessFamily::from_heights(rows);

  for (std::size_t x = 0; x < npts; ++x)
    res.max_projection = std::max(res.max_projection, res.witness[x].entries.size());
  res.min_close_intersection = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t x = 0; x < npts; ++x)
    for (std::size_t y = 0; y < x; ++y) {
      if (!space.close(x, y, p.scale())) continue;
      const SetCounts c = compare_sets(res.witness[x], res.witness[y]);
      res.max_close_symdiff = std::max(res.max_close_symdiff, c.symmetric_difference);
      res.min_close_intersection = std::min(res.min_close_intersection, c.intersection);
    }
  if (res.min_close_intersection == std::numeric_limits<std::uint64_t>::max()) res.min_close_intersection = 0;

  res.certificate = verify_witness(space, res.witness, p);
  bool ok = res.certificate.passed;
  if (res.max_projection > n + 1) {
    res.failures.push_back("a projection has more than n+1 points");
    ok = false;
  }
  if (res.max_close_symdiff > 2 * n + 1) {
    res.failures.push_back("a close pair has |A_x Δ A_y| above 2n+1");
    ok = false;
  }
  for (const auto& f : res.certificate.failures) res.failures.push_back(f);
  res.passed = ok;
  return res;
}

// ------------------------------------------------------ subexponential field

double subexp_bound(std::size_t mult, double t, std::size_t n) {
  if (n == 0 || mult == 0) throw DomainError("subexp bound needs n, mult >= 1");
  return 2.0 * (1.0 - std::pow(static_cast<double>(mult), -2.0 * t / static_cast<double>(n)));
}

SubexpField subexp_field(const FuzzySpace& space, const Family& cover, Radius r, std::size_t n) {
  if (n == 0) throw DomainError("subexp field needs n >= 1");
  const std::size_t npts = space.size();
  SubexpField f;
  f.n = n;
  f.r = r;
  f.multiplicity = multiplicity(cover, npts);
  f.eta = Matrix(npts, npts);
  for (const auto& u : cover) {
    if (u.empty()) throw DomainError("cover members must be nonempty");
    f.representatives.push_back(u.front());
  }
  f.window = uniform_bound(space, cover).scale;

  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = n + 1; k <= 2 * n; ++k) {
    const Scale s{r, static_cast<double>(k)};
    for (std::size_t x = 0; x < npts; ++x) {
      const PointSubset b = ball(space, x, s);
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < cover.size(); ++i)
        if (std::includes(cover[i].begin(), cover[i].end(), b.begin(), b.end())) members.push_back(i);
      if (members.empty()) {
        throw DomainError("S_x(r,k) is empty at x = " + space.points().label(x) + ", k = " + std::to_string(k));
      }
      const double w = inv_n / static_cast<double>(members.size());
      for (std::size_t i : members) f.eta(x, f.representatives[i]) += w;
    }
  }
  for (std::size_t x = 0; x < npts; ++x) {
    double norm = 0.0;
    for (std::size_t y = 0; y < npts; ++y) {
      norm += std::abs(f.eta(x, y));
      if (f.eta(x, y) != 0.0 && y != x && !space.close(x, y, f.window)) f.support_ok = false;
    }
    f.max_norm_error = std::max(f.max_norm_error, std::abs(norm - 1.0));
  }
  return f;
}

// ------------------------------------------------------ metric-side witness

MetricWitnessCertificate verify_metric_witness(const FuzzySpace& space, const WitnessFamily& w, double eps, double R) {
  if (!space.is_standard()) throw DomainError("metric witness check needs a standard space");
  if (!(eps > 0.0) || !(R > 0.0)) throw DomainError("metric witness check needs eps, R > 0");
  if (w.size() != space.size()) throw DomainError("witness size differs from the space");
  const Tolerance& tol = space.tolerance();
  MetricWitnessCertificate cert;
  cert.eps = eps;
  cert.R = R;
  bool ok = true;
  for (std::size_t x = 0; x < space.size(); ++x) {
    if (w[x].entries.empty()) ok = false;
    for (const auto& e : w[x].entries) cert.max_support_distance = std::max(cert.max_support_distance, space.distance(x, e.first));
    for (std::size_t y = 0; y < x; ++y) {
      if (!tol.strictly_less(space.distance(x, y), R)) continue;
      ++cert.close_pairs;
      const SetCounts c = compare_sets(w[x], w[y]);
      cert.worst_ratio = std::max(cert.worst_ratio, ratio_of(c));
      ok = ok && tol.strictly_less(static_cast<double>(c.symmetric_difference), eps * static_cast<double>(c.intersection));
    }
  }
  cert.passed = ok;
  return cert;
}

double metric_radius_for(Radius r, double t) { return t * r.r() / r.level(); }

}  // namespace fuzzycoarse
