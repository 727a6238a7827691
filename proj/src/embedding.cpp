#include "fuzzycoarse/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fuzzycoarse {

// ------------------------------------------------------------------ AceField

double AceField::inner(std::size_t x, std::size_t y) const {
  const SetCounts c = compare_sets(witness_[x], witness_[y]);
  return static_cast<double>(c.intersection) /
         std::sqrt(static_cast<double>(sizes_.at(x)) * static_cast<double>(sizes_.at(y)));
}

double AceField::distance_sq(std::size_t x, std::size_t y) const {
  const SetCounts c = compare_sets(witness_[x], witness_[y]);
  const double a = static_cast<double>(sizes_.at(x));
  const double b = static_cast<double>(sizes_.at(y));
  const double common = static_cast<double>(c.intersection);
  const double gap = 1.0 / std::sqrt(a) - 1.0 / std::sqrt(b);
  return common * gap * gap + (a - common) / a + (b - common) / b;
}

bool AceField::disjoint(std::size_t x, std::size_t y) const {
  return compare_sets(witness_[x], witness_[y]).intersection == 0;
}

std::vector<double> AceField::dense(std::size_t x) const {
  const std::size_t L = static_cast<std::size_t>(max_level_);
  if (L * size() > 50'000'000) throw DomainError("dense coordinates would exceed 5e7 entries");
  std::vector<double> v(size() * L, 0.0);
  const double value = 1.0 / std::sqrt(static_cast<double>(sizes_.at(x)));
  for (const auto& [y, levels] : witness_[x].entries)
    for (const auto& run : levels.runs())
      for (std::uint64_t j = run.lo; j <= run.hi; ++j) v[y * L + (j - 1)] = value;
  return v;
}

AceField::LemmaCheck AceField::lemma_check(const FuzzySpace& space) const {
  LemmaCheck out;
  const double eps = params_.eps;
  const Tolerance& tol = space.tolerance();
  for (std::size_t x = 0; x < size(); ++x) {
    for (std::size_t y = 0; y < x; ++y) {
      if (!space.close(x, y, params_.scale())) continue;
      ++out.close_pairs;
      const SetCounts c = compare_sets(witness_[x], witness_[y]);
      const double total = static_cast<double>(sizes_[x] + sizes_[y]);
      if (!tol.strictly_less(total, (2.0 + eps) * static_cast<double>(c.intersection))) ++out.count_failures;
      const double ip = inner(x, y);
      const double d2 = distance_sq(x, y);
      out.min_inner = std::min(out.min_inner, ip);
      out.max_distance_sq = std::max(out.max_distance_sq, d2);
      if (!(ip > 2.0 / (2.0 + eps))) ++out.inner_failures;
      if (!(d2 < 2.0 * eps / (2.0 + eps))) ++out.distance_failures;
    }
  }
  out.passed = out.count_failures == 0 && out.inner_failures == 0 && out.distance_failures == 0;
  return out;
}

AceField ace_vectors(const FuzzySpace& space, const WitnessFamily& w, const ParamTuple& p) {
  if (w.size() != space.size()) throw DomainError("witness family size does not match the space");
  AceField f;
  f.verification_ = verify_witness(space, w, p);
  if (!f.verification_.passed) {
    throw DomainError("witness fails verification" +
                      (f.verification_.failures.empty() ? std::string() : ": " + f.verification_.failures.front()));
  }
  f.witness_ = w;
  f.params_ = p;
  for (const auto& s : w.sets()) {
    f.sizes_.push_back(s.size());
    for (const auto& e : s.entries)
      if (!e.second.empty()) f.max_level_ = std::max(f.max_level_, e.second.runs().back().hi);
  }
  return f;
}

// ------------------------------------------------------------------- config

void EmbeddingConfig::validate() const {
  if (levels == 0) throw DomainError("embedding needs at least one level");
  if (r_ladder.empty()) return;
  if (r_ladder.size() < levels) throw DomainError("r ladder is shorter than the level count");
  for (std::size_t i = 0; i < r_ladder.size(); ++i) {
    if (!(r_ladder[i] > 0.0 && r_ladder[i] < 1.0)) throw DomainError("r ladder entries must lie in (0,1)");
    if (i > 0 && !(r_ladder[i] > r_ladder[i - 1])) throw DomainError("r ladder must be strictly increasing");
  }
}

double EmbeddingConfig::r(std::size_t n) const {
  if (n == 0) throw DomainError("levels are numbered from 1");
  if (!r_ladder.empty()) return r_ladder.at(n - 1);
  return static_cast<double>(n) / static_cast<double>(n + 1);
}

double EmbeddingConfig::eps(std::size_t n) const { return std::ldexp(1.0, -static_cast<int>(n)); }

ParamTuple EmbeddingConfig::level_params(std::size_t n) const {
  const double e = eps(n);
  return ParamTuple{e * e, Radius::from_r(r(n)), t(n)};
}

std::vector<WitnessFamily> level_witnesses_from_cover(const FuzzySpace& space, const Family& cover,
                                                      const EmbeddingConfig& cfg, std::size_t dim) {
  cfg.validate();
  std::vector<WitnessFamily> out;
  for (std::size_t n = 1; n <= cfg.levels; ++n) {
    Thm37Result res = construct_from_cover(space, cover, cfg.level_params(n), dim);
    if (!res.passed) {
      throw DomainError("level " + std::to_string(n) + " witness rejected" +
                        (res.failures.empty() ? std::string() : ": " + res.failures.front()));
    }
    out.push_back(std::move(res.witness));
  }
  return out;
}

// ---------------------------------------------------------------- embedding

namespace {

std::size_t pair_index(std::size_t n, std::size_t x, std::size_t y) {
  return x * n - x * (x + 1) / 2 + (y - x - 1);
}

}  // namespace

const PairDiagnostic& EmbeddingVectors::pair(std::size_t x, std::size_t y) const {
  if (x == y) throw DomainError("pair diagnostics exist only for distinct points");
  if (x > y) std::swap(x, y);
  if (y >= size()) throw DomainError("point index out of range");
  return pairs[pair_index(size(), x, y)];
}

double EmbeddingVectors::distance(std::size_t x, std::size_t y) const {
  return x == y ? 0.0 : std::sqrt(pair(x, y).dist_sq);
}

std::vector<double> EmbeddingVectors::block(std::size_t x, std::size_t n) const {
  const AceField& f = levels.at(n - 1);
  std::vector<double> v = f.dense(x);
  const std::vector<double> z = f.dense(config.base);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= z[i];
  return v;
}

EmbeddingVectors build_embedding(const FuzzySpace& space, const std::vector<WitnessFamily>& witnesses,
                                 const EmbeddingConfig& cfg) {
  cfg.validate();
  const std::size_t n = space.size();
  if (cfg.base >= n) throw DomainError("base point out of range");
  if (witnesses.size() < cfg.levels) {
    throw DomainError("missing level witness " + std::to_string(witnesses.size() + 1));
  }
  const Tolerance& tol = space.tolerance();
  const TNorm& tn = space.tnorm();
  const std::size_t N = cfg.levels;

  EmbeddingVectors e;
  e.config = cfg;
  for (std::size_t k = 1; k <= N; ++k) {
    e.levels.push_back(ace_vectors(space, witnesses[k - 1], cfg.level_params(k)));
    e.windows.push_back(e.levels.back().window());
  }
  e.tail_bound = std::ldexp(1.0, -static_cast<int>(N));

  e.base_norm_sq.assign(n, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (const auto& f : e.levels) e.base_norm_sq[x] += x == cfg.base ? 0.0 : f.distance_sq(x, cfg.base);

  e.count_failures.assign(3, 0);
  e.pairs.reserve(n * (n - 1) / 2);
  const std::size_t z = cfg.base;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      PairDiagnostic d;
      d.x = x;
      d.y = y;
      double cross = 0.0;
      for (std::size_t k = 1; k <= N; ++k) {
        const AceField& f = e.levels[k - 1];
        const double b = f.distance_sq(x, y);
        d.blocks_sq.push_back(b);
        d.dist_sq += b;
        const bool sqrt2 = f.disjoint(x, y);
        const Scale& w = e.windows[k - 1];
        const double lvl = w.r.level();
        const bool window = tol.strictly_less(space.M(x, y, 2.0 * w.t), tn.apply(lvl, lvl, tol));
        d.sqrt2_count += sqrt2;
        d.window_count += window;
        if (window && !sqrt2) ++e.window_without_sqrt2;
        if (sqrt2 && !window) ++e.sqrt2_without_window;
        if (!space.close(x, y, Scale{Radius::from_r(cfg.r(k)), cfg.t(k)})) d.n_double_prime = k;
        cross += f.inner(x, y) - f.inner(x, z) - f.inner(z, y) + 1.0;
      }
      d.bound_ok = d.dist_sq < 4.0 * static_cast<double>(d.n_double_prime) + 1.0;
      e.bound_failures += !d.bound_ok;
      const double polar = e.base_norm_sq[x] + e.base_norm_sq[y] - 2.0 * cross;
      e.orthogonality_error = std::max(e.orthogonality_error, std::abs(d.dist_sq - polar));
      const double dist = std::sqrt(d.dist_sq);
      for (std::size_t ri = 0; ri < 3; ++ri) {
        const double R = static_cast<double>(ri + 1);
        const double cap = R * R / 2.0;
        if (dist <= R && (static_cast<double>(d.sqrt2_count) > cap || static_cast<double>(d.window_count) > cap))
          ++e.count_failures[ri];
      }
      e.pairs.push_back(std::move(d));
    }
  }
  return e;
}

DistortionReport distortion_report(const FuzzySpace& space, const EmbeddingVectors& e) {
  DistortionReport rep;
  const std::size_t n = e.size();
  const Tolerance& tol = space.tolerance();
  auto sup_m = [&](std::size_t x, std::size_t y) {
    double m = 0.0;
    for (double t : space.grid()) m = std::max(m, space.M(x, y, t));
    return m;
  };
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y) rep.rows.push_back(DistortionRow{x, y, sup_m(x, y), e.distance(x, y)});

  for (const auto& d : e.pairs) {
    for (std::size_t k = 1; k <= e.config.levels; ++k) {
      const double m = space.M(d.x, d.y, e.config.t(k));
      const double level = 1.0 - e.config.r(k);
      if (m < level) continue;
      const bool long_block = std::sqrt(d.blocks_sq[k - 1]) > e.config.eps(k);
      if (tol.strictly_greater(m, level)) {
        rep.expansive_failures += long_block;
      } else {
        ++rep.boundary_cases;
        rep.boundary_failures += long_block;
      }
    }
  }

  rep.max_window_count.assign(rep.properness_radii.size(), 0);
  for (const auto& d : e.pairs)
    for (std::size_t ri = 0; ri < rep.properness_radii.size(); ++ri)
      if (std::sqrt(d.dist_sq) <= rep.properness_radii[ri])
        rep.max_window_count[ri] = std::max(rep.max_window_count[ri], d.window_count);

  const std::size_t z = e.config.base;
  std::vector<std::size_t> order;
  for (std::size_t x = 0; x < n; ++x)
    if (x != z) order.push_back(x);
  const double tmax = space.grid_max();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return space.M(z, a, tmax) > space.M(z, b, tmax); });
  double running = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    const double m = space.M(z, order[i], tmax);
    double group_max = 0.0;
    while (j < order.size() && space.M(z, order[j], tmax) == m) {
      const double dist = e.distance(z, order[j]);
      if (dist < running - 1e-12) ++rep.monotone_violations;
      group_max = std::max(group_max, dist);
      ++j;
    }
    running = std::max(running, group_max);
    i = j;
  }

  bool radii_ok = true;
  for (std::size_t ri = 0; ri < rep.properness_radii.size(); ++ri) {
    const double R = rep.properness_radii[ri];
    radii_ok = radii_ok && static_cast<double>(rep.max_window_count[ri]) <= R * R / 2.0;
  }
  rep.passed = rep.expansive_failures == 0 && radii_ok;
  return rep;
}

}  // namespace fuzzycoarse
