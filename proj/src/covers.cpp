#include "fuzzycoarse/covers.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

namespace fuzzycoarse {

Cover Cover::from_sets(Family sets, std::size_t n) {
  Cover c;
  std::set<PointSubset> seen;
  for (auto& s : sets) {
    if (s.empty()) throw DomainError("cover members must be nonempty");
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.back() >= n) throw DomainError("cover member refers to a point outside the space");
    if (!seen.insert(s).second) {
      c.warnings.push_back("duplicate cover member dropped");
      continue;
    }
    c.sets.push_back(std::move(s));
  }
  return c;
}

bool Cover::covers(std::size_t n) const {
  std::vector<char> hit(n, 0);
  for (const auto& s : sets)
    for (std::size_t x : s) hit[x] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char h) { return h != 0; });
}

DisjointnessResult are_rt_disjoint(const FuzzySpace& space, const PointSubset& u, const PointSubset& v, Scale s) {
  if (u.empty() || v.empty()) throw DomainError("disjointness needs nonempty sets");
  DisjointnessResult res;
  res.sup = -1.0;
  for (std::size_t a : u)
    for (std::size_t b : v) {
      const double m = space.M(a, b, s.t);
      if (m > res.sup) {
        res.sup = m;
        res.u = a;
        res.v = b;
      }
    }
  res.disjoint = space.tolerance().strictly_less(res.sup, s.r.level());
  return res;
}

std::size_t multiplicity(const Family& cover, std::size_t n) {
  std::vector<std::size_t> count(n, 0);
  for (const auto& s : cover)
    for (std::size_t x : s) ++count.at(x);
  return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

LebesgueResult lebesgue_pair_check(const FuzzySpace& space, const Family& cover, Scale s) {
  LebesgueResult res;
  res.member.resize(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) {
    const PointSubset b = ball(space, x, s);
    for (std::size_t i = 0; i < cover.size(); ++i) {
      if (std::includes(cover[i].begin(), cover[i].end(), b.begin(), b.end())) {
        res.member[x] = i;
        break;
      }
    }
    if (!res.member[x]) {
      res.holds = false;
      if (!res.first_failure) res.first_failure = x;
    }
  }
  return res;
}

bool members_bounded_at(const FuzzySpace& space, const Family& cover, Scale s) {
  for (const auto& u : cover)
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (!space.close(u[i], u[j], s)) return false;
  return true;
}

BoundedWitness uniform_bound(const FuzzySpace& space, const Family& cover) {
  const double t = space.grid_max();
  double lo = 1.0;
  for (const auto& u : cover)
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) lo = std::min(lo, space.M(u[i], u[j], t));
  return BoundedWitness{Scale{level_below(lo / 2.0, space.tolerance()), t}, lo, true};
}

AsdimReport verify_asdim_witness(const FuzzySpace& space, const DisjointFamilies& df) {
  AsdimReport rep;
  rep.n = df.families.empty() ? 0 : df.families.size() - 1;
  Family all;
  for (const auto& f : df.families) all.insert(all.end(), f.begin(), f.end());
  rep.covers = Cover{all, {}, {}}.covers(space.size());
  if (!rep.covers) rep.failures.push_back("families do not cover the space");
  if (df.families.empty()) rep.failures.push_back("no families given");

  bool ok = rep.covers && !df.families.empty();
  for (std::size_t f = 0; f < df.families.size(); ++f) {
    const Family& fam = df.families[f];
    FamilyCheck fc;
    std::pair<std::size_t, std::size_t> worst_pts{0, 0}, worst_members{0, 0};
    for (std::size_t i = 0; i < fam.size(); ++i) {
      if (fam[i].empty()) {
        fc.disjoint = false;
        rep.failures.push_back("family " + std::to_string(f) + " has an empty member");
        continue;
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (fam[j].empty()) continue;
        const DisjointnessResult d = are_rt_disjoint(space, fam[i], fam[j], df.scale);
        if (d.sup > fc.worst_sup) {
          fc.worst_sup = d.sup;
          worst_pts = {d.u, d.v};
          worst_members = {j, i};
        }
      }
    }
    fc.worst_margin = df.scale.r.level() - fc.worst_sup;
    if (!space.tolerance().strictly_less(fc.worst_sup, df.scale.r.level())) {
      fc.disjoint = false;
      fc.offending_points = worst_pts;
      fc.offending_members = worst_members;
      rep.failures.push_back("family " + std::to_string(f) + ": members " + std::to_string(worst_members.first) +
                             " and " + std::to_string(worst_members.second) +
                             " are not (r,t)-disjoint at points (" + space.points().label(worst_pts.first) + "," +
                             space.points().label(worst_pts.second) + ")");
    }
    ok = ok && fc.disjoint;
    rep.families.push_back(fc);
  }
  rep.union_bound = uniform_bound(space, all);
  rep.passed = ok;
  return rep;
}

Family enlarge_family(const FuzzySpace& space, const Family& family, Scale s) {
  std::vector<PointSubset> balls(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) balls[x] = ball(space, x, s);
  Family out;
  out.reserve(family.size());
  for (const auto& u : family) {
    std::vector<char> in(space.size(), 0);
    for (std::size_t x : u)
      for (std::size_t y : balls.at(x)) in[y] = 1;
    PointSubset e;
    for (std::size_t y = 0; y < space.size(); ++y)
      if (in[y]) e.push_back(y);
    out.push_back(std::move(e));
  }
  return out;
}

// ------------------------------------------------------------ ad_X search

Radius adx_r_prime(const TNorm& tn, Radius r) {
  return Radius::from_level(tn.apply(r.level(), r.level()) / 2.0);
}

namespace {

struct AdxContext {
  const FuzzySpace& space;
  std::vector<PointSubset> balls;
  std::optional<Scale> bound;

  bool bounded(const PointSubset& u) const {
    if (!bound) return true;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (!space.close(u[i], u[j], *bound)) return false;
    return true;
  }

  PointSubset unite(const PointSubset& a, const PointSubset& b) const {
    PointSubset out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }

  /// Member built from a block of a point partition: the union of its balls.
  PointSubset enlarge_block(const PointSubset& block) const {
    PointSubset out;
    for (std::size_t x : block) out = unite(out, balls[x]);
    return out;
  }
};

Family canonical(Family f) {
  for (auto& s : f) std::sort(s.begin(), s.end());
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

// Greedy ball grouping: each ball joins the member it overlaps most while the
// union stays bounded, or opens a new member.
std::optional<Family> greedy_grouping(const AdxContext& ctx, const std::vector<std::size_t>& order) {
  Family members;
  for (std::size_t x : order) {
    const PointSubset& b = ctx.balls[x];
    if (!ctx.bounded(b)) return std::nullopt;
    std::optional<std::size_t> best;
    std::size_t best_overlap = 0;
    bool contained = false;
    for (std::size_t i = 0; i < members.size() && !contained; ++i) {
      if (std::includes(members[i].begin(), members[i].end(), b.begin(), b.end())) {
        contained = true;
        break;
      }
      PointSubset inter;
      std::set_intersection(members[i].begin(), members[i].end(), b.begin(), b.end(), std::back_inserter(inter));
      if (!best || inter.size() > best_overlap) {
        const PointSubset u = ctx.unite(members[i], b);
        if (ctx.bounded(u)) {
          best = i;
          best_overlap = inter.size();
        }
      }
    }
    if (contained) continue;
    if (best) {
      members[*best] = ctx.unite(members[*best], b);
    } else {
      members.push_back(b);
    }
  }
  return canonical(std::move(members));
}

// Partition then enlarge: grow blocks of a point partition while the enlarged
// block stays bounded.
std::optional<Family> partition_enlarge(const AdxContext& ctx, const std::vector<std::size_t>& order) {
  const std::size_t n = ctx.space.size();
  std::vector<char> assigned(n, 0);
  Family members;
  for (std::size_t seed : order) {
    if (assigned[seed]) continue;
    PointSubset block{seed};
    PointSubset member = ctx.balls[seed];
    if (!ctx.bounded(member)) return std::nullopt;
    assigned[seed] = 1;
    for (std::size_t y : order) {
      if (assigned[y]) continue;
      const PointSubset cand = ctx.unite(member, ctx.balls[y]);
      if (ctx.bounded(cand)) {
        member = cand;
        block.push_back(y);
        assigned[y] = 1;
      }
    }
    members.push_back(std::move(member));
  }
  return canonical(std::move(members));
}

}  // namespace

AdxTable ad_x_estimate(const FuzzySpace& space, Radius r, const std::vector<double>& t_ladder, const AdxOptions& opt) {
  if (t_ladder.empty()) throw DomainError("ad_X estimate needs a nonempty t ladder");
  AdxTable table;
  table.r = r;
  table.r_prime = adx_r_prime(space.tnorm(), r);
  table.notes.push_back("HEURISTIC UPPER BOUND: greedy cover search, not a proven minimum");
  table.notes.push_back("Lebesgue pairs are compared componentwise (r' and t both at least the target)");
  if (!opt.member_bound) {
    table.notes.push_back("no member bound given: on a finite space the cover {X} is uniformly bounded");
  }
  const std::size_t n = space.size();
  for (double t : t_ladder) {
    if (!(t > 0.0)) throw DomainError("t ladder entries must be positive");
    AdxEntry e;
    e.t = t;
    const Scale s{table.r_prime, t};
    AdxContext ctx{space, {}, opt.member_bound};
    ctx.balls.resize(n);
    for (std::size_t x = 0; x < n; ++x) ctx.balls[x] = ball(space, x, s);

    std::vector<Family> candidates;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(opt.seed);
    for (std::size_t rep = 0; rep <= opt.restarts; ++rep) {
      if (rep > 0) std::shuffle(order.begin(), order.end(), rng);
      if (auto f = greedy_grouping(ctx, order)) candidates.push_back(std::move(*f));
      if (auto f = partition_enlarge(ctx, order)) candidates.push_back(std::move(*f));
    }
    std::optional<Family> best;
    std::size_t best_mult = 0;
    for (auto& c : candidates) {
      // every candidate is re-verified rather than trusted
      if (!lebesgue_pair_check(space, c, s).holds) continue;
      if (opt.member_bound && !members_bounded_at(space, c, *opt.member_bound)) continue;
      const std::size_t m = multiplicity(c, n);
      if (!best || m < best_mult || (m == best_mult && c < *best)) {
        best = c;
        best_mult = m;
      }
    }
    if (best) {
      e.available = true;
      e.estimate = best_mult == 0 ? 0 : best_mult - 1;
      e.cover = std::move(*best);
    } else {
      e.note = "no admissible cover found: some ball is not bounded at the member bound";
    }
    table.entries.push_back(std::move(e));
  }
  return table;
}

std::optional<std::size_t> ad_x_exact(const FuzzySpace& space, Scale s, const std::optional<Scale>& member_bound) {
  const std::size_t n = space.size();
  if (n > 10) throw DomainError("exhaustive ad_X search is limited to 10 points");
  if (n == 0) return 0;
  AdxContext ctx{space, {}, member_bound};
  ctx.balls.resize(n);
  for (std::size_t x = 0; x < n; ++x) ctx.balls[x] = ball(space, x, s);

  // Restricted growth strings enumerate the set partitions.
  std::vector<std::size_t> block(n, 0);
  std::optional<std::size_t> best;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      Family members(used);
      for (std::size_t x = 0; x < n; ++x) members[block[x]].push_back(x);
      Family cover;
      for (const auto& b : members) {
        PointSubset m = ctx.enlarge_block(b);
        if (!ctx.bounded(m)) return;
        cover.push_back(std::move(m));
      }
      cover = canonical(std::move(cover));
      const std::size_t mult = multiplicity(cover, n);
      if (!best || mult < *best) best = mult;
      return;
    }
    for (std::size_t b = 0; b <= used && b < n; ++b) {
      block[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
  if (!best) return std::nullopt;
  return *best - 1;
}

}  // namespace fuzzycoarse
