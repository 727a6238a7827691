#include "fuzzycoarse/fuzzy_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fuzzycoarse {

// ---------------------------------------------------------------- Radius

Radius Radius::from_r(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("radius r must lie in (0,1), got " + std::to_string(r));
  return Radius(1.0 - r);
}

Radius Radius::from_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("closeness level 1-r must lie in (0,1), got " + std::to_string(level));
  }
  return Radius(level);
}

Radius level_below(double m, const Tolerance& tol) {
  if (!(m > 0.0 && m <= 1.0)) throw DomainError("level_below needs a value in (0,1]");
  const double gap = std::max(4.0 * tol.margin, m * 1e-9);
  return Radius::from_level(m - gap > 0.0 ? m - gap : m / 2.0);
}

// -------------------------------------------------------------- PointSet

PointSet::PointSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) throw DomainError("duplicate point label '" + labels_[i] + "'");
  }
}

PointSet PointSet::numbered(std::size_t n, std::size_t first) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(first + i));
  return PointSet(std::move(labels));
}

std::size_t PointSet::index(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw DomainError("unknown point label '" + std::string(label) + "'");
}

std::optional<std::size_t> PointSet::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// -------------------------------------------------------------- builtins

std::string_view builtin_name(BuiltinId id) {
  switch (id) {
    case BuiltinId::nat_ratio: return "nat-ratio";
    case BuiltinId::nat_product: return "nat-product";
    case BuiltinId::grid_z: return "grid-z";
    case BuiltinId::path: return "path";
  }
  return "?";
}

BuiltinId parse_builtin(std::string_view name) {
  if (name == "nat-ratio") return BuiltinId::nat_ratio;
  if (name == "nat-product") return BuiltinId::nat_product;
  if (name == "grid-z") return BuiltinId::grid_z;
  if (name == "path") return BuiltinId::path;
  throw DomainError("unknown builtin space '" + std::string(name) + "'");
}

const std::vector<double>& default_t_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g(61);
    for (int k = 0; k <= 60; ++k) g[static_cast<std::size_t>(k)] = std::pow(10.0, -3.0 + 0.1 * k);
    return g;
  }();
  return grid;
}

namespace {

std::size_t builtin_size(const BuiltinMetric& b) {
  return b.id == BuiltinId::grid_z ? b.n * b.n : b.n;
}

double builtin_distance(const BuiltinMetric& b, std::size_t x, std::size_t y) {
  if (b.id == BuiltinId::path) return std::abs(static_cast<double>(x) - static_cast<double>(y));
  const double dx = std::abs(static_cast<double>(x / b.n) - static_cast<double>(y / b.n));
  const double dy = std::abs(static_cast<double>(x % b.n) - static_cast<double>(y % b.n));
  return dx + dy;
}

double sampled_eval(const SampledMetric& m, std::size_t x, std::size_t y, double t) {
  const auto& vals = m.values[SampledMetric::pair_slot(x, y)];
  const auto& g = m.t_grid;
  if (t <= g.front()) return vals.front();
  if (t >= g.back()) return vals.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), t) - g.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - g[lo]) / (g[hi] - g[lo]);
  return vals[lo] + w * (vals[hi] - vals[lo]);
}

void validate_standard(const SymMatrix& d, const Tolerance& tol) {
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) throw DomainError("metric diagonal must be zero");
    for (std::size_t j = 0; j < i; ++j) {
      if (!(d(i, j) > 0.0) || !std::isfinite(d(i, j))) {
        throw DomainError("metric distances between distinct points must be positive and finite");
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        if (d(x, z) > d(x, y) + d(y, z) + tol.tau * std::max(1.0, d(x, z))) {
          throw DomainError("metric violates the triangle inequality at (" + std::to_string(x) + "," +
                            std::to_string(y) + "," + std::to_string(z) + ")");
        }
      }
}

void validate_stationary(const SymMatrix& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v(i, i) != 1.0) throw DomainError("stationary values must be 1 on the diagonal");
    for (std::size_t j = 0; j < i; ++j) {
      if (!(v(i, j) > 0.0 && v(i, j) < 1.0)) {
        throw DomainError("stationary values must lie in (0,1) off the diagonal");
      }
    }
  }
}

void validate_sampled(const SampledMetric& m, std::size_t n) {
  if (m.t_grid.empty()) throw DomainError("sampled metric needs a nonempty t grid");
  for (std::size_t k = 0; k < m.t_grid.size(); ++k) {
    if (!(m.t_grid[k] > 0.0) || (k > 0 && !(m.t_grid[k] > m.t_grid[k - 1]))) {
      throw DomainError("sampled t grid must be positive and strictly increasing");
    }
  }
  if (m.values.size() != n * (n - (n > 0 ? 1 : 0)) / 2) throw DomainError("sampled metric must list every unordered pair");
  for (const auto& arr : m.values) {
    if (arr.size() != m.t_grid.size()) throw DomainError("sampled pair array length differs from t grid");
    for (double v : arr) {
      if (!(v > 0.0 && v <= 1.0)) throw DomainError("sampled values must lie in (0,1]");
    }
  }
}

}  // namespace

// ------------------------------------------------------------ FuzzySpace

FuzzySpace::FuzzySpace(std::string name, PointSet points, TNorm tnorm, FuzzyMetric metric, Tolerance tol)
    : name_(std::move(name)), points_(std::move(points)), tnorm_(tnorm), metric_(std::move(metric)), tol_(tol) {
  tol_.validate();
  if (tnorm_.has_zero_divisors()) {
    throw DomainError("t-norm '" + std::string(tnorm_.name()) + "' has zero divisors and is not admissible");
  }
  const std::size_t n = points_.size();
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StandardMetric>) {
          if (m.d.size() != n) throw DomainError("distance matrix size differs from point count");
          validate_standard(m.d, tol_);
        } else if constexpr (std::is_same_v<T, StationaryMetric>) {
          if (m.values.size() != n) throw DomainError("value matrix size differs from point count");
          validate_stationary(m.values);
        } else if constexpr (std::is_same_v<T, SampledMetric>) {
          validate_sampled(m, n);
        } else {
          if (m.n == 0) throw DomainError("builtin space needs n >= 1");
          if (builtin_size(m) != n) throw DomainError("builtin point count mismatch");
        }
      },
      metric_);
}

FuzzySpace FuzzySpace::builtin(BuiltinId id, std::size_t n) {
  PointSet pts;
  switch (id) {
    case BuiltinId::nat_ratio:
    case BuiltinId::nat_product: pts = PointSet::numbered(n, 1); break;
    case BuiltinId::path: pts = PointSet::numbered(n, 0); break;
    case BuiltinId::grid_z: {
      std::vector<std::string> labels;
      labels.reserve(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) labels.push_back(std::to_string(i) + "_" + std::to_string(j));
      pts = PointSet(std::move(labels));
      break;
    }
  }
  std::string name = std::string(builtin_name(id)) + "-" + std::to_string(n);
  return FuzzySpace(std::move(name), std::move(pts), TNorm(TNormKind::product), BuiltinMetric{id, n});
}

FuzzySpace FuzzySpace::standard(std::string name, PointSet points, const Matrix& d, TNorm tnorm) {
  return FuzzySpace(std::move(name), std::move(points), tnorm, StandardMetric{SymMatrix::from_dense(d)});
}

FuzzySpace FuzzySpace::stationary(std::string name, PointSet points, const Matrix& values, TNorm tnorm) {
  return FuzzySpace(std::move(name), std::move(points), tnorm, StationaryMetric{SymMatrix::from_dense(values)});
}

FuzzySpace FuzzySpace::with_tolerance(Tolerance tol) const {
  return FuzzySpace(name_, points_, tnorm_, metric_, tol);
}

bool FuzzySpace::t_invariant() const {
  if (std::holds_alternative<StationaryMetric>(metric_)) return true;
  if (const auto* b = std::get_if<BuiltinMetric>(&metric_)) {
    return b->id == BuiltinId::nat_ratio || b->id == BuiltinId::nat_product;
  }
  return false;
}

bool FuzzySpace::is_standard() const {
  if (std::holds_alternative<StandardMetric>(metric_)) return true;
  if (const auto* b = std::get_if<BuiltinMetric>(&metric_)) {
    return b->id == BuiltinId::path || b->id == BuiltinId::grid_z;
  }
  return false;
}

double FuzzySpace::distance(std::size_t x, std::size_t y) const {
  if (const auto* s = std::get_if<StandardMetric>(&metric_)) return s->d(x, y);
  if (const auto* b = std::get_if<BuiltinMetric>(&metric_)) {
    if (b->id == BuiltinId::path || b->id == BuiltinId::grid_z) return builtin_distance(*b, x, y);
  }
  throw DomainError("space '" + name_ + "' is not a standard fuzzy metric space");
}

double FuzzySpace::M(std::size_t x, std::size_t y, double t) const {
  if (x == y) return 1.0;
  switch (metric_.index()) {
    case 0: {
      const double d = std::get<StandardMetric>(metric_).d(x, y);
      return t / (t + d);
    }
    case 1: return std::get<StationaryMetric>(metric_).values(x, y);
    case 2: return sampled_eval(std::get<SampledMetric>(metric_), x, y, t);
    default: {
      const auto& b = std::get<BuiltinMetric>(metric_);
      const double a = static_cast<double>(std::min(x, y) + 1);
      const double c = static_cast<double>(std::max(x, y) + 1);
      switch (b.id) {
        case BuiltinId::nat_ratio: return a / c;
        case BuiltinId::nat_product: return 1.0 / (a * c);
        default: return t / (t + builtin_distance(b, x, y));
      }
    }
  }
}

double FuzzySpace::eval(std::string_view x, std::string_view y, double t) const {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  return M(points_.index(x), points_.index(y), t);
}

FuzzySpace FuzzySpace::subspace(std::span<const std::size_t> indices, std::string name) const {
  const std::size_t m = indices.size();
  std::vector<std::string> labels;
  labels.reserve(m);
  for (std::size_t i : indices) labels.push_back(points_.label(i));
  PointSet pts(std::move(labels));

  if (is_standard()) {
    SymMatrix d(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < i; ++j) d.set(i, j, distance(indices[i], indices[j]));
    return FuzzySpace(std::move(name), std::move(pts), tnorm_, StandardMetric{std::move(d)}, tol_);
  }
  if (t_invariant()) {
    SymMatrix v(m, 1.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < i; ++j) v.set(i, j, M(indices[i], indices[j], 1.0));
    return FuzzySpace(std::move(name), std::move(pts), tnorm_, StationaryMetric{std::move(v)}, tol_);
  }
  const auto& src = std::get<SampledMetric>(metric_);
  SampledMetric out;
  out.t_grid = src.t_grid;
  out.values.resize(m * (m - (m > 0 ? 1 : 0)) / 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < i; ++j)
      out.values[SampledMetric::pair_slot(i, j)] = src.values[SampledMetric::pair_slot(indices[i], indices[j])];
  return FuzzySpace(std::move(name), std::move(pts), tnorm_, std::move(out), tol_);
}

// ---------------------------------------------------------------- axioms

bool AxiomReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck& AxiomReport::check(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw DomainError("no axiom check named '" + std::string(name) + "'");
}

namespace {

// Dense n x n table of M at a fixed t.
std::vector<double> m_table(const FuzzySpace& space, double t) {
  const std::size_t n = space.size();
  std::vector<double> tab(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    tab[x * n + x] = 1.0;
    for (std::size_t y = 0; y < x; ++y) {
      const double v = space.M(x, y, t);
      tab[x * n + y] = v;
      tab[y * n + x] = v;
    }
  }
  return tab;
}

AxiomCheck make_check(std::string name) {
  AxiomCheck c;
  c.name = std::move(name);
  return c;
}

void record(AxiomCheck& c, double amount, const std::string& witness) {
  c.passed = false;
  ++c.violations;
  if (c.violations == 1 || amount > c.worst) {
    c.worst = amount;
    c.witness = witness;
  }
}

std::string fmt_tuple(const FuzzySpace& s, std::initializer_list<std::size_t> pts, std::initializer_list<double> ts) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  bool first = true;
  for (std::size_t p : pts) {
    os << (first ? "" : ",") << s.points().label(p);
    first = false;
  }
  for (double t : ts) os << "," << t;
  os << ")";
  return os.str();
}

}  // namespace

AxiomReport verify_axioms(const FuzzySpace& space, std::span<const double> t_grid, std::span<const double> s_grid) {
  for (double t : t_grid)
    if (!(t > 0.0)) throw DomainError("t grid must be positive");
  for (double s : s_grid)
    if (!(s > 0.0)) throw DomainError("s grid must be positive");

  const std::size_t n = space.size();
  const Tolerance& tol = space.tolerance();
  AxiomCheck positivity = make_check("positivity");
  AxiomCheck identity = make_check("identity");
  AxiomCheck symmetry = make_check("symmetry");
  AxiomCheck triangle = make_check("triangle");
  AxiomCheck monotone = make_check("monotonicity");
  AxiomReport report;

  std::vector<double> ts(t_grid.begin(), t_grid.end());
  std::sort(ts.begin(), ts.end());
  std::vector<std::vector<double>> tabs;
  tabs.reserve(ts.size());
  for (double t : ts) tabs.push_back(m_table(space, t));

  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k];
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        const double v = space.M(x, y, t);
        if (!(v > 0.0) || v > 1.0 + tol.tau) record(positivity, std::abs(v), fmt_tuple(space, {x, y}, {t}));
        if (x == y && std::abs(v - 1.0) > tol.tau) record(identity, std::abs(v - 1.0), fmt_tuple(space, {x, y}, {t}));
        if (x != y && 1.0 - v <= tol.tau) record(identity, v, fmt_tuple(space, {x, y}, {t}));
        const double w = space.M(y, x, t);
        if (v != w) record(symmetry, std::abs(v - w), fmt_tuple(space, {x, y}, {t}));
        if (k + 1 < ts.size()) {
          const double next = tabs[k + 1][x * n + y];
          if (v > next + tol.tau) record(monotone, v - next, fmt_tuple(space, {x, y}, {t, ts[k + 1]}));
        }
      }
    }
  }

  // Triangle: for each (t,s) and each (x,z), the worst y is the argmax of
  // M(x,y,t) * M(y,z,s). Rows of the symmetric tables double as columns.
  const bool same_grids = std::equal(t_grid.begin(), t_grid.end(), s_grid.begin(), s_grid.end());
  const bool invariant = space.t_invariant();
  std::vector<double> sv(s_grid.begin(), s_grid.end());
  std::vector<std::vector<double>> stabs;
  if (!same_grids) {
    stabs.reserve(sv.size());
    for (double s : sv) stabs.push_back(m_table(space, s));
  }
  const TNorm tn = space.tnorm();
  std::optional<TriangleWitness> worst_tri;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::size_t jcount = same_grids ? ts.size() : sv.size();
    for (std::size_t j = same_grids ? i : 0; j < jcount; ++j) {
      const double t = ts[i];
      const double s = same_grids ? ts[j] : sv[j];
      const auto& a = tabs[i];
      const auto& b = same_grids ? tabs[j] : stabs[j];
      const std::vector<double> c = m_table(space, t + s);
      for (std::size_t x = 0; x < n; ++x) {
        const double* ax = a.data() + x * n;
        for (std::size_t z = 0; z < n; ++z) {
          const double* bz = b.data() + z * n;
          double best = -1.0;
          std::size_t arg = 0;
          for (std::size_t y = 0; y < n; ++y) {
            const double v = tn.combine(ax[y], bz[y]);
            if (v > best) {
              best = v;
              arg = y;
            }
          }
          const double rhs = c[x * n + z];
          if (best > rhs + tol.tau) {
            const double amount = best - rhs;
            record(triangle, amount, fmt_tuple(space, {x, arg, z}, {t, s}));
            if (!worst_tri || amount > worst_tri->lhs - worst_tri->rhs) {
              worst_tri = TriangleWitness{x, arg, z, t, s, best, rhs};
            }
          }
        }
      }
      if (invariant) break;
    }
    if (invariant) break;
  }
  if (invariant) report.notes.push_back("metric is t-invariant; one (t,s) tuple decides the triangle check");
  if (same_grids && !invariant) report.notes.push_back("s-grid equals t-grid; (x,z,t,s) and (z,x,s,t) checked once");

  report.checks = {positivity, identity, symmetry, triangle, monotone};
  if (std::holds_alternative<SampledMetric>(space.metric())) {
    AxiomCheck continuity = make_check("continuity");
    const auto& m = std::get<SampledMetric>(space.metric());
    for (std::size_t p = 0; p < m.values.size(); ++p)
      for (double v : m.values[p])
        if (!std::isfinite(v)) record(continuity, 1.0, "non-finite sample in pair slot " + std::to_string(p));
    report.checks.push_back(continuity);
    report.notes.push_back("sampled metric: piecewise-linear on its grid, constant extension outside it");
  }
  report.triangle_witness = worst_tri;
  return report;
}

// --------------------------------------------------------- balls & bounds

PointSubset ball(const FuzzySpace& space, std::size_t x, Scale s) {
  if (!(s.t > 0.0)) throw DomainError("ball needs t > 0");
  if (x >= space.size()) throw DomainError("ball center out of range");
  PointSubset out;
  for (std::size_t y = 0; y < space.size(); ++y)
    if (y == x || space.close(x, y, s)) out.push_back(y);
  return out;
}

PointSubset metric_ball(const FuzzySpace& space, std::size_t x, double R) {
  if (!(R > 0.0)) throw DomainError("metric ball needs R > 0");
  PointSubset out;
  for (std::size_t y = 0; y < space.size(); ++y)
    if (space.distance(x, y) < R) out.push_back(y);
  return out;
}

bool ball_correspondence_check(const FuzzySpace& space, double R, double t, Radius r) {
  if (!(R > 0.0) || !(t > 0.0)) throw DomainError("ball correspondence needs R, t > 0");
  const Scale by_t{Radius::from_level(t / (t + R)), t};
  const Scale by_r{r, R * r.level() / r.r()};
  for (std::size_t x = 0; x < space.size(); ++x) {
    const PointSubset m = metric_ball(space, x, R);
    if (m != ball(space, x, by_t) || m != ball(space, x, by_r)) return false;
  }
  return true;
}

BoundedWitness is_bounded_set(const FuzzySpace& space, std::span<const std::size_t> a) {
  const double t = space.grid_max();
  double lo = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) lo = std::min(lo, space.M(a[i], a[j], t));
  return BoundedWitness{Scale{level_below(lo / 2.0, space.tolerance()), t}, lo, true};
}

bool verify_bounded(const FuzzySpace& space, std::span<const std::size_t> a, const BoundedWitness& w) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (a[i] != a[j] && !space.close(a[i], a[j], w.scale)) return false;
  return true;
}

std::size_t ulf_bound(const FuzzySpace& space, Scale s) {
  std::size_t best = 0;
  for (std::size_t x = 0; x < space.size(); ++x) best = std::max(best, ball(space, x, s).size());
  return best + 1;
}

UlfProfile ulf_profile(const FuzzySpace& space, std::span<const Scale> ladder) {
  if (ladder.empty()) throw DomainError("ulf profile needs a nonempty ladder");
  UlfProfile p;
  for (const Scale& s : ladder) p.entries.push_back(UlfEntry{s, ulf_bound(space, s)});
  return p;
}

}  // namespace fuzzycoarse
