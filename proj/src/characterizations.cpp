#include "fuzzycoarse/characterizations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "fuzzycoarse/covers.hpp"

namespace fuzzycoarse {

namespace {

double tracked(double measured) { return std::max(measured * (1.0 + 1e-6), kTrackedEpsFloor); }

double l1_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class F>
void for_close_pairs(const FuzzySpace& space, Scale close, F&& f) {
  for (std::size_t x = 0; x < space.size(); ++x)
    for (std::size_t y = 0; y < x; ++y)
      if (space.close(x, y, close)) f(y, x);
}

bool support_within(const FuzzySpace& space, const Field& field) {
  for (std::size_t x = 0; x < field.size(); ++x)
    for (std::size_t y = 0; y < field.size(); ++y)
      if (field.vectors(x, y) != 0.0 && x != y && !space.close(x, y, field.window)) return false;
  return true;
}

void require_square(const FuzzySpace& space, const Field& f) {
  if (f.vectors.rows() != space.size() || f.vectors.cols() != space.size())
    throw DomainError("field must have one vector over X per point");
}

}  // namespace

double witness_eps_limit() { return std::sqrt(5.0) - 2.0; }

std::uint64_t quantize_up(double xi, std::uint64_t N) {
  if (!(xi >= 0.0)) throw DomainError("quantization needs a nonnegative value");
  const double v = static_cast<double>(N) * xi;
  return static_cast<std::uint64_t>(std::ceil(v));
}

L1Step witness_to_l1(const FuzzySpace& space, const WitnessFamily& w, const ParamTuple& p) {
  L1Step out;
  StepCertificate& c = out.cert;
  c.step = "i-ii";
  c.input_eps = p.eps;
  c.bound = 2.0 * p.eps;

  const WitnessCertificate wc = verify_witness(space, w, p);
  if (!wc.structural_ok) throw DomainError("witness is structurally invalid: " + wc.failures.front());
  const std::size_t n = space.size();
  out.field.vectors = Matrix(n, n);
  out.field.window = wc.support;
  for (std::size_t x = 0; x < n; ++x) {
    const double total = static_cast<double>(w[x].size());
    for (const auto& [y, levels] : w[x].entries)
      out.field.vectors(x, y) = static_cast<double>(levels.count()) / total;
  }

  bool pairs_ok = true;
  for_close_pairs(space, p.scale(), [&](std::size_t x, std::size_t y) {
    const double d = l1_distance(out.field.vectors.row(x), out.field.vectors.row(y));
    c.measured = std::max(c.measured, d);
    const SetCounts sc = compare_sets(w[x], w[y]);
    const double denom = static_cast<double>(std::max(w[x].size(), w[y].size()));
    if (d > 2.0 * static_cast<double>(sc.symmetric_difference) / denom + 1e-12) pairs_ok = false;
  });
  if (!wc.passed) c.notes.push_back("input witness does not verify at the stated eps");
  if (!pairs_ok) c.notes.push_back("a close pair exceeds 2|A_x Δ A_y| / |A_y|");
  c.passed = wc.passed && pairs_ok && c.measured < c.bound;
  c.output_eps = tracked(c.measured);
  return out;
}

L2Step l1_to_l2(const FuzzySpace& space, const Field& l1, Scale close, double eps) {
  require_square(space, l1);
  const std::size_t n = space.size();
  L2Step out;
  StepCertificate& c = out.cert;
  c.step = "ii-iii";
  c.input_eps = eps;
  c.bound = std::sqrt(eps);
  out.field.vectors = Matrix(n, n);
  out.field.window = l1.window;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) out.field.vectors(x, y) = std::sqrt(std::abs(l1.vectors(x, y)));

  bool pairs_ok = true;
  double l1_max = 0.0;
  for_close_pairs(space, close, [&](std::size_t x, std::size_t y) {
    const double d2 = l2_distance(out.field.vectors.row(x), out.field.vectors.row(y));
    const double d1 = l1_distance(l1.vectors.row(x), l1.vectors.row(y));
    l1_max = std::max(l1_max, d1);
    c.measured = std::max(c.measured, d2);
    double da = 0.0;
    for (std::size_t z = 0; z < n; ++z) da += std::abs(std::abs(l1.vectors(x, z)) - std::abs(l1.vectors(y, z)));
    if (d2 > std::sqrt(da) + 1e-12) pairs_ok = false;
  });
  if (!(l1_max < eps)) c.notes.push_back("input l1 field is not eps-close on close pairs");
  if (!pairs_ok) c.notes.push_back("a close pair exceeds sqrt of its l1 distance");
  c.passed = pairs_ok && l1_max < eps && c.measured < c.bound;
  c.output_eps = tracked(c.measured);
  return out;
}

WindowStep orthogonality_window(const FuzzySpace& space, const Field& l2) {
  require_square(space, l2);
  const std::size_t n = space.size();
  WindowStep out;
  StepCertificate& c = out.cert;
  c.step = "iii-iv";
  const double level = space.tnorm().apply(l2.window.r.level(), l2.window.r.level());
  out.window = Scale{Radius::from_level(level), 2.0 * l2.window.t};
  out.support_ok = support_within(space, l2);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < x; ++y) {
      if (!(space.M(x, y, out.window.t) < level)) continue;
      ++out.far_pairs;
      const double ip = dot(l2.vectors.row(x), l2.vectors.row(y));
      c.measured = std::max(c.measured, std::abs(ip));
      if (ip != 0.0) ++out.violations;
    }
  c.bound = 0.0;
  c.notes.push_back(std::to_string(out.far_pairs) + " pairs lie outside the window");
  if (!out.support_ok) c.notes.push_back("field support leaves its window");
  c.passed = out.support_ok && out.violations == 0;
  return out;
}

KernelStep l2_to_kernel(const FuzzySpace& space, const Field& l2, Scale window, Scale close, double eps) {
  require_square(space, l2);
  const std::size_t n = space.size();
  KernelStep out;
  StepCertificate& c = out.cert;
  c.step = "iv-v";
  c.input_eps = eps;
  c.bound = eps * eps / 2.0;
  out.kernel.real = SymMatrix(n);
  out.kernel.window = window;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y <= x; ++y) out.kernel.real.set(x, y, dot(l2.vectors.row(x), l2.vectors.row(y)));

  for_close_pairs(space, close, [&](std::size_t x, std::size_t y) {
    const double gap = std::abs(1.0 - out.kernel.real(x, y));
    const double half_sq = std::pow(l2_distance(l2.vectors.row(x), l2.vectors.row(y)), 2) / 2.0;
    out.identity_error = std::max(out.identity_error, std::abs(gap - half_sq));
    c.measured = std::max(c.measured, gap);
  });
  const PsdCheck psd = kernel_psd_check(out.kernel);
  out.min_eigenvalue = psd.min_eigenvalue;
  const bool gram_ok = out.min_eigenvalue >= -1e-8;
  const std::size_t wv = window_violations(space, out.kernel.real.to_dense(), window);
  if (!gram_ok) c.notes.push_back("Gram matrix has a negative eigenvalue below -1e-8");
  if (wv != 0) c.notes.push_back("kernel is nonzero outside its window");
  if (out.identity_error > 1e-12) c.notes.push_back("|1-k| differs from ||eta_x-eta_y||^2/2");
  c.passed = gram_ok && wv == 0 && out.identity_error <= 1e-12 && c.measured < c.bound;
  c.output_eps = tracked(c.measured);
  return out;
}

OperatorStep kernel_to_operator(const FuzzySpace& space, const Kernel& k) {
  const std::size_t n = space.size();
  if (k.real.size() != n) throw DomainError("kernel size does not match the space");
  OperatorStep out;
  StepCertificate& c = out.cert;
  c.step = "v-vi";
  out.op.matrix = k.real.to_dense();
  out.op.window = k.window;
  out.ulf = ulf_bound(space, k.window);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t cnt = 0;
    for (std::size_t y = 0; y < n; ++y) cnt += k.real(x, y) != 0.0;
    out.max_row_support = std::max(out.max_row_support, cnt);
  }
  out.norm = op_norm_upper(k.real);
  out.psd = kernel_psd_check(k).psd;
  c.bound = static_cast<double>(out.ulf) + 1e-6;
  c.measured = out.norm;
  if (k.imag) c.notes.push_back("imaginary part ignored: the operator is built from the real kernel");
  if (!out.psd) c.notes.push_back("kernel is not positive semidefinite");
  if (out.max_row_support > out.ulf) c.notes.push_back("a row has more nonzeros than N_{R,T}");
  const bool window_ok = window_violations(space, out.op.matrix, out.op.window) == 0;
  c.passed = out.psd && window_ok && out.max_row_support <= out.ulf && c.measured <= c.bound;
  return out;
}

namespace {

struct Truncation {
  std::size_t kept = std::numeric_limits<std::size_t>::max();
  double t = 0.0;
  double level = 0.0;
  double norm = 0.0;
};

// Pairs (i > j) sorted by M at t, descending, grouped where values separate
// by more than a certifiable gap.
struct Grouped {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> m;
  std::vector<std::size_t> group_start;  // index into pairs
};

Grouped group_pairs(const FuzzySpace& space, double t) {
  const std::size_t n = space.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> all;
  all.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) all.emplace_back(space.M(i, j, t), i, j);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
  });
  Grouped g;
  for (std::size_t k = 0; k < all.size(); ++k) {
    const double v = std::get<0>(all[k]);
    if (k == 0 || g.m.back() - v > std::max(1e-9 * g.m.back(), 8e-12)) g.group_start.push_back(k);
    g.pairs.emplace_back(std::get<1>(all[k]), std::get<2>(all[k]));
    g.m.push_back(v);
  }
  return g;
}

}  // namespace

SqrtStep operator_to_l2(const FuzzySpace& space, const PropagatedOperator& s_k, Scale close, double eps) {
  const std::size_t n = space.size();
  if (s_k.matrix.rows() != n || s_k.matrix.cols() != n) throw DomainError("operator size does not match the space");
  if (!(eps > 0.0) || eps >= 0.5) throw DomainError("operator-to-field step needs 0 < eps < 1/2");
  SqrtStep out;
  StepCertificate& c = out.cert;
  c.step = "vi-iii";
  c.input_eps = eps;

  const SymMatrix k = SymMatrix::symmetrized(s_k.matrix);
  out.s_l = psd_sqrt(k, space.tolerance());
  const Matrix sl = out.s_l.to_dense();
  out.sqrt_residual = (sl * sl - k.to_dense()).frobenius_norm();
  out.s_l_norm = op_norm_upper(out.s_l);
  out.truncation_bound = std::min(eps, eps / (2.0 * (out.s_l_norm + eps)));
  const double b = out.truncation_bound;

  Truncation best;
  for (double t : space.grid()) {
    if (n < 2) {
      best = Truncation{n, t, 0.5, 0.0};
      break;
    }
    const Grouped g = group_pairs(space, t);
    const std::size_t groups = g.group_start.size();
    // suffix[q] = squared Frobenius norm of everything from group q on.
    std::vector<double> suffix(groups + 1, 0.0);
    for (std::size_t q = groups; q-- > 0;) {
      const std::size_t end = q + 1 < groups ? g.group_start[q + 1] : g.pairs.size();
      double s = 0.0;
      for (std::size_t k2 = g.group_start[q]; k2 < end; ++k2) {
        const double v = out.s_l(g.pairs[k2].first, g.pairs[k2].second);
        s += 2.0 * v * v;
      }
      suffix[q] = suffix[q + 1] + s;
    }
    auto dropped_from = [&](std::size_t q) {
      SymMatrix d(n);
      const std::size_t start = q < groups ? g.group_start[q] : g.pairs.size();
      for (std::size_t k2 = start; k2 < g.pairs.size(); ++k2)
        d.set(g.pairs[k2].first, g.pairs[k2].second, out.s_l(g.pairs[k2].first, g.pairs[k2].second));
      return d;
    };
    // q = number of kept groups; the Frobenius norm certifies the operator norm.
    std::size_t q = 0;
    while (q < groups && !(std::sqrt(suffix[q]) < b)) ++q;
    double norm = std::sqrt(suffix[q]);
    while (q > 0) {
      const double on = op_norm_upper(dropped_from(q - 1));
      if (!(on < b)) break;
      --q;
      norm = on;
    }
    const std::size_t kept = n + 2 * (q < groups ? g.group_start[q] : g.pairs.size());
    if (kept < best.kept) {
      double level;
      if (q == 0)
        level = (1.0 + g.m.front()) / 2.0;
      else if (q < groups)
        level = (g.m[g.group_start[q] - 1] + g.m[g.group_start[q]]) / 2.0;
      else
        level = level_below(g.m.back(), space.tolerance()).level();
      best = Truncation{kept, t, level, norm};
    }
  }
  out.kept_entries = best.kept;
  out.truncation_norm = best.norm;
  out.truncation_window = Scale{Radius::from_level(best.level), best.t};

  out.s_m = SymMatrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (i == j || !(space.M(i, j, best.t) < best.level)) out.s_m.set(i, j, out.s_l(i, j));

  const Matrix sm = out.s_m.to_dense();
  const Matrix theta_gram = sm * sm;
  out.min_theta_sq = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y)
      out.gram_error = std::max(out.gram_error, std::abs(theta_gram(x, y) - k(x, y)));
    out.min_theta_sq = std::min(out.min_theta_sq, theta_gram(x, x));
  }

  out.field.vectors = Matrix(n, n);
  out.field.window = out.truncation_window;
  for (std::size_t x = 0; x < n; ++x) {
    const double norm = std::sqrt(dot(sm.row(x), sm.row(x)));
    if (norm > 0.0)
      for (std::size_t y = 0; y < n; ++y) out.field.vectors(x, y) = sm(x, y) / norm;
  }

  c.bound = 2.0 * std::sqrt(8.0 * eps / (1.0 - 2.0 * eps));
  for_close_pairs(space, close, [&](std::size_t x, std::size_t y) {
    c.measured = std::max(c.measured, l2_distance(out.field.vectors.row(x), out.field.vectors.row(y)));
  });
  const bool sqrt_ok = out.sqrt_residual <= 1e-8;
  const bool trunc_ok = out.truncation_norm < b;
  const bool gram_ok = out.gram_error < eps;
  const bool theta_ok = out.min_theta_sq > 1.0 - 2.0 * eps;
  const bool support_ok = support_within(space, out.field);
  if (!sqrt_ok) c.notes.push_back("||S_l^2 - S_k|| exceeds 1e-8");
  if (!trunc_ok) c.notes.push_back("no truncation window met the norm bound");
  if (!gram_ok) c.notes.push_back("|<theta_x, theta_y> - k(x,y)| reaches eps");
  if (!theta_ok) c.notes.push_back("||theta_x||^2 <= 1 - 2 eps");
  if (!support_ok) c.notes.push_back("normalized field leaves the truncation window");
  c.notes.push_back("vectors normalized by ||theta_x||_2");
  c.passed = sqrt_ok && trunc_ok && gram_ok && theta_ok && support_ok && c.measured < c.bound;
  c.output_eps = tracked(c.measured);
  return out;
}

WitnessStep l2_to_witness(const FuzzySpace& space, const Field& l2, Scale close, double eps) {
  require_square(space, l2);
  if (!(eps > 0.0) || eps >= witness_eps_limit())
    throw DomainError("field-to-witness step needs 0 < eps < sqrt(5) - 2");
  const std::size_t n = space.size();
  WitnessStep out;
  StepCertificate& c = out.cert;
  c.step = "iii-i";
  c.input_eps = eps;
  c.bound = 8.0 * eps / (1.0 - 4.0 * eps - eps * eps);
  out.ulf = ulf_bound(space, l2.window);
  out.N = static_cast<std::uint64_t>(std::floor(static_cast<double>(out.ulf) / eps)) + 1;

  std::vector<HeightRow> rows(n);
  double l2_max = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const double xi = l2.vectors(x, y) * l2.vectors(x, y);
      const std::uint64_t j = quantize_up(xi, out.N);
      if (j > 0) rows[x].push_back({y, j});
    }
  for_close_pairs(space, close, [&](std::size_t x, std::size_t y) {
    l2_max = std::max(l2_max, l2_distance(l2.vectors.row(x), l2.vectors.row(y)));
  });
  out.witness = WitnessFamily::from_heights(rows);
  out.verification = verify_witness(space, out.witness, ParamTuple{c.bound, close.r, close.t});
  c.measured = out.verification.worst_ratio;
  const bool support_ok = support_within(space, l2);
  if (!(l2_max < eps)) c.notes.push_back("input field is not eps-close on close pairs");
  if (!support_ok) c.notes.push_back("field support leaves its window");
  c.notes.push_back("N = " + std::to_string(out.N) + " from N_{R,T} = " + std::to_string(out.ulf));
  c.passed = out.verification.passed && support_ok && l2_max < eps && c.measured < c.bound;
  c.output_eps = c.bound;
  return out;
}

PsdCheck kernel_psd_check(const Kernel& k) {
  const std::size_t n = k.real.size();
  PsdCheck out;
  SymMatrix a;
  if (k.imag) {
    const Matrix& b = *k.imag;
    if (b.rows() != n || b.cols() != n) throw DomainError("imaginary part has the wrong size");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (b(i, j) != -b(j, i)) throw DomainError("imaginary part of a Hermitian kernel must be antisymmetric");
    a = SymMatrix(2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        a.set(i, j, k.real(i, j));
        a.set(n + i, n + j, k.real(i, j));
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a.set(n + i, j, b(i, j));
  } else {
    a = k.real;
  }
  if (a.size() == 0) {
    out.psd = true;
    return out;
  }
  const EigenDecomposition e = sym_eig(a);
  out.min_eigenvalue = e.values.back();
  out.threshold = -kPsdRelativeSlack * a.frobenius_norm();
  out.psd = out.min_eigenvalue >= out.threshold;
  return out;
}

std::size_t window_violations(const FuzzySpace& space, const Matrix& m, Scale window) {
  std::size_t v = 0;
  for (std::size_t x = 0; x < m.rows(); ++x)
    for (std::size_t y = 0; y < m.cols(); ++y)
      if (m(x, y) != 0.0 && space.M(x, y, window.t) < window.r.level()) ++v;
  return v;
}

ComposeResult propagation_compose(const FuzzySpace& space, const PropagatedOperator& s1,
                                  const PropagatedOperator& s2) {
  ComposeResult out;
  out.product.matrix = s1.matrix * s2.matrix;
  out.product.window = Scale{Radius::from_level(space.tnorm().apply(s1.window.r.level(), s2.window.r.level())),
                             s1.window.t + s2.window.t};
  out.violations = window_violations(space, out.product.matrix, out.product.window);
  out.verified = out.violations == 0;
  return out;
}

TheoreticalChain theoretical_chain(double witness_eps) {
  TheoreticalChain ch;
  const double inf = std::numeric_limits<double>::infinity();
  double e = 2.0 * witness_eps;
  ch.stages.emplace_back("i-ii: l1", e);
  e = std::sqrt(e);
  ch.stages.emplace_back("ii-iii: l2", e);
  e = e * e / 2.0;
  ch.stages.emplace_back("iv-v: |1-k|", e);
  e = e < 0.5 ? 2.0 * std::sqrt(8.0 * e / (1.0 - 2.0 * e)) : inf;
  ch.stages.emplace_back("vi-iii: l2", e);
  e = e < witness_eps_limit() ? 8.0 * e / (1.0 - 4.0 * e - e * e) : inf;
  ch.stages.emplace_back("iii-i: ratio", e);
  ch.degenerate = std::isinf(e);
  return ch;
}

RoundTrip characterization_round_trip(const FuzzySpace& space, const WitnessFamily& w, const ParamTuple& p) {
  p.validate();
  RoundTrip rt;
  rt.theory = theoretical_chain(p.eps);
  const Scale close = p.scale();
  auto record = [&rt](const StepCertificate& c) {
    rt.steps.push_back(c);
    return c.passed;
  };

  rt.l1 = witness_to_l1(space, w, p);
  if (!record(rt.l1.cert)) return rt;
  rt.l2 = l1_to_l2(space, rt.l1.field, close, rt.l1.cert.output_eps);
  if (!record(rt.l2.cert)) return rt;
  rt.window = orthogonality_window(space, rt.l2.field);
  rt.window.cert.input_eps = rt.window.cert.output_eps = rt.l2.cert.output_eps;
  if (!record(rt.window.cert)) return rt;
  rt.kernel = l2_to_kernel(space, rt.l2.field, rt.window.window, close, rt.l2.cert.output_eps);
  if (!record(rt.kernel.cert)) return rt;
  rt.op = kernel_to_operator(space, rt.kernel.kernel);
  rt.op.cert.input_eps = rt.op.cert.output_eps = rt.kernel.cert.output_eps;
  if (!record(rt.op.cert)) return rt;
  const double e6 = rt.op.cert.output_eps;
  if (e6 >= 0.5) {
    StepCertificate c{"vi-iii", e6, 0.0, 0.0, 0.0, false, {"rejected: eps >= 1/2"}};
    record(c);
    return rt;
  }
  rt.sqrt = operator_to_l2(space, rt.op.op, close, e6);
  if (!record(rt.sqrt.cert)) return rt;
  const double e3 = rt.sqrt.cert.output_eps;
  if (e3 >= witness_eps_limit()) {
    StepCertificate c{"iii-i", e3, 0.0, 0.0, 0.0, false, {"rejected: eps >= sqrt(5) - 2"}};
    record(c);
    return rt;
  }
  rt.final_witness = l2_to_witness(space, rt.sqrt.field, close, e3);
  if (!record(rt.final_witness.cert)) return rt;
  rt.final_eps = rt.final_witness.cert.bound;
  rt.inflation = rt.final_eps / p.eps;
  rt.passed = true;
  return rt;
}

}  // namespace fuzzycoarse
