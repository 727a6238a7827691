#include "fuzzycoarse/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace fuzzycoarse::io {

namespace {

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw FormatError(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(where + "/" + key, "missing field");
  return *it;
}

std::string need_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw FormatError(where, "expected a string");
  return j.get<std::string>();
}

std::size_t need_count(const Json& j, const std::string& where) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) throw FormatError(where, "expected a nonnegative integer");
  if (j.is_number_integer() && j.get<std::int64_t>() < 0) throw FormatError(where, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

const Json& need_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw FormatError(where, "expected an array");
  return j;
}

std::string label_of(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  throw FormatError(where, "expected a point label");
}

std::size_t point(const FuzzySpace& space, const Json& j, const std::string& where) {
  const std::string label = label_of(j, where);
  const auto idx = space.points().find(label);
  if (!idx) throw FormatError(where, "unknown point '" + label + "'");
  return *idx;
}

std::size_t point_key(const FuzzySpace& space, const std::string& key, const std::string& where) {
  const auto idx = space.points().find(key);
  if (!idx) throw FormatError(where, "unknown point '" + key + "'");
  return *idx;
}

Matrix matrix_from(const Json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  need_array(j, where);
  if (j.size() != rows) throw FormatError(where, "expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string w = where + "/" + std::to_string(i);
    need_array(j[i], w);
    if (j[i].size() != cols) throw FormatError(w, "expected " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = to_number(j[i][k], w + "/" + std::to_string(k));
  }
  return m;
}

Json matrix_to(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(number(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json labels_of(const FuzzySpace& space) { return Json(space.points().labels()); }

void check_labels(const FuzzySpace& space, const Json& j, const std::string& where) {
  const Json& labels = need_array(need(j, "labels", where), where + "/labels");
  if (labels.size() != space.size()) throw FormatError(where + "/labels", "label count does not match the space");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (label_of(labels[i], where + "/labels/" + std::to_string(i)) != space.points().label(i)) {
      throw FormatError(where + "/labels/" + std::to_string(i), "labels must follow the space order");
    }
  }
}

Json subset_to(const FuzzySpace& space, const PointSubset& s) {
  Json out = Json::array();
  for (std::size_t x : s) out.push_back(space.points().label(x));
  return out;
}

Json pair_to(const FuzzySpace& space, std::pair<std::size_t, std::size_t> p) {
  return Json::array({space.points().label(p.first), space.points().label(p.second)});
}

Json bounded_to(const BoundedWitness& w) {
  return Json{{"scale", scale_to_json(w.scale)}, {"min_closeness", number(w.min_closeness)},
              {"finite_space_trivial", w.finite_space_trivial}};
}

Json params_to(const ParamTuple& p) {
  return Json{{"eps", number(p.eps)}, {"r", number(p.r.r())}, {"t", number(p.t)}, {"level", number(p.r.level())}};
}

ParamTuple params_from(const Json& j, const std::string& where) {
  ParamTuple p;
  p.eps = to_number(need(j, "eps", where), where + "/eps");
  const Scale s = scale_from_json(j, where);
  p.r = s.r;
  p.t = s.t;
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw FormatError(where, e.what());
  }
  return p;
}

}  // namespace

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path, std::string("parse error: ") + e.what());
  }
}

void write_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw FormatError(path, "cannot open file for writing");
  out << doc.dump(2) << '\n';
}

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double to_number(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw FormatError(where, "expected a number");
}

Json scale_to_json(Scale s) {
  return Json{{"r", number(s.r.r())}, {"t", number(s.t)}, {"level", number(s.r.level())}};
}

Scale scale_from_json(const Json& j, const std::string& where) {
  Scale s;
  s.t = to_number(need(j, "t", where), where + "/t");
  if (!(s.t > 0.0) || !std::isfinite(s.t)) throw FormatError(where + "/t", "t must be positive and finite");
  try {
    if (j.contains("level")) {
      s.r = Radius::from_level(to_number(j["level"], where + "/level"));
    } else {
      s.r = Radius::from_r(to_number(need(j, "r", where), where + "/r"));
    }
  } catch (const DomainError& e) {
    throw FormatError(where, e.what());
  }
  return s;
}

// -------------------------------------------------------------------- spaces

Json space_to_json(const FuzzySpace& space) {
  Json out;
  out["name"] = space.name();
  out["tnorm"] = std::string(space.tnorm().name());
  out["points"] = labels_of(space);
  const std::size_t n = space.size();
  Json metric;
  if (const auto* s = std::get_if<StandardMetric>(&space.metric())) {
    metric["kind"] = "standard";
    metric["d"] = matrix_to(s->d.to_dense());
  } else if (const auto* v = std::get_if<StationaryMetric>(&space.metric())) {
    metric["kind"] = "stationary";
    metric["values"] = matrix_to(v->values.to_dense());
  } else if (const auto* sm = std::get_if<SampledMetric>(&space.metric())) {
    metric["kind"] = "sampled";
    Json grid = Json::array();
    for (double t : sm->t_grid) grid.push_back(number(t));
    metric["t_grid"] = grid;
    Json vals = Json::object();
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        Json row = Json::array();
        for (double x : sm->values[SampledMetric::pair_slot(i, j)]) row.push_back(number(x));
        vals[space.points().label(i) + "," + space.points().label(j)] = row;
      }
    metric["values"] = vals;
  } else {
    const auto& b = std::get<BuiltinMetric>(space.metric());
    metric["kind"] = "builtin";
    metric["id"] = std::string(builtin_name(b.id));
    metric["n"] = b.n;
  }
  out["metric"] = metric;
  if (space.tolerance().tau != Tolerance{}.tau || space.tolerance().margin != Tolerance{}.margin) {
    out["tolerance"] = Json{{"tau", space.tolerance().tau}, {"margin", space.tolerance().margin}};
  }
  return out;
}

FuzzySpace space_from_json(const Json& j) {
  const std::string root;
  const Json& metric = need(j, "metric", root);
  const std::string kind = need_string(need(metric, "kind", "/metric"), "/metric/kind");
  TNorm tn(TNormKind::product);
  if (j.contains("tnorm")) {
    try {
      tn = TNorm::parse(need_string(j["tnorm"], "/tnorm"));
    } catch (const DomainError& e) {
      throw FormatError("/tnorm", e.what());
    }
  }
  Tolerance tol;
  if (j.contains("tolerance")) {
    tol.tau = to_number(need(j["tolerance"], "tau", "/tolerance"), "/tolerance/tau");
    tol.margin = to_number(need(j["tolerance"], "margin", "/tolerance"), "/tolerance/margin");
  }
  std::string name = j.contains("name") ? need_string(j["name"], "/name") : std::string("space");

  try {
    if (kind == "builtin") {
      BuiltinId id;
      try {
        id = parse_builtin(need_string(need(metric, "id", "/metric"), "/metric/id"));
      } catch (const DomainError& e) {
        throw FormatError("/metric/id", e.what());
      }
      const std::size_t n = need_count(need(metric, "n", "/metric"), "/metric/n");
      FuzzySpace b = FuzzySpace::builtin(id, n);
      if (!j.contains("name")) name = b.name();
      return FuzzySpace(name, b.points(), tn, b.metric(), tol);
    }

    const Json& pts = need_array(need(j, "points", root), "/points");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < pts.size(); ++i) labels.push_back(label_of(pts[i], "/points/" + std::to_string(i)));
    PointSet points(labels);
    const std::size_t n = points.size();

    if (kind == "standard") {
      Matrix d = matrix_from(need(metric, "d", "/metric"), n, n, "/metric/d");
      return FuzzySpace(name, points, tn, StandardMetric{SymMatrix::from_dense(d)}, tol);
    }
    if (kind == "stationary") {
      Matrix v = matrix_from(need(metric, "values", "/metric"), n, n, "/metric/values");
      return FuzzySpace(name, points, tn, StationaryMetric{SymMatrix::from_dense(v)}, tol);
    }
    if (kind == "sampled") {
      SampledMetric sm;
      const Json& grid = need_array(need(metric, "t_grid", "/metric"), "/metric/t_grid");
      for (std::size_t i = 0; i < grid.size(); ++i) sm.t_grid.push_back(to_number(grid[i], "/metric/t_grid/" + std::to_string(i)));
      sm.values.assign(n * (n - 1) / 2, {});
      std::vector<bool> seen(sm.values.size(), false);
      const Json& vals = need(metric, "values", "/metric");
      if (!vals.is_object()) throw FormatError("/metric/values", "expected an object keyed by \"x,y\"");
      for (const auto& [key, row] : vals.items()) {
        const std::string w = "/metric/values/" + key;
        std::optional<std::pair<std::size_t, std::size_t>> pq;
        for (std::size_t c = key.find(','); c != std::string::npos; c = key.find(',', c + 1)) {
          auto a = points.find(key.substr(0, c));
          auto b = points.find(key.substr(c + 1));
          if (a && b) {
            pq = std::pair{*a, *b};
            break;
          }
        }
        if (!pq || pq->first == pq->second) throw FormatError(w, "key must name two distinct points as \"x,y\"");
        const std::size_t slot = SampledMetric::pair_slot(pq->first, pq->second);
        need_array(row, w);
        if (row.size() != sm.t_grid.size()) throw FormatError(w, "sample count differs from t_grid");
        sm.values[slot].clear();
        for (std::size_t k = 0; k < row.size(); ++k) sm.values[slot].push_back(to_number(row[k], w + "/" + std::to_string(k)));
        seen[slot] = true;
      }
      for (std::size_t s = 0; s < seen.size(); ++s)
        if (!seen[s]) throw FormatError("/metric/values", "missing samples for some pair of points");
      return FuzzySpace(name, points, tn, std::move(sm), tol);
    }
  } catch (const DomainError& e) {
    throw FormatError("/metric", e.what());
  }
  throw FormatError("/metric/kind", "unknown metric kind '" + kind + "'");
}

// ---------------------------------------------------------------- entourages

Json entourage_to_json(const FuzzySpace& space, const Entourage& e) {
  Json pairs = Json::array();
  for (const auto& p : e.pairs()) pairs.push_back(pair_to(space, p));
  return Json{{"pairs", pairs}};
}

Entourage entourage_from_json(const FuzzySpace& space, const Json& j) {
  const Json& pairs = need_array(need(j, "pairs", ""), "/pairs");
  Entourage e(space.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string w = "/pairs/" + std::to_string(i);
    if (!pairs[i].is_array() || pairs[i].size() != 2) throw FormatError(w, "expected [x, y]");
    e.insert(point(space, pairs[i][0], w + "/0"), point(space, pairs[i][1], w + "/1"));
  }
  return e;
}

// -------------------------------------------------------------------- covers

Json cover_to_json(const FuzzySpace& space, const Cover& c) {
  Json sets = Json::array();
  for (const auto& s : c.sets) sets.push_back(subset_to(space, s));
  Json out{{"sets", sets}};
  Json claims = Json::object();
  if (c.claims.bounded) {
    claims["r"] = number(c.claims.bounded->r.r());
    claims["t"] = number(c.claims.bounded->t);
  }
  if (c.claims.lebesgue) claims["lebesgue"] = Json::array({number(c.claims.lebesgue->r.r()), number(c.claims.lebesgue->t)});
  if (c.claims.multiplicity) claims["multiplicity"] = *c.claims.multiplicity;
  if (!claims.empty()) out["claims"] = claims;
  return out;
}

Cover cover_from_json(const FuzzySpace& space, const Json& j) {
  const Json& sets = need_array(need(j, "sets", ""), "/sets");
  Family fam;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::string w = "/sets/" + std::to_string(i);
    need_array(sets[i], w);
    PointSubset s;
    for (std::size_t k = 0; k < sets[i].size(); ++k) s.push_back(point(space, sets[i][k], w + "/" + std::to_string(k)));
    fam.push_back(std::move(s));
  }
  Cover c;
  try {
    c = Cover::from_sets(std::move(fam), space.size());
  } catch (const DomainError& e) {
    throw FormatError("/sets", e.what());
  }
  if (j.contains("claims")) {
    const Json& cl = j["claims"];
    if (cl.contains("t")) c.claims.bounded = scale_from_json(cl, "/claims");
    if (cl.contains("lebesgue")) {
      const Json& l = cl["lebesgue"];
      if (!l.is_array() || l.size() != 2) throw FormatError("/claims/lebesgue", "expected [r, t]");
      c.claims.lebesgue = scale_from_json(Json{{"r", l[0]}, {"t", l[1]}}, "/claims/lebesgue");
    }
    if (cl.contains("multiplicity")) c.claims.multiplicity = need_count(cl["multiplicity"], "/claims/multiplicity");
  }
  return c;
}

// ----------------------------------------------------------------- witnesses

Json witness_to_json(const FuzzySpace& space, const WitnessFamily& w, const std::optional<ParamTuple>& p) {
  Json out = Json::object();
  if (p) out["params"] = params_to(*p);
  bool prefix = true;
  for (const auto& s : w.sets())
    for (const auto& e : s.entries) prefix = prefix && e.second.prefix_height().has_value();
  Json body = Json::object();
  for (std::size_t x = 0; x < w.size(); ++x) {
    const std::string& lx = space.points().label(x);
    if (prefix) {
      Json row = Json::object();
      for (const auto& [y, levels] : w[x].entries) row[space.points().label(y)] = *levels.prefix_height();
      body[lx] = row;
    } else {
      Json row = Json::array();
      for (const auto& [y, levels] : w[x].entries)
        for (std::uint64_t level : levels.levels()) row.push_back(Json::array({space.points().label(y), level}));
      body[lx] = row;
    }
  }
  out[prefix ? "heights" : "sets"] = body;
  return out;
}

WitnessFile witness_from_json(const FuzzySpace& space, const Json& j) {
  WitnessFile out;
  if (j.contains("params")) out.params = params_from(j["params"], "/params");
  const bool has_sets = j.contains("sets"), has_heights = j.contains("heights");
  if (has_sets == has_heights) throw FormatError("", "expected exactly one of \"sets\" and \"heights\"");
  const std::size_t n = space.size();
  if (has_heights) {
    std::vector<HeightRow> rows(n);
    const Json& body = j["heights"];
    if (!body.is_object()) throw FormatError("/heights", "expected an object");
    for (const auto& [key, row] : body.items()) {
      const std::string w = "/heights/" + key;
      const std::size_t x = point_key(space, key, w);
      if (!row.is_object()) throw FormatError(w, "expected an object of heights");
      for (const auto& [ykey, h] : row.items()) rows[x].push_back({point_key(space, ykey, w + "/" + ykey), need_count(h, w + "/" + ykey)});
    }
    out.witness = WitnessFamily::from_heights(rows);
  } else {
    std::vector<PairRow> rows(n);
    const Json& body = j["sets"];
    if (!body.is_object()) throw FormatError("/sets", "expected an object");
    for (const auto& [key, row] : body.items()) {
      const std::string w = "/sets/" + key;
      const std::size_t x = point_key(space, key, w);
      need_array(row, w);
      for (std::size_t i = 0; i < row.size(); ++i) {
        const std::string wi = w + "/" + std::to_string(i);
        if (!row[i].is_array() || row[i].size() != 2) throw FormatError(wi, "expected [point, level]");
        const std::size_t level = need_count(row[i][1], wi + "/1");
        if (level == 0) throw FormatError(wi + "/1", "levels start at 1");
        rows[x].push_back({point(space, row[i][0], wi + "/0"), level});
      }
    }
    out.witness = WitnessFamily::from_pairs(rows);
  }
  return out;
}

// ------------------------------------------------------- kernels and fields

Json kernel_to_json(const FuzzySpace& space, const Kernel& k) {
  Json out{{"labels", labels_of(space)}, {"matrix", matrix_to(k.real.to_dense())}};
  if (k.imag) out["imag"] = matrix_to(*k.imag);
  out["window"] = scale_to_json(k.window);
  return out;
}

Kernel kernel_from_json(const FuzzySpace& space, const Json& j) {
  check_labels(space, j, "");
  const std::size_t n = space.size();
  Kernel k;
  const Matrix m = matrix_from(need(j, "matrix", ""), n, n, "/matrix");
  try {
    k.real = SymMatrix::from_dense(m);
  } catch (const DomainError& e) {
    throw FormatError("/matrix", e.what());
  }
  if (j.contains("imag")) k.imag = matrix_from(j["imag"], n, n, "/imag");
  k.window = scale_from_json(need(j, "window", ""), "/window");
  return k;
}

Json operator_to_json(const FuzzySpace& space, const PropagatedOperator& op) {
  return Json{{"labels", labels_of(space)}, {"matrix", matrix_to(op.matrix)}, {"window", scale_to_json(op.window)}};
}

PropagatedOperator operator_from_json(const FuzzySpace& space, const Json& j) {
  check_labels(space, j, "");
  const std::size_t n = space.size();
  return PropagatedOperator{matrix_from(need(j, "matrix", ""), n, n, "/matrix"), scale_from_json(need(j, "window", ""), "/window")};
}

Json field_to_json(const FuzzySpace& space, const Field& f) {
  return Json{{"labels", labels_of(space)}, {"vectors", matrix_to(f.vectors)}, {"window", scale_to_json(f.window)}};
}

Field field_from_json(const FuzzySpace& space, const Json& j) {
  check_labels(space, j, "");
  const std::size_t n = space.size();
  return Field{matrix_from(need(j, "vectors", ""), n, n, "/vectors"), scale_from_json(need(j, "window", ""), "/window")};
}

// ---------------------------------------------------------------------- maps

Json map_to_json(const FuzzySpace& from, const FuzzySpace& to, const PointMap& f) {
  Json m = Json::object();
  for (std::size_t x = 0; x < f.size(); ++x) m[from.points().label(x)] = to.points().label(f(x));
  return Json{{"from", from.name()}, {"to", to.name()}, {"map", m}};
}

PointMap map_from_json(const FuzzySpace& from, const FuzzySpace& to, const Json& j) {
  const Json& m = need(j, "map", "");
  if (!m.is_object()) throw FormatError("/map", "expected an object");
  PointMap f;
  f.image.assign(from.size(), 0);
  std::vector<bool> seen(from.size(), false);
  for (const auto& [key, value] : m.items()) {
    const std::size_t x = point_key(from, key, "/map/" + key);
    f.image[x] = point(to, value, "/map/" + key);
    seen[x] = true;
  }
  for (std::size_t x = 0; x < from.size(); ++x)
    if (!seen[x]) throw FormatError("/map", "no image for point '" + from.points().label(x) + "'");
  return f;
}

// -------------------------------------------------------------- certificates

Json axiom_report_to_json(const FuzzySpace& space, const AxiomReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"violations", c.violations},
                          {"worst", number(c.worst)}, {"witness", c.witness}});
  Json out{{"space", space.name()}, {"passed", r.all_passed()}, {"checks", checks}};
  if (r.triangle_witness) {
    const auto& w = *r.triangle_witness;
    out["triangle_witness"] = Json{{"x", space.points().label(w.x)}, {"y", space.points().label(w.y)},
                                   {"z", space.points().label(w.z)}, {"t", number(w.t)}, {"s", number(w.s)},
                                   {"lhs", number(w.lhs)}, {"rhs", number(w.rhs)}};
  }
  out["notes"] = r.notes;
  return out;
}

Json witness_certificate_to_json(const FuzzySpace& space, const WitnessCertificate& c) {
  Json out{{"params", params_to(c.params)},
           {"passed", c.passed},
           {"structural_ok", c.structural_ok},
           {"support", scale_to_json(c.support)},
           {"support_min", number(c.support_min)},
           {"worst_ratio", number(c.worst_ratio)},
           {"close_pairs", c.close_pairs}};
  out["worst_pair"] = c.worst_pair ? pair_to(space, *c.worst_pair) : Json();
  out["failures"] = c.failures;
  return out;
}

Json thm37_to_json(const FuzzySpace& space, const Thm37Result& r) {
  Json anchors = Json::array();
  for (std::size_t a : r.anchors) anchors.push_back(space.points().label(a));
  return Json{{"passed", r.passed},
              {"accepted", r.accepted},
              {"K", r.params.K},
              {"R", scale_to_json(Scale{r.params.R, r.params.T})},
              {"level_clamped", r.params.level_clamped},
              {"anchors", anchors},
              {"max_projection", r.max_projection},
              {"max_close_symdiff", r.max_close_symdiff},
              {"min_close_intersection", r.min_close_intersection},
              {"certificate", witness_certificate_to_json(space, r.certificate)},
              {"failures", r.failures}};
}

Json step_to_json(const StepCertificate& c) {
  return Json{{"step", c.step},       {"input_eps", number(c.input_eps)}, {"bound", number(c.bound)},
              {"measured", number(c.measured)}, {"output_eps", number(c.output_eps)}, {"passed", c.passed},
              {"notes", c.notes}};
}

Json round_trip_to_json(const RoundTrip& rt) {
  Json steps = Json::array();
  for (const auto& s : rt.steps) steps.push_back(step_to_json(s));
  Json theory = Json::array();
  for (const auto& [name, v] : rt.theory.stages) theory.push_back(Json{{"stage", name}, {"eps", number(v)}});
  Json out{{"passed", rt.passed}, {"final_eps", number(rt.final_eps)}, {"inflation", number(rt.inflation)}, {"steps", steps}};
  if (rt.steps.size() >= 4) {
    out["kernel"] = Json{{"min_eigenvalue", number(rt.kernel.min_eigenvalue)},
                         {"identity_error", number(rt.kernel.identity_error)},
                         {"window", scale_to_json(rt.kernel.kernel.window)}};
  }
  if (rt.steps.size() >= 5) {
    out["operator"] = Json{{"ulf", rt.op.ulf}, {"norm", number(rt.op.norm)}, {"psd", rt.op.psd},
                           {"max_row_support", rt.op.max_row_support}};
  }
  if (rt.steps.size() >= 6) {
    out["sqrt"] = Json{{"sqrt_residual", number(rt.sqrt.sqrt_residual)},
                       {"s_l_norm", number(rt.sqrt.s_l_norm)},
                       {"truncation_bound", number(rt.sqrt.truncation_bound)},
                       {"truncation_norm", number(rt.sqrt.truncation_norm)},
                       {"truncation_window", scale_to_json(rt.sqrt.truncation_window)},
                       {"kept_entries", rt.sqrt.kept_entries},
                       {"gram_error", number(rt.sqrt.gram_error)},
                       {"min_theta_sq", number(rt.sqrt.min_theta_sq)}};
  }
  if (rt.steps.size() >= 7) out["final_witness"] = Json{{"ulf", rt.final_witness.ulf}, {"N", rt.final_witness.N}};
  out["theory"] = Json{{"degenerate", rt.theory.degenerate}, {"stages", theory}};
  return out;
}

Json asdim_report_to_json(const FuzzySpace& space, const AsdimReport& r) {
  Json fams = Json::array();
  for (const auto& f : r.families) {
    Json jf{{"disjoint", f.disjoint}, {"worst_sup", number(f.worst_sup)}, {"worst_margin", number(f.worst_margin)}};
    jf["offending_points"] = f.offending_points ? pair_to(space, *f.offending_points) : Json();
    fams.push_back(jf);
  }
  return Json{{"passed", r.passed}, {"covers", r.covers},        {"n", r.n},
              {"families", fams},   {"union_bound", bounded_to(r.union_bound)}, {"failures", r.failures}};
}

Json adx_table_to_json(const AdxTable& t) {
  Json entries = Json::array();
  for (const auto& e : t.entries)
    entries.push_back(Json{{"t", number(e.t)}, {"available", e.available}, {"estimate", e.estimate},
                           {"members", e.cover.size()}, {"note", e.note}});
  return Json{{"r", number(t.r.r())}, {"r_prime", number(t.r_prime.r())}, {"kind", "heuristic upper bound"},
              {"entries", entries}, {"notes", t.notes}};
}

Json modulus_table_to_json(const ModulusTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows)
    rows.push_back(Json{{"threshold", number(r.threshold)}, {"t", number(r.t)}, {"t_prime", number(r.t_prime)},
                        {"value", number(r.value)}, {"qualifying", r.qualifying}, {"passed", r.passed}});
  return Json{{"passed", t.passed}, {"trend_ok", t.trend_ok}, {"trend_note", t.trend_note}, {"rows", rows}};
}

Json coarse_map_report_to_json(const FuzzySpace& source, const CoarseMapReport& r) {
  (void)source;
  Json out{{"embedding", r.embedding},
           {"expansive", modulus_table_to_json(r.expansive)},
           {"proper", modulus_table_to_json(r.proper)}};
  out["onto"] = r.onto ? Json{{"scale", scale_to_json(r.onto->scale)}, {"min_closeness", number(r.onto->min_closeness)}}
                       : Json();
  return out;
}

Json sako_to_json(const FuzzySpace& space, const SakoCertificate& c) {
  Json out{{"passed", c.passed},
           {"eps", number(c.eps)},
           {"support_ok", c.support_ok},
           {"structural_ok", c.structural_ok},
           {"support_bound", bounded_to(c.support_bound)},
           {"worst_ratio", number(c.worst_ratio)},
           {"pairs_checked", c.pairs_checked}};
  out["worst_pair"] = c.worst_pair ? pair_to(space, *c.worst_pair) : Json();
  out["failures"] = c.failures;
  return out;
}

Json coarse_asdim_to_json(const FuzzySpace& space, const CoarseAsdimReport& r) {
  Json fams = Json::array();
  for (const auto& f : r.families) {
    Json jf{{"disjoint", f.disjoint}};
    jf["offending_points"] = f.offending_points ? pair_to(space, *f.offending_points) : Json();
    fams.push_back(jf);
  }
  return Json{{"passed", r.passed},   {"covers", r.covers},
              {"n", r.n},             {"families", fams},
              {"union_bounded", r.union_bounded}, {"union_bound", bounded_to(r.union_bound)},
              {"failures", r.failures}};
}

Json embedding_report_to_json(const FuzzySpace& space, const EmbeddingVectors& e, const DistortionReport& d) {
  Json windows = Json::array();
  for (const auto& w : e.windows) windows.push_back(scale_to_json(w));
  Json pairs = Json::array();
  for (const auto& p : e.pairs) {
    Json blocks = Json::array();
    for (double b : p.blocks_sq) blocks.push_back(number(std::sqrt(b)));
    pairs.push_back(Json{{"x", space.points().label(p.x)},
                         {"y", space.points().label(p.y)},
                         {"dist", number(std::sqrt(p.dist_sq))},
                         {"blocks", blocks},
                         {"sqrt2_count", p.sqrt2_count},
                         {"window_count", p.window_count},
                         {"n_double_prime", p.n_double_prime},
                         {"bound_ok", p.bound_ok}});
  }
  Json diag{{"window_without_sqrt2", e.window_without_sqrt2},
            {"sqrt2_without_window", e.sqrt2_without_window},
            {"bound_failures", e.bound_failures},
            {"count_failures", e.count_failures},
            {"orthogonality_error", number(e.orthogonality_error)},
            {"tail_bound", number(e.tail_bound)},
            {"expansive_failures", d.expansive_failures},
            {"boundary_cases", d.boundary_cases},
            {"boundary_failures", d.boundary_failures},
            {"properness_radii", d.properness_radii},
            {"max_window_count", d.max_window_count},
            {"monotone_violations", d.monotone_violations},
            {"sup_m", "largest M over the grid, a lower bound for the true sup"},
            {"passed", d.passed}};
  return Json{{"base", space.points().label(e.config.base)},
              {"levels", e.config.levels},
              {"windows", windows},
              {"diagnostics", diag},
              {"pairs", pairs}};
}

}  // namespace fuzzycoarse::io
