// fzc: command-line front end for the fuzzycoarse library.
//
// Exit codes: 0 when every certificate passes, 1 when one fails (reports are
// still written), 2 on malformed input.

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fuzzycoarse/characterizations.hpp"
#include "fuzzycoarse/coarse_maps.hpp"
#include "fuzzycoarse/coarse_structure.hpp"
#include "fuzzycoarse/covers.hpp"
#include "fuzzycoarse/embedding.hpp"
#include "fuzzycoarse/io.hpp"
#include "fuzzycoarse/property_a.hpp"

using namespace fuzzycoarse;
using io::Json;

namespace {

struct Options {
  std::string space, target, witness, map, field, kernel, op, subset, point, id;
  std::vector<std::string> covers, level_witnesses;
  std::optional<double> eps, r, t, bound_r, bound_t, tol;
  std::vector<double> t_grid, ladder;
  std::size_t levels = 6, dim = 1, n = 0;
  std::string base;
  std::uint64_t seed = 0;
  std::string out, report, format = "text", step;
};

struct Outcome {
  Json report;
  std::optional<Json> artifact;
  bool passed = true;
};

class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------------ loading

FuzzySpace load_space(const Options& o, const std::string& path, const char* flag) {
  if (path.empty()) throw InputError(std::string("missing ") + flag);
  FuzzySpace s = io::space_from_json(io::read_file(path));
  if (o.tol) {
    Tolerance tol = s.tolerance();
    tol.margin = *o.tol;
    s = s.with_tolerance(tol);
  }
  return s;
}

FuzzySpace load_space(const Options& o) { return load_space(o, o.space, "--space"); }

Json load(const std::string& path, const char* flag) {
  if (path.empty()) throw InputError(std::string("missing ") + flag);
  return io::read_file(path);
}

std::size_t point_arg(const FuzzySpace& s, const std::string& label, const char* flag) {
  const auto idx = s.points().find(label);
  if (!idx) throw InputError(std::string(flag) + ": unknown point '" + label + "'");
  return *idx;
}

Scale scale_arg(const Options& o) {
  if (!o.r || !o.t) throw InputError("missing --r or --t");
  try {
    return Scale{Radius::from_r(*o.r), *o.t};
  } catch (const DomainError& e) {
    throw InputError(std::string("--r: ") + e.what());
  }
}

ParamTuple params_arg(const Options& o, const std::optional<ParamTuple>& from_file = std::nullopt) {
  ParamTuple p = from_file.value_or(ParamTuple{});
  if (!from_file && (!o.eps || !o.r || !o.t)) throw InputError("missing --eps, --r or --t");
  if (o.eps) p.eps = *o.eps;
  if (o.r) p.r = Radius::from_r(*o.r);
  if (o.t) p.t = *o.t;
  p.validate();
  return p;
}

io::WitnessFile load_witness(const FuzzySpace& s, const std::string& path) {
  return io::witness_from_json(s, load(path, "--witness"));
}

std::vector<double> grid_arg(const Options& o, const FuzzySpace& s) {
  return o.t_grid.empty() ? s.grid() : o.t_grid;
}

std::vector<double> ladder_arg(const Options& o) { return o.ladder.empty() ? default_modulus_ladder() : o.ladder; }

// ------------------------------------------------------------------ commands

Outcome cmd_verify_axioms(const Options& o) {
  const FuzzySpace s = load_space(o);
  const std::vector<double> grid = grid_arg(o, s);
  const AxiomReport rep = verify_axioms(s, grid, grid);
  return Outcome{io::axiom_report_to_json(s, rep), std::nullopt, rep.all_passed()};
}

Outcome cmd_ball(const Options& o) {
  const FuzzySpace s = load_space(o);
  const std::size_t x = point_arg(s, o.point, "--x");
  const Scale sc = scale_arg(o);
  Json pts = Json::array();
  for (std::size_t y : ball(s, x, sc)) pts.push_back(s.points().label(y));
  const std::size_t count = pts.size();
  return Outcome{Json{{"x", o.point}, {"scale", io::scale_to_json(sc)}, {"size", count}, {"ball", pts}},
                 std::nullopt, true};
}

Outcome cmd_gen(const Options& o) {
  if (o.n == 0) throw InputError("--n must be positive");
  std::mt19937_64 rng(o.seed);
  if (o.id == "random-standard" || o.id == "random-stationary") {
    std::uniform_real_distribution<double> u(0.0, o.id == "random-standard" ? 10.0 : 3.0);
    std::vector<std::array<double, 3>> p(o.n);
    for (auto& q : p)
      for (double& c : q) c = u(rng);
    Matrix d(o.n, o.n);
    for (std::size_t i = 0; i < o.n; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        double acc = 0.0;
        for (int k = 0; k < 3; ++k) acc += (p[i][k] - p[j][k]) * (p[i][k] - p[j][k]);
        d(i, j) = d(j, i) = o.id == "random-standard" ? std::sqrt(acc) : std::exp(-std::sqrt(acc));
      }
    for (std::size_t i = 0; i < o.n; ++i) d(i, i) = o.id == "random-standard" ? 0.0 : 1.0;
    const std::string name = o.id + "-" + std::to_string(o.n) + "-seed" + std::to_string(o.seed);
    FuzzySpace s = o.id == "random-standard" ? FuzzySpace::standard(name, PointSet::numbered(o.n), d)
                                             : FuzzySpace::stationary(name, PointSet::numbered(o.n), d);
    Json sj = io::space_to_json(s);
    return Outcome{Json{{"generated", name}, {"points", o.n}, {"seed", o.seed}}, sj, true};
  }
  BuiltinId id;
  try {
    id = parse_builtin(o.id);
  } catch (const DomainError& e) {
    throw InputError(std::string("--id: ") + e.what());
  }
  FuzzySpace s = FuzzySpace::builtin(id, o.n);
  return Outcome{Json{{"generated", s.name()}, {"points", s.size()}}, io::space_to_json(s), true};
}

// property-a

Outcome cmd_pa_verify(const Options& o) {
  const FuzzySpace s = load_space(o);
  const io::WitnessFile wf = load_witness(s, o.witness);
  const ParamTuple p = params_arg(o, wf.params);
  const WitnessCertificate c = verify_witness(s, wf.witness, p);
  return Outcome{io::witness_certificate_to_json(s, c), std::nullopt, c.passed};
}

Outcome cmd_pa_from_cover(const Options& o) {
  const FuzzySpace s = load_space(o);
  if (o.covers.size() != 1) throw InputError("expected one --cover");
  const Cover c = io::cover_from_json(s, load(o.covers[0], "--cover"));
  const ParamTuple p = params_arg(o);
  const Thm37Result res = construct_from_cover(s, c.sets, p, o.dim);
  std::optional<Json> art;
  if (res.accepted) art = io::witness_to_json(s, res.witness, p);
  return Outcome{io::thm37_to_json(s, res), art, res.passed};
}

Outcome cmd_pa_ex39(const Options& o) {
  const FuzzySpace s = load_space(o);
  if (!o.r) throw InputError("missing --r");
  const Radius r = Radius::from_r(*o.r);
  const Ex39Witness w = ex39_witness(s, r);
  const ParamTuple p{o.eps.value_or(1e-6), r, o.t.value_or(1.0)};
  const WitnessCertificate c = verify_witness(s, w.witness, p);
  Json rep = io::witness_certificate_to_json(s, c);
  rep["N"] = w.N;
  rep["hub"] = s.points().label(w.hub);
  rep["support_radius"] = io::number(w.support.r());
  return Outcome{rep, io::witness_to_json(s, w.witness, p), c.passed};
}

Outcome cmd_pa_subexp(const Options& o) {
  const FuzzySpace s = load_space(o);
  if (o.covers.size() != 1) throw InputError("expected one --cover");
  const Cover c = io::cover_from_json(s, load(o.covers[0], "--cover"));
  const Scale sc = scale_arg(o);
  const SubexpField f = subexp_field(s, c.sets, sc.r, o.levels);
  const double bound = subexp_bound(f.multiplicity, sc.t, o.levels);
  double worst = 0.0;
  std::size_t close = 0;
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = 0; y < x; ++y) {
      if (!s.close(x, y, sc)) continue;
      ++close;
      double d = 0.0;
      for (std::size_t z = 0; z < s.size(); ++z) d += std::abs(f.eta(x, z) - f.eta(y, z));
      worst = std::max(worst, d);
    }
  const bool ok = f.support_ok && worst <= bound + 1e-12;
  Json rep{{"n", o.levels},
           {"multiplicity", f.multiplicity},
           {"scale", io::scale_to_json(sc)},
           {"close_pairs", close},
           {"max_l1", io::number(worst)},
           {"bound", io::number(bound)},
           {"slack", io::number(bound - worst)},
           {"max_norm_error", io::number(f.max_norm_error)},
           {"support_ok", f.support_ok},
           {"passed", ok}};
  return Outcome{rep, io::field_to_json(s, Field{f.eta, f.window}), ok};
}

// transform

Outcome step_outcome(const StepCertificate& c, std::optional<Json> art, Json extra = Json::object()) {
  Json rep = io::step_to_json(c);
  for (auto& [k, v] : extra.items()) rep[k] = v;
  return Outcome{rep, std::move(art), c.passed};
}

Outcome cmd_transform(const Options& o) {
  const FuzzySpace s = load_space(o);
  const std::string& step = o.step;
  if (step == "i-ii") {
    const io::WitnessFile wf = load_witness(s, o.witness);
    const L1Step r = witness_to_l1(s, wf.witness, params_arg(o, wf.params));
    return step_outcome(r.cert, io::field_to_json(s, r.field));
  }
  if (step == "roundtrip") {
    const io::WitnessFile wf = load_witness(s, o.witness);
    const RoundTrip rt = characterization_round_trip(s, wf.witness, params_arg(o, wf.params));
    std::optional<Json> art;
    if (rt.passed) art = io::witness_to_json(s, rt.final_witness.witness, ParamTuple{rt.final_eps, params_arg(o, wf.params).r, params_arg(o, wf.params).t});
    return Outcome{io::round_trip_to_json(rt), art, rt.passed};
  }
  if (step == "v-vi") {
    const OperatorStep r = kernel_to_operator(s, io::kernel_from_json(s, load(o.kernel, "--kernel")));
    return step_outcome(r.cert, io::operator_to_json(s, r.op),
                        Json{{"ulf", r.ulf}, {"norm", io::number(r.norm)}, {"psd", r.psd}});
  }
  if (step == "vi-iii") {
    const ParamTuple p = params_arg(o);
    const SqrtStep r = operator_to_l2(s, io::operator_from_json(s, load(o.op, "--operator")), p.scale(), p.eps);
    return step_outcome(r.cert, io::field_to_json(s, r.field),
                        Json{{"sqrt_residual", io::number(r.sqrt_residual)},
                             {"truncation_norm", io::number(r.truncation_norm)},
                             {"truncation_bound", io::number(r.truncation_bound)},
                             {"truncation_window", io::scale_to_json(r.truncation_window)}});
  }
  const Field fl = io::field_from_json(s, load(o.field, "--field"));
  if (step == "iii-iv") {
    const WindowStep r = orthogonality_window(s, fl);
    return step_outcome(r.cert, std::nullopt,
                        Json{{"window", io::scale_to_json(r.window)}, {"far_pairs", r.far_pairs},
                             {"violations", r.violations}, {"support_ok", r.support_ok}});
  }
  const ParamTuple p = params_arg(o);
  if (step == "ii-iii") {
    const L2Step r = l1_to_l2(s, fl, p.scale(), p.eps);
    return step_outcome(r.cert, io::field_to_json(s, r.field));
  }
  if (step == "iv-v") {
    const WindowStep w = orthogonality_window(s, fl);
    if (!w.cert.passed) return step_outcome(w.cert, std::nullopt);
    const KernelStep r = l2_to_kernel(s, fl, w.window, p.scale(), p.eps);
    return step_outcome(r.cert, io::kernel_to_json(s, r.kernel),
                        Json{{"min_eigenvalue", io::number(r.min_eigenvalue)}, {"identity_error", io::number(r.identity_error)}});
  }
  if (step == "iii-i") {
    const WitnessStep r = l2_to_witness(s, fl, p.scale(), p.eps);
    return step_outcome(r.cert, io::witness_to_json(s, r.witness, ParamTuple{r.cert.bound, p.r, p.t}),
                        Json{{"ulf", r.ulf}, {"N", r.N}});
  }
  throw InputError("unknown transform step '" + step + "'");
}

// asdim

std::vector<Family> load_families(const Options& o, const FuzzySpace& s) {
  if (o.covers.empty()) throw InputError("missing --cover");
  std::vector<Family> fams;
  for (const auto& path : o.covers) fams.push_back(io::cover_from_json(s, load(path, "--cover")).sets);
  return fams;
}

Outcome cmd_asdim_verify(const Options& o) {
  const FuzzySpace s = load_space(o);
  const AsdimReport r = verify_asdim_witness(s, DisjointFamilies{load_families(o, s), scale_arg(o)});
  return Outcome{io::asdim_report_to_json(s, r), std::nullopt, r.passed};
}

Outcome cmd_asdim_enlarge(const Options& o) {
  const FuzzySpace s = load_space(o);
  if (o.covers.size() != 1) throw InputError("expected one --cover");
  const Family big = enlarge_family(s, io::cover_from_json(s, load(o.covers[0], "--cover")).sets, scale_arg(o));
  Cover c;
  c.sets = big;
  return Outcome{Json{{"members", big.size()}, {"multiplicity", multiplicity(big, s.size())}}, io::cover_to_json(s, c), true};
}

Outcome cmd_asdim_adx(const Options& o) {
  const FuzzySpace s = load_space(o);
  if (!o.r) throw InputError("missing --r");
  AdxOptions opt;
  opt.seed = o.seed;
  if (o.bound_r || o.bound_t) {
    if (!o.bound_r || !o.bound_t) throw InputError("--bound-r and --bound-t go together");
    opt.member_bound = Scale{Radius::from_r(*o.bound_r), *o.bound_t};
  }
  const AdxTable tab = ad_x_estimate(s, Radius::from_r(*o.r), grid_arg(o, s), opt);
  return Outcome{io::adx_table_to_json(tab), std::nullopt, true};
}

// coarse maps

struct MapInputs {
  FuzzySpace source, target;
  PointMap f;
};

MapInputs load_map(const Options& o) {
  FuzzySpace a = load_space(o);
  FuzzySpace b = o.target.empty() ? a : load_space(o, o.target, "--target");
  PointMap f = io::map_from_json(a, b, load(o.map, "--map"));
  return MapInputs{std::move(a), std::move(b), std::move(f)};
}

Outcome cmd_map_check(const Options& o) {
  const MapInputs m = load_map(o);
  const CoarseMapReport r = check_coarse_map(m.source, m.target, m.f, ladder_arg(o));
  return Outcome{io::coarse_map_report_to_json(m.source, r), std::nullopt, r.embedding};
}

Outcome cmd_map_inverse(const Options& o) {
  const MapInputs m = load_map(o);
  const CoarseInverseResult r = find_coarse_inverse(m.source, m.target, m.f);
  Json rep{{"passed", r.inverse.has_value()},
           {"candidate_expansive", io::modulus_table_to_json(r.candidate_expansive)},
           {"failures", r.failures}};
  auto close_json = [](const std::optional<CloseWitness>& w) {
    return w ? Json{{"scale", io::scale_to_json(w->scale)}, {"min_closeness", io::number(w->min_closeness)}} : Json();
  };
  rep["f_after_g"] = close_json(r.f_after_g);
  rep["g_after_f"] = close_json(r.g_after_f);
  return Outcome{rep, io::map_to_json(m.target, m.source, r.candidate), r.inverse.has_value()};
}

Json verification_if_given(const Options& o, const FuzzySpace& s, const WitnessFamily& w, bool& ok) {
  if (!o.eps || !o.r || !o.t) return Json();
  const WitnessCertificate c = verify_witness(s, w, params_arg(o));
  ok = ok && c.passed;
  return io::witness_certificate_to_json(s, c);
}

Outcome cmd_map_transport(const Options& o) {
  const MapInputs m = load_map(o);
  const io::WitnessFile wf = load_witness(m.source, o.witness);
  const CoarseInverseResult inv = find_coarse_inverse(m.source, m.target, m.f);
  const TransportResult t = transport_witness(m.f, inv.candidate, wf.witness, m.target.size());
  bool ok = t.structural_ok && t.cardinality_preserved;
  Json rep{{"inverse_certified", inv.inverse.has_value()},
           {"structural_ok", t.structural_ok},
           {"cardinality_preserved", t.cardinality_preserved},
           {"failures", t.failures}};
  rep["verification"] = verification_if_given(o, m.target, t.witness, ok);
  rep["passed"] = ok;
  return Outcome{rep, io::witness_to_json(m.target, t.witness, std::nullopt), ok};
}

Outcome cmd_map_restrict(const Options& o) {
  const FuzzySpace s = load_space(o);
  const io::WitnessFile wf = load_witness(s, o.witness);
  PointSubset sub;
  std::stringstream ss(o.subset);
  for (std::string label; std::getline(ss, label, ',');) sub.push_back(point_arg(s, label, "--subset"));
  std::sort(sub.begin(), sub.end());
  sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
  if (sub.empty()) throw InputError("--subset names no points");
  const RestrictionResult r = restrict_witness(s, sub, wf.witness);
  bool ok = r.transport.structural_ok;
  Json rep{{"subspace", io::space_to_json(r.subspace)},
           {"structural_ok", r.transport.structural_ok},
           {"failures", r.transport.failures}};
  rep["verification"] = verification_if_given(o, r.subspace, r.transport.witness, ok);
  rep["passed"] = ok;
  return Outcome{rep, io::witness_to_json(r.subspace, r.transport.witness, std::nullopt), ok};
}

// embedding

EmbeddingVectors build_from_options(const Options& o, const FuzzySpace& s) {
  EmbeddingConfig cfg;
  cfg.levels = o.levels;
  cfg.r_ladder = o.ladder;
  cfg.base = o.base.empty() ? 0 : point_arg(s, o.base, "--base");
  std::vector<WitnessFamily> ws;
  if (!o.level_witnesses.empty()) {
    for (const auto& path : o.level_witnesses) ws.push_back(load_witness(s, path).witness);
  } else {
    if (o.covers.size() != 1) throw InputError("expected one --cover or per-level --witness files");
    ws = level_witnesses_from_cover(s, io::cover_from_json(s, load(o.covers[0], "--cover")).sets, cfg, o.dim);
  }
  return build_embedding(s, ws, cfg);
}

bool embedding_ok(const EmbeddingVectors& e, const DistortionReport& d) {
  bool counts = true;
  for (std::size_t c : e.count_failures) counts = counts && c == 0;
  return e.window_without_sqrt2 == 0 && e.sqrt2_without_window == 0 && e.bound_failures == 0 && counts && d.passed;
}

Outcome cmd_embed_build(const Options& o) {
  const FuzzySpace s = load_space(o);
  const EmbeddingVectors e = build_from_options(o, s);
  const DistortionReport d = distortion_report(s, e);
  Json full = io::embedding_report_to_json(s, e, d);
  Json rep = full;
  rep.erase("pairs");
  rep["passed"] = embedding_ok(e, d);
  return Outcome{rep, full, embedding_ok(e, d)};
}

Outcome cmd_embed_report(const Options& o) {
  const FuzzySpace s = load_space(o);
  const EmbeddingVectors e = build_from_options(o, s);
  const DistortionReport d = distortion_report(s, e);
  Json rows = Json::array();
  for (const auto& r : d.rows)
    rows.push_back(Json{{"x", s.points().label(r.x)}, {"y", s.points().label(r.y)}, {"sup_m", io::number(r.sup_m)},
                        {"dist", io::number(r.distance)}});
  Json rep{{"passed", d.passed},
           {"expansive_failures", d.expansive_failures},
           {"boundary_cases", d.boundary_cases},
           {"boundary_failures", d.boundary_failures},
           {"properness_radii", d.properness_radii},
           {"max_window_count", d.max_window_count},
           {"monotone_violations", d.monotone_violations},
           {"rows", rows}};
  return Outcome{rep, std::nullopt, d.passed};
}

// appendix

Outcome cmd_appendix(const Options& o) {
  const FuzzySpace s = load_space(o);
  Json rep = Json::object();
  bool agree = true;
  if (!o.witness.empty()) {
    const io::WitnessFile wf = load_witness(s, o.witness);
    const ParamTuple p = params_arg(o, wf.params);
    const WitnessCertificate fuzzy = verify_witness(s, wf.witness, p);
    const SakoCertificate sako = sako_property_a_verify(s, Entourage::closeness(s, p.scale()), wf.witness, p.eps);
    agree = agree && fuzzy.passed == sako.passed;
    rep["property_a"] = Json{{"fuzzy", fuzzy.passed}, {"coarse", sako.passed}, {"agree", fuzzy.passed == sako.passed}};
  }
  if (!o.covers.empty()) {
    const Scale sc = scale_arg(o);
    const std::vector<Family> fams = load_families(o, s);
    const AsdimReport fz = verify_asdim_witness(s, DisjointFamilies{fams, sc});
    const CoarseAsdimReport cs = coarse_asdim_verify(s, Entourage::closeness(s, sc), fams);
    agree = agree && fz.passed == cs.passed;
    rep["asdim"] = Json{{"fuzzy", fz.passed}, {"coarse", cs.passed}, {"agree", fz.passed == cs.passed}};
  }
  if (rep.empty()) throw InputError("crosscheck needs --witness or --cover");
  rep["passed"] = agree;
  return Outcome{rep, std::nullopt, agree};
}

// ------------------------------------------------------------------ output

void print_text(const std::string& name, const Outcome& out) {
  std::cout << name << ": " << (out.passed ? "passed" : "FAILED") << '\n';
  for (const auto& [k, v] : out.report.items()) {
    if (k == "passed" || v.is_structured()) continue;
    std::cout << "  " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

int emit(const Options& o, const std::string& name, const Outcome& out) {
  if (!o.out.empty()) io::write_file(o.out, out.artifact ? *out.artifact : out.report);
  if (!o.report.empty()) io::write_file(o.report, out.report);
  if (o.format == "json") {
    std::cout << out.report.dump(2) << '\n';
  } else {
    print_text(name, out);
  }
  return out.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse geometry of finite fuzzy metric spaces"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Standard output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", o.out, "Artifact output file (the report when there is no artifact)");
  app.add_option("--report", o.report, "Report output file");
  app.add_option("--tol", o.tol, "Margin for strict comparisons");
  app.add_option("--seed", o.seed, "Seed for every randomized search");
  app.fallthrough();

  std::function<Outcome()> run;
  std::string run_name;
  auto bind = [&](CLI::App* sub, std::string name, std::function<Outcome(const Options&)> fn) {
    sub->callback([&, name, fn] {
      run_name = name;
      run = [&, fn] { return fn(o); };
    });
  };
  auto space_flag = [&](CLI::App* sub) { sub->add_option("--space", o.space, "Space file"); };
  auto params_flags = [&](CLI::App* sub) {
    sub->add_option("--eps", o.eps);
    sub->add_option("--r", o.r);
    sub->add_option("--t", o.t);
  };

  auto* ax = app.add_subcommand("verify-axioms", "Check the fuzzy metric axioms");
  space_flag(ax);
  ax->add_option("--t-grid", o.t_grid)->delimiter(',');
  bind(ax, "verify-axioms", cmd_verify_axioms);

  auto* bl = app.add_subcommand("ball", "List B(x, r, t)");
  space_flag(bl);
  bl->add_option("--x", o.point)->required();
  params_flags(bl);
  bind(bl, "ball", cmd_ball);

  auto* gen = app.add_subcommand("gen", "Write a builtin or seeded random space");
  gen->add_option("--id", o.id)->required();
  gen->add_option("--n", o.n)->required();
  bind(gen, "gen", cmd_gen);

  auto* pa = app.add_subcommand("property-a", "Property A witnesses");
  pa->require_subcommand(1);
  auto* pav = pa->add_subcommand("verify");
  space_flag(pav);
  pav->add_option("--witness", o.witness);
  params_flags(pav);
  bind(pav, "property-a verify", cmd_pa_verify);
  auto* pac = pa->add_subcommand("from-cover");
  space_flag(pac);
  pac->add_option("--cover", o.covers);
  pac->add_option("--dim", o.dim, "Cover dimension n (multiplicity n + 1)");
  params_flags(pac);
  bind(pac, "property-a from-cover", cmd_pa_from_cover);
  auto* pae = pa->add_subcommand("ex39");
  space_flag(pae);
  params_flags(pae);
  bind(pae, "property-a ex39", cmd_pa_ex39);
  auto* pas = pa->add_subcommand("subexp");
  space_flag(pas);
  pas->add_option("--cover", o.covers);
  pas->add_option("--levels", o.levels, "Averaging length n");
  params_flags(pas);
  bind(pas, "property-a subexp", cmd_pa_subexp);

  auto* tr = app.add_subcommand("transform", "One characterization step or the full round trip");
  tr->add_option("step", o.step)
      ->required()
      ->check(CLI::IsMember({"i-ii", "ii-iii", "iii-iv", "iv-v", "v-vi", "vi-iii", "iii-i", "roundtrip"}));
  space_flag(tr);
  tr->add_option("--witness", o.witness);
  tr->add_option("--field", o.field);
  tr->add_option("--kernel", o.kernel);
  tr->add_option("--operator", o.op);
  params_flags(tr);
  bind(tr, "transform", cmd_transform);

  auto* as = app.add_subcommand("asdim", "Asymptotic dimension witnesses");
  as->require_subcommand(1);
  auto* asv = as->add_subcommand("verify");
  space_flag(asv);
  asv->add_option("--cover", o.covers, "One family per file");
  params_flags(asv);
  bind(asv, "asdim verify", cmd_asdim_verify);
  auto* ase = as->add_subcommand("enlarge");
  space_flag(ase);
  ase->add_option("--cover", o.covers);
  params_flags(ase);
  bind(ase, "asdim enlarge", cmd_asdim_enlarge);
  auto* asx = as->add_subcommand("adx");
  space_flag(asx);
  params_flags(asx);
  asx->add_option("--t-grid", o.t_grid)->delimiter(',');
  asx->add_option("--bound-r", o.bound_r);
  asx->add_option("--bound-t", o.bound_t);
  bind(asx, "asdim adx", cmd_asdim_adx);

  auto* cm = app.add_subcommand("coarse-map", "Coarse maps between spaces");
  cm->require_subcommand(1);
  auto map_flags = [&](CLI::App* sub) {
    space_flag(sub);
    sub->add_option("--target", o.target, "Target space file (defaults to --space)");
    sub->add_option("--map", o.map);
  };
  auto* cmc = cm->add_subcommand("check");
  map_flags(cmc);
  cmc->add_option("--ladder", o.ladder)->delimiter(',');
  bind(cmc, "coarse-map check", cmd_map_check);
  auto* cmi = cm->add_subcommand("inverse");
  map_flags(cmi);
  bind(cmi, "coarse-map inverse", cmd_map_inverse);
  auto* cmt = cm->add_subcommand("transport");
  map_flags(cmt);
  cmt->add_option("--witness", o.witness);
  params_flags(cmt);
  bind(cmt, "coarse-map transport", cmd_map_transport);
  auto* cmr = cm->add_subcommand("restrict");
  space_flag(cmr);
  cmr->add_option("--witness", o.witness);
  cmr->add_option("--subset", o.subset, "Comma-separated point labels")->required();
  params_flags(cmr);
  bind(cmr, "coarse-map restrict", cmd_map_restrict);

  auto* em = app.add_subcommand("embed", "Coarse embedding into Hilbert space");
  em->require_subcommand(1);
  auto embed_flags = [&](CLI::App* sub) {
    space_flag(sub);
    sub->add_option("--cover", o.covers);
    sub->add_option("--dim", o.dim);
    sub->add_option("--witness", o.level_witnesses, "One witness file per level");
    sub->add_option("--levels", o.levels);
    sub->add_option("--ladder", o.ladder, "r_n values")->delimiter(',');
    sub->add_option("--base", o.base);
  };
  auto* emb = em->add_subcommand("build");
  embed_flags(emb);
  bind(emb, "embed build", cmd_embed_build);
  auto* emr = em->add_subcommand("report");
  embed_flags(emr);
  bind(emr, "embed report", cmd_embed_report);

  auto* apx = app.add_subcommand("appendix", "Fuzzy versus coarse-space verdicts");
  apx->require_subcommand(1);
  auto* apc = apx->add_subcommand("crosscheck");
  space_flag(apc);
  apc->add_option("--witness", o.witness);
  apc->add_option("--cover", o.covers, "One family per file");
  params_flags(apc);
  bind(apc, "appendix crosscheck", cmd_appendix);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return emit(o, run_name, run());
  } catch (const io::FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << '\n';
  }
  return 2;
}
