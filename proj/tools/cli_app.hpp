#pragma once

// ccr_cli: argument parsing and dispatch. run() is callable in-process.

#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ccr/heisenberg.hpp"
#include "ccr/partition.hpp"
#include "ccr/report.hpp"
#include "ccr/serialize.hpp"
#include "ccr/suite.hpp"
#include "ccr/svn.hpp"

namespace ccr::cli {

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsage = 2 };

struct Options {
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string out;
  bool reproducible = false;

  std::string ring = "zmod:2";
  std::size_t d = 1;
  std::string lambda;
  std::size_t mult = 1;
  std::string pair;
  std::string other;
  std::optional<std::size_t> expect;
  bool with_matrix = false;
  std::vector<std::string> require;
  std::size_t cap = 512;

  std::string theta = "golden";
  std::size_t grid = 16;
  std::vector<std::size_t> grids{8, 16, 32, 64};
  std::optional<std::int64_t> window;
  std::int64_t k = 5;
  std::size_t dims = 2;
  bool allow_fallback = false;
};

class Session {
 public:
  Session(std::vector<std::string> args, std::ostream& out, std::ostream& err)
      : args_(std::move(args)), out_(out), err_(err) {}

  int run();

 private:
  using Handler = std::function<int()>;

  double tol(double fallback) const { return opt_.tol.value_or(fallback); }

  /// Writes text to --out when given, else to standard output.
  void emit(const std::string& text) {
    if (opt_.out.empty())
      out_ << text;
    else
      write_text_file(opt_.out, text);
  }

  RunReport new_report() {
    RunReport rep;
    rep.command = args_;
    rep.reproducible = opt_.reproducible;
    rep.config = config_;
    return rep;
  }

  /// Subcommand path and every option given, except --out and --reproducible.
  static Json parsed_config(const CLI::App& app) {
    Json c;
    std::string path;
    Json opts = Json::object();
    const CLI::App* cur = &app;
    while (cur) {
      for (const auto* o : cur->get_options()) {
        if (o->count() == 0) continue;
        const auto name = o->get_name();
        if (name == "--out" || name == "--reproducible" || name == "--help") continue;
        opts[name] = o->results();
      }
      const auto subs = cur->get_subcommands();
      cur = subs.empty() ? nullptr : subs.front();
      if (cur) path += (path.empty() ? "" : " ") + cur->get_name();
    }
    c["command"] = path;
    c["options"] = std::move(opts);
    return c;
  }

  /// Human summary to stdout, JSON report to --out.
  int finish(RunReport& rep) {
    rep.wall_time = clock_.seconds();
    out_ << rep.summary();
    if (!opt_.out.empty()) write_text_file(opt_.out, rep.to_json().dump(2) + "\n");
    return rep.exit_code();
  }

  FiniteRing ring() const { return ring_from_json(ring_json(opt_.ring)); }

  static Json ring_json(const std::string& text) {
    const auto first = text.find_first_not_of(" \t");
    if (first != std::string::npos && text[first] == '{') return parse_json_text(text, "--ring");
    return Json(text);
  }

  Character lambda(const FiniteRing& r) const {
    if (opt_.lambda.empty()) throw StructureError("--lambda is required");
    return parse_character(r, opt_.lambda);
  }

  CCRPair load(const std::string& path) const {
    if (path.empty()) throw StructureError("a pair file is required");
    return read_pair(path);
  }

  void describe_pair(Json& j, const CCRPair& p) const {
    j["ring"] = p.ring().name();
    j["d"] = p.degree();
    j["lambda"] = character_to_json(p.lambda());
    j["N"] = p.dim();
    j["label"] = p.label();
  }

  int ring_info();
  int char_check();
  int pair_make(const std::string& kind);
  int pair_verify();
  int svn_intertwine();
  int svn_decompose();
  int svn_commutant();
  int svn_equivalent();
  int heis_table();
  int heis_rep_check();
  int heis_induce();
  int approx_sample();
  int approx_epsilon();
  int approx_study();
  int suite(const SuiteProfile& prof);

  std::vector<std::string> args_;
  std::ostream& out_;
  std::ostream& err_;
  Options opt_;
  Json config_ = Json::object();
  Stopwatch clock_;
};

inline Json json_indices(const std::vector<Index>& xs) { return Json(xs); }

inline int Session::ring_info() {
  const auto r = ring();
  Json j;
  j["name"] = r.name();
  j["spec"] = r.spec();
  j["descriptor"] = ring_to_json(r);
  j["order"] = r.order();
  j["commutative"] = r.is_commutative();
  j["additive_factors"] = r.additive_factors();
  j["one"] = r.one();
  emit(j.dump(2) + "\n");
  return kPass;
}

inline int Session::char_check() {
  const auto r = ring();
  const auto chi = lambda(r);
  const auto c = check_conditions(r, chi);
  auto rep = new_report();
  auto& j = rep.result;
  j["ring"] = r.name();
  j["lambda"] = character_to_json(chi);
  j["sym"] = c.sym;
  j["sym_counterexample"] = c.sym_counterexample ? Json::array({c.sym_counterexample->first, c.sym_counterexample->second}) : Json();
  j["iso"] = c.iso;
  j["iso_kernel"] = json_indices(c.iso_kernel);
  j["faith"] = c.faith;
  j["faith_generator"] = c.faith_generator ? Json(*c.faith_generator) : Json();
  j["faith_ideal"] = json_indices(c.faith_ideal);
  out_ << "sym " << (c.sym ? "yes" : "no") << ", iso " << (c.iso ? "yes" : "no") << ", faith "
       << (c.faith ? "yes" : "no") << "\n";
  if (!c.iso) out_ << "ker nabla_lambda = " << detail::format_set(c.iso_kernel) << "\n";
  if (!c.faith) out_ << "ideal inside ker lambda: " << detail::format_set(c.faith_ideal) << "\n";
  for (const auto& name : opt_.require) {
    bool ok = false;
    if (name == "sym") ok = c.sym;
    else if (name == "iso") ok = c.iso;
    else if (name == "faith") ok = c.faith;
    else throw StructureError("--require takes sym, iso or faith");
    rep.add(make_check(name, ok ? 0.0 : 1.0, 0.0));
  }
  return finish(rep);
}

inline int Session::pair_make(const std::string& kind) {
  const auto r = ring();
  const auto chi = lambda(r);
  const CCRPair p = kind == "schrodinger" ? schrodinger(chi, opt_.d)
                    : kind == "regular"   ? regular(chi, opt_.d)
                                          : random_instance(chi, opt_.d, opt_.mult, opt_.seed);
  const auto text = pair_to_json(p).dump() + "\n";
  if (opt_.out.empty()) {
    out_ << text;
  } else {
    write_text_file(opt_.out, text);
    out_ << p.label() << " pair over " << r.name() << ", d=" << opt_.d << ", N=" << p.dim() << " written to "
         << opt_.out << "\n";
  }
  return kPass;
}

inline int Session::pair_verify() {
  const auto p = load(opt_.pair);
  auto rep = new_report();
  describe_pair(rep.result, p);
  const double t = tol(1e-12);
  rep.add(make_check("verify_ccr", verify_ccr(p), t));
  rep.add(make_check("representation_residual", representation_residual(p), t));
  return finish(rep);
}

inline int Session::svn_intertwine() {
  const auto p = load(opt_.pair);
  auto rep = new_report();
  describe_pair(rep.result, p);
  const auto w = svn_intertwiner(p);
  auto& j = rep.result;
  j["m"] = w.m;
  j["n"] = w.n;
  j["dim"] = w.w.dim();
  j["method"] = w.method;
  j["elements_scanned"] = w.elements;
  j["unitarity_defect"] = w.unitarity_defect;
  j["residual"] = w.residual;
  j["chain_bound"] = w.chain_bound;
  if (opt_.with_matrix) {
    if (w.w.dim() > kDenseNormLimit) throw ResourceError("--with-matrix is limited to dimension 512");
    j["W"] = operator_to_json(Operator(w.w.dense()));
  }
  rep.add(make_check("unitarity_defect", w.unitarity_defect, 1e-10));
  rep.add(make_check("intertwining_residual", w.residual, tol(1e-9)));
  return finish(rep);
}

inline int Session::svn_decompose() {
  const auto p = load(opt_.pair);
  auto rep = new_report();
  describe_pair(rep.result, p);
  DecomposeOptions o;
  o.seed = opt_.seed;
  const auto dec = decompose(p, o);
  auto& j = rep.result;
  j["multiplicity"] = dec.multiplicity;
  j["rounds"] = dec.rounds;
  j["residual"] = dec.residual;
  j["unitarity_defect"] = dec.unitarity_defect;
  if (opt_.with_matrix) j["theta"] = operator_to_json(Operator(dec.theta));
  out_ << "multiplicity " << dec.multiplicity << "\n";
  rep.add(make_check("theta_residual", dec.residual, tol(1e-8)));
  rep.add(make_check("theta_unitarity", dec.unitarity_defect, tol(1e-8)));
  if (opt_.expect) rep.add(make_check("multiplicity_mismatch", dec.multiplicity == *opt_.expect ? 0.0 : 1.0, 0.0));
  return finish(rep);
}

inline int Session::svn_commutant() {
  const auto p = load(opt_.pair);
  auto rep = new_report();
  describe_pair(rep.result, p);
  const auto dim = commutant_dim(p);
  rep.result["commutant_dim"] = dim;
  out_ << "commutant dimension " << dim << "\n";
  if (opt_.expect) rep.add(make_check("commutant_dim_mismatch", dim == *opt_.expect ? 0.0 : 1.0, 0.0));
  return finish(rep);
}

inline int Session::svn_equivalent() {
  const auto a = load(opt_.pair);
  const auto b = load(opt_.other);
  auto rep = new_report();
  const bool eq = a.dim() == b.dim() && pairs_equivalent(a, b, tol(1e-8));
  rep.result["equivalent"] = eq;
  out_ << (eq ? "equivalent" : "not equivalent") << "\n";
  rep.add(make_check("equivalent", eq ? 0.0 : 1.0, 0.0));
  return finish(rep);
}

inline int Session::heis_table() {
  const HeisenbergGroup h(ring(), opt_.d);
  const auto table = multiplication_table(h, opt_.cap);
  Json j;
  j["ring"] = h.ring().name();
  j["d"] = opt_.d;
  j["order"] = h.order();
  Json elems = Json::array();
  for (Index i = 0; i < h.order(); ++i) {
    const auto g = h.element(i);
    elems.push_back(Json::array({g.a, g.b, g.c}));
  }
  j["elements"] = std::move(elems);
  j["table"] = table;
  emit(j.dump() + "\n");
  return kPass;
}

inline int Session::heis_rep_check() {
  const auto p = load(opt_.pair);
  auto rep = new_report();
  describe_pair(rep.result, p);
  const auto pi = rep_from_pair(p);
  const double t = tol(1e-10);
  rep.add(make_check("homomorphism_residual", homomorphism_residual(pi), t));
  rep.add(make_check("central_character_residual", central_character_residual(pi), t));
  const auto back = pair_from_rep(pi);
  double trip = 0.0;
  for (Index a = 0; a < p.group_size(); ++a)
    trip = std::max({trip, distance(back.U(a), p.U(a)), distance(back.V(a), p.V(a))});
  rep.add(make_check("round_trip", trip, t));
  return finish(rep);
}

inline int Session::heis_induce() {
  const auto r = ring();
  const auto chi = lambda(r);
  auto rep = new_report();
  const auto ind = induced_rep(chi, opt_.d);
  rep.result["dim"] = ind.dim();
  rep.result["group_order"] = ind.group().order();
  const double t = tol(1e-8);
  rep.add(make_check("homomorphism_residual", homomorphism_residual(ind), t));
  rep.add(make_check("central_character_residual", central_character_residual(ind), t));
  rep.add(make_check("trace_distance_to_regular", trace_distance(ind, rep_from_pair(regular(chi, opt_.d))), t));
  return finish(rep);
}

inline int Session::approx_sample() {
  const auto th = parse_theta(opt_.theta);
  const auto w = opt_.window.value_or(minimal_window(th, opt_.grid).value_or(th.is_rational() ? th.q() : 1024));
  const auto s = sample_orbit(th, build_grid_partition(opt_.grid, opt_.dims), w);
  auto rep = new_report();
  auto& j = rep.result;
  j["theta"] = th.label();
  j["theta_value"] = th.value();
  j["grid"] = opt_.grid;
  j["dims"] = opt_.dims;
  j["window"] = w;
  Json axis = Json::array();
  for (const auto& a : s.axis()) axis.push_back(a ? Json(*a) : Json());
  j["axis_samples"] = std::move(axis);
  j["uncovered_cells"] = s.uncovered_count();
  j["ambiguous"] = s.ambiguous();
  out_ << "theta " << th.label() << ", g=" << opt_.grid << ", W=" << w << ", uncovered cells " << s.uncovered_count()
       << "\n";
  rep.add(make_check("uncovered_cells", static_cast<double>(s.uncovered_count()), 0.0));
  return finish(rep);
}

inline int Session::approx_epsilon() {
  const auto th = parse_theta(opt_.theta);
  const auto w = opt_.window.value_or(minimal_window(th, opt_.grid).value_or(th.is_rational() ? th.q() : 1024));
  auto s = sample_orbit(th, build_grid_partition(opt_.grid, opt_.dims), w);
  const auto uncovered = s.uncovered_count();
  if (opt_.allow_fallback) s.fill_nearest();
  const auto kw = symmetric_window(opt_.k);
  const auto c = certify_epsilon(s, kw, opt_.allow_fallback);
  auto rep = new_report();
  auto& j = rep.result;
  j["theta"] = th.label();
  j["grid"] = opt_.grid;
  j["window"] = w;
  j["k"] = opt_.k;
  j["eps_exact"] = c.eps;
  j["eps_bound"] = c.eps_bound;
  j["eps_bound_clamped"] = c.eps_bound_clamped;
  j["delta"] = c.delta;
  j["delta_actual"] = c.delta_actual;
  j["uncovered_cells"] = uncovered;
  j["fallback_arcs"] = c.fallback_arcs;
  j["arc_eps"] = c.arc_eps;
  out_ << "eps_exact " << Theta::format(c.eps) << ", eps_bound " << Theta::format(c.eps_bound) << " (W=" << w
       << ", fallback arcs " << c.fallback_arcs << ")\n";
  rep.add(make_check("eps_exact_over_bound", c.eps - c.eps_bound, 0.0));
  if (opt_.tol) rep.add(make_check("eps_exact", c.eps, *opt_.tol));
  return finish(rep);
}

inline int Session::approx_study() {
  const auto th = parse_theta(opt_.theta);
  std::vector<std::size_t> grids(opt_.grids.begin(), opt_.grids.end());
  StudyOptions o;
  o.dims = opt_.dims;
  o.window = opt_.window;
  emit(study_csv(convergence_study(th, symmetric_window(opt_.k), grids, o)));
  return kPass;
}

inline int Session::suite(const SuiteProfile& prof) {
  std::vector<CriterionResult> results;
  for (std::size_t i = 0; i < criteria().size(); ++i) {
    results.push_back(run_criterion(i, prof));
    out_ << criterion_text(results.back(), !opt_.reproducible) << std::flush;
  }
  auto rep = suite_report(results, prof);
  rep.config["invocation"] = config_;
  rep.command = args_;
  rep.reproducible = opt_.reproducible;
  rep.wall_time = clock_.seconds();
  out_ << (rep.passed() ? "ALL PASS" : "FAILURES") << ": " << prof.name << " profile\n";
  if (!opt_.out.empty()) write_text_file(opt_.out, rep.to_json().dump(2) + "\n");
  return rep.exit_code();
}

inline int Session::run() {
  CLI::App app{"Finite CCR pairs, intertwiners and the epsilon certificate", "ccr_cli"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", opt_.seed, "random seed");
  app.add_option("--tol", opt_.tol, "tolerance for the command's checks");
  app.add_option("--out", opt_.out, "output file (artifact or JSON report)");
  app.add_flag("--reproducible", opt_.reproducible, "omit wall times from reports");

  Handler chosen;
  const auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, Handler h) {
    auto* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&chosen, h] { chosen = h; });
    return sub;
  };
  const auto group = [&](const std::string& name, const std::string& help) {
    auto* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    g->fallthrough();
    return g;
  };
  const auto ring_opts = [&](CLI::App* s, bool with_lambda) {
    s->add_option("--ring", opt_.ring, "ring spec (zmod:N, fp:P, mat:N(spec), prod(a,b)) or descriptor JSON")->required();
    s->add_option("--d", opt_.d, "degree d")->check(CLI::PositiveNumber);
    if (with_lambda) s->add_option("--lambda", opt_.lambda, "character exponents: 1 | 1,0,0,1 | JSON")->required();
  };
  const auto pair_opt = [&](CLI::App* s) {
    s->add_option("pair,--pair", opt_.pair, "pair JSON file")->required();
  };

  auto* ring_cmd = group("ring", "ring descriptors");
  ring_opts(leaf(ring_cmd, "info", "print ring metadata", [this] { return ring_info(); }), false);

  auto* chr = group("char", "characters of (R, +)");
  auto* cc = leaf(chr, "check", "evaluate (Sym), (Isom), (Faith)", [this] { return char_check(); });
  ring_opts(cc, true);
  cc->add_option("--require", opt_.require, "conditions that must hold: sym, iso, faith")->delimiter(',');

  auto* pr = group("pair", "CCR pairs");
  for (const std::string kind : {"schrodinger", "regular", "random"}) {
    auto* s = leaf(pr, kind, kind + " pair", [this, kind] { return pair_make(kind); });
    ring_opts(s, true);
    if (kind == "random") s->add_option("--mult", opt_.mult, "multiplicity of the Schrodinger pair")->check(CLI::PositiveNumber);
  }
  pair_opt(leaf(pr, "verify-ccr", "CCR and representation residuals", [this] { return pair_verify(); }));

  auto* svn = group("svn", "intertwiners and decompositions");
  auto* si = leaf(svn, "intertwine", "explicit intertwiner with the regular pair", [this] { return svn_intertwine(); });
  pair_opt(si);
  si->add_flag("--with-matrix", opt_.with_matrix, "include W (dimension <= 512)");
  auto* sd = leaf(svn, "decompose", "split into Schrodinger copies", [this] { return svn_decompose(); });
  pair_opt(sd);
  sd->add_flag("--with-matrix", opt_.with_matrix, "include Theta");
  sd->add_option("--expect", opt_.expect, "expected multiplicity");
  auto* sc = leaf(svn, "commutant", "dimension of the commutant", [this] { return svn_commutant(); });
  pair_opt(sc);
  sc->add_option("--expect", opt_.expect, "expected dimension");
  auto* se = leaf(svn, "equivalent", "unitary equivalence of two pairs", [this] { return svn_equivalent(); });
  pair_opt(se);
  se->add_option("other,--other", opt_.other, "second pair JSON file")->required();

  auto* heis = group("heis", "Heisenberg groups");
  auto* ht = leaf(heis, "table", "multiplication table", [this] { return heis_table(); });
  ring_opts(ht, false);
  ht->add_option("--cap", opt_.cap, "largest group order");
  pair_opt(leaf(heis, "rep-check", "representation checks for a pair", [this] { return heis_rep_check(); }));
  ring_opts(leaf(heis, "induce", "induced representation against the regular pair", [this] { return heis_induce(); }), true);

  auto* ap = group("approx", "orbit sampling and the epsilon certificate");
  const auto theta_opts = [&](CLI::App* s) {
    s->add_option("--theta", opt_.theta, "golden | p/q | decimal");
    s->add_option("--dims", opt_.dims, "torus dimension 2d")->check(CLI::PositiveNumber);
    s->add_option("--window", opt_.window, "orbit window W (default: smallest covering W)");
  };
  auto* as = leaf(ap, "sample", "orbit sample per grid cell", [this] { return approx_sample(); });
  theta_opts(as);
  as->add_option("--grid", opt_.grid, "grid resolution g")->check(CLI::PositiveNumber);
  auto* ae = leaf(ap, "epsilon", "exact epsilon and the crude bound", [this] { return approx_epsilon(); });
  theta_opts(ae);
  ae->add_option("--grid", opt_.grid, "grid resolution g")->check(CLI::PositiveNumber);
  ae->add_option("--k", opt_.k, "frequency window {-K..K}")->check(CLI::NonNegativeNumber);
  ae->add_flag("--allow-fallback", opt_.allow_fallback, "give uncovered cells the nearest orbit point");
  auto* ast = leaf(ap, "study", "convergence table as CSV", [this] { return approx_study(); });
  theta_opts(ast);
  ast->add_option("--grids", opt_.grids, "ascending resolutions")->delimiter(',');
  ast->add_option("--k", opt_.k, "frequency window {-K..K}")->check(CLI::NonNegativeNumber);

  auto* su = group("suite", "acceptance matrix");
  leaf(su, "quick", "|R|^d <= 16", [this] { return suite(SuiteProfile::quick()); });
  leaf(su, "full", "|R|^d <= 64", [this] { return suite(SuiteProfile::full()); });

  std::vector<const char*> argv{"ccr_cli"};
  for (const auto& a : args_) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_, err_);
    return code == 0 ? kPass : kUsage;
  }
  config_ = parsed_config(app);
  if (!chosen) {
    err_ << "usage error: no command\n";
    return kUsage;
  }
  try {
    return chosen();
  } catch (const StructureError& e) {
    err_ << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    err_ << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err_ << "check failed: " << e.what() << "\n";
    return kCheckFailure;
  }
}

inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Session(std::move(args), out, err).run();
}

}  // namespace ccr::cli
