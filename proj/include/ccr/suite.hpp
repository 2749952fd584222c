#pragma once

// The acceptance matrix as library calls, shared by `ccr_cli suite` and the
// acceptance binary. Each criterion returns named max-residual checks.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ccr/catalog.hpp"
#include "ccr/characters.hpp"
#include "ccr/heisenberg.hpp"
#include "ccr/pairs.hpp"
#include "ccr/partition.hpp"
#include "ccr/reference.hpp"
#include "ccr/report.hpp"
#include "ccr/svn.hpp"

namespace ccr {

struct SuiteProfile {
  std::string name;
  std::size_t max_group = 16;  // cap on |R|^d
  std::size_t max_ring = 16;   // cap on |R| for the condition-logic property

  static SuiteProfile quick() { return {"quick", 16, 16}; }
  static SuiteProfile full() { return {"full", 64, 64}; }
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<CheckResult> checks;
  std::string detail;
  double seconds = 0.0;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
};

namespace suite_detail {

struct Case {
  FiniteRing ring;
  std::size_t d;
  std::size_t group;  // |R|^d
};

inline std::vector<Case> cases(std::size_t max_group, std::size_t max_degree = 2) {
  std::vector<Case> out;
  for (const auto& r : standard_rings())
    for (std::size_t d = 1; d <= max_degree; ++d) {
      std::size_t g = 1;
      for (std::size_t k = 0; k < d; ++k) g *= r.order();
      if (g <= max_group) out.push_back({r, d, g});
    }
  return out;
}

/// The acceptance ring list plus further small rings, all of order <= cap.
inline std::vector<FiniteRing> condition_rings(std::size_t cap) {
  std::vector<FiniteRing> out = standard_rings();
  const auto z = [](std::uint64_t n) { return FiniteRing::zmod(n); };
  const auto m2f2 = FiniteRing::matrix(2, FiniteRing::prime_field(2));
  for (std::uint64_t n = 9; n <= 64; ++n) out.push_back(z(n));
  for (std::uint64_t p : {11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61}) out.push_back(FiniteRing::prime_field(p));
  out.push_back(FiniteRing::product({z(2), z(2)}));
  out.push_back(FiniteRing::product({z(2), z(4)}));
  out.push_back(FiniteRing::product({z(4), z(4)}));
  out.push_back(FiniteRing::product({z(2), z(8)}));
  out.push_back(FiniteRing::product({z(2), z(2), z(2)}));
  out.push_back(FiniteRing::product({z(2), z(2), z(2), z(2)}));
  out.push_back(FiniteRing::product({z(3), z(3)}));
  out.push_back(FiniteRing::product({z(3), z(9)}));
  out.push_back(FiniteRing::product({z(4), z(8)}));
  out.push_back(FiniteRing::product({z(8), z(8)}));
  out.push_back(FiniteRing::product({z(2), FiniteRing::prime_field(7)}));
  out.push_back(FiniteRing::product({m2f2, z(2)}));
  out.push_back(FiniteRing::product({m2f2, z(3)}));
  out.push_back(FiniteRing::product({m2f2, z(4)}));
  std::erase_if(out, [&](const FiniteRing& r) { return r.order() > cap; });
  return out;
}

inline std::vector<Character> where(const FiniteRing& r, const std::function<bool(const ConditionReport&)>& pred) {
  return characters_where(r, pred);
}

inline bool isom(const ConditionReport& c) { return c.iso; }
inline bool faithful(const ConditionReport& c) { return c.faith; }

/// Running max with a count of observations.
struct Worst {
  double value = 0.0;
  std::size_t count = 0;
  void observe(double x) {
    value = std::isnan(x) ? x : std::max(value, x);
    ++count;
  }
};

inline std::string count_str(std::size_t n, const char* what) { return std::to_string(n) + " " + what; }

}  // namespace suite_detail

/// Schrodinger and regular pairs for every faithful lambda.
inline CriterionResult criterion_ccr_exactness(const SuiteProfile& prof) {
  using namespace suite_detail;
  Stopwatch clock;
  Worst ccr, rep;
  for (const auto& c : cases(prof.max_group))
    for (const auto& lambda : where(c.ring, faithful))
      for (const auto& p : {schrodinger(lambda, c.d), regular(lambda, c.d)}) {
        ccr.observe(verify_ccr(p));
        rep.observe(representation_residual(p));
      }
  CriterionResult r{1, "CCR exactness", {}, count_str(ccr.count, "pairs"), clock.seconds()};
  r.checks.push_back(make_check("verify_ccr", ccr.value, 1e-12));
  r.checks.push_back(make_check("representation_residual", rep.value, 1e-12));
  r.checks.push_back(make_timing_check("runtime", r.seconds, 10.0));
  return r;
}

/// Phi, Psi and F~ identities on (Sym)+(Isom) characters.
inline CriterionResult criterion_intertwining_identities(const SuiteProfile& prof) {
  using namespace suite_detail;
  Stopwatch clock;
  Worst phi, psi, fourier, unit;
  std::size_t seed = 1;
  for (const auto& c : cases(prof.max_group))
    for (const auto& lambda : where(c.ring, supports_fourier)) {
      std::vector<CCRPair> inputs{schrodinger(lambda, c.d)};
      if (c.group <= 4) inputs.push_back(random_instance(lambda, c.d, 2, seed++));
      for (const auto& p : inputs) {
        const auto res = intertwining_residuals(p);
        phi.observe(std::max(res.phi_u, res.phi_v));
        psi.observe(std::max(res.psi_u, res.psi_v));
        fourier.observe(std::max(res.fourier_u, res.fourier_v));
        unit.observe(std::max(res.phi_unitarity, res.psi_unitarity));
      }
    }
  CriterionResult r{2, "Phi/Psi/F~ intertwining identities", {}, count_str(phi.count, "pairs"), clock.seconds()};
  r.checks.push_back(make_check("phi", phi.value, 1e-10));
  r.checks.push_back(make_check("psi", psi.value, 1e-10));
  r.checks.push_back(make_check("fourier", fourier.value, 1e-10));
  r.checks.push_back(make_check("phi_psi_unitarity", unit.value, 1e-10));
  r.checks.push_back(make_timing_check("runtime", r.seconds, 60.0));
  return r;
}

/// svn_intertwiner on every case with |S| N <= 4096.
inline CriterionResult criterion_svn_intertwiner(const SuiteProfile& prof) {
  using namespace suite_detail;
  Stopwatch clock;
  Worst unit, resid;
  std::size_t largest = 0, seed = 11;
  for (const auto& c : cases(prof.max_group)) {
    if (c.group * c.group * c.group > kMaxPairDim) continue;
    for (const auto& lambda : where(c.ring, supports_fourier)) {
      const auto run = [&](const CCRPair& p) {
        const auto w = svn_intertwiner(p);
        unit.observe(w.unitarity_defect);
        resid.observe(w.residual);
        largest = std::max(largest, w.w.dim());
      };
      run(schrodinger(lambda, c.d));
      if (c.d == 1 && c.ring.order() <= 5) run(random_instance(lambda, 1, 1, seed++));
    }
  }
  CriterionResult r{3, "svn_intertwiner witnesses", {},
                    count_str(unit.count, "witnesses") + ", largest dimension " + std::to_string(largest),
                    clock.seconds()};
  r.checks.push_back(make_check("unitarity_defect", unit.value, 1e-10));
  r.checks.push_back(make_check("intertwining_residual", resid.value, 1e-9));
  r.checks.push_back(make_check("dimension_4096_missing", largest == kMaxPairDim ? 0.0 : 1.0, 0.0));
  r.checks.push_back(make_timing_check("runtime", r.seconds, 600.0));
  return r;
}

/// Planted multiplicities and the regular pair.
inline CriterionResult criterion_decompose(const SuiteProfile& prof) {
  using namespace suite_detail;
  Stopwatch clock;
  Worst resid;
  std::size_t wrong = 0, runs = 0;
  for (const auto& c : cases(std::min<std::size_t>(prof.max_group, 16))) {
    const auto lambdas = where(c.ring, supports_fourier);
    if (lambdas.empty()) continue;
    const auto& lambda = lambdas.front();
    for (std::size_t k = 1; k <= 4; ++k)
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        DecomposeOptions opt;
        opt.seed = seed;
        const auto dec = decompose(random_instance(lambda, c.d, k, 1000 * k + seed), opt);
        resid.observe(dec.residual);
        wrong += dec.multiplicity != k;
        ++runs;
      }
    const auto reg = decompose(regular(lambda, c.d));
    resid.observe(reg.residual);
    wrong += reg.multiplicity != c.group;
    ++runs;
  }
  CriterionResult r{4, "decompose multiplicities", {}, count_str(runs, "decompositions"), clock.seconds()};
  r.checks.push_back(make_check("theta_residual", resid.value, 1e-8));
  r.checks.push_back(make_check("multiplicity_mismatches", static_cast<double>(wrong), 0.0));
  return r;
}

/// Commutant dimensions: 1 for Schrodinger, k^2 for inflations, the Z/4 regression.
inline CriterionResult criterion_commutant(const SuiteProfile& prof) {
  using namespace suite_detail;
  Stopwatch clock;
  std::size_t schr_off = 0, infl_off = 0, oracle_off = 0, n = 0;
  for (const auto& c : cases(prof.max_group)) {
    const auto lambdas = where(c.ring, isom);
    for (const auto& lambda : lambdas) {
      const auto s = schrodinger(lambda, c.d);
      schr_off += commutant_dim(s) != 1;
      ++n;
    }
    if (lambdas.empty()) continue;
    const auto s = schrodinger(lambdas.front(), c.d);
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto p = inflate(s, k);
      const auto dim = commutant_dim(p);
      infl_off += dim != k * k;
      if (p.dim() <= 16) oracle_off += std::abs(static_cast<double>(dim) - reference::commutant_dim_by_characters(p)) > 1e-8;
      ++n;
    }
  }
  for (std::uint64_t m : {2, 3}) {
    const auto lambda = Character::on_ring(FiniteRing::zmod(m), {1});
    for (std::size_t k = 2; k <= 3; ++k) {
      const auto p = random_instance(lambda, 1, k, 40 + k);
      const auto dim = commutant_dim(p);
      infl_off += dim != k * k;
      oracle_off += std::abs(static_cast<double>(dim) - reference::commutant_dim_by_characters(p)) > 1e-8;
      ++n;
    }
  }
  const auto z4 = Character::on_ring(FiniteRing::zmod(4), {2});
  const auto d1 = schrodinger(z4, 1), d2 = schrodinger(z4, 2);
  const auto c1 = commutant_dim(d1), c2 = commutant_dim(d2);
  const double o1 = reference::commutant_dim_by_characters(d1), o2 = reference::commutant_dim_by_characters(d2);
  CriterionResult r{5, "commutant dimensions", {},
                    count_str(n, "pairs") + "; Z/4 exp 2: d=1 -> " + std::to_string(c1) + ", d=2 -> " + std::to_string(c2),
                    clock.seconds()};
  r.checks.push_back(make_check("schrodinger_not_1", static_cast<double>(schr_off), 0.0));
  r.checks.push_back(make_check("inflation_not_k2", static_cast<double>(infl_off), 0.0));
  r.checks.push_back(make_check("oracle_mismatches", static_cast<double>(oracle_off), 0.0));
  r.checks.push_back(make_check("z4_exp2_d2_minus_4", std::abs(static_cast<double>(c2) - 4.0), 0.0));
  r.checks.push_back(make_check("z4_exp2_vs_oracle",
                                std::max(std::abs(static_cast<double>(c1) - o1), std::abs(static_cast<double>(c2) - o2)), 1e-8));
  r.checks.push_back(make_check("z4_exp2_d1_reducible", c1 > 1 ? 0.0 : 1.0, 0.0));
  return r;
}

/// check_conditions against ideal enumeration, and (Sym)+(Faith) => (Isom).
inline CriterionResult criterion_conditions(const SuiteProfile& prof) {
  using namespace suite_detail;
  Stopwatch clock;
  std::size_t mismatches = 0, violations = 0, oracle_cases = 0, property_cases = 0;
  for (const auto& ring : condition_rings(std::max<std::size_t>(prof.max_ring, 16))) {
    const bool brute = ring.order() <= 16;
    const bool prop = ring.order() <= prof.max_ring;
    if (!brute && !prop) continue;
    const auto ideals = brute ? reference::all_ideals(ring) : std::vector<std::uint32_t>{};
    for (const auto& lambda : dual_group(ring)) {
      const auto rep = check_conditions(ring, lambda);
      if (prop) {
        violations += rep.sym && rep.faith && !rep.iso;
        ++property_cases;
      }
      if (!brute) continue;
      const auto ref = reference::conditions(ring, lambda);
      bool ok = rep.sym == ref.sym && rep.iso == ref.iso && rep.faith == ref.faith;
      if (!rep.iso) ok = ok && rep.iso_kernel == ref.kernel;
      if (!rep.faith) {
        std::uint32_t mask = 0;
        for (Index x : rep.faith_ideal) mask |= std::uint32_t{1} << x;
        ok = ok && rep.faith_generator == ref.first_faith_generator && rep.faith_ideal == ref.smallest_ideal &&
             std::find(ideals.begin(), ideals.end(), mask) != ideals.end();
      }
      mismatches += !ok;
      ++oracle_cases;
    }
  }
  const auto z4 = FiniteRing::zmod(4);
  const auto c = check_conditions(z4, Character::on_ring(z4, {2}));
  const bool witness = !c.iso && !c.faith && c.faith_ideal == std::vector<Index>{0, 2};
  CriterionResult r{6, "condition logic", {},
                    count_str(oracle_cases, "oracle cases") + ", " + count_str(property_cases, "property cases"),
                    clock.seconds()};
  r.checks.push_back(make_check("oracle_mismatches", static_cast<double>(mismatches), 0.0));
  r.checks.push_back(make_check("sym_faith_not_isom", static_cast<double>(violations), 0.0));
  r.checks.push_back(make_check("z4_exp2_counterexample", witness ? 0.0 : 1.0, 0.0));
  return r;
}

/// Trace functions of the induced representation and the regular pair.
inline CriterionResult criterion_induced(const SuiteProfile& prof) {
  using namespace suite_detail;
  Stopwatch clock;
  Worst dist;
  for (const auto& c : cases(prof.max_group)) {
    if (c.group * c.group * c.ring.order() > 512) continue;
    for (const auto& lambda : dual_group(c.ring))
      dist.observe(trace_distance(induced_rep(lambda, c.d), rep_from_pair(regular(lambda, c.d))));
  }
  CriterionResult r{7, "induced representation traces", {}, count_str(dist.count, "characters"), clock.seconds()};
  r.checks.push_back(make_check("trace_distance", dist.value, 1e-8));
  return r;
}

/// Golden-ratio convergence study and the rational floor.
inline CriterionResult criterion_certificate(const SuiteProfile&) {
  Stopwatch clock;
  const auto golden = Theta::golden();
  const auto k = symmetric_window(5);
  const std::vector<std::size_t> grids{8, 16, 32, 64};
  const auto rows = convergence_study(golden, k, grids);
  double increase = 0.0, over_bound = 0.0, brute_gap = 0.0;
  std::size_t uncovered = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) increase = std::max(increase, rows[i].eps_exact - rows[i - 1].eps_exact);
    over_bound = std::max(over_bound, rows[i].eps_exact - rows[i].eps_bound);
    uncovered += rows[i].uncovered_cells;
    const auto s = sample_orbit(golden, build_grid_partition(rows[i].g, 2), rows[i].window);
    brute_gap = std::max(brute_gap, std::abs(rows[i].eps_exact - reference::eps_sup(s, k, 1000000)));
  }
  const auto rational = convergence_study(Theta::rational(3, 8), k, grids);
  double floor = 2.0;
  for (const auto& row : rational) floor = std::min(floor, row.eps_exact);
  CriterionResult r{8, "epsilon certificate", {},
                    "golden eps(64) = " + sci(rows.back().eps_exact) + ", 3/8 floor = " + sci(floor), 0.0};
  r.checks.push_back(make_check("golden_uncovered_cells", static_cast<double>(uncovered), 0.0));
  r.checks.push_back(make_check("golden_eps_increase", increase, 0.0));
  r.checks.push_back(make_check("golden_eps64", rows.back().eps_exact, 0.70));
  r.checks.push_back(make_check("golden_eps_over_bound", over_bound, 0.0));
  r.checks.push_back(make_check("golden_vs_brute_force", brute_gap, 1e-9));
  // A floor at 2 sin(5 pi / 16) is what the 8 orbit points of 3/8 allow for |a| <= 5.
  r.checks.push_back(make_check("rational_floor_shortfall", 2.0 * std::sin(5.0 * std::numbers::pi / 16.0) - floor, 1e-12));
  r.seconds = clock.seconds();
  r.checks.push_back(make_timing_check("runtime", r.seconds, 60.0));
  return r;
}

using CriterionFn = CriterionResult (*)(const SuiteProfile&);

inline const std::vector<CriterionFn>& criteria() {
  static const std::vector<CriterionFn> all{criterion_ccr_exactness,    criterion_intertwining_identities,
                                            criterion_svn_intertwiner,  criterion_decompose,
                                            criterion_commutant,        criterion_conditions,
                                            criterion_induced,          criterion_certificate};
  return all;
}

/// Runs one criterion, turning an exception into a failed check.
inline CriterionResult run_criterion(std::size_t index, const SuiteProfile& prof) {
  Stopwatch clock;
  try {
    auto r = criteria().at(index)(prof);
    r.seconds = clock.seconds();
    return r;
  } catch (const std::exception& e) {
    CriterionResult r{static_cast<int>(index + 1), "criterion " + std::to_string(index + 1), {}, e.what(), clock.seconds()};
    r.checks.push_back({"exception", 1.0, 0.0, false, false});
    return r;
  }
}

/// "PASS criterion 1: title (1.23 s; detail)" followed by one indented line per check.
inline std::string criterion_text(const CriterionResult& r, bool show_times = true) {
  char buf[256];
  std::string out = r.pass() ? "PASS" : "FAIL";
  out += " criterion " + std::to_string(r.id) + ": " + r.title + " (";
  if (show_times) {
    std::snprintf(buf, sizeof buf, "%.2f s; ", r.seconds);
    out += buf;
  }
  out += r.detail + ")\n";
  for (const auto& c : r.checks) {
    const char* mark = c.pass ? "ok  " : "FAIL";
    if (c.timing && show_times)
      std::snprintf(buf, sizeof buf, "    %s %-34s %.2f s < %.0f s\n", mark, c.name.c_str(), c.residual, c.tolerance);
    else if (c.timing)
      std::snprintf(buf, sizeof buf, "    %s %-34s < %.0f s\n", mark, c.name.c_str(), c.tolerance);
    else
      std::snprintf(buf, sizeof buf, "    %s %-34s %.3e <= %.1e\n", mark, c.name.c_str(), c.residual, c.tolerance);
    out += buf;
  }
  return out;
}

inline RunReport suite_report(const std::vector<CriterionResult>& results, const SuiteProfile& prof) {
  RunReport rep;
  rep.config["profile"] = prof.name;
  rep.config["max_group"] = prof.max_group;
  rep.config["max_ring"] = prof.max_ring;
  Json list = Json::array();
  for (const auto& c : results) {
    for (auto check : c.checks) {
      check.name = "c" + std::to_string(c.id) + "." + check.name;
      rep.add(std::move(check));
    }
    Json x;
    x["id"] = c.id;
    x["title"] = c.title;
    x["pass"] = c.pass();
    x["detail"] = c.detail;
    list.push_back(std::move(x));
  }
  rep.result["criteria"] = std::move(list);
  return rep;
}

}  // namespace ccr
