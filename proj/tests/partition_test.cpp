#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <numeric>
#include <random>

#include "ccr/partition.hpp"
#include "support/brute_eps.hpp"

using namespace ccr;

TEST(Grid, Geometry) {
  const auto one = build_grid_partition(1, 2);
  EXPECT_EQ(one.cell_count(), 1u);
  EXPECT_TRUE(one.contains(0, {0.0, 0.999}));
  const auto p = build_grid_partition(4, 2);
  EXPECT_EQ(p.cell_count(), 16u);
  EXPECT_DOUBLE_EQ(p.diameter(), std::sqrt(2.0) / 4.0);
  EXPECT_EQ(p.coords(p.cell({3, 1})), (std::vector<std::size_t>{3, 1}));
  EXPECT_EQ(p.center(p.cell({1, 2})), (std::vector<double>{0.375, 0.625}));
  EXPECT_THROW(build_grid_partition(0, 2), StructureError);
  EXPECT_THROW(build_grid_partition(4096, 2), ResourceError);
}

TEST(Grid, DisjointCoverOnProbeGrid) {
  for (std::size_t g : {1, 3, 4, 7}) {
    const auto p = build_grid_partition(g, 2);
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 100; ++j) {
        const std::vector<double> x{i / 100.0, j / 100.0};
        int hits = 0;
        for (std::size_t c = 0; c < p.cell_count(); ++c) hits += p.contains(c, x);
        ASSERT_EQ(hits, 1) << g << " " << i << " " << j;
        ASSERT_TRUE(p.contains(p.locate(x), x));
      }
  }
}

TEST(Grid, P1ForEpsNeighborhood) {
  const EpsNeighborhood u{symmetric_window(5), 0.5};
  EXPECT_FALSE(grid_satisfies_p1(build_grid_partition(8, 2), u));
  EXPECT_TRUE(grid_satisfies_p1(build_grid_partition(64, 2), u));
  // differences inside a g = 64 cell
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1.0 / 64, 1.0 / 64);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(u.contains({d(rng), d(rng)}));
}

TEST(Lemma, SinglePoint) {
  const auto g = FiniteGroupModel::cyclic(5);
  const auto p = lemma_partition(g, {0}, {0, 1, 2, 3, 4});
  ASSERT_EQ(p.blocks.size(), 1u);
  EXPECT_EQ(p.blocks[0].size(), 5u);
}

TEST(Lemma, CyclicEightWithRadiusOne) {
  const auto g = FiniteGroupModel::cyclic(8);
  const std::vector<Index> v{7, 0, 1};
  const auto p = lemma_partition(g, {0, 1, 2, 3, 4, 5, 6, 7}, v);
  EXPECT_TRUE(is_disjoint_cover(g, p));
  for (const auto& b : p.blocks) EXPECT_LE(b.size(), 3u);
  EXPECT_EQ(p.blocks[0], (std::vector<Index>{0, 1, 7}));
  EXPECT_EQ(square(g, v), (std::vector<Index>{0, 1, 2, 6, 7}));
  EXPECT_FALSE(p1_violation(g, p, v));
}

TEST(Lemma, AlwaysPartitionsAndSatisfiesP1) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {6, 8, 12, 30}) {
    const auto g = FiniteGroupModel::cyclic(n);
    for (std::size_t r = 0; r < 4; ++r) {
      std::vector<Index> v{0};
      for (Index k = 1; k <= r; ++k) {
        v.push_back(k % n);
        v.push_back((n - k) % n);
      }
      std::vector<Index> pts(n);
      std::iota(pts.begin(), pts.end(), 0);
      for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(pts.begin(), pts.end(), rng);
        const auto p = lemma_partition(g, pts, v);
        ASSERT_TRUE(is_disjoint_cover(g, p));
        ASSERT_FALSE(p1_violation(g, p, v));
      }
    }
  }
}

TEST(Lemma, Errors) {
  const auto g = FiniteGroupModel::cyclic(8);
  try {
    lemma_partition(g, {0, 4}, {7, 0, 1});
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("{2, 6}"), std::string::npos) << e.what();
  }
  EXPECT_THROW(lemma_partition(g, {0}, {0, 1}), StructureError);
  EXPECT_THROW(lemma_partition(g, {0}, {1, 7}), StructureError);
}

TEST(Theta, Parsing) {
  const auto golden = parse_theta("golden");
  EXPECT_DOUBLE_EQ(golden.value(), 0.6180339887498949);
  EXPECT_FALSE(golden.is_rational());
  const auto r = parse_theta("6/16");
  EXPECT_TRUE(r.is_rational());
  EXPECT_EQ(r.p(), 3);
  EXPECT_EQ(r.q(), 8);
  EXPECT_EQ(r.label(), "3/8");
  EXPECT_DOUBLE_EQ(parse_theta("0.25").value(), 0.25);
  EXPECT_FALSE(parse_theta("0.25").is_rational());
  for (const char* bad : {"", "x", "1/0", "1/", "0.3z", "gold"}) EXPECT_THROW(parse_theta(bad), StructureError) << bad;
}

TEST(Theta, Convergents) {
  const auto golden = Theta::golden();
  const auto& c = golden.convergents();
  ASSERT_GT(c.size(), 20u);
  for (std::size_t i = 2; i < c.size(); ++i) {
    EXPECT_EQ(c[i].q, c[i - 1].q + c[i - 2].q);
    EXPECT_EQ(c[i].p, c[i - 1].p + c[i - 2].p);
  }
  EXPECT_NEAR(static_cast<double>(c[30].p) / static_cast<double>(c[30].q), golden.value(), 1e-12);
  const auto r = Theta::rational(3, 8).convergents();
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r.back().p, 3);
  EXPECT_EQ(r.back().q, 8);
  const auto pi = Theta::approximate(std::numbers::pi - 3.0).convergents();
  EXPECT_EQ(pi[1].q, 7);
  EXPECT_EQ(pi[2].q, 106);
}

TEST(Theta, ArcMembership) {
  const auto r = Theta::rational(3, 8);
  for (std::int64_t a = -40; a <= 40; ++a) {
    const std::int64_t res = ((3 * a) % 8 + 8) % 8;
    EXPECT_EQ(*r.arc(a, 16), static_cast<std::size_t>(res * 2));
    EXPECT_EQ(*r.arc(a, 5), static_cast<std::size_t>(res * 5 / 8));
  }
  // golden: compare with an extended-precision computation
  const auto golden = Theta::golden();
  const long double t = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  std::size_t decided = 0;
  for (std::int64_t a = -20000; a <= 20000; ++a) {
    const auto k = golden.arc(a, 64);
    if (!k) continue;
    ++decided;
    const long double x = t * static_cast<long double>(a);
    const long double frac = x - std::floor(x);
    ASSERT_EQ(*k, static_cast<std::size_t>(std::floor(frac * 64.0L))) << a;
  }
  EXPECT_GT(decided, 40000u);
}

TEST(Orbit, ThreeDistance) {
  for (const auto& theta : {Theta::golden(), Theta::approximate(std::sqrt(2.0) - 1.0)}) {
    for (std::int64_t w = 1; w <= 300; ++w) {
      const auto gaps = orbit_gaps(theta, w);
      ASSERT_LE(gaps.size(), 3u) << w;
      // the largest gap shrinks to 0 as W grows
      if (w == 300) {
        EXPECT_LT(gaps.back(), 0.01);
      }
    }
  }
  EXPECT_EQ(orbit_gaps(Theta::rational(3, 8), 20), (std::vector<double>{0.125}));
}

TEST(Orbit, MinimalWindow) {
  const auto golden = Theta::golden();
  for (std::size_t g : {2, 8, 16, 64}) {
    const auto w = minimal_window(golden, g);
    ASSERT_TRUE(w);
    EXPECT_TRUE(sample_orbit(golden, build_grid_partition(g, 2), std::max<std::int64_t>(*w, 1)).fully_covered());
    if (*w > 1) {
      EXPECT_FALSE(sample_orbit(golden, build_grid_partition(g, 2), *w - 1).fully_covered());
    }
    // gaps below 1/g are sufficient for coverage
    EXPECT_LE(orbit_gaps(golden, 4 * static_cast<std::int64_t>(g)).back(), 1.0 / static_cast<double>(g));
  }
  EXPECT_FALSE(minimal_window(Theta::rational(3, 8), 16));
  EXPECT_EQ(*minimal_window(Theta::rational(3, 8), 8), 4);
}

TEST(Sampling, RationalHalfLeavesMostCellsEmpty) {
  const auto s = sample_orbit(Theta::rational(1, 2), build_grid_partition(8, 2), 50);
  EXPECT_GE(s.uncovered_count(), 60u);
  EXPECT_EQ(s.uncovered_cells().size(), s.uncovered_count());
  EXPECT_TRUE(s.exact_membership());
  std::size_t covered = 0;
  for (std::size_t c = 0; c < 64; ++c) covered += s.sample(c).has_value();
  EXPECT_LE(covered, 4u);
}

TEST(Sampling, GoldenCoversAndSamplesAreMinimal) {
  const auto golden = Theta::golden();
  const auto part = build_grid_partition(8, 2);
  const auto s = sample_orbit(golden, part, 50);
  EXPECT_TRUE(s.fully_covered());
  EXPECT_EQ(*s.sample(0), (std::vector<std::int64_t>{0, 0}));
  const long double t = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  auto arc_of = [&](std::int64_t a) {
    const long double x = t * static_cast<long double>(a);
    return static_cast<std::size_t>(std::floor((x - std::floor(x)) * 8.0L));
  };
  for (std::size_t c = 0; c < part.cell_count(); ++c) {
    const auto smp = *s.sample(c);
    const auto k = part.coords(c);
    for (std::size_t j = 0; j < 2; ++j) {
      ASSERT_EQ(arc_of(smp[j]), k[j]);
      // nothing of smaller |a| (or equal |a| and smaller a) lands in that arc
      for (std::int64_t b = -std::abs(smp[j]); b <= std::abs(smp[j]); ++b)
        if (std::abs(b) < std::abs(smp[j]) || b < smp[j]) {
          ASSERT_NE(arc_of(b), k[j]) << b;
        }
    }
  }
}

TEST(Certificate, TrivialCases) {
  const auto golden = Theta::golden();
  const auto s = sample_orbit(golden, build_grid_partition(8, 2), 50);
  EXPECT_EQ(certify_epsilon(s, {0}).eps, 0.0);
  const auto one = sample_orbit(golden, build_grid_partition(1, 2), 1);
  EXPECT_EQ(*one.sample(0), (std::vector<std::int64_t>{0, 0}));
  EXPECT_DOUBLE_EQ(certify_epsilon(one, {1}).eps, 2.0);
  const auto half = sample_orbit(Theta::rational(1, 2), build_grid_partition(8, 2), 50);
  EXPECT_THROW(certify_epsilon(half, {1}), PreconditionError);
}

TEST(Certificate, SupChordMatchesScan) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-3.0, 3.0), len(0.0, 0.7);
  for (int i = 0; i < 2000; ++i) {
    const double t0 = d(rng), t1 = t0 + len(rng);
    double scan = 0.0;
    for (int m = 0; m <= 20000; ++m) scan = std::max(scan, 2.0 * std::abs(std::sin(std::numbers::pi * (t0 + (t1 - t0) * m / 20000.0))));
    ASSERT_NEAR(sup_chord(t0, t1), scan, 1e-6);
    ASSERT_GE(sup_chord(t0, t1) + 1e-15, scan);
  }
}

TEST(Certificate, GoldenAtResolution64) {
  const auto golden = Theta::golden();
  const auto k = symmetric_window(5);
  const auto s = sample_orbit(golden, build_grid_partition(64, 2), 10000);
  ASSERT_TRUE(s.fully_covered());
  const auto c = certify_epsilon(s, k);
  const double crude = 2.0 * std::numbers::pi * 5.0 * std::sqrt(2.0) / 64.0;
  EXPECT_NEAR(c.eps_bound, crude, 1e-15);
  EXPECT_LE(c.eps, crude);
  EXPECT_LE(c.eps, 0.70);
  EXPECT_LE(c.delta_actual, c.delta + 1e-15);
  const double brute = brute::eps_sup(s, k, 1000000);
  EXPECT_NEAR(c.eps, brute, 1e-9);
  EXPECT_GE(c.eps + 1e-12, brute);
}

TEST(Certificate, ExactBelowCrudePerArcAndFrequency) {
  const auto golden = Theta::golden();
  for (std::size_t g : {4, 8, 16, 32}) {
    const auto s = sample_orbit(golden, build_grid_partition(g, 2), 100000);
    const double w = 1.0 / static_cast<double>(g);
    for (std::size_t kk = 0; kk < g; ++kk) {
      const double alpha = golden.phase(*s.axis()[kk]);
      for (std::int64_t a = -7; a <= 7; ++a) {
        const double exact = arc_error(static_cast<double>(kk) * w, w, alpha, {a});
        EXPECT_LE(exact, 2.0 * std::numbers::pi * std::abs(static_cast<double>(a)) * std::sqrt(2.0) / static_cast<double>(g) + 1e-15);
        EXPECT_LE(exact, 2.0);
      }
    }
  }
}

TEST(Certificate, SoundOnRandomCharacters) {
  const auto golden = Theta::golden();
  const auto k = symmetric_window(5);
  const auto part = build_grid_partition(16, 2);
  const auto s = sample_orbit(golden, part, 1000);
  const auto c = certify_epsilon(s, k);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const std::vector<double> chi{u(rng), u(rng)};
    const std::size_t cell = part.locate(chi);
    const auto smp = *s.sample(cell);
    for (std::size_t j = 0; j < 2; ++j)
      for (auto a : k) {
        const double err = std::abs(std::polar(1.0, 2 * std::numbers::pi * chi[j] * static_cast<double>(a)) -
                                    std::polar(1.0, 2 * std::numbers::pi * golden.phase(smp[j]) * static_cast<double>(a)));
        ASSERT_LE(err, c.cell_eps(part, cell) + 1e-12);
      }
  }
}

TEST(Study, GoldenConverges) {
  const auto rows = convergence_study(Theta::golden(), symmetric_window(5), {8, 16, 32, 64});
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].uncovered_cells, 0u);
    EXPECT_LE(rows[i].eps_exact, rows[i].eps_bound);
    if (i > 0) {
      EXPECT_LT(rows[i].eps_exact, rows[i - 1].eps_exact);
      EXPECT_DOUBLE_EQ(rows[i].eps_bound, rows[i - 1].eps_bound / 2.0);
    }
  }
  EXPECT_LE(rows.back().eps_exact, 0.70);
  const auto csv = study_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "g,W,eps_exact,eps_bound,uncovered_cells");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Study, RationalThetaHasAFloor) {
  const auto rows = convergence_study(Theta::rational(3, 8), symmetric_window(5), {8, 16, 32, 64});
  EXPECT_EQ(rows[0].uncovered_cells, 0u);
  const double floor = 2.0 * std::sin(5.0 * std::numbers::pi / 16.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GT(rows[i].uncovered_cells, 0u);
    EXPECT_GE(rows[i].eps_exact, floor - 1e-12);
    EXPECT_LE(rows[i].eps_exact, rows[i].eps_bound_clamped);
  }
  EXPECT_THROW(convergence_study(Theta::golden(), {1}, {16, 8}), StructureError);
}

TEST(Study, HigherDimensionalTorus) {
  const auto rows = convergence_study(Theta::golden(), symmetric_window(2), {4, 8}, {.dims = 4, .window = std::nullopt});
  EXPECT_EQ(rows[0].uncovered_cells, 0u);
  EXPECT_DOUBLE_EQ(rows[0].eps_bound, 2.0 * std::numbers::pi * 2.0 * 2.0 / 4.0);
  EXPECT_LE(rows[1].eps_exact, rows[0].eps_exact);
}
