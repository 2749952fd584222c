#include <gtest/gtest.h>

#include "ccr/catalog.hpp"
#include "ccr/pairs.hpp"
#include "support/oracles.hpp"

using namespace ccr;

namespace {

Character chi(std::uint64_t n, std::uint64_t e) { return Character::on_ring(FiniteRing::zmod(n), {e}); }

double dense_dist(const Operator& a, const ComplexMatrix& b) { return operator_norm(a.dense() - b); }

}  // namespace

TEST(Schrodinger, PauliMatricesOverZ2) {
  const auto p = schrodinger(chi(2, 1), 1);
  ComplexMatrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  EXPECT_EQ(p.U(1).dense(), x);
  EXPECT_EQ(p.V(1).dense(), z);
  EXPECT_EQ(p.U(0).dense(), ComplexMatrix::Identity(2, 2));
  EXPECT_EQ(p.V(0).dense(), ComplexMatrix::Identity(2, 2));
  EXPECT_EQ(verify_ccr(p), 0.0);
}

TEST(Schrodinger, ClockAndShiftOverZ3) {
  const auto p = schrodinger(chi(3, 1), 1);
  const Complex w = std::polar(1.0, 2 * std::numbers::pi / 3);
  ComplexMatrix clock = ComplexMatrix::Zero(3, 3);
  clock.diagonal() << 1.0, w, w * w;
  EXPECT_LT(dense_dist(p.V(1), clock), 1e-15);
  ComplexMatrix shift = ComplexMatrix::Zero(3, 3);
  shift(0, 1) = shift(1, 2) = shift(2, 0) = 1.0;
  EXPECT_EQ(p.U(1).dense(), shift);
}

TEST(Schrodinger, MatchesFormulasEverywhere) {
  for (const auto& r : standard_rings()) {
    for (std::size_t d : {1, 2}) {
      if (FreeModule(r, d).size() > 64) continue;
      const auto lambda = dual_group(r).back();
      const auto p = schrodinger(lambda, d);
      for (Index a = 0; a < p.group_size(); ++a) {
        ASSERT_LT(dense_dist(p.U(a), oracle::schrodinger_u(lambda, d, a)), 1e-12);
        ASSERT_LT(dense_dist(p.V(a), oracle::schrodinger_v(lambda, d, a)), 1e-12);
      }
    }
  }
}

TEST(Schrodinger, DisplacementOperatorsAreOrthogonalUnderIsom) {
  for (const auto& r : standard_rings()) {
    for (const auto& lambda : characters_where(r, [](const ConditionReport& c) { return c.iso; })) {
      const auto p = schrodinger(lambda, 1);
      for (Index a = 0; a < p.group_size(); ++a)
        for (Index b = 0; b < p.group_size(); ++b) {
          const Complex t = trace_product(p.U(a), p.V(b));
          if (a == 0 && b == 0)
            EXPECT_NEAR(t.real(), static_cast<double>(p.dim()), 1e-12);
          else
            ASSERT_LT(std::abs(t), 1e-12) << r.name() << " a=" << a << " b=" << b;
          // U(a) V(b) is monomial: one nonzero per row
          EXPECT_TRUE((p.U(a) * p.V(b)).is_monomial());
        }
    }
  }
}

TEST(Regular, SmallCases) {
  const auto p = regular(chi(2, 1), 1);
  EXPECT_EQ(p.dim(), 4u);
  EXPECT_EQ(verify_ccr(p, CheckScope::exhaustive), 0.0);
  EXPECT_EQ(p.U(0).dense(), ComplexMatrix::Identity(4, 4));

  const auto q = regular(chi(3, 1), 1);
  EXPECT_EQ(q.dim(), 9u);
  for (Index a = 0; a < 3; ++a)
    for (Index b = 0; b < 3; ++b) {
      const Complex t = trace_product(q.U(a), q.V(b));
      if (a == 0 && b == 0)
        EXPECT_NEAR(t.real(), 9.0, 1e-12);
      else
        EXPECT_LT(std::abs(t), 1e-12);
    }
}

TEST(Regular, MatchesDefinition) {
  const auto lambda = chi(4, 1);
  const auto p = regular(lambda, 1);
  const FiniteRing& r = lambda.ring();
  for (Index a = 0; a < 4; ++a) {
    ComplexMatrix u = ComplexMatrix::Zero(16, 16), v = ComplexMatrix::Zero(16, 16);
    for (Index y = 0; y < 4; ++y)
      for (Index x = 0; x < 4; ++x) {
        u(static_cast<Eigen::Index>(x + 4 * y), static_cast<Eigen::Index>(r.add(x, a) + 4 * y)) = 1.0;
        v(static_cast<Eigen::Index>(x + 4 * y), static_cast<Eigen::Index>(x + 4 * r.add(y, a))) =
            oracle::char_value(lambda, r.mul(x, a));
      }
    EXPECT_LT(dense_dist(p.U(a), u), 1e-12);
    EXPECT_LT(dense_dist(p.V(a), v), 1e-12);
  }
}

TEST(Pairs, CanonicalConstructionsAreExactOverStandardRings) {
  for (const auto& r : standard_rings()) {
    const auto faithful = characters_where(r, [](const ConditionReport& c) { return c.faith; });
    for (std::size_t d : {1, 2}) {
      if (FreeModule(r, d).size() > 64) continue;
      for (const auto& lambda : faithful) {
        SCOPED_TRACE(r.name() + " d=" + std::to_string(d) + " lambda=" + lambda.str());
        const auto s = schrodinger(lambda, d);
        const auto g = regular(lambda, d);
        EXPECT_LE(verify_ccr(s, CheckScope::exhaustive), 1e-12);
        EXPECT_LE(representation_residual(s, CheckScope::exhaustive), 1e-12);
        EXPECT_LE(verify_ccr(g), 1e-12);
        EXPECT_LE(representation_residual(g), 1e-12);
      }
    }
  }
}

TEST(Pairs, ScansDetectABrokenTable) {
  const auto lambda = Character::on_ring(FiniteRing::zmod(6), {1});
  auto p = schrodinger(lambda, 1);
  // break CCR at one non-generator element: V(3) replaced by the identity
  auto v = p.v_table();
  v[3] = Operator::identity(p.dim());
  const CCRPair broken(lambda, 1, p.u_table(), v);
  EXPECT_GT(verify_ccr(broken, CheckScope::exhaustive), 1.0);
  EXPECT_GT(verify_ccr(broken, CheckScope::generators), 1.0);
  EXPECT_GT(representation_residual(broken, CheckScope::generators), 1.0);
}

TEST(Pairs, VReplacedByIdentity) {
  const auto lambda = chi(2, 1);
  const auto p = schrodinger(lambda, 1);
  const CCRPair q(lambda, 1, p.u_table(), {Operator::identity(2), Operator::identity(2)});
  // |lambda(1) - 1| ||U|| = 2
  EXPECT_NEAR(verify_ccr(q), 2.0, 1e-15);

  const auto trivial = Character::trivial(FiniteRing::zmod(2));
  const CCRPair id(trivial, 1, {Operator::identity(3), Operator::identity(3)},
                   {Operator::identity(3), Operator::identity(3)});
  EXPECT_EQ(verify_ccr(id), 0.0);
}

TEST(Pairs, InflateAndDirectSum) {
  const auto p = schrodinger(chi(3, 1), 1);
  EXPECT_EQ(inflate(p, 1).dim(), p.dim());
  EXPECT_EQ(inflate(p, 1).U(1).dense(), p.U(1).dense());
  const auto q = inflate(p, 3);
  EXPECT_EQ(q.dim(), 9u);
  EXPECT_LE(verify_ccr(q), 1e-15);
  EXPECT_LE(representation_residual(q), 1e-12);
  // block index copy * N + h
  EXPECT_EQ(q.U(1).entry(3 + 0, 3 + 1), Complex(1.0, 0.0));
  const auto s = direct_sum(p, q);
  EXPECT_EQ(s.dim(), 12u);
  EXPECT_LE(verify_ccr(s), 1e-15);
  EXPECT_THROW(direct_sum(p, schrodinger(chi(3, 2), 1)), StructureError);
  EXPECT_THROW(inflate(p, 0), StructureError);
}

TEST(Pairs, ConjugationPreservesResiduals) {
  const auto p = inflate(schrodinger(chi(5, 2), 1), 2);
  const auto w = haar_unitary(p.dim(), 7);
  const auto q = conjugate(p, w);
  EXPECT_NEAR(verify_ccr(q), verify_ccr(p), 1e-12);
  EXPECT_LE(representation_residual(q), 1e-10);
  EXPECT_THROW(conjugate(p, ComplexMatrix::Identity(3, 3)), StructureError);
  EXPECT_THROW(conjugate(p, 2.0 * ComplexMatrix::Identity(10, 10)), PreconditionError);
}

TEST(Pairs, RandomInstanceIsReproducible) {
  const auto lambda = chi(3, 1);
  const auto a = random_instance(lambda, 1, 2, 42);
  const auto b = random_instance(lambda, 1, 2, 42);
  const auto c = random_instance(lambda, 1, 2, 43);
  ASSERT_EQ(a.dim(), 6u);
  for (Index g = 0; g < 3; ++g) {
    EXPECT_EQ(a.U(g).dense(), b.U(g).dense());
    EXPECT_EQ(a.V(g).dense(), b.V(g).dense());
  }
  EXPECT_NE(a.U(1).dense(), c.U(1).dense());
  EXPECT_LE(verify_ccr(a, CheckScope::exhaustive), 1e-10);
  EXPECT_LE(representation_residual(a, CheckScope::exhaustive), 1e-10);
  EXPECT_FALSE(a.is_monomial());
}

TEST(Pairs, HaarUnitaryIsUnitary) {
  for (std::size_t n : {1, 5, 40}) EXPECT_LE(unitarity_defect(Operator(haar_unitary(n, n))), 1e-13);
}

TEST(Pairs, TildeAndBar) {
  for (auto lambda : {chi(2, 1), chi(3, 1), chi(3, 2)}) {
    const auto p = schrodinger(lambda, 1);
    const auto t = tilde(p);
    const auto b = bar(p);
    const std::size_t s = p.group_size() * p.group_size();
    EXPECT_EQ(t.dim(), s * p.dim());
    EXPECT_EQ(b.dim(), s * p.dim());
    EXPECT_LE(verify_ccr(t, CheckScope::exhaustive), 1e-12);
    EXPECT_LE(verify_ccr(b, CheckScope::exhaustive), 1e-12);
    EXPECT_LE(representation_residual(t), 1e-12);
    EXPECT_LE(representation_residual(b), 1e-12);
    EXPECT_EQ(distance(t.U(0), Operator::identity(t.dim())), 0.0);
  }
  // dense input goes through the same block construction
  const auto q = random_instance(chi(2, 1), 1, 1, 3);
  EXPECT_LE(verify_ccr(tilde(q)), 1e-10);
  EXPECT_LE(verify_ccr(bar(q)), 1e-10);
}

TEST(Pairs, TildeMatchesBlockDefinition) {
  const auto lambda = chi(3, 1);
  const auto p = schrodinger(lambda, 1);
  const auto t = tilde(p);
  const std::size_t n = 3, N = 3;
  for (Index a = 0; a < 3; ++a) {
    ComplexMatrix expect = ComplexMatrix::Zero(27, 27);
    const ComplexMatrix u = p.U(a).dense();
    for (Index y = 0; y < n; ++y)
      for (Index x = 0; x < n; ++x) {
        const auto row = static_cast<Eigen::Index>((x + n * y) * N);
        const auto col = static_cast<Eigen::Index>((lambda.ring().add(x, a) + n * y) * N);
        expect.block(row, col, 3, 3) = u;
      }
    EXPECT_EQ(t.U(a).dense(), expect);
  }
}

TEST(Pairs, Caps) {
  const auto big = Character::on_ring(FiniteRing::zmod(8), {1});
  EXPECT_NO_THROW(regular(big, 2));
  EXPECT_THROW(regular(Character::on_ring(FiniteRing::zmod(9), {1}), 2), ResourceError);
  EXPECT_THROW(tilde(schrodinger(big, 2)), ResourceError);
}
