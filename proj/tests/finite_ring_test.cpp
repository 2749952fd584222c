#include <gtest/gtest.h>

#include <set>

#include "ccr/catalog.hpp"
#include "ccr/finite_ring.hpp"

using namespace ccr;

namespace {

// Index of an n x n matrix over F_2 / Z/m given row-major entries.
Index matrix_index(const FiniteRing& ring, std::vector<std::vector<Index>> rows) {
  Index x = 0, stride = 1;
  for (const auto& row : rows)
    for (Index e : row) {
      x += e * stride;
      stride *= ring.base().order();
    }
  return x;
}

std::vector<FiniteRing> small_rings() {
  auto rings = standard_rings();
  rings.push_back(FiniteRing::product({FiniteRing::prime_field(2), FiniteRing::prime_field(2)}));
  rings.push_back(FiniteRing::matrix(2, FiniteRing::zmod(2)));
  rings.push_back(FiniteRing::product({FiniteRing::zmod(4), FiniteRing::prime_field(3), FiniteRing::zmod(2)}));
  return rings;
}

}  // namespace

TEST(FiniteRing, ModularArithmetic) {
  const auto r = FiniteRing::zmod(4);
  EXPECT_EQ(r.add(3, 2), 1u);
  EXPECT_EQ(r.mul(3, 3), 1u);
  EXPECT_EQ(r.neg(1), 3u);
  EXPECT_EQ(r.sub(0, 1), 3u);
  for (Index x : r.enumerate()) EXPECT_EQ(r.add(x, r.zero()), x);
}

TEST(FiniteRing, MatrixProductOverF2) {
  const auto m = FiniteRing::matrix(2, FiniteRing::prime_field(2));
  const Index a = matrix_index(m, {{1, 1}, {0, 1}});
  const Index b = matrix_index(m, {{1, 0}, {1, 1}});
  EXPECT_EQ(m.mul(a, b), matrix_index(m, {{0, 1}, {1, 1}}));
  EXPECT_EQ(m.mul(b, a), matrix_index(m, {{1, 1}, {1, 0}}));
  EXPECT_EQ(m.one(), matrix_index(m, {{1, 0}, {0, 1}}));
  EXPECT_FALSE(m.is_commutative());
}

TEST(FiniteRing, Enumerate) {
  EXPECT_EQ(FiniteRing::zmod(3).enumerate(), (std::vector<Index>{0, 1, 2}));
  EXPECT_EQ(FiniteRing::product({FiniteRing::prime_field(2), FiniteRing::prime_field(2)}).enumerate().size(), 4u);
  EXPECT_EQ(FiniteRing::matrix(2, FiniteRing::prime_field(2)).enumerate().size(), 16u);
  const auto big = FiniteRing::matrix(3, FiniteRing::prime_field(2));
  EXPECT_EQ(big.order(), 512u);
  EXPECT_THROW(big.enumerate(100), ResourceError);
}

TEST(FiniteRing, ConstructorsValidate) {
  EXPECT_THROW(FiniteRing::zmod(1), StructureError);
  EXPECT_THROW(FiniteRing::prime_field(6), StructureError);
  EXPECT_THROW(FiniteRing::matrix(2, FiniteRing::matrix(2, FiniteRing::prime_field(2))), StructureError);
  EXPECT_THROW(FiniteRing::product({}), StructureError);
}

TEST(FiniteRing, RingAxiomsExhaustive) {
  for (const auto& r : small_rings()) {
    if (r.order() > 64) continue;
    SCOPED_TRACE(r.name());
    EXPECT_NE(r.zero(), r.one());
    const auto e = r.enumerate();
    for (Index x : e) {
      EXPECT_EQ(r.add(x, r.neg(x)), r.zero());
      EXPECT_EQ(r.mul(x, r.one()), x);
      EXPECT_EQ(r.mul(r.one(), x), x);
      for (Index y : e) {
        ASSERT_EQ(r.add(x, y), r.add(y, x));
        for (Index z : e) {
          ASSERT_EQ(r.add(r.add(x, y), z), r.add(x, r.add(y, z)));
          ASSERT_EQ(r.mul(r.mul(x, y), z), r.mul(x, r.mul(y, z)));
          ASSERT_EQ(r.mul(x, r.add(y, z)), r.add(r.mul(x, y), r.mul(x, z)));
          ASSERT_EQ(r.mul(r.add(x, y), z), r.add(r.mul(x, z), r.mul(y, z)));
        }
      }
    }
  }
}

TEST(FiniteRing, AdditiveFactorsAreAnIsomorphism) {
  for (const auto& r : small_rings()) {
    SCOPED_TRACE(r.name());
    const auto& f = r.additive_factors();
    std::size_t prod = 1;
    for (auto m : f) prod *= m;
    EXPECT_EQ(prod, r.order());
    for (std::size_t j = 0; j < f.size(); ++j) {
      // basis element has additive order exactly m_j
      Index x = r.basis(j);
      std::uint64_t order = 1;
      while (x != r.zero()) {
        x = r.add(x, r.basis(j));
        ++order;
      }
      EXPECT_EQ(order, f[j]);
    }
    // sum_j c_j e_j hits every element exactly once and matches the encoding
    std::set<Index> seen;
    for (Index x : r.enumerate()) {
      const auto c = r.coordinates(x);
      Index y = r.zero();
      for (std::size_t j = 0; j < c.size(); ++j)
        for (std::uint64_t k = 0; k < c[j]; ++k) y = r.add(y, r.basis(j));
      EXPECT_EQ(y, x);
      EXPECT_EQ(r.from_coordinates(c), x);
      seen.insert(y);
    }
    EXPECT_EQ(seen.size(), r.order());
  }
}

TEST(FiniteRing, ConstructionsCompose) {
  const auto base = FiniteRing::zmod(3);
  const auto m = FiniteRing::matrix(2, base);
  EXPECT_EQ(m.order(), 81u);
  EXPECT_EQ(m.additive_factors(), (std::vector<std::uint64_t>(4, 3)));
  const auto p = FiniteRing::product({FiniteRing::zmod(4), FiniteRing::matrix(2, FiniteRing::prime_field(2))});
  std::vector<std::uint64_t> expect{4, 2, 2, 2, 2};
  EXPECT_EQ(p.additive_factors(), expect);
  EXPECT_EQ(p.order(), 64u);
}

TEST(FiniteRing, ElementWrapperRejectsMixedRings) {
  const auto r4 = FiniteRing::zmod(4);
  const auto r5 = FiniteRing::zmod(5);
  Element a(r4, 3), b(r4, 2);
  EXPECT_EQ((a + b).index(), 1u);
  EXPECT_EQ((a * b).index(), 2u);
  EXPECT_EQ((-a).index(), 1u);
  EXPECT_THROW(a + Element(r5, 1), StructureError);
  EXPECT_THROW(Element(r4, 4), StructureError);
  // structurally equal rings built separately are the same ring
  EXPECT_NO_THROW(a + Element(FiniteRing::zmod(4), 1));
}

TEST(FiniteRing, Dot) {
  const auto r5 = FiniteRing::zmod(5);
  EXPECT_EQ(dot(RingVector(r5, {2}), RingVector(r5, {3})).index(), 1u);
  const auto r4 = FiniteRing::zmod(4);
  EXPECT_EQ(dot(RingVector(r4, {1, 2}), RingVector(r4, {2, 3})).index(), 0u);
  EXPECT_THROW(dot(RingVector(r4, {1, 2}), RingVector(r4, {1})), StructureError);
  EXPECT_THROW(dot(RingVector(r4, {1}), RingVector(r5, {1})), StructureError);
}

TEST(FiniteRing, DotUsesLeftFactorFromA) {
  const auto m = FiniteRing::matrix(2, FiniteRing::prime_field(2));
  bool witness = false;
  for (Index a : m.enumerate())
    for (Index b : m.enumerate()) {
      const auto ab = dot(RingVector(m, {a}), RingVector(m, {b})).index();
      EXPECT_EQ(ab, m.mul(a, b));
      if (ab != m.mul(b, a)) witness = true;
    }
  EXPECT_TRUE(witness);
}

TEST(FiniteRing, FreeModuleMatchesRingVectors) {
  const auto r = FiniteRing::zmod(3);
  const FreeModule mod(r, 2);
  EXPECT_EQ(mod.size(), 9u);
  for (Index u = 0; u < mod.size(); ++u)
    for (Index v = 0; v < mod.size(); ++v) {
      const auto a = mod.vector(u), b = mod.vector(v);
      EXPECT_EQ(mod.add(u, v), mod.flat(a + b));
      EXPECT_EQ(mod.dot(u, v), dot(a, b).index());
    }
  EXPECT_EQ(mod.additive_generators(), (std::vector<Index>{1, 3}));
}

TEST(FiniteRing, SpecRoundTrip) {
  for (const auto& r : small_rings()) {
    const auto back = parse_ring_spec(r.spec());
    EXPECT_TRUE(back == r) << r.spec();
    EXPECT_EQ(back.name(), r.name());
  }
  EXPECT_EQ(parse_ring_spec("mat:2(fp:2)").order(), 16u);
  EXPECT_EQ(parse_ring_spec("prod(zmod:2,prod(zmod:3,fp:5))").order(), 30u);
  EXPECT_THROW(parse_ring_spec("zmod:"), StructureError);
  EXPECT_THROW(parse_ring_spec("foo:3"), StructureError);
  EXPECT_THROW(parse_ring_spec("mat:2(fp:2"), StructureError);
}
