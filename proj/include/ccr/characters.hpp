#pragma once

// Characters of (R^d, +) with exact rational phases, the map nabla and the
// conditions (Sym), (Isom), (Faith).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccr/finite_ring.hpp"
#include "ccr/linalg.hpp"

namespace ccr {

/// An element of Q/Z, kept as a reduced fraction num/den with 0 <= num < den.
class Phase {
 public:
  Phase() = default;
  Phase(std::int64_t num, std::uint64_t den) {
    if (den == 0) throw StructureError("phase with zero denominator");
    const auto d = static_cast<std::int64_t>(den);
    num %= d;
    if (num < 0) num += d;
    const auto g = std::gcd(static_cast<std::uint64_t>(num), den);
    num_ = static_cast<std::uint64_t>(num) / g;
    den_ = den / g;
  }

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }

  friend Phase operator+(Phase a, Phase b) {
    const auto l = std::lcm(a.den_, b.den_);
    return Phase(static_cast<std::int64_t>(a.num_ * (l / a.den_) + b.num_ * (l / b.den_)), l);
  }
  Phase operator-() const { return Phase(-static_cast<std::int64_t>(num_), den_); }
  friend Phase operator-(Phase a, Phase b) { return a + (-b); }
  friend bool operator==(Phase a, Phase b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  /// exp(2 pi i q); exact for q in {0, 1/4, 1/2, 3/4}.
  Complex value() const { return unit_root(num_, den_); }

  double as_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  static Complex unit_root(std::uint64_t num, std::uint64_t den) {
    num %= den;
    if (num == 0) return {1.0, 0.0};
    if (4 * num == den) return {0.0, 1.0};
    if (2 * num == den) return {-1.0, 0.0};
    if (4 * num == 3 * den) return {0.0, -1.0};
    // symmetric reduction to (-1/2, 1/2] keeps the argument small
    const double q = 2 * num > den ? -static_cast<double>(den - num) / static_cast<double>(den)
                                   : static_cast<double>(num) / static_cast<double>(den);
    const double t = 2.0 * std::numbers::pi * q;
    return {std::cos(t), std::sin(t)};
  }

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

/// chi(x) = exp(2 pi i sum_j e_j x_j / m_j) on (R^d, +), where x_j run over
/// the additive coordinates of x's entries, slot-major.
class Character {
 public:
  Character(FiniteRing ring, std::size_t degree, std::vector<std::uint64_t> exponents)
      : module_(std::move(ring), degree), exponents_(std::move(exponents)) {
    const auto& f = module_.ring().additive_factors();
    if (exponents_.size() != f.size() * degree)
      throw StructureError("character needs " + std::to_string(f.size() * degree) + " exponents, got " +
                           std::to_string(exponents_.size()));
    denominator_ = 1;
    for (std::size_t j = 0; j < exponents_.size(); ++j) {
      const auto m = f[j % f.size()];
      if (exponents_[j] >= m)
        throw StructureError("exponent " + std::to_string(exponents_[j]) + " out of range for factor Z/" +
                             std::to_string(m));
      if (exponents_[j] != 0) denominator_ = std::lcm(denominator_, m);
    }
    build_tables();
  }

  /// A character of (R, +).
  static Character on_ring(FiniteRing ring, std::vector<std::uint64_t> exponents) {
    return Character(std::move(ring), 1, std::move(exponents));
  }

  static Character trivial(const FiniteRing& ring, std::size_t degree = 1) {
    return Character(ring, degree, std::vector<std::uint64_t>(ring.additive_factors().size() * degree, 0));
  }

  const FiniteRing& ring() const { return module_.ring(); }
  std::size_t degree() const { return module_.degree(); }
  const FreeModule& domain() const { return module_; }
  std::size_t group_order() const { return module_.size(); }
  const std::vector<std::uint64_t>& exponents() const { return exponents_; }
  std::uint64_t denominator() const { return denominator_; }

  bool is_trivial() const {
    return std::all_of(exponents_.begin(), exponents_.end(), [](auto e) { return e == 0; });
  }

  /// Phase numerator over denominator() at flat index x of R^d.
  std::uint64_t numerator(Index x) const {
    if (!tables_->numerators.empty()) return tables_->numerators[x];
    return raw_numerator(x);
  }

  Phase operator()(Index x) const { return Phase(static_cast<std::int64_t>(numerator(x)), denominator_); }

  Phase eval(const RingVector& v) const {
    if (!(v.ring() == ring()) || v.size() != degree())
      throw StructureError("vector is not in the character's group");
    return (*this)(module_.flat(v));
  }

  /// Complex value at flat index x.
  Complex value(Index x) const {
    if (!tables_->values.empty()) return tables_->values[x];
    return Phase::unit_root(raw_numerator(x), denominator_);
  }

  friend bool operator==(const Character& a, const Character& b) {
    return a.module_.ring() == b.module_.ring() && a.degree() == b.degree() && a.exponents_ == b.exponents_;
  }

  friend Character operator*(const Character& a, const Character& b) {
    if (!(a.ring() == b.ring()) || a.degree() != b.degree()) throw StructureError("characters on different groups");
    const auto& f = a.ring().additive_factors();
    std::vector<std::uint64_t> e(a.exponents_.size());
    for (std::size_t j = 0; j < e.size(); ++j) e[j] = (a.exponents_[j] + b.exponents_[j]) % f[j % f.size()];
    return Character(a.ring(), a.degree(), std::move(e));
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t j = 0; j < exponents_.size(); ++j) s += (j ? "," : "") + std::to_string(exponents_[j]);
    return s + "]";
  }

 private:
  static constexpr std::size_t kTableLimit = 4096;

  struct Tables {
    std::vector<std::uint64_t> numerators;
    std::vector<Complex> values;
  };

  std::uint64_t raw_numerator(Index x) const {
    const auto& f = ring().additive_factors();
    const std::size_t q = ring().order();
    std::uint64_t acc = 0;
    std::size_t j = 0;
    for (std::size_t k = 0; k < degree(); ++k) {
      Index r = x % q;
      x /= q;
      for (auto m : f) {
        const std::uint64_t c = r % m;
        r /= m;
        if (exponents_[j] != 0) acc = (acc + (exponents_[j] * c % m) * (denominator_ / m)) % denominator_;
        ++j;
      }
    }
    return acc;
  }

  void build_tables() {
    auto t = std::make_shared<Tables>();
    if (group_order() <= kTableLimit) {
      t->numerators.resize(group_order());
      t->values.resize(group_order());
      for (Index x = 0; x < group_order(); ++x) {
        t->numerators[x] = raw_numerator(x);
        t->values[x] = Phase::unit_root(t->numerators[x], denominator_);
      }
    }
    tables_ = std::move(t);
  }

  FreeModule module_;
  std::vector<std::uint64_t> exponents_;
  std::uint64_t denominator_ = 1;
  std::shared_ptr<const Tables> tables_;
};

/// (-1)^Tr style character on M_n(Z/m): exponent 1 on every diagonal entry.
inline Character trace_character(const FiniteRing& ring) {
  if (ring.kind() != RingKind::matrix || ring.base().additive_factors().size() != 1)
    throw StructureError("trace character needs a matrix ring over a cyclic base");
  const std::size_t n = ring.matrix_size();
  std::vector<std::uint64_t> e(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1;
  return Character::on_ring(ring, std::move(e));
}

/// The character x -> lambda(x.a) of R^d, read off on the additive basis.
inline Character nabla(const Character& lambda, const RingVector& a) {
  if (lambda.degree() != 1) throw StructureError("nabla expects a character of (R, +)");
  if (!(a.ring() == lambda.ring())) throw StructureError("vector over a different ring than the character");
  const auto& ring = lambda.ring();
  const auto& f = ring.additive_factors();
  std::vector<std::uint64_t> e;
  e.reserve(f.size() * a.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t j = 0; j < f.size(); ++j) {
      const Phase p = lambda(ring.mul(ring.basis(j), a[k]));
      // p has additive order dividing m_j, so p * m_j is an integer
      e.push_back(p.num() * (f[j] / p.den()) % f[j]);
    }
  return Character(ring, a.size(), std::move(e));
}

/// All characters of (R^d, +), exponent vectors in mixed-radix order.
inline std::vector<Character> dual_group(const FiniteRing& ring, std::size_t degree = 1,
                                         std::size_t cap = kDefaultEnumerationCap) {
  const FreeModule module(ring, degree);
  if (module.size() > cap)
    throw ResourceError("dual group of order " + std::to_string(module.size()) + " exceeds cap " + std::to_string(cap));
  const auto& f = ring.additive_factors();
  std::vector<Character> out;
  out.reserve(module.size());
  for (std::size_t idx = 0; idx < module.size(); ++idx) {
    std::vector<std::uint64_t> e(f.size() * degree);
    std::size_t rest = idx;
    for (std::size_t j = 0; j < e.size(); ++j) {
      const auto m = f[j % f.size()];
      e[j] = rest % m;
      rest /= m;
    }
    out.emplace_back(ring, degree, std::move(e));
  }
  return out;
}

struct ConditionReport {
  bool sym = true;
  std::optional<std::pair<Index, Index>> sym_counterexample;  // lambda(ab) != lambda(ba)
  bool iso = true;
  std::vector<Index> iso_kernel;                // ker nabla_lambda when iso fails
  bool faith = true;
  std::optional<Index> faith_generator;         // a whose ideal lies in ker lambda
  std::vector<Index> faith_ideal;
};

/// Two-sided ideal generated by a, as a sorted list of element indices.
/// With a unit, this is the additive span of {r a s}; it is grown as an
/// additive subgroup closed under multiplication by the additive basis.
/// When stop_outside is set, returns early (possibly incomplete) as soon as
/// the ideal leaves the set.
inline std::vector<Index> principal_ideal(const FiniteRing& ring, Index a,
                                          const std::vector<bool>* stop_outside = nullptr) {
  std::vector<bool> member(ring.order(), false);
  std::vector<Index> elements{ring.zero()};
  member[ring.zero()] = true;
  std::vector<Index> generators;
  std::vector<Index> pending{a};
  const std::size_t r = ring.additive_factors().size();
  while (!pending.empty()) {
    const Index x = pending.back();
    pending.pop_back();
    if (member[x]) continue;
    // subgroup + <x>: add multiples of x to every current element
    const std::size_t before = elements.size();
    Index multiple = x;
    while (!member[multiple]) {
      for (std::size_t i = 0; i < before; ++i) {
        const Index y = ring.add(elements[i], multiple);
        if (!member[y]) {
          member[y] = true;
          elements.push_back(y);
          if (stop_outside && !(*stop_outside)[y]) return elements;
        }
      }
      multiple = ring.add(multiple, x);
    }
    generators.push_back(x);
    for (std::size_t j = 0; j < r; ++j) {
      const Index e = ring.basis(j);
      pending.push_back(ring.mul(e, x));
      pending.push_back(ring.mul(x, e));
    }
  }
  std::sort(elements.begin(), elements.end());
  return elements;
}

/// Exact verdicts for (Sym), (Isom), (Faith); first counterexample in index order.
inline ConditionReport check_conditions(const FiniteRing& ring, const Character& lambda,
                                        std::size_t cap = kDefaultEnumerationCap) {
  if (lambda.degree() != 1 || !(lambda.ring() == ring)) throw StructureError("lambda is not a character of (R, +)");
  const auto elems = ring.enumerate(cap);
  ConditionReport rep;

  if (!ring.is_commutative()) {
    for (Index a : elems) {
      for (Index b : elems)
        if (lambda.numerator(ring.mul(a, b)) != lambda.numerator(ring.mul(b, a))) {
          rep.sym = false;
          rep.sym_counterexample = std::pair{a, b};
          break;
        }
      if (!rep.sym) break;
    }
  }

  for (Index a : elems) {
    bool trivial = true;
    for (Index x : elems)
      if (lambda.numerator(ring.mul(x, a)) != 0) {
        trivial = false;
        break;
      }
    if (trivial) rep.iso_kernel.push_back(a);
  }
  rep.iso = rep.iso_kernel.size() == 1;
  if (rep.iso) rep.iso_kernel.clear();

  std::vector<bool> in_kernel(ring.order());
  for (Index x : elems) in_kernel[x] = lambda.numerator(x) == 0;
  for (Index a : elems) {
    if (a == ring.zero() || !in_kernel[a]) continue;
    auto ideal = principal_ideal(ring, a, &in_kernel);
    if (std::all_of(ideal.begin(), ideal.end(), [&](Index x) { return in_kernel[x]; })) {
      rep.faith = false;
      rep.faith_generator = a;
      rep.faith_ideal = std::move(ideal);
      break;
    }
  }
  return rep;
}

/// (Sym) and (Isom) both hold.
inline bool supports_fourier(const ConditionReport& r) { return r.sym && r.iso; }

}  // namespace ccr
