#pragma once

// CCR pairs (U, V) over R^d: U(a) V(b) = lambda(a.b) V(b) U(a).
//
// A pair stores U and V on every element of R^d, flat-indexed as in
// FreeModule. Canonical pairs are monomial; conjugated pairs are dense.

#include <cstdint>
#include <string>
#include <vector>

#include "ccr/block_operator.hpp"
#include "ccr/characters.hpp"
#include "ccr/finite_ring.hpp"
#include "ccr/linalg.hpp"

namespace ccr {

/// Largest carrier dimension for monomial pairs.
inline constexpr std::size_t kMaxPairDim = 4096;
/// Largest carrier dimension for dense pairs, and largest total entry count of a dense table.
inline constexpr std::size_t kMaxDensePairDim = 1024;
inline constexpr std::size_t kMaxDenseTableEntries = std::size_t{1} << 24;

/// Which (a, b) a residual scan visits. Generator scans are complete: a table
/// that satisfies U(a + g) = U(a) U(g) for every a and every additive
/// generator g is a homomorphism, and the CCR phase is bimultiplicative.
enum class CheckScope { exhaustive, generators, automatic };

class CCRPair {
 public:
  CCRPair(Character lambda, std::size_t degree, std::vector<Operator> u, std::vector<Operator> v,
          std::string label = {})
      : lambda_(std::move(lambda)), domain_(lambda_.ring(), degree), u_(std::move(u)), v_(std::move(v)),
        label_(std::move(label)) {
    if (lambda_.degree() != 1) throw StructureError("pair character must be a character of (R, +)");
    if (u_.size() != domain_.size() || v_.size() != domain_.size())
      throw StructureError("pair tables must have |R|^d = " + std::to_string(domain_.size()) + " entries");
    dim_ = u_[0].dim();
    if (dim_ == 0) throw StructureError("pair carrier dimension must be positive");
    for (std::size_t a = 0; a < u_.size(); ++a)
      if (u_[a].dim() != dim_ || v_[a].dim() != dim_) throw StructureError("pair operators have different dimensions");
    monomial_ = true;
    for (std::size_t a = 0; a < u_.size(); ++a) monomial_ = monomial_ && u_[a].is_monomial() && v_[a].is_monomial();
    if (dim_ > (monomial_ ? kMaxPairDim : kMaxDensePairDim))
      throw ResourceError("pair dimension " + std::to_string(dim_) + " exceeds cap");
    if (!monomial_ && domain_.size() * dim_ * dim_ > kMaxDenseTableEntries)
      throw ResourceError("dense pair table too large");
  }

  const Character& lambda() const { return lambda_; }
  const FiniteRing& ring() const { return lambda_.ring(); }
  std::size_t degree() const { return domain_.degree(); }
  const FreeModule& domain() const { return domain_; }
  std::size_t group_size() const { return domain_.size(); }
  std::size_t dim() const { return dim_; }
  bool is_monomial() const { return monomial_; }
  const std::string& label() const { return label_; }

  const Operator& U(Index a) const { return u_.at(a); }
  const Operator& V(Index b) const { return v_.at(b); }
  const std::vector<Operator>& u_table() const { return u_; }
  const std::vector<Operator>& v_table() const { return v_; }

  /// lambda(a.b)
  Complex phase(Index a, Index b) const { return lambda_.value(domain_.dot(a, b)); }

  bool compatible(const CCRPair& other) const {
    return lambda_ == other.lambda_ && degree() == other.degree();
  }

 private:
  Character lambda_;
  FreeModule domain_;
  std::vector<Operator> u_, v_;
  std::string label_;
  std::size_t dim_ = 0;
  bool monomial_ = true;
};

namespace detail {

inline void check_monomial_dim(std::size_t n) {
  if (n > kMaxPairDim) throw ResourceError("pair dimension " + std::to_string(n) + " exceeds cap " + std::to_string(kMaxPairDim));
}

inline bool scan_everything(const CCRPair& p, CheckScope scope) {
  if (scope == CheckScope::automatic) {
    const std::size_t g = p.group_size();
    if (g > 64) return false;
    return p.is_monomial() ? g * g * p.dim() <= (std::size_t{1} << 22) : p.dim() <= 16;
  }
  return scope == CheckScope::exhaustive;
}

inline std::vector<Index> scan_set(const CCRPair& p, CheckScope scope) {
  if (scan_everything(p, scope)) {
    std::vector<Index> all(p.group_size());
    for (Index a = 0; a < all.size(); ++a) all[a] = a;
    return all;
  }
  return p.domain().additive_generators();
}

}  // namespace detail

/// Translation x -> x + a and multiplication by lambda(x.b) on l^2(R^d).
inline CCRPair schrodinger(const Character& lambda, std::size_t d) {
  const FreeModule mod(lambda.ring(), d);
  const std::size_t n = mod.size();
  detail::check_monomial_dim(n);
  std::vector<Operator> u, v;
  u.reserve(n);
  v.reserve(n);
  for (Index a = 0; a < n; ++a) {
    std::vector<std::size_t> cols(n);
    std::vector<Complex> values(n);
    for (Index x = 0; x < n; ++x) cols[x] = mod.add(x, a);
    u.emplace_back(MonomialMatrix(cols, std::vector<Complex>(n, Complex(1.0, 0.0))));
    for (Index x = 0; x < n; ++x) {
      cols[x] = x;
      values[x] = lambda.value(mod.dot(x, a));
    }
    v.emplace_back(MonomialMatrix(std::move(cols), std::move(values)));
  }
  return CCRPair(lambda, d, std::move(u), std::move(v), "schrodinger");
}

/// The pair on l^2(S), S = R^d x R^d, index s = x + |R^d| y:
/// (U(a) f)(x, y) = f(x + a, y) and (V(b) f)(x, y) = lambda(x.b) f(x, y + b).
inline CCRPair regular(const Character& lambda, std::size_t d) {
  const FreeModule mod(lambda.ring(), d);
  const std::size_t n = mod.size();
  if (n > kMaxPairDim / n) throw ResourceError("regular pair dimension " + std::to_string(n) + "^2 exceeds cap");
  const std::size_t dim = n * n;
  std::vector<Operator> u, v;
  for (Index a = 0; a < n; ++a) {
    std::vector<std::size_t> cols(dim);
    std::vector<Complex> values(dim);
    for (Index y = 0; y < n; ++y)
      for (Index x = 0; x < n; ++x) cols[x + n * y] = mod.add(x, a) + n * y;
    u.emplace_back(MonomialMatrix(cols, std::vector<Complex>(dim, Complex(1.0, 0.0))));
    for (Index y = 0; y < n; ++y)
      for (Index x = 0; x < n; ++x) {
        cols[x + n * y] = x + n * mod.add(y, a);
        values[x + n * y] = lambda.value(mod.dot(x, a));
      }
    v.emplace_back(MonomialMatrix(std::move(cols), std::move(values)));
  }
  return CCRPair(lambda, d, std::move(u), std::move(v), "regular");
}

/// max ||U(a) V(b) - lambda(a.b) V(b) U(a)||.
inline double verify_ccr(const CCRPair& p, CheckScope scope = CheckScope::automatic) {
  MaxResidual worst;
  for (Index a : detail::scan_set(p, scope))
    for (Index b = 0; b < p.group_size(); ++b) worst.observe(p.U(a) * p.V(b), (p.V(b) * p.U(a)).scaled(p.phase(a, b)));
  return worst.value();
}

/// max of ||U(0) - I||, ||U(a)* U(a) - I||, ||U(a + a') - U(a) U(a')|| and the same for V.
inline double representation_residual(const CCRPair& p, CheckScope scope = CheckScope::automatic) {
  MaxResidual worst;
  const auto id = Operator::identity(p.dim());
  worst.observe(p.U(0), id);
  worst.observe(p.V(0), id);
  const auto second = detail::scan_set(p, scope);
  for (Index a = 0; a < p.group_size(); ++a) {
    for (Index g : second) {
      const Index s = p.domain().add(a, g);
      worst.observe(p.U(s), p.U(a) * p.U(g));
      worst.observe(p.V(s), p.V(a) * p.V(g));
    }
  }
  for (Index g : second) {
    worst.observe(unitarity_defect(p.U(g)));
    worst.observe(unitarity_defect(p.V(g)));
  }
  return worst.value();
}

/// k copies, block-diagonal, index copy * N + h.
inline CCRPair inflate(const CCRPair& p, std::size_t k) {
  if (k < 1) throw StructureError("inflation multiplicity must be >= 1");
  if (k == 1) return p;
  std::vector<Operator> u, v;
  for (Index a = 0; a < p.group_size(); ++a) {
    const std::vector<Operator> ublocks(k, p.U(a)), vblocks(k, p.V(a));
    u.push_back(block_diagonal(ublocks));
    v.push_back(block_diagonal(vblocks));
  }
  return CCRPair(p.lambda(), p.degree(), std::move(u), std::move(v), p.label() + "^(" + std::to_string(k) + ")");
}

inline CCRPair direct_sum(const CCRPair& a, const CCRPair& b) {
  if (!a.compatible(b)) throw StructureError("direct sum of pairs with different lambda or degree");
  std::vector<Operator> u, v;
  for (Index g = 0; g < a.group_size(); ++g) {
    const std::vector<Operator> ub{a.U(g), b.U(g)}, vb{a.V(g), b.V(g)};
    u.push_back(block_diagonal(ub));
    v.push_back(block_diagonal(vb));
  }
  return CCRPair(a.lambda(), a.degree(), std::move(u), std::move(v), a.label() + "+" + b.label());
}

/// (W U W*, W V W*).
inline CCRPair conjugate(const CCRPair& p, const ComplexMatrix& w) {
  if (static_cast<std::size_t>(w.rows()) != p.dim() || w.rows() != w.cols())
    throw StructureError("conjugating matrix has the wrong dimension");
  const Operator W(w);
  if (unitarity_defect(W) > 1e-10) throw PreconditionError("conjugating matrix is not unitary");
  const Operator Ws = W.adjoint();
  std::vector<Operator> u, v;
  for (Index a = 0; a < p.group_size(); ++a) {
    u.push_back(W * p.U(a) * Ws);
    v.push_back(W * p.V(a) * Ws);
  }
  return CCRPair(p.lambda(), p.degree(), std::move(u), std::move(v), "conj(" + p.label() + ")");
}

/// mult copies of the Schrodinger pair, conjugated by a seeded Haar unitary.
inline CCRPair random_instance(const Character& lambda, std::size_t d, std::size_t mult, std::uint64_t seed) {
  const auto base = inflate(schrodinger(lambda, d), mult);
  auto out = conjugate(base, haar_unitary(base.dim(), seed));
  return CCRPair(out.lambda(), d, out.u_table(), out.v_table(), "random");
}

/// S = R^d x R^d as the free module R^(2d); x = s mod |R^d|, y = s div |R^d|.
inline FreeModule pair_space(const CCRPair& p) { return FreeModule(p.ring(), 2 * p.degree()); }

namespace detail {

inline std::vector<std::size_t> shift_x(const CCRPair& p, Index a) {
  const std::size_t n = p.group_size();
  std::vector<std::size_t> cols(n * n);
  for (Index y = 0; y < n; ++y)
    for (Index x = 0; x < n; ++x) cols[x + n * y] = p.domain().add(x, a) + n * y;
  return cols;
}

inline std::vector<std::size_t> shift_y(const CCRPair& p, Index b) {
  const std::size_t n = p.group_size();
  std::vector<std::size_t> cols(n * n);
  for (Index y = 0; y < n; ++y)
    for (Index x = 0; x < n; ++x) cols[x + n * y] = x + n * p.domain().add(y, b);
  return cols;
}

}  // namespace detail

/// (U~(a) F)(x, y) = U(a) F(x + a, y) on L^2(S, H), index s * N + h.
inline BlockOperator tilde_u(const CCRPair& p, Index a) {
  const std::size_t n = p.group_size();
  return BlockOperator(detail::shift_x(p, a), std::vector<Operator>(n * n, p.U(a)));
}

/// (V~(b) F)(x, y) = V(b) F(x, y + b).
inline BlockOperator tilde_v(const CCRPair& p, Index b) {
  const std::size_t n = p.group_size();
  return BlockOperator(detail::shift_y(p, b), std::vector<Operator>(n * n, p.V(b)));
}

/// Block-diagonal, lambda(a.x) U(a) at (x, y).
inline BlockOperator bar_u(const CCRPair& p, Index a) {
  const std::size_t n = p.group_size();
  std::vector<Operator> blocks;
  blocks.reserve(n * n);
  for (Index y = 0; y < n; ++y)
    for (Index x = 0; x < n; ++x) blocks.push_back(p.U(a).scaled(p.phase(a, x)));
  return BlockOperator::diagonal(std::move(blocks));
}

/// Block-diagonal, lambda(y.b) V(b) at (x, y).
inline BlockOperator bar_v(const CCRPair& p, Index b) {
  const std::size_t n = p.group_size();
  std::vector<Operator> blocks;
  blocks.reserve(n * n);
  for (Index y = 0; y < n; ++y)
    for (Index x = 0; x < n; ++x) blocks.push_back(p.V(b).scaled(p.phase(y, b)));
  return BlockOperator::diagonal(std::move(blocks));
}

/// U^(m)(a) = I_S (x) U(a) and U_reg^(n)(a) = P_a (x) I_N, both on L^2(S, H).
inline BlockOperator inflated_u(const CCRPair& p, Index a) {
  const std::size_t n = p.group_size();
  return BlockOperator::diagonal(std::vector<Operator>(n * n, p.U(a)));
}
inline BlockOperator inflated_v(const CCRPair& p, Index b) {
  const std::size_t n = p.group_size();
  return BlockOperator::diagonal(std::vector<Operator>(n * n, p.V(b)));
}
inline BlockOperator regular_u(const CCRPair& p, Index a) {
  return BlockOperator::permutation(detail::shift_x(p, a), p.dim());
}
inline BlockOperator regular_v(const CCRPair& p, Index b) {
  const std::size_t n = p.group_size();
  std::vector<Operator> blocks;
  blocks.reserve(n * n);
  const auto id = Operator::identity(p.dim());
  for (Index y = 0; y < n; ++y)
    for (Index x = 0; x < n; ++x) blocks.push_back(id.scaled(p.phase(x, b)));
  return BlockOperator(detail::shift_y(p, b), std::move(blocks));
}

namespace detail {

template <typename Make>
CCRPair pair_from_blocks(const CCRPair& p, Make&& make_u, Make&& make_v, const std::string& label) {
  const std::size_t total = p.group_size() * p.group_size() * p.dim();
  if (total > (p.is_monomial() ? kMaxPairDim : kMaxDensePairDim))
    throw ResourceError(label + " pair dimension " + std::to_string(total) + " exceeds cap");
  std::vector<Operator> u, v;
  for (Index a = 0; a < p.group_size(); ++a) {
    u.push_back(make_u(p, a).flatten());
    v.push_back(make_v(p, a).flatten());
  }
  return CCRPair(p.lambda(), p.degree(), std::move(u), std::move(v), label + "(" + p.label() + ")");
}

}  // namespace detail

inline CCRPair tilde(const CCRPair& p) {
  using Fn = BlockOperator (*)(const CCRPair&, Index);
  return detail::pair_from_blocks<Fn>(p, &tilde_u, &tilde_v, "tilde");
}

inline CCRPair bar(const CCRPair& p) {
  using Fn = BlockOperator (*)(const CCRPair&, Index);
  return detail::pair_from_blocks<Fn>(p, &bar_u, &bar_v, "bar");
}

}  // namespace ccr
