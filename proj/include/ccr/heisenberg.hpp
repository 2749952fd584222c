#pragma once

// The Heisenberg group H_{2d+1}(R) of elements m(a, b, c), a, b in R^d,
// c in R, with m(a,b,c) m(a',b',c') = m(a+a', b+b', c+c'+a.b'), and the
// dictionary pi(m(a,b,c)) = lambda(c) V(b) U(a) between CCR pairs and
// representations with central character lambda.

#include <functional>
#include <string>
#include <vector>

#include "ccr/characters.hpp"
#include "ccr/errors.hpp"
#include "ccr/finite_ring.hpp"
#include "ccr/linalg.hpp"
#include "ccr/pairs.hpp"

namespace ccr {

/// m(a, b, c) with a, b flat indices into R^d and c an element of R.
struct HeisElem {
  Index a = 0;
  Index b = 0;
  Index c = 0;
  friend bool operator==(const HeisElem&, const HeisElem&) = default;
};

class HeisenbergGroup {
 public:
  HeisenbergGroup(FiniteRing ring, std::size_t d) : module_(std::move(ring), d) {
    const std::size_t n = module_.size();
    if (n > (std::size_t{1} << 40) / n / module_.ring().order()) throw ResourceError("group order overflows");
    order_ = n * n * module_.ring().order();
  }

  const FiniteRing& ring() const { return module_.ring(); }
  std::size_t degree() const { return module_.degree(); }
  const FreeModule& module() const { return module_; }
  /// |R|^(2d+1)
  std::size_t order() const { return order_; }

  HeisElem identity() const { return {}; }

  HeisElem make(const RingVector& a, const RingVector& b, const Element& c) const {
    if (!(a.ring() == ring()) || !(b.ring() == ring()) || !(c.ring() == ring()))
      throw StructureError("Heisenberg element over a different ring");
    if (a.size() != degree() || b.size() != degree()) throw StructureError("Heisenberg element has the wrong degree");
    return {module_.flat(a), module_.flat(b), c.index()};
  }

  void check(const HeisElem& g) const {
    if (g.a >= module_.size() || g.b >= module_.size() || g.c >= ring().order())
      throw StructureError("not an element of H_" + std::to_string(2 * degree() + 1) + "(" + ring().name() + ")");
  }

  HeisElem mul(const HeisElem& g, const HeisElem& h) const {
    check(g);
    check(h);
    const auto& r = ring();
    return {module_.add(g.a, h.a), module_.add(g.b, h.b), r.add(r.add(g.c, h.c), module_.dot(g.a, h.b))};
  }

  /// m(-a, -b, -c + a.b)
  HeisElem inv(const HeisElem& g) const {
    check(g);
    const auto& r = ring();
    return {module_.neg(g.a), module_.neg(g.b), r.add(r.neg(g.c), module_.dot(g.a, g.b))};
  }

  /// a + |R^d| b + |R^d|^2 c
  Index index(const HeisElem& g) const {
    const std::size_t n = module_.size();
    return g.a + n * (g.b + n * g.c);
  }

  HeisElem element(Index i) const {
    const std::size_t n = module_.size();
    return {i % n, (i / n) % n, i / (n * n)};
  }

  std::vector<HeisElem> elements(std::size_t cap = kDefaultEnumerationCap) const {
    if (order_ > cap)
      throw ResourceError("|H| = " + std::to_string(order_) + " exceeds cap " + std::to_string(cap));
    std::vector<HeisElem> out(order_);
    for (Index i = 0; i < order_; ++i) out[i] = element(i);
    return out;
  }

  /// C = {m(0, 0, c)}
  std::vector<HeisElem> center() const {
    std::vector<HeisElem> out;
    for (Index c = 0; c < ring().order(); ++c) out.push_back({0, 0, c});
    return out;
  }

  /// m(e, 0, 0), m(0, e, 0) and m(0, 0, e) for additive generators e.
  std::vector<HeisElem> generators() const {
    std::vector<HeisElem> out;
    for (Index e : module_.additive_generators()) out.push_back({e, 0, 0});
    for (Index e : module_.additive_generators()) out.push_back({0, e, 0});
    for (std::size_t j = 0; j < ring().additive_factors().size(); ++j) out.push_back({0, 0, ring().basis(j)});
    return out;
  }

  friend bool operator==(const HeisenbergGroup& x, const HeisenbergGroup& y) {
    return x.ring() == y.ring() && x.degree() == y.degree();
  }

 private:
  FreeModule module_;
  std::size_t order_ = 0;
};

inline HeisElem heis_mul(const HeisenbergGroup& h, const HeisElem& x, const HeisElem& y) { return h.mul(x, y); }
inline HeisElem heis_inv(const HeisenbergGroup& h, const HeisElem& x) { return h.inv(x); }
inline std::size_t group_order(const FiniteRing& ring, std::size_t d) { return HeisenbergGroup(ring, d).order(); }
inline std::vector<HeisElem> center(const FiniteRing& ring, std::size_t d) { return HeisenbergGroup(ring, d).center(); }

/// Row g, column h holds index(g h).
inline std::vector<std::vector<Index>> multiplication_table(const HeisenbergGroup& h, std::size_t cap = 512) {
  const auto elems = h.elements(cap);
  std::vector<std::vector<Index>> table(elems.size(), std::vector<Index>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j) table[i][j] = h.index(h.mul(elems[i], elems[j]));
  return table;
}

/// A unitary representation of H_{2d+1}(R) with central character lambda, evaluated on demand.
class GroupRep {
 public:
  using Map = std::function<Operator(const HeisElem&)>;

  GroupRep(HeisenbergGroup group, Character lambda, std::size_t dim, Map map, std::string label = {})
      : group_(std::move(group)), lambda_(std::move(lambda)), dim_(dim), map_(std::move(map)), label_(std::move(label)) {
    if (!(lambda_.ring() == group_.ring()) || lambda_.degree() != 1)
      throw StructureError("central character is not a character of the group's ring");
  }

  const HeisenbergGroup& group() const { return group_; }
  const Character& lambda() const { return lambda_; }
  std::size_t dim() const { return dim_; }
  const std::string& label() const { return label_; }

  Operator operator()(const HeisElem& g) const {
    group_.check(g);
    return map_(g);
  }

  Complex trace(const HeisElem& g) const { return (*this)(g).trace(); }

 private:
  HeisenbergGroup group_;
  Character lambda_;
  std::size_t dim_;
  Map map_;
  std::string label_;
};

/// pi(m(a, b, c)) = lambda(c) V(b) U(a).
inline GroupRep rep_from_pair(const CCRPair& p, double tol = 1e-10) {
  const double ccr = verify_ccr(p);
  if (ccr > tol) throw PreconditionError("pair violates CCR (residual " + std::to_string(ccr) + ")");
  HeisenbergGroup h(p.ring(), p.degree());
  return GroupRep(
      h, p.lambda(), p.dim(),
      [p](const HeisElem& g) {
        const Operator vu = g.b == 0 ? p.U(g.a) : g.a == 0 ? p.V(g.b) : p.V(g.b) * p.U(g.a);
        return g.c == 0 ? vu : vu.scaled(p.lambda().value(g.c));
      },
      "pi_" + p.label());
}

/// Max ||pi(m(0,0,c)) - lambda(c) I|| over the center.
inline double central_character_residual(const GroupRep& pi) {
  MaxResidual worst;
  const auto id = Operator::identity(pi.dim());
  for (const auto& z : pi.group().center()) worst.observe(pi(z), id.scaled(pi.lambda().value(z.c)));
  return worst.value();
}

/// U(a) = pi(m(a, 0, 0)), V(b) = pi(m(0, b, 0)).
inline CCRPair pair_from_rep(const GroupRep& pi, double tol = 1e-10) {
  const double central = central_character_residual(pi);
  if (central > tol)
    throw PreconditionError("representation does not have central character lambda (residual " + std::to_string(central) + ")");
  const std::size_t n = pi.group().module().size();
  std::vector<Operator> u, v;
  for (Index a = 0; a < n; ++a) {
    u.push_back(pi({a, 0, 0}));
    v.push_back(pi({0, a, 0}));
  }
  return CCRPair(pi.lambda(), pi.group().degree(), std::move(u), std::move(v), "from_" + pi.label());
}

/// Max ||pi(g h) - pi(g) pi(h)|| over all pairs when |H| <= 64, otherwise
/// over g in H and h among the generators (which already forces the
/// homomorphism property).
inline double homomorphism_residual(const GroupRep& pi, CheckScope scope = CheckScope::automatic) {
  const auto& h = pi.group();
  const auto elems = h.elements(std::size_t{1} << 20);
  const bool all = scope == CheckScope::exhaustive || (scope == CheckScope::automatic && h.order() <= 64);
  const auto right = all ? elems : h.generators();
  std::vector<Operator> cache;
  cache.reserve(elems.size());
  for (const auto& g : elems) cache.push_back(pi(g));
  MaxResidual worst;
  worst.observe(cache[h.index(h.identity())], Operator::identity(pi.dim()));
  for (const auto& g : elems)
    for (const auto& k : right) worst.observe(cache[h.index(h.mul(g, k))], cache[h.index(g)] * cache[h.index(k)]);
  return worst.value();
}

/// Ind_C^H lambda on the transversal {m(a, b, 0)}, basis index t = a + |R^d| b:
/// m(a,b,c) e_t = lambda(c + a.b_t) e_t' with t' = (a + a_t, b + b_t).
inline GroupRep induced_rep(const Character& lambda, std::size_t d) {
  HeisenbergGroup h(lambda.ring(), d);
  const std::size_t n = h.module().size();
  if (n > kMaxPairDim / n) throw ResourceError("induced representation dimension exceeds cap");
  const FreeModule mod = h.module();
  return GroupRep(
      h, lambda, n * n,
      [lambda, mod, n](const HeisElem& g) {
        std::vector<std::size_t> cols(n * n);
        std::vector<Complex> values(n * n);
        const auto& r = lambda.ring();
        for (Index bt = 0; bt < n; ++bt)
          for (Index at = 0; at < n; ++at) {
            const Index t = at + n * bt;
            const Index t2 = mod.add(g.a, at) + n * mod.add(g.b, bt);
            cols[t2] = t;
            values[t2] = lambda.value(r.add(g.c, mod.dot(g.a, bt)));
          }
        return Operator(MonomialMatrix(std::move(cols), std::move(values)));
      },
      "induced");
}

/// tr pi(g) for every g in index order.
inline std::vector<Complex> trace_function(const GroupRep& pi, std::size_t cap = kDefaultEnumerationCap) {
  const auto elems = pi.group().elements(cap);
  std::vector<Complex> out;
  out.reserve(elems.size());
  for (const auto& g : elems) out.push_back(pi.trace(g));
  return out;
}

/// max_g |tr pi_1(g) - tr pi_2(g)|
inline double trace_distance(const GroupRep& p1, const GroupRep& p2, std::size_t cap = kDefaultEnumerationCap) {
  if (!(p1.group() == p2.group())) throw StructureError("representations of different groups");
  const auto t1 = trace_function(p1, cap);
  const auto t2 = trace_function(p2, cap);
  double worst = 0.0;
  for (std::size_t i = 0; i < t1.size(); ++i) worst = std::max(worst, std::abs(t1[i] - t2[i]));
  return worst;
}

}  // namespace ccr
