#pragma once

// Stone-von Neumann at finite scale.
//
// On L^2(S, H), index s * N + h with s = x + |R^d| y:
//   Psi  = diag V(-x) U(y)     intertwines U^(m)        with U-bar,
//   F~   = F (x) I_N           intertwines U-bar        with U~,
//   Phi  = diag U(-x) V(-y)    intertwines U_reg^(n)    with U~,
// and K reindexes L^2(S, H) as n copies of l^2(S). The equivalence
// (U^(m), V^(m)) ~ (U_reg^(n), V_reg^(n)) is W = K Phi* F~ Psi.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ccr/block_operator.hpp"
#include "ccr/characters.hpp"
#include "ccr/fourier.hpp"
#include "ccr/heisenberg.hpp"
#include "ccr/linalg.hpp"
#include "ccr/pairs.hpp"

namespace ccr {

namespace detail {

inline void require_ccr(const CCRPair& p, double tol) {
  const double r = verify_ccr(p);
  if (r > tol) throw PreconditionError("pair violates CCR (residual " + std::to_string(r) + " > " + std::to_string(tol) + ")");
}

inline std::string format_set(const std::vector<Index>& xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + std::to_string(xs[i]);
  return s + "}";
}

inline void require_sym_isom(const CCRPair& p) {
  const auto rep = check_conditions(p.ring(), p.lambda());
  if (!rep.iso)
    throw PreconditionError("lambda fails (Isom): ker nabla_lambda = " + format_set(rep.iso_kernel) + " in " +
                            p.ring().name());
  if (!rep.sym)
    throw PreconditionError("lambda fails (Sym): lambda(ab) != lambda(ba) at a = " +
                            std::to_string(rep.sym_counterexample->first) +
                            ", b = " + std::to_string(rep.sym_counterexample->second));
}

inline std::vector<Index> elements_or_generators(const CCRPair& p, bool all) {
  if (!all) return p.domain().additive_generators();
  std::vector<Index> out(p.group_size());
  for (Index a = 0; a < out.size(); ++a) out[a] = a;
  return out;
}

}  // namespace detail

/// Phi = diag U(-x) V(-y) at s = (x, y).
inline BlockOperator phi_unitary(const CCRPair& p, double tol = 1e-10) {
  detail::require_ccr(p, tol);
  const std::size_t n = p.group_size();
  std::vector<Operator> blocks;
  blocks.reserve(n * n);
  for (Index y = 0; y < n; ++y)
    for (Index x = 0; x < n; ++x) blocks.push_back(p.U(p.domain().neg(x)) * p.V(p.domain().neg(y)));
  return BlockOperator::diagonal(std::move(blocks));
}

/// Psi = diag V(-x) U(y) at s = (x, y).
inline BlockOperator psi_unitary(const CCRPair& p, double tol = 1e-10) {
  detail::require_ccr(p, tol);
  const std::size_t n = p.group_size();
  std::vector<Operator> blocks;
  blocks.reserve(n * n);
  for (Index y = 0; y < n; ++y)
    for (Index x = 0; x < n; ++x) blocks.push_back(p.V(p.domain().neg(x)) * p.U(y));
  return BlockOperator::diagonal(std::move(blocks));
}

/// ||P_a F - F D_a|| with D_a = diag lambda(a.t), from the factor:
/// P_a F - F D_a = F1 (x) (p_a F1 - F1 d_a).
inline double fourier_u_defect(const PlancherelTransform& f, Index a) {
  const auto& mod = f.domain();
  const auto& f1 = f.factor();
  const auto n = f1.rows();
  ComplexMatrix diff(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index t = 0; t < n; ++t)
      diff(x, t) = f1(static_cast<Eigen::Index>(mod.add(static_cast<Index>(x), a)), t) -
                   f1(x, t) * f.lambda().value(mod.dot(a, static_cast<Index>(t)));
  return f.factor_norm() * operator_norm(diff);
}

/// ||Q_b F - F E_b|| with E_b = diag lambda(s.b): (q_b F1 - F1 e_b) (x) F1.
inline double fourier_v_defect(const PlancherelTransform& f, Index b) {
  const auto& mod = f.domain();
  const auto& f1 = f.factor();
  const auto n = f1.rows();
  ComplexMatrix diff(n, n);
  for (Eigen::Index y = 0; y < n; ++y)
    for (Eigen::Index s = 0; s < n; ++s)
      diff(y, s) = f1(static_cast<Eigen::Index>(mod.add(static_cast<Index>(y), b)), s) -
                   f1(y, s) * f.lambda().value(mod.dot(static_cast<Index>(s), b));
  return f.factor_norm() * operator_norm(diff);
}

struct IntertwiningResiduals {
  double phi_u = 0.0;      // ||U~(a) Phi - Phi U_reg^(n)(a)||
  double phi_v = 0.0;      // ||V~(b) Phi - Phi V_reg^(n)(b)||
  double psi_u = 0.0;      // ||Psi U^(m)(a) - U-bar(a) Psi||
  double psi_v = 0.0;      // ||Psi V^(m)(b) - V-bar(b) Psi||
  double fourier_u = 0.0;  // ||U~(a) F~ - F~ U-bar(a)||
  double fourier_v = 0.0;  // ||V~(b) F~ - F~ V-bar(b)||
  double phi_unitarity = 0.0;
  double psi_unitarity = 0.0;
  bool exhaustive = false;
  std::size_t elements = 0;

  double max() const { return std::max({phi_u, phi_v, psi_u, psi_v, fourier_u, fourier_v}); }
};

/// The three intertwining identities, each as an operator-norm residual.
/// Every a in R^d is visited when |R^d| |S| N <= 2^22 for monomial pairs or
/// |S| N <= 4096 for dense ones; otherwise the additive generators, which
/// suffice since all six maps are homomorphisms in a.
inline IntertwiningResiduals intertwining_residuals(const CCRPair& p, double tol = 1e-10) {
  const auto phi = phi_unitary(p, tol);
  const auto psi = psi_unitary(p, tol);
  const PlancherelTransform f(p.lambda(), p.degree());
  IntertwiningResiduals r;
  const std::size_t n = p.group_size();
  r.exhaustive = p.is_monomial() ? n * n * n * p.dim() <= (std::size_t{1} << 22) : n * n * p.dim() <= kMaxPairDim;
  r.phi_unitarity = unitarity_defect(phi);
  r.psi_unitarity = unitarity_defect(psi);
  const auto scan = detail::elements_or_generators(p, r.exhaustive);
  r.elements = scan.size();
  for (Index a : scan) {
    r.phi_u = std::max(r.phi_u, distance(tilde_u(p, a) * phi, phi * regular_u(p, a)));
    r.phi_v = std::max(r.phi_v, distance(tilde_v(p, a) * phi, phi * regular_v(p, a)));
    r.psi_u = std::max(r.psi_u, distance(psi * inflated_u(p, a), bar_u(p, a) * psi));
    r.psi_v = std::max(r.psi_v, distance(psi * inflated_v(p, a), bar_v(p, a) * psi));
    r.fourier_u = std::max(r.fourier_u, fourier_u_defect(f, a) * norm(p.U(a)));
    r.fourier_v = std::max(r.fourier_v, fourier_v_defect(f, a) * norm(p.V(a)));
  }
  return r;
}

/// W = K Phi* F~ Psi, applied without forming the matrix.
class Intertwiner {
 public:
  Intertwiner(const CCRPair& p, double tol = 1e-10)
      : phi_adj_(phi_unitary(p, tol).adjoint()),
        psi_(psi_unitary(p, tol)),
        f_(PlancherelTransform(p.lambda(), p.degree()), p.dim()),
        s_(p.group_size() * p.group_size()),
        n_(p.dim()) {}

  std::size_t dim() const { return s_ * n_; }
  const ExtendedTransform& transform() const { return f_; }
  const BlockOperator& phi_adjoint() const { return phi_adj_; }
  const BlockOperator& psi() const { return psi_; }

  /// (K v)[h |S| + s] = v[s N + h]
  ComplexVector reindex(const ComplexVector& v) const {
    ComplexVector out(v.size());
    for (std::size_t s = 0; s < s_; ++s)
      for (std::size_t h = 0; h < n_; ++h)
        out[static_cast<Eigen::Index>(h * s_ + s)] = v[static_cast<Eigen::Index>(s * n_ + h)];
    return out;
  }
  ComplexVector reindex_adjoint(const ComplexVector& v) const {
    ComplexVector out(v.size());
    for (std::size_t s = 0; s < s_; ++s)
      for (std::size_t h = 0; h < n_; ++h)
        out[static_cast<Eigen::Index>(s * n_ + h)] = v[static_cast<Eigen::Index>(h * s_ + s)];
    return out;
  }

  ComplexVector apply(const ComplexVector& v) const {
    return reindex(phi_adj_.apply(f_.apply(psi_.apply(v))));
  }
  ComplexVector apply_adjoint(const ComplexVector& v) const {
    return psi_.adjoint().apply(f_.apply_adjoint(phi_adj_.adjoint().apply(reindex_adjoint(v))));
  }

  ComplexMatrix dense() const {
    if (dim() > kMaxDenseTransform) throw ResourceError("dense intertwiner limited to dimension 1024");
    const auto d = static_cast<Eigen::Index>(dim());
    ComplexMatrix w(d, d);
    ComplexVector e = ComplexVector::Zero(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      e[j] = 1.0;
      w.col(j) = apply(e);
      e[j] = 0.0;
    }
    return w;
  }

 private:
  BlockOperator phi_adj_;
  BlockOperator psi_;
  ExtendedTransform f_;
  std::size_t s_;
  std::size_t n_;
};

struct EquivalenceWitness {
  CCRPair source;           // the input pair; the witness relates its |S|-fold inflation
  CCRPair target;           // inflate(regular, N)
  std::size_t m = 0;        // |S|
  std::size_t n = 0;        // N
  Intertwiner w;
  double unitarity_defect = 0.0;  // ||W* W - I||
  double residual = 0.0;          // max ||W U^(m)(a) - U_reg^(n)(a) W|| and the same for V
  double chain_bound = 0.0;       // upper bound from the three identities
  std::string method;             // "dense" or "power-iteration"
  std::size_t elements = 0;
};

/// Builds W with W U^(m)(a) = U_reg^(n)(a) W and W V^(m)(b) = V_reg^(n)(b) W.
inline EquivalenceWitness svn_intertwiner(const CCRPair& p, double tol = 1e-10) {
  detail::require_sym_isom(p);
  detail::require_ccr(p, tol);
  const std::size_t s = p.group_size() * p.group_size();
  if (s * p.dim() > kMaxPairDim)
    throw ResourceError("|S| N = " + std::to_string(s * p.dim()) + " exceeds cap " + std::to_string(kMaxPairDim));

  Intertwiner w(p, tol);
  const auto target = inflate(regular(p.lambda(), p.degree()), p.dim());
  const auto res = intertwining_residuals(p, tol);
  const double fnorm = w.transform().base().factor_norm() * w.transform().base().factor_norm();

  EquivalenceWitness out{p, target, s, p.dim(), w, 0.0, 0.0, 0.0, "", 0};
  out.chain_bound = fnorm * (res.psi_u + res.phi_u) + res.fourier_u;
  out.chain_bound = std::max(out.chain_bound, fnorm * (res.psi_v + res.phi_v) + res.fourier_v);

  const std::size_t dim = w.dim();
  const bool dense = dim <= kDenseNormLimit;
  const auto scan = detail::elements_or_generators(p, dim <= 256 && p.group_size() <= 16);
  out.elements = scan.size();
  if (dense) {
    out.method = "dense";
    const ComplexMatrix wd = w.dense();
    const Operator W(wd);
    out.unitarity_defect = unitarity_defect(W);
    MaxResidual worst;
    for (Index a : scan) {
      worst.observe(W * inflated_u(p, a).flatten(), target.U(a) * W);
      worst.observe(W * inflated_v(p, a).flatten(), target.V(a) * W);
    }
    out.residual = worst.value();
  } else {
    out.method = "power-iteration";
    out.unitarity_defect = spectral_norm_power(
        dim, [&](const ComplexVector& v) -> ComplexVector { return w.apply_adjoint(w.apply(v)) - v; },
        [&](const ComplexVector& v) -> ComplexVector { return w.apply_adjoint(w.apply(v)) - v; });
    out.unitarity_defect = std::max(out.unitarity_defect, w.transform().base().unitarity_defect());
    double worst = 0.0;
    for (Index a : scan) {
      for (int which = 0; which < 2; ++which) {
        const auto src = which == 0 ? inflated_u(p, a) : inflated_v(p, a);
        const auto src_adj = src.adjoint();
        const Operator& dst = which == 0 ? target.U(a) : target.V(a);
        const Operator dst_adj = dst.adjoint();
        worst = std::max(worst, spectral_norm_power(
                                    dim,
                                    [&](const ComplexVector& v) -> ComplexVector {
                                      return w.apply(src.apply(v)) - dst * w.apply(v);
                                    },
                                    [&](const ComplexVector& v) -> ComplexVector {
                                      return src_adj.apply(w.apply_adjoint(v)) - w.apply_adjoint(dst_adj * v);
                                    }));
      }
    }
    out.residual = worst;
  }
  return out;
}

namespace detail {

/// Solutions T of T A = A T for monomial generators: each A permutes the
/// unknowns, T[c(i), c(k)] = (a_k / a_i) T[i, k], so the commutant has one
/// dimension per orbit of unknowns whose propagated phases are consistent.
inline std::size_t monomial_commutant_dim(const std::vector<MonomialMatrix>& gens, std::size_t n, double tol) {
  const std::size_t total = n * n;
  std::vector<Complex> value(total, Complex(0.0, 0.0));
  std::vector<bool> visited(total, false);
  std::vector<std::vector<std::size_t>> inverse_cols;
  for (const auto& g : gens) {
    std::vector<std::size_t> inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[g.col(i)] = i;
    inverse_cols.push_back(std::move(inv));
  }
  std::size_t count = 0;
  std::vector<std::size_t> stack;
  for (std::size_t root = 0; root < total; ++root) {
    if (visited[root]) continue;
    bool consistent = true;
    visited[root] = true;
    value[root] = 1.0;
    stack.push_back(root);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      const std::size_t i = u / n, k = u % n;
      for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        const auto& g = gens[gi];
        // forward: (i, k) -> (c(i), c(k)) with factor a_k / a_i
        const std::size_t fwd = g.col(i) * n + g.col(k);
        const Complex fv = value[u] * g.value(k) / g.value(i);
        // backward: (i, k) = (c(i'), c(k')) -> (i', k') with the inverse factor
        const std::size_t i0 = inverse_cols[gi][i], k0 = inverse_cols[gi][k];
        const std::size_t bwd = i0 * n + k0;
        const Complex bv = value[u] * g.value(i0) / g.value(k0);
        for (auto [w, v] : {std::pair{fwd, fv}, std::pair{bwd, bv}}) {
          if (!visited[w]) {
            visited[w] = true;
            value[w] = v;
            stack.push_back(w);
          } else if (std::abs(value[w] - v) > tol) {
            consistent = false;
          }
        }
      }
    }
    if (consistent) ++count;
  }
  return count;
}

}  // namespace detail

/// Largest carrier dimension for the dense commutant solve (N^2 unknowns).
inline constexpr std::size_t kMaxDenseCommutant = 32;
inline constexpr std::size_t kMaxMonomialCommutant = 1024;

/// dim {T : T U(a) = U(a) T, T V(b) = V(b) T}, as the nullity of the stacked
/// system over the additive generators (singular values below tol).
inline std::size_t commutant_dim(const CCRPair& p, double tol = 1e-8) {
  const auto gens = p.domain().additive_generators();
  std::vector<Operator> ops;
  for (Index g : gens) {
    ops.push_back(p.U(g));
    ops.push_back(p.V(g));
  }
  const std::size_t n = p.dim();
  if (p.is_monomial()) {
    if (n > kMaxMonomialCommutant) throw ResourceError("commutant of a monomial pair limited to N <= 1024");
    std::vector<MonomialMatrix> mono;
    for (const auto& o : ops) mono.push_back(o.monomial());
    return detail::monomial_commutant_dim(mono, n, tol);
  }
  if (n > kMaxDenseCommutant) throw ResourceError("dense commutant limited to N <= 32");
  const auto k = static_cast<Eigen::Index>(n);
  const ComplexMatrix id = ComplexMatrix::Identity(k, k);
  ComplexMatrix system(static_cast<Eigen::Index>(ops.size()) * k * k, k * k);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const ComplexMatrix a = ops[i].dense();
    // vec(T A - A T) = (A^T (x) I - I (x) A) vec(T), column-major vec
    ComplexMatrix block(k * k, k * k);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < k; ++c) block.block(r * k, c * k, k, k) = a(c, r) * id - (r == c ? a : ComplexMatrix::Zero(k, k));
    system.block(static_cast<Eigen::Index>(i) * k * k, 0, k * k, k * k) = block;
  }
  Eigen::BDCSVD<ComplexMatrix> svd(system);
  std::size_t nullity = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] < tol) ++nullity;
  return nullity;
}

struct Decomposition {
  std::size_t multiplicity = 0;
  ComplexMatrix theta;  // rows: copies of l^2(R^d), index copy * |R^d| + x
  double residual = 0.0;          // max ||Theta U(a) - U_Schr^(k)(a) Theta|| and the same for V
  double unitarity_defect = 0.0;  // ||Theta* Theta - I||
  std::size_t rounds = 0;
};

struct DecomposeOptions {
  std::uint64_t seed = 1;
  std::size_t max_rounds = 0;  // 0: 4 k + 8
  double accept = 1e-6;        // minimum squared norm of a new intertwiner
  double tol = 1e-10;
};

/// Splits a CCR pair into copies of the Schrodinger pair.
/// T = |R^d|^-2 sum_{a,b} pi_Schr(m(a,b,0)) X pi(m(a,b,0))^-1 averages over H,
/// the central factors cancelling. Each T intertwines pi with pi_Schr and
/// satisfies T T* = c I, so Gram-Schmidt in <T, S> = tr(T S*) / |R^d| yields
/// orthogonal isometries whose stack is Theta.
inline Decomposition decompose(const CCRPair& p, const DecomposeOptions& opt = {}) {
  detail::require_sym_isom(p);
  const std::size_t ns = p.group_size();
  const std::size_t n = p.dim();
  if (n % ns != 0)
    throw StructureError("pair cannot be a finite multiple of Schrodinger: dimension " + std::to_string(n) +
                         " is not divisible by |R^d| = " + std::to_string(ns));
  if (n > kMaxDensePairDim) throw ResourceError("decomposition limited to dimension 1024");
  detail::require_ccr(p, opt.tol);
  const std::size_t k = n / ns;
  const auto schr = schrodinger(p.lambda(), p.degree());
  const std::size_t max_rounds = opt.max_rounds ? opt.max_rounds : 4 * k + 8;
  const auto rows = static_cast<Eigen::Index>(ns);
  const auto cols = static_cast<Eigen::Index>(n);

  // pi(m(a,b,0))^-1 = U(a)* V(b)*, and pi_Schr(m(a,b,0)) = V_S(b) U_S(a), monomial.
  std::vector<Operator> right;
  std::vector<MonomialMatrix> left;
  for (Index b = 0; b < ns; ++b)
    for (Index a = 0; a < ns; ++a) {
      right.push_back(p.U(a).adjoint() * p.V(b).adjoint());
      left.push_back((schr.V(b) * schr.U(a)).monomial());
    }

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ComplexMatrix> found;
  Decomposition out;
  for (std::size_t round = 0; round < max_rounds && found.size() < k; ++round) {
    ComplexMatrix x(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        x(i, j) = Complex(re, im);
      }
    ComplexMatrix t = ComplexMatrix::Zero(rows, cols);
    ComplexMatrix xr(rows, cols);
    ComplexMatrix scratch;
    for (std::size_t g = 0; g < right.size(); ++g) {
      if (right[g].is_monomial()) {
        // (X M)[:, col(r)] = value(r) X[:, r]
        const auto& m = right[g].monomial();
        for (std::size_t r = 0; r < n; ++r)
          xr.col(static_cast<Eigen::Index>(m.col(r))) = m.value(r) * x.col(static_cast<Eigen::Index>(r));
      } else {
        xr.noalias() = x * right[g].dense_ref(scratch);
      }
      const auto& l = left[g];
      for (std::size_t i = 0; i < ns; ++i)
        t.row(static_cast<Eigen::Index>(i)) += l.value(i) * xr.row(static_cast<Eigen::Index>(l.col(i)));
    }
    t /= static_cast<double>(right.size());
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : found) {
        const Complex ip = (t * q.adjoint()).trace() / static_cast<double>(ns);
        t -= ip * q;
      }
    const double sq = (t * t.adjoint()).trace().real() / static_cast<double>(ns);
    out.rounds = round + 1;
    if (sq < opt.accept * x.squaredNorm() / static_cast<double>(ns * n)) continue;
    found.push_back(t / std::sqrt(sq));
  }
  if (found.size() < k)
    throw NumericError("averaging found " + std::to_string(found.size()) + " of " + std::to_string(k) +
                       " Schrodinger components after " + std::to_string(out.rounds) + " rounds");

  out.multiplicity = k;
  out.theta.resize(cols, cols);
  for (std::size_t c = 0; c < k; ++c) out.theta.block(static_cast<Eigen::Index>(c) * rows, 0, rows, cols) = found[c];
  const Operator theta(out.theta);
  out.unitarity_defect = unitarity_defect(theta);
  const auto target = inflate(schr, k);
  MaxResidual worst;
  for (Index g : p.domain().additive_generators()) {
    worst.observe(theta * p.U(g), target.U(g) * theta);
    worst.observe(theta * p.V(g), target.V(g) * theta);
  }
  out.residual = worst.value();
  return out;
}

/// Character equality of the associated Heisenberg representations. The
/// central phase lambda(c) has modulus one, so comparing tr V(b) U(a) over
/// (a, b) covers every m(a, b, c).
inline bool pairs_equivalent(const CCRPair& x, const CCRPair& y, double tol = 1e-8) {
  if (!x.compatible(y)) throw StructureError("pairs_equivalent needs the same lambda and degree");
  const std::size_t n = x.group_size();
  for (Index b = 0; b < n; ++b)
    for (Index a = 0; a < n; ++a)
      if (std::abs(trace_product(x.V(b), x.U(a)) - trace_product(y.V(b), y.U(a))) > tol) return false;
  return true;
}

}  // namespace ccr
