#pragma once

// Slow reference computations straight from the definitions, used to
// cross-check the library algorithms. Only ring add/mul tables are shared.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "ccr/characters.hpp"
#include "ccr/finite_ring.hpp"
#include "ccr/pairs.hpp"
#include "ccr/partition.hpp"

namespace ccr::reference {

/// lambda(x) straight from the definition, as a complex number.
inline std::complex<double> char_value(const Character& chi, Index x) {
  const auto& ring = chi.ring();
  const auto& f = ring.additive_factors();
  double phase = 0.0;
  std::size_t j = 0;
  for (std::size_t k = 0; k < chi.degree(); ++k) {
    const auto coords = ring.coordinates(x % ring.order());
    x /= ring.order();
    for (std::size_t i = 0; i < f.size(); ++i, ++j)
      phase += static_cast<double>(chi.exponents()[j] * coords[i]) / static_cast<double>(f[i]);
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * phase);
}

inline bool is_one(std::complex<double> z) { return std::abs(z - 1.0) < 1e-9; }

/// Every two-sided ideal, as a membership bitmask. Exhaustive over subsets, |R| <= 16.
inline std::vector<std::uint32_t> all_ideals(const FiniteRing& ring) {
  const std::size_t n = ring.order();
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    if (!(mask & 1u)) continue;  // index 0 is the zero element
    bool closed = true;
    for (Index x = 0; x < n && closed; ++x) {
      if (!(mask >> x & 1u)) continue;
      for (Index y = 0; y < n && closed; ++y) {
        if ((mask >> y & 1u) && !(mask >> ring.add(x, y) & 1u)) closed = false;
        if (!(mask >> ring.mul(x, y) & 1u) || !(mask >> ring.mul(y, x) & 1u)) closed = false;
      }
    }
    if (closed) out.push_back(mask);
  }
  return out;
}

struct Verdict {
  bool sym = true;
  bool iso = true;
  bool faith = true;
  std::vector<Index> kernel;
  Index first_faith_generator = 0;
  std::vector<Index> smallest_ideal;  // smallest ideal containing that generator
};

inline Verdict conditions(const FiniteRing& ring, const Character& lambda) {
  const std::size_t n = ring.order();
  Verdict v;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if (!is_one(char_value(lambda, ring.mul(a, b)) / char_value(lambda, ring.mul(b, a)))) v.sym = false;

  for (Index a = 0; a < n; ++a) {
    bool trivial = true;
    for (Index x = 0; x < n; ++x)
      if (!is_one(char_value(lambda, ring.mul(x, a)))) trivial = false;
    if (trivial) v.kernel.push_back(a);
  }
  v.iso = v.kernel.size() == 1;

  const auto ideals = all_ideals(ring);
  std::uint32_t ker = 0;
  for (Index x = 0; x < n; ++x)
    if (is_one(char_value(lambda, x))) ker |= std::uint32_t{1} << x;
  for (Index a = 1; a < n && v.faith; ++a) {
    std::uint32_t smallest = (std::uint32_t{1} << n) - 1;
    bool inside = false;
    for (auto m : ideals) {
      if (!(m >> a & 1u)) continue;
      smallest &= m;
      if ((m & ~ker) == 0) inside = true;
    }
    if (inside) {
      v.faith = false;
      v.first_faith_generator = a;
      for (Index x = 0; x < n; ++x)
        if (smallest >> x & 1u) v.smallest_ideal.push_back(x);
    }
  }
  return v;
}

/// dim of the commutant of a unitary representation of a finite group is
/// sum m_i^2 = |G|^-1 sum_g |tr pi(g)|^2. For a CCR pair, pi(m(a,b,c)) =
/// lambda(c) V(b) U(a) and the central phase drops out of |tr|.
inline double commutant_dim_by_characters(const CCRPair& p) {
  double acc = 0.0;
  for (Index b = 0; b < p.group_size(); ++b)
    for (Index a = 0; a < p.group_size(); ++a) {
      const ComplexMatrix m = p.V(b).dense() * p.U(a).dense();
      acc += std::norm(m.trace());
    }
  return acc / static_cast<double>(p.group_size() * p.group_size());
}

/// Dense matrices straight from the defining formulas.
inline ComplexMatrix schrodinger_u(const Character& lambda, std::size_t d, Index a) {
  const FreeModule m(lambda.ring(), d);
  const auto n = static_cast<Eigen::Index>(m.size());
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  // (U f)(x) = f(x + a)
  for (Index x = 0; x < m.size(); ++x) u(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(m.add(x, a))) = 1.0;
  return u;
}

inline ComplexMatrix schrodinger_v(const Character& lambda, std::size_t d, Index b) {
  const FreeModule m(lambda.ring(), d);
  const auto n = static_cast<Eigen::Index>(m.size());
  ComplexMatrix v = ComplexMatrix::Zero(n, n);
  for (Index x = 0; x < m.size(); ++x) v(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = char_value(lambda, m.dot(x, b));
  return v;
}

/// Brute-force sup of |e^(2 pi i x a) - e^(2 pi i alpha a)| by direct sampling.
/// Each closed arc [k/g, (k+1)/g] gets an evenly spaced grid including both
/// ends; the sup over the half-open arc equals the one over its closure.
inline double eps_sup(const SampleAssignment& s, const std::vector<std::int64_t>& window, std::size_t samples) {
  const std::size_t g = s.partition().resolution();
  const std::size_t per = std::max<std::size_t>(2, samples / g);
  double worst = 0.0;
  for (std::size_t k = 0; k < g; ++k) {
    const double lo = static_cast<double>(k) / static_cast<double>(g);
    const double hi = static_cast<double>(k + 1) / static_cast<double>(g);
    const double alpha = s.theta().phase(*s.axis()[k]);
    for (std::size_t m = 0; m < per; ++m) {
      const double x = lo + (hi - lo) * static_cast<double>(m) / static_cast<double>(per - 1);
      for (auto a : window) {
        const double ad = static_cast<double>(a);
        const auto z = std::polar(1.0, 2.0 * std::numbers::pi * x * ad) - std::polar(1.0, 2.0 * std::numbers::pi * alpha * ad);
        worst = std::max(worst, std::abs(z));
      }
    }
  }
  return worst;
}

}  // namespace ccr::reference
