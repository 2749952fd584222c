#pragma once

// Named rings and characters used by the test suite and the CLI.

#include <vector>

#include "ccr/characters.hpp"
#include "ccr/finite_ring.hpp"

namespace ccr {

/// Z/2..Z/8, F_3, F_5, F_7, M_2(F_2), Z/2 x Z/3.
inline std::vector<FiniteRing> standard_rings() {
  std::vector<FiniteRing> out;
  for (std::uint64_t n = 2; n <= 8; ++n) out.push_back(FiniteRing::zmod(n));
  for (std::uint64_t p : {3, 5, 7}) out.push_back(FiniteRing::prime_field(p));
  out.push_back(FiniteRing::matrix(2, FiniteRing::prime_field(2)));
  out.push_back(FiniteRing::product({FiniteRing::zmod(2), FiniteRing::zmod(3)}));
  return out;
}

/// Characters of (R, +) satisfying the predicate, in dual-group order.
template <typename Pred>
std::vector<Character> characters_where(const FiniteRing& ring, Pred&& pred) {
  std::vector<Character> out;
  for (auto& chi : dual_group(ring)) {
    if (pred(check_conditions(ring, chi))) out.push_back(std::move(chi));
  }
  return out;
}

}  // namespace ccr
