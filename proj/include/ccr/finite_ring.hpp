#pragma once

// Finite unital rings: Z/n, prime fields, matrix rings over commutative
// rings and finite products. Elements are indices 0..|R|-1 in a mixed-radix
// encoding over the additive factors (first factor least significant), so
// index <-> additive coordinates is O(r).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccr/errors.hpp"

namespace ccr {

using Index = std::size_t;

inline constexpr std::size_t kDefaultEnumerationCap = 4096;

enum class RingKind { zmod, prime_field, matrix, product };

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

class FiniteRing {
 public:
  static FiniteRing zmod(std::uint64_t n) {
    if (n < 2) throw StructureError("Z/n requires n >= 2");
    return FiniteRing(make_cyclic(RingKind::zmod, n));
  }

  static FiniteRing prime_field(std::uint64_t p) {
    if (!is_prime(p)) throw StructureError("F_p requires p prime, got " + std::to_string(p));
    return FiniteRing(make_cyclic(RingKind::prime_field, p));
  }

  static FiniteRing matrix(std::size_t n, const FiniteRing& base) {
    if (n < 1) throw StructureError("M_n requires n >= 1");
    if (!base.is_commutative()) throw StructureError("M_n base ring must be commutative");
    auto node = std::make_shared<Node>();
    node->kind = RingKind::matrix;
    node->size = n;
    node->children = {base};
    node->order = checked_power(base.order(), n * n);
    for (std::size_t k = 0; k < n * n; ++k)
      node->factors.insert(node->factors.end(), base.additive_factors().begin(), base.additive_factors().end());
    node->commutative = (n == 1);
    return FiniteRing(finish(std::move(node)));
  }

  static FiniteRing product(std::vector<FiniteRing> components) {
    if (components.empty()) throw StructureError("product ring needs at least one factor");
    auto node = std::make_shared<Node>();
    node->kind = RingKind::product;
    node->order = 1;
    node->commutative = true;
    for (const auto& c : components) {
      node->order = checked_mul(node->order, c.order());
      node->factors.insert(node->factors.end(), c.additive_factors().begin(), c.additive_factors().end());
      node->commutative = node->commutative && c.is_commutative();
    }
    node->children = std::move(components);
    return FiniteRing(finish(std::move(node)));
  }

  RingKind kind() const { return node_->kind; }
  std::size_t order() const { return node_->order; }
  /// Modulus of Z/n or F_p.
  std::uint64_t modulus() const { return node_->size; }
  std::size_t matrix_size() const { return node_->size; }
  const FiniteRing& base() const { return node_->children.at(0); }
  const std::vector<FiniteRing>& components() const { return node_->children; }
  /// Cyclic orders (m_1, ..., m_r) of the stored additive basis.
  const std::vector<std::uint64_t>& additive_factors() const { return node_->factors; }
  bool is_commutative() const { return node_->commutative; }

  std::string name() const {
    switch (kind()) {
      case RingKind::zmod: return "Z/" + std::to_string(modulus());
      case RingKind::prime_field: return "F_" + std::to_string(modulus());
      case RingKind::matrix: return "M_" + std::to_string(matrix_size()) + "(" + base().name() + ")";
      case RingKind::product: {
        std::string s;
        for (std::size_t i = 0; i < components().size(); ++i) {
          if (i) s += " x ";
          const bool wrap = components()[i].kind() == RingKind::product;
          s += wrap ? "(" + components()[i].name() + ")" : components()[i].name();
        }
        return s;
      }
    }
    return {};
  }

  /// Short form accepted by parse_ring_spec.
  std::string spec() const {
    switch (kind()) {
      case RingKind::zmod: return "zmod:" + std::to_string(modulus());
      case RingKind::prime_field: return "fp:" + std::to_string(modulus());
      case RingKind::matrix: return "mat:" + std::to_string(matrix_size()) + "(" + base().spec() + ")";
      case RingKind::product: {
        std::string s = "prod(";
        for (std::size_t i = 0; i < components().size(); ++i) s += (i ? "," : "") + components()[i].spec();
        return s + ")";
      }
    }
    return {};
  }

  Index zero() const { return 0; }
  Index one() const { return node_->one; }

  Index add(Index x, Index y) const {
    if (!node_->add_table.empty()) return node_->add_table[x * order() + y];
    return raw_add(*node_, x, y);
  }
  Index neg(Index x) const {
    if (!node_->neg_table.empty()) return node_->neg_table[x];
    return raw_neg(*node_, x);
  }
  Index sub(Index x, Index y) const { return add(x, neg(y)); }
  Index mul(Index x, Index y) const {
    if (!node_->mul_table.empty()) return node_->mul_table[x * order() + y];
    return raw_mul(*node_, x, y);
  }

  /// Coordinates of x in the additive basis: x = sum_j c_j e_j with 0 <= c_j < m_j.
  std::vector<std::uint64_t> coordinates(Index x) const {
    std::vector<std::uint64_t> c(node_->factors.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      c[j] = x % node_->factors[j];
      x /= node_->factors[j];
    }
    return c;
  }

  Index from_coordinates(std::span<const std::uint64_t> c) const {
    if (c.size() != node_->factors.size()) throw StructureError("coordinate vector has wrong length");
    Index x = 0;
    for (std::size_t j = c.size(); j-- > 0;) x = x * node_->factors[j] + c[j] % node_->factors[j];
    return x;
  }

  /// Index of the j-th additive basis element e_j.
  Index basis(std::size_t j) const {
    Index stride = 1;
    for (std::size_t k = 0; k < j; ++k) stride *= node_->factors.at(k);
    (void)node_->factors.at(j);
    return stride;
  }

  std::vector<Index> enumerate(std::size_t cap = kDefaultEnumerationCap) const {
    if (order() > cap)
      throw ResourceError("ring " + name() + " has " + std::to_string(order()) + " elements, cap is " + std::to_string(cap));
    std::vector<Index> out(order());
    std::iota(out.begin(), out.end(), Index{0});
    return out;
  }

  void check_element(Index x) const {
    if (x >= order()) throw StructureError("index " + std::to_string(x) + " is not an element of " + name());
  }

  friend bool operator==(const FiniteRing& a, const FiniteRing& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.node_->size != b.node_->size || a.order() != b.order()) return false;
    return a.node_->children == b.node_->children;
  }

 private:
  struct Node {
    RingKind kind{};
    std::uint64_t size = 0;  // modulus, or matrix size
    std::size_t order = 0;
    std::vector<FiniteRing> children;
    std::vector<std::uint64_t> factors;
    bool commutative = true;
    Index one = 0;
    std::vector<Index> add_table, mul_table, neg_table;
  };

  explicit FiniteRing(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static constexpr std::size_t kTableLimit = 256;

  static std::size_t checked_mul(std::size_t a, std::size_t b) {
    if (b != 0 && a > (std::size_t{1} << 40) / b) throw ResourceError("ring order overflows the supported range");
    return a * b;
  }
  static std::size_t checked_power(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t k = 0; k < exp; ++k) r = checked_mul(r, base);
    return r;
  }

  static std::shared_ptr<const Node> make_cyclic(RingKind kind, std::uint64_t n) {
    if (n > (std::uint64_t{1} << 31)) throw ResourceError("modulus too large");
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->size = n;
    node->order = n;
    node->factors = {n};
    return finish(std::move(node));
  }

  static std::shared_ptr<const Node> finish(std::shared_ptr<Node> node) {
    node->one = raw_one(*node);
    if (node->order <= kTableLimit) {
      const std::size_t n = node->order;
      std::vector<Index> add(n * n), mul(n * n), neg(n);
      for (Index x = 0; x < n; ++x) {
        neg[x] = raw_neg(*node, x);
        for (Index y = 0; y < n; ++y) {
          add[x * n + y] = raw_add(*node, x, y);
          mul[x * n + y] = raw_mul(*node, x, y);
        }
      }
      node->add_table = std::move(add);
      node->mul_table = std::move(mul);
      node->neg_table = std::move(neg);
    }
    return node;
  }

  static Index raw_one(const Node& node) {
    switch (node.kind) {
      case RingKind::zmod:
      case RingKind::prime_field: return 1;
      case RingKind::matrix: {
        const auto& base = node.children[0];
        Index x = 0, stride = 1;
        for (std::size_t k = 0; k < node.size * node.size; ++k) {
          if (k / node.size == k % node.size) x += base.one() * stride;
          stride *= base.order();
        }
        return x;
      }
      case RingKind::product: {
        Index x = 0, stride = 1;
        for (const auto& c : node.children) {
          x += c.one() * stride;
          stride *= c.order();
        }
        return x;
      }
    }
    return 0;
  }

  static Index raw_add(const Node& node, Index x, Index y) {
    Index out = 0, stride = 1;
    for (auto m : node.factors) {
      out += ((x % m + y % m) % m) * stride;
      x /= m;
      y /= m;
      stride *= m;
    }
    return out;
  }

  static Index raw_neg(const Node& node, Index x) {
    Index out = 0, stride = 1;
    for (auto m : node.factors) {
      out += ((m - x % m) % m) * stride;
      x /= m;
      stride *= m;
    }
    return out;
  }

  static Index raw_mul(const Node& node, Index x, Index y) {
    switch (node.kind) {
      case RingKind::zmod:
      case RingKind::prime_field: return static_cast<Index>((static_cast<std::uint64_t>(x) * y) % node.size);
      case RingKind::matrix: {
        const auto& base = node.children[0];
        const std::size_t n = node.size;
        const std::size_t q = base.order();
        std::vector<Index> a(n * n), b(n * n);
        for (std::size_t k = 0; k < n * n; ++k) {
          a[k] = x % q;
          x /= q;
          b[k] = y % q;
          y /= q;
        }
        Index out = 0, stride = 1;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            Index acc = base.zero();
            for (std::size_t l = 0; l < n; ++l) acc = base.add(acc, base.mul(a[i * n + l], b[l * n + j]));
            out += acc * stride;
            stride *= q;
          }
        return out;
      }
      case RingKind::product: {
        Index out = 0, stride = 1;
        for (const auto& c : node.children) {
          const std::size_t q = c.order();
          out += c.mul(x % q, y % q) * stride;
          x /= q;
          y /= q;
          stride *= q;
        }
        return out;
      }
    }
    return 0;
  }

  std::shared_ptr<const Node> node_;
};

/// A ring element bound to its ring; arithmetic on operands from different rings throws.
class Element {
 public:
  Element(FiniteRing ring, Index index) : ring_(std::move(ring)), index_(index) { ring_.check_element(index_); }

  const FiniteRing& ring() const { return ring_; }
  Index index() const { return index_; }

  friend Element operator+(const Element& a, const Element& b) {
    same_ring(a, b);
    return Element(a.ring_, a.ring_.add(a.index_, b.index_));
  }
  friend Element operator-(const Element& a, const Element& b) {
    same_ring(a, b);
    return Element(a.ring_, a.ring_.sub(a.index_, b.index_));
  }
  friend Element operator*(const Element& a, const Element& b) {
    same_ring(a, b);
    return Element(a.ring_, a.ring_.mul(a.index_, b.index_));
  }
  Element operator-() const { return Element(ring_, ring_.neg(index_)); }
  friend bool operator==(const Element& a, const Element& b) { return a.ring_ == b.ring_ && a.index_ == b.index_; }

 private:
  static void same_ring(const Element& a, const Element& b) {
    if (!(a.ring_ == b.ring_)) throw StructureError("mixed-ring operands: " + a.ring_.name() + " and " + b.ring_.name());
  }
  FiniteRing ring_;
  Index index_;
};

/// An element of R^d.
class RingVector {
 public:
  RingVector(FiniteRing ring, std::vector<Index> entries) : ring_(std::move(ring)), entries_(std::move(entries)) {
    for (Index x : entries_) ring_.check_element(x);
  }

  static RingVector zero(const FiniteRing& ring, std::size_t d) { return RingVector(ring, std::vector<Index>(d, 0)); }

  const FiniteRing& ring() const { return ring_; }
  std::size_t size() const { return entries_.size(); }
  Index operator[](std::size_t k) const { return entries_[k]; }
  const std::vector<Index>& entries() const { return entries_; }

  friend RingVector operator+(const RingVector& a, const RingVector& b) {
    check_compatible(a, b);
    std::vector<Index> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a.ring_.add(a[k], b[k]);
    return RingVector(a.ring_, std::move(out));
  }
  RingVector operator-() const {
    std::vector<Index> out(size());
    for (std::size_t k = 0; k < size(); ++k) out[k] = ring_.neg(entries_[k]);
    return RingVector(ring_, std::move(out));
  }
  friend bool operator==(const RingVector& a, const RingVector& b) {
    return a.ring_ == b.ring_ && a.entries_ == b.entries_;
  }

  static void check_compatible(const RingVector& a, const RingVector& b) {
    if (!(a.ring_ == b.ring_)) throw StructureError("ring vectors over different rings");
    if (a.size() != b.size())
      throw StructureError("ring vector length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }

 private:
  FiniteRing ring_;
  std::vector<Index> entries_;
};

/// a.b = sum_k a_k b_k, with a on the left in each product.
inline Element dot(const RingVector& a, const RingVector& b) {
  RingVector::check_compatible(a, b);
  const auto& r = a.ring();
  Index acc = r.zero();
  for (std::size_t k = 0; k < a.size(); ++k) acc = r.add(acc, r.mul(a[k], b[k]));
  return Element(r, acc);
}

/// Flat indexing of R^d: u = sum_k u_k |R|^k.
class FreeModule {
 public:
  FreeModule(FiniteRing ring, std::size_t degree) : ring_(std::move(ring)), degree_(degree) {
    if (degree_ < 1) throw StructureError("degree d must be >= 1");
    size_ = 1;
    for (std::size_t k = 0; k < degree_; ++k) {
      if (size_ > (std::size_t{1} << 40) / ring_.order()) throw ResourceError("|R|^d overflows the supported range");
      size_ *= ring_.order();
    }
  }

  const FiniteRing& ring() const { return ring_; }
  std::size_t degree() const { return degree_; }
  std::size_t size() const { return size_; }

  std::vector<Index> entries(Index u) const {
    std::vector<Index> e(degree_);
    for (std::size_t k = 0; k < degree_; ++k) {
      e[k] = u % ring_.order();
      u /= ring_.order();
    }
    return e;
  }

  Index flat(std::span<const Index> e) const {
    if (e.size() != degree_) throw StructureError("vector length does not match degree");
    Index u = 0;
    for (std::size_t k = degree_; k-- > 0;) u = u * ring_.order() + e[k];
    return u;
  }

  Index flat(const RingVector& v) const {
    if (!(v.ring() == ring_)) throw StructureError("vector over a different ring");
    return flat(v.entries());
  }

  RingVector vector(Index u) const { return RingVector(ring_, entries(u)); }

  Index add(Index u, Index v) const {
    Index out = 0, stride = 1;
    const std::size_t q = ring_.order();
    for (std::size_t k = 0; k < degree_; ++k) {
      out += ring_.add(u % q, v % q) * stride;
      u /= q;
      v /= q;
      stride *= q;
    }
    return out;
  }

  Index neg(Index u) const {
    Index out = 0, stride = 1;
    const std::size_t q = ring_.order();
    for (std::size_t k = 0; k < degree_; ++k) {
      out += ring_.neg(u % q) * stride;
      u /= q;
      stride *= q;
    }
    return out;
  }

  Index sub(Index u, Index v) const { return add(u, neg(v)); }

  /// u.v as a ring element index.
  Index dot(Index u, Index v) const {
    Index acc = ring_.zero();
    const std::size_t q = ring_.order();
    for (std::size_t k = 0; k < degree_; ++k) {
      acc = ring_.add(acc, ring_.mul(u % q, v % q));
      u /= q;
      v /= q;
    }
    return acc;
  }

  /// Additive generators of R^d: e_j placed in slot k, slot-major.
  std::vector<Index> additive_generators() const {
    std::vector<Index> gens;
    Index stride = 1;
    for (std::size_t k = 0; k < degree_; ++k) {
      for (std::size_t j = 0; j < ring_.additive_factors().size(); ++j) gens.push_back(ring_.basis(j) * stride);
      stride *= ring_.order();
    }
    return gens;
  }

 private:
  FiniteRing ring_;
  std::size_t degree_;
  std::size_t size_;
};

namespace detail {

inline std::uint64_t parse_unsigned(std::string_view s, std::string_view what) {
  if (s.empty()) throw StructureError("missing number in ring spec " + std::string(what));
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw StructureError("bad number '" + std::string(s) + "' in ring spec " + std::string(what));
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
    if (v > (std::uint64_t{1} << 40)) throw StructureError("number too large in ring spec");
  }
  return v;
}

inline std::size_t matching_paren(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) return i;
  }
  throw StructureError("unbalanced parentheses in ring spec " + std::string(s));
}

}  // namespace detail

/// Parses "zmod:N", "fp:P", "mat:N(<spec>)" and "prod(<spec>,<spec>,...)".
inline FiniteRing parse_ring_spec(std::string_view s) {
  auto starts = [&](std::string_view p) { return s.substr(0, p.size()) == p; };
  if (starts("zmod:")) return FiniteRing::zmod(detail::parse_unsigned(s.substr(5), s));
  if (starts("fp:")) return FiniteRing::prime_field(detail::parse_unsigned(s.substr(3), s));
  if (starts("mat:")) {
    const auto open = s.find('(');
    if (open == std::string_view::npos) throw StructureError("mat: spec needs a base in parentheses");
    const auto close = detail::matching_paren(s, open);
    if (close != s.size() - 1) throw StructureError("trailing characters in ring spec " + std::string(s));
    const auto n = detail::parse_unsigned(s.substr(4, open - 4), s);
    return FiniteRing::matrix(n, parse_ring_spec(s.substr(open + 1, close - open - 1)));
  }
  if (starts("prod(")) {
    const auto close = detail::matching_paren(s, 4);
    if (close != s.size() - 1) throw StructureError("trailing characters in ring spec " + std::string(s));
    std::vector<FiniteRing> parts;
    std::size_t begin = 5;
    int depth = 0;
    for (std::size_t i = 5; i <= close; ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') --depth;
      if ((s[i] == ',' && depth == 0) || i == close) {
        parts.push_back(parse_ring_spec(s.substr(begin, i - begin)));
        begin = i + 1;
      }
    }
    return FiniteRing::product(std::move(parts));
  }
  throw StructureError("unrecognized ring spec '" + std::string(s) + "'");
}

}  // namespace ccr
