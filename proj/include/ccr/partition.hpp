#pragma once

// Torus partitions and the epsilon certificate for R = Z with
// lambda_theta(k) = exp(2 pi i theta k). The dual of Z^d x Z^d is the torus
// T^(2d) = [0,1)^(2d); s = (a, b) maps to (theta a, theta b) mod 1.
//
// Everything here factors over the 2d axes: a grid cell is a product of
// arcs [k/g, (k+1)/g), the image of s is computed coordinatewise, and the
// certified error of a cell is the max over axes. The per-axis problem is
// the same for every axis, so one 1-D table serves all of them.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "ccr/errors.hpp"
#include "ccr/finite_ring.hpp"

namespace ccr {

inline constexpr std::size_t kMaxTorusCells = std::size_t{1} << 22;
inline constexpr std::int64_t kMaxOrbitWindow = std::int64_t{1} << 24;

class TorusPartition {
 public:
  TorusPartition(std::size_t g, std::size_t dims) : g_(g), dims_(dims) {
    if (g < 1) throw StructureError("grid resolution must be >= 1");
    if (dims < 1) throw StructureError("torus dimension must be >= 1");
    std::size_t cells = 1;
    for (std::size_t j = 0; j < dims; ++j) {
      if (cells > kMaxTorusCells / g) throw ResourceError("torus partition exceeds " + std::to_string(kMaxTorusCells) + " cells");
      cells *= g;
    }
    cells_ = cells;
  }

  std::size_t resolution() const { return g_; }
  std::size_t dims() const { return dims_; }
  std::size_t cell_count() const { return cells_; }
  double width() const { return 1.0 / static_cast<double>(g_); }
  /// sqrt(2d) / g in the flat metric
  double diameter() const { return std::sqrt(static_cast<double>(dims_)) / static_cast<double>(g_); }

  /// Cell index sum_j k_j g^j.
  std::vector<std::size_t> coords(std::size_t cell) const {
    std::vector<std::size_t> k(dims_);
    for (std::size_t j = 0; j < dims_; ++j, cell /= g_) k[j] = cell % g_;
    return k;
  }
  std::size_t cell(const std::vector<std::size_t>& k) const {
    std::size_t out = 0;
    for (std::size_t j = dims_; j-- > 0;) out = out * g_ + k[j];
    return out;
  }

  std::vector<double> lower(std::size_t cell) const {
    std::vector<double> out;
    for (auto k : coords(cell)) out.push_back(static_cast<double>(k) / static_cast<double>(g_));
    return out;
  }
  std::vector<double> center(std::size_t cell) const {
    std::vector<double> out;
    for (auto k : coords(cell)) out.push_back((static_cast<double>(k) + 0.5) / static_cast<double>(g_));
    return out;
  }

  /// Half-open membership, point in [0,1)^dims.
  bool contains(std::size_t cell, const std::vector<double>& x) const {
    const auto k = coords(cell);
    for (std::size_t j = 0; j < dims_; ++j) {
      const double lo = static_cast<double>(k[j]) / static_cast<double>(g_);
      const double hi = static_cast<double>(k[j] + 1) / static_cast<double>(g_);
      if (!(x[j] >= lo && x[j] < hi)) return false;
    }
    return true;
  }

  std::size_t locate(const std::vector<double>& x) const {
    std::vector<std::size_t> k(dims_);
    for (std::size_t j = 0; j < dims_; ++j) {
      if (!(x[j] >= 0.0 && x[j] < 1.0)) throw StructureError("point outside [0,1)");
      k[j] = std::min(g_ - 1, static_cast<std::size_t>(std::floor(x[j] * static_cast<double>(g_))));
      // floor(x g) can round up across a boundary
      if (static_cast<double>(k[j]) / static_cast<double>(g_) > x[j]) --k[j];
    }
    return cell(k);
  }

 private:
  std::size_t g_;
  std::size_t dims_;
  std::size_t cells_ = 1;
};

inline TorusPartition build_grid_partition(std::size_t g, std::size_t dims = 2) { return TorusPartition(g, dims); }

/// {chi : sup_{a in K} |chi(a) - 1| <= eps} on T^dims, chi(a) read coordinatewise.
struct EpsNeighborhood {
  std::vector<std::int64_t> window;
  double eps = 0.0;

  bool contains(const std::vector<double>& x) const {
    for (double xj : x)
      for (auto a : window)
        if (std::abs(std::polar(1.0, 2.0 * std::numbers::pi * xj * static_cast<double>(a)) - 1.0) > eps) return false;
    return true;
  }
};

/// Grid analog of (P1): differences of two points in one cell lie in (-1/g, 1/g)^dims,
/// where |e^(2 pi i y a) - 1| <= 2 sin(pi max|a| / g) while max|a| / g <= 1/2.
inline bool grid_satisfies_p1(const TorusPartition& p, const EpsNeighborhood& u) {
  std::int64_t amax = 0;
  for (auto a : u.window) amax = std::max(amax, a < 0 ? -a : a);
  const double t = static_cast<double>(amax) / static_cast<double>(p.resolution());
  const double sup = t >= 0.5 ? 2.0 : 2.0 * std::sin(std::numbers::pi * t);
  return sup <= u.eps;
}

// ---------------------------------------------------------------------------
// Lemma partition on a finite group model

struct FiniteGroupModel {
  std::size_t order = 0;
  std::function<Index(Index, Index)> op;
  std::function<Index(Index)> inv;
  Index identity = 0;
  std::string name;

  static FiniteGroupModel cyclic(std::size_t n) {
    if (n < 1) throw StructureError("cyclic group order must be >= 1");
    return {n, [n](Index x, Index y) { return (x + y) % n; }, [n](Index x) { return (n - x) % n; }, 0,
            "Z/" + std::to_string(n)};
  }
};

struct BlockPartition {
  std::vector<std::vector<Index>> blocks;  // nonempty Omega_i in construction order
  std::vector<Index> centers;              // d_i with Omega_i inside d_i V
  std::vector<std::size_t> block_of;       // element -> block
};

namespace detail {

inline std::vector<bool> membership(std::size_t n, const std::vector<Index>& set) {
  std::vector<bool> in(n, false);
  for (Index x : set) {
    if (x >= n) throw StructureError("element " + std::to_string(x) + " outside the group");
    in[x] = true;
  }
  return in;
}

}  // namespace detail

/// Omega_(i+1) = d_(i+1) V \ (Omega_1 u ... u Omega_i), run over the given points in order.
inline BlockPartition lemma_partition(const FiniteGroupModel& g, const std::vector<Index>& points, const std::vector<Index>& v) {
  const auto in_v = detail::membership(g.order, v);
  if (!in_v[g.identity]) throw StructureError("neighborhood must contain the identity");
  for (Index x : v)
    if (!in_v[g.inv(x)]) throw StructureError("neighborhood must be symmetric");
  detail::membership(g.order, points);

  BlockPartition out;
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  out.block_of.assign(g.order, none);
  for (Index d : points) {
    std::vector<Index> block;
    for (Index x : v) {
      const Index y = g.op(d, x);
      if (out.block_of[y] != none) continue;
      out.block_of[y] = out.blocks.size();
      block.push_back(y);
    }
    if (block.empty()) continue;
    std::sort(block.begin(), block.end());
    out.blocks.push_back(std::move(block));
    out.centers.push_back(d);
  }
  std::vector<Index> uncovered;
  for (Index x = 0; x < g.order; ++x)
    if (out.block_of[x] == none) uncovered.push_back(x);
  if (!uncovered.empty()) {
    std::string list;
    for (std::size_t i = 0; i < uncovered.size() && i < 32; ++i) list += (i ? ", " : "") + std::to_string(uncovered[i]);
    if (uncovered.size() > 32) list += ", ...";
    throw PreconditionError("translates of V do not cover " + g.name + "; uncovered: {" + list + "}");
  }
  return out;
}

/// V^2 = {x y : x, y in V}
inline std::vector<Index> square(const FiniteGroupModel& g, const std::vector<Index>& v) {
  std::vector<bool> in(g.order, false);
  for (Index x : v)
    for (Index y : v) in[g.op(x, y)] = true;
  std::vector<Index> out;
  for (Index x = 0; x < g.order; ++x)
    if (in[x]) out.push_back(x);
  return out;
}

/// First pair (x, y) in a common block with y^-1 x outside V^2, if any.
inline std::optional<std::pair<Index, Index>> p1_violation(const FiniteGroupModel& g, const BlockPartition& p,
                                                           const std::vector<Index>& v) {
  const auto in_v2 = detail::membership(g.order, square(g, v));
  for (const auto& block : p.blocks)
    for (Index x : block)
      for (Index y : block)
        if (!in_v2[g.op(g.inv(y), x)]) return std::pair{x, y};
  return std::nullopt;
}

inline bool is_disjoint_cover(const FiniteGroupModel& g, const BlockPartition& p) {
  std::vector<int> hits(g.order, 0);
  for (const auto& block : p.blocks)
    for (Index x : block) ++hits[x];
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

// ---------------------------------------------------------------------------
// theta

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
};

/// Convergents of the continued fraction of num / den (den > 0).
inline std::vector<Convergent> convergents_of(std::int64_t num, std::int64_t den, std::size_t max_terms = 64) {
  std::vector<Convergent> out;
  __int128 p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  __int128 n = num, d = den;
  while (d != 0 && out.size() < max_terms) {
    __int128 a = n / d;
    if (n % d != 0 && (n < 0) != (d < 0)) --a;
    const __int128 r = n - a * d;
    const __int128 p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > std::numeric_limits<std::int32_t>::max()) break;
    out.push_back({static_cast<std::int64_t>(p2), static_cast<std::int64_t>(q2)});
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    n = d;
    d = r;
  }
  return out;
}

class Theta {
 public:
  /// (sqrt 5 - 1) / 2
  static Theta golden() {
    Theta t;
    t.value_ = (std::sqrt(5.0) - 1.0) / 2.0;
    t.label_ = "golden";
    std::int64_t a = 0, b = 1;  // F_k / F_(k+1)
    while (b <= std::numeric_limits<std::int32_t>::max()) {
      t.convergents_.push_back({a, b});
      const std::int64_t c = a + b;
      a = b;
      b = c;
    }
    return t;
  }

  static Theta rational(std::int64_t p, std::int64_t q) {
    if (q <= 0) throw StructureError("theta denominator must be positive");
    if (q > std::numeric_limits<std::int32_t>::max()) throw ResourceError("theta denominator exceeds 2^31");
    const std::int64_t g = std::gcd(p < 0 ? -p : p, q);
    Theta t;
    t.p_ = p / g;
    t.q_ = q / g;
    t.rational_ = true;
    t.value_ = static_cast<double>(t.p_) / static_cast<double>(t.q_);
    t.label_ = std::to_string(t.p_) + "/" + std::to_string(t.q_);
    t.convergents_ = convergents_of(t.p_, t.q_);
    return t;
  }

  /// A float standing for an irrational number; membership near cell edges
  /// is decided with a few ulps of slack.
  static Theta approximate(double x, std::string label = {}) {
    if (!std::isfinite(x)) throw StructureError("theta must be finite");
    Theta t;
    t.value_ = x;
    t.label_ = label.empty() ? format(x) : std::move(label);
    const double frac = x - std::floor(x);
    const auto scaled = static_cast<std::int64_t>(std::llround(std::ldexp(frac, 60)));
    t.convergents_ = convergents_of(scaled, std::int64_t{1} << 60);
    return t;
  }

  double value() const { return value_; }
  bool is_rational() const { return rational_; }
  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }
  const std::string& label() const { return label_; }
  const std::vector<Convergent>& convergents() const { return convergents_; }

  /// theta a mod 1 (floating point, for distances and phases)
  double phase(std::int64_t a) const {
    if (rational_) return static_cast<double>(mod_q(a)) / static_cast<double>(q_);
    const double x = value_ * static_cast<double>(a);
    return x - std::floor(x);
  }

  /// Cell k of [0,1) at resolution g with theta a mod 1 in [k/g, (k+1)/g),
  /// or nullopt when rounding cannot decide. Exact for rational theta.
  std::optional<std::size_t> arc(std::int64_t a, std::size_t g) const {
    if (rational_) return static_cast<std::size_t>((static_cast<unsigned __int128>(mod_q(a)) * g) / static_cast<std::uint64_t>(q_));
    if (a == 0) return 0;
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(value_));
    const double tlo = value_ - slack, thi = value_ + slack;
    const double ad = static_cast<double>(a);
    double lo = std::min(tlo * ad, thi * ad), hi = std::max(tlo * ad, thi * ad);
    lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
    hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
    const double f = std::floor(lo);
    if (std::floor(hi) != f) return std::nullopt;
    const double gd = static_cast<double>(g);
    const double clo = std::floor(std::nextafter((lo - f) * gd, -std::numeric_limits<double>::infinity()));
    const double chi = std::floor(std::nextafter((hi - f) * gd, std::numeric_limits<double>::infinity()));
    if (clo != chi || clo < 0.0 || clo >= gd) return std::nullopt;
    return static_cast<std::size_t>(clo);
  }

  static std::string format(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  }

 private:
  std::int64_t mod_q(std::int64_t a) const {
    const __int128 r = (static_cast<__int128>(p_) * a) % q_;
    return static_cast<std::int64_t>(r < 0 ? r + q_ : r);
  }

  double value_ = 0.0;
  bool rational_ = false;
  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
  std::string label_;
  std::vector<Convergent> convergents_;
};

/// "golden", "p/q", or a decimal.
inline Theta parse_theta(const std::string& text) {
  if (text == "golden") return Theta::golden();
  const auto slash = text.find('/');
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw StructureError("malformed theta '" + text + "'");
    return v;
  };
  if (slash != std::string::npos) {
    const std::string_view all(text);
    return Theta::rational(parse_int(all.substr(0, slash)), parse_int(all.substr(slash + 1)));
  }
  double x = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) throw StructureError("malformed theta '" + text + "'");
  return Theta::approximate(x, text);
}

/// Distinct gap lengths between consecutive points of {theta a mod 1 : |a| <= W}
/// on the circle (at most three by the three-distance theorem).
inline std::vector<double> orbit_gaps(const Theta& theta, std::int64_t window, double tol = 1e-9) {
  if (window < 0 || window > kMaxOrbitWindow) throw ResourceError("orbit window out of range");
  std::vector<double> pts;
  for (std::int64_t a = -window; a <= window; ++a) pts.push_back(theta.phase(a));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [&](double x, double y) { return y - x < tol; }), pts.end());
  std::vector<double> gaps;
  for (std::size_t i = 0; i < pts.size(); ++i) gaps.push_back(i + 1 < pts.size() ? pts[i + 1] - pts[i] : pts[0] + 1.0 - pts[i]);
  std::sort(gaps.begin(), gaps.end());
  std::vector<double> distinct;
  for (double g : gaps)
    if (distinct.empty() || g - distinct.back() > tol) distinct.push_back(g);
  return distinct;
}

namespace detail {

/// 0, -1, 1, -2, 2, ...: increasing |a|, negative first.
inline std::int64_t orbit_order(std::int64_t i) { return i % 2 == 0 ? i / 2 : -(i + 1) / 2; }

}  // namespace detail

/// Smallest W such that every arc [k/g, (k+1)/g) receives theta a for some |a| <= W,
/// or nullopt if none up to cap (always nullopt for rational theta with q < g).
inline std::optional<std::int64_t> minimal_window(const Theta& theta, std::size_t g, std::int64_t cap = kMaxOrbitWindow) {
  std::vector<bool> hit(g, false);
  std::size_t count = 0;
  for (std::int64_t i = 0; i <= 2 * cap; ++i) {
    const std::int64_t a = detail::orbit_order(i);
    if (theta.is_rational() && (a < 0 ? -a : a) > theta.q()) return std::nullopt;
    const auto k = theta.arc(a, g);
    if (k && !hit[*k]) {
      hit[*k] = true;
      if (++count == g) return a < 0 ? -a : a;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// sampling

/// Per cell the pair s = (a_1..a_d, b_1..b_d) in [-W, W]^(2d) minimizing
/// sum |s_j|, ties broken lexicographically, whose image lies in the cell.
/// Since the image is coordinatewise, this is the per-axis minimizer on every axis.
class SampleAssignment {
 public:
  SampleAssignment(Theta theta, TorusPartition partition, std::int64_t window, std::vector<std::optional<std::int64_t>> axis,
                   std::size_t ambiguous)
      : theta_(std::move(theta)), partition_(std::move(partition)), window_(window), axis_(std::move(axis)), ambiguous_(ambiguous) {}

  const Theta& theta() const { return theta_; }
  const TorusPartition& partition() const { return partition_; }
  std::int64_t window() const { return window_; }
  /// candidates skipped because rounding could not place them
  std::size_t ambiguous() const { return ambiguous_; }
  /// Per-arc sample, shared by all axes.
  const std::vector<std::optional<std::int64_t>>& axis() const { return axis_; }
  /// Arcs filled from the nearest image point instead of an in-cell sample.
  const std::vector<bool>& fallback() const { return fallback_; }
  bool exact_membership() const { return theta_.is_rational(); }

  std::optional<std::vector<std::int64_t>> sample(std::size_t cell) const {
    std::vector<std::int64_t> s;
    for (auto k : partition_.coords(cell)) {
      if (!axis_[k]) return std::nullopt;
      s.push_back(*axis_[k]);
    }
    return s;
  }

  std::vector<std::size_t> uncovered_cells() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < partition_.cell_count(); ++c)
      if (!sample(c)) out.push_back(c);
    return out;
  }
  std::size_t uncovered_count() const {
    std::size_t covered_arcs = 0;
    for (const auto& a : axis_) covered_arcs += a.has_value();
    std::size_t covered = 1;
    for (std::size_t j = 0; j < partition_.dims(); ++j) covered *= covered_arcs;
    return partition_.cell_count() - covered;
  }
  bool fully_covered() const { return uncovered_count() == 0; }
  bool uses_fallback() const { return std::find(fallback_.begin(), fallback_.end(), true) != fallback_.end(); }

  /// Fill every empty arc with the sample whose image is nearest (circular
  /// distance) to the arc center among all |a| <= W: the Voronoi cell of the
  /// finite image that contains it.
  void fill_nearest() {
    const std::size_t g = partition_.resolution();
    fallback_.assign(g, false);
    std::vector<std::pair<double, std::int64_t>> images;
    for (std::int64_t i = 0; i <= 2 * window_; ++i) {
      const std::int64_t a = detail::orbit_order(i);
      images.push_back({theta_.phase(a), a});
    }
    for (std::size_t k = 0; k < g; ++k) {
      if (axis_[k]) continue;
      const double c = (static_cast<double>(k) + 0.5) / static_cast<double>(g);
      double best = 2.0;
      std::int64_t pick = 0;
      for (const auto& [x, a] : images) {
        double dist = std::abs(x - c);
        dist = std::min(dist, 1.0 - dist);
        if (dist < best - 1e-15) {
          best = dist;
          pick = a;
        }
      }
      axis_[k] = pick;
      fallback_[k] = true;
    }
  }

 private:
  Theta theta_;
  TorusPartition partition_;
  std::int64_t window_;
  std::vector<std::optional<std::int64_t>> axis_;
  std::size_t ambiguous_;
  std::vector<bool> fallback_;
};

inline SampleAssignment sample_orbit(const Theta& theta, const TorusPartition& partition, std::int64_t window) {
  if (window < 1) throw StructureError("search window must be >= 1");
  if (window > kMaxOrbitWindow) throw ResourceError("search window exceeds 2^24");
  const std::size_t g = partition.resolution();
  std::vector<std::optional<std::int64_t>> axis(g);
  std::size_t ambiguous = 0, filled = 0;
  for (std::int64_t i = 0; i <= 2 * window && filled < g; ++i) {
    const std::int64_t a = detail::orbit_order(i);
    const auto k = theta.arc(a, g);
    if (!k) {
      ++ambiguous;
      continue;
    }
    if (!axis[*k]) {
      axis[*k] = a;
      ++filled;
    }
  }
  return SampleAssignment(theta, partition, window, std::move(axis), ambiguous);
}

// ---------------------------------------------------------------------------
// certificate

inline std::vector<std::int64_t> symmetric_window(std::int64_t k) {
  if (k < 0) throw StructureError("window radius must be >= 0");
  std::vector<std::int64_t> out;
  for (std::int64_t a = -k; a <= k; ++a) out.push_back(a);
  return out;
}

/// sup of 2 |sin(pi t)| over t in [t0, t1].
inline double sup_chord(double t0, double t1) {
  if (t0 > t1) std::swap(t0, t1);
  if (std::ceil(t0 - 0.5) + 0.5 <= t1) return 2.0;
  return 2.0 * std::max(std::abs(std::sin(std::numbers::pi * t0)), std::abs(std::sin(std::numbers::pi * t1)));
}

/// sup over x in [u, u + w) and a in K of |e^(2 pi i x a) - e^(2 pi i alpha a)|.
inline double arc_error(double u, double w, double alpha, const std::vector<std::int64_t>& window) {
  double worst = 0.0;
  for (auto a : window) {
    const double ad = static_cast<double>(a);
    worst = std::max(worst, sup_chord(ad * (u - alpha), ad * (u + w - alpha)));
  }
  return worst;
}

/// sup over x in [u, u + w) of the circular distance |x - alpha|.
inline double arc_distance(double u, double w, double alpha) {
  auto circ = [](double d) {
    d = std::abs(d - std::round(d));
    return d;
  };
  // farthest point of the arc from alpha: an endpoint, or the antipode when it lies inside
  const double anti = alpha + 0.5 - std::floor(alpha + 0.5 - u);
  if (anti >= u && anti <= u + w) return 0.5;
  return std::max(circ(u - alpha), circ(u + w - alpha));
}

struct EpsCertificate {
  std::vector<std::int64_t> window;
  std::size_t resolution = 0;
  std::size_t dims = 0;
  std::vector<double> arc_eps;   // per arc, shared by all axes
  double eps = 0.0;              // max over cells, axes, a in K
  double delta = 0.0;            // max cell-to-sample distance admitted by the bound
  double delta_actual = 0.0;     // max cell-to-sample distance of this assignment
  double eps_bound = 0.0;        // 2 pi max|a| delta, unclamped
  double eps_bound_clamped = 0.0;  // min(2, eps_bound)
  std::size_t fallback_arcs = 0;

  /// eps of one cell: max over its axes
  double cell_eps(const TorusPartition& p, std::size_t cell) const {
    double e = 0.0;
    for (auto k : p.coords(cell)) e = std::max(e, arc_eps[k]);
    return e;
  }
};

/// Exact sup per cell of |chi_j(a) - lambda_theta(s_j a)| over chi in the cell,
/// j over axes and a in K. The crude bound uses delta = diameter sqrt(2d)/g,
/// which every in-cell sample attains at worst; nearest-image fallbacks can
/// sit farther away and then raise delta to their actual distance.
inline EpsCertificate certify_epsilon(const SampleAssignment& s, const std::vector<std::int64_t>& window,
                                      bool allow_fallback = false) {
  if (!s.fully_covered())
    throw PreconditionError(std::to_string(s.uncovered_count()) + " of " + std::to_string(s.partition().cell_count()) +
                            " cells have no sample");
  if (s.uses_fallback() && !allow_fallback) throw PreconditionError("assignment uses nearest-image fallback samples");
  const auto& part = s.partition();
  const std::size_t g = part.resolution();
  const double w = part.width();
  EpsCertificate c;
  c.window = window;
  c.resolution = g;
  c.dims = part.dims();
  c.arc_eps.resize(g);
  double axis_delta = 0.0;
  double fallback_delta = 0.0;
  for (std::size_t k = 0; k < g; ++k) {
    const double u = static_cast<double>(k) * w;
    const double alpha = s.theta().phase(*s.axis()[k]);
    c.arc_eps[k] = arc_error(u, w, alpha, window);
    c.eps = std::max(c.eps, c.arc_eps[k]);
    const double dist = arc_distance(u, w, alpha);
    axis_delta = std::max(axis_delta, dist);
    if (!s.fallback().empty() && s.fallback()[k]) {
      ++c.fallback_arcs;
      fallback_delta = std::max(fallback_delta, dist);
    }
  }
  const double root = std::sqrt(static_cast<double>(part.dims()));
  c.delta_actual = root * axis_delta;
  c.delta = std::max(part.diameter(), root * fallback_delta);
  std::int64_t amax = 0;
  for (auto a : window) amax = std::max(amax, a < 0 ? -a : a);
  c.eps_bound = 2.0 * std::numbers::pi * static_cast<double>(amax) * c.delta;
  c.eps_bound_clamped = std::min(2.0, c.eps_bound);
  return c;
}

// ---------------------------------------------------------------------------
// convergence study

struct StudyRow {
  std::size_t g = 0;
  std::int64_t window = 0;
  double eps_exact = 0.0;
  double eps_bound = 0.0;
  double eps_bound_clamped = 0.0;
  std::size_t uncovered_cells = 0;  // before nearest-image fill
  std::size_t ambiguous = 0;
};

struct StudyOptions {
  std::size_t dims = 2;
  std::optional<std::int64_t> window;  // fixed W; default: minimal_window per g
  std::int64_t window_cap = std::int64_t{1} << 20;
};

/// One row per resolution. Cells the orbit misses take the nearest image
/// point, so a finite image shows up as a positive floor rather than an error.
inline std::vector<StudyRow> convergence_study(const Theta& theta, const std::vector<std::int64_t>& k_window,
                                               const std::vector<std::size_t>& grids, const StudyOptions& opt = {}) {
  for (std::size_t i = 1; i < grids.size(); ++i)
    if (grids[i] <= grids[i - 1]) throw StructureError("resolutions must be strictly ascending");
  std::vector<StudyRow> rows;
  for (std::size_t g : grids) {
    std::int64_t w = 0;
    if (opt.window) {
      w = *opt.window;
    } else if (auto m = minimal_window(theta, g, opt.window_cap)) {
      w = std::max<std::int64_t>(*m, 1);
    } else {
      w = theta.is_rational() ? std::max<std::int64_t>(theta.q(), 1) : opt.window_cap;
    }
    auto s = sample_orbit(theta, TorusPartition(g, opt.dims), w);
    StudyRow row;
    row.g = g;
    row.window = w;
    row.uncovered_cells = s.uncovered_count();
    row.ambiguous = s.ambiguous();
    s.fill_nearest();
    const auto cert = certify_epsilon(s, k_window, true);
    row.eps_exact = cert.eps;
    row.eps_bound = cert.eps_bound;
    row.eps_bound_clamped = cert.eps_bound_clamped;
    rows.push_back(row);
  }
  return rows;
}

inline std::string study_csv(const std::vector<StudyRow>& rows) {
  std::string out = "g,W,eps_exact,eps_bound,uncovered_cells\n";
  for (const auto& r : rows)
    out += std::to_string(r.g) + "," + std::to_string(r.window) + "," + Theta::format(r.eps_exact) + "," +
           Theta::format(r.eps_bound) + "," + std::to_string(r.uncovered_cells) + "\n";
  return out;
}

}  // namespace ccr
