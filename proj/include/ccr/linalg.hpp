#pragma once

// Dense and monomial complex operators, spectral norms and seeded unitaries.
//
// Operators built from translations and character multiplications are
// monomial (exactly one nonzero per row and column). They are kept in that
// form so that products stay O(n) and norms of differences are exact; all
// other operators are dense Eigen matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ccr/errors.hpp"

namespace ccr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Largest dimension for which spectral norms are computed by a full SVD.
inline constexpr std::size_t kDenseNormLimit = 512;

struct PowerIterationOptions {
  double relative_tolerance = 1e-3;
  int max_iterations = 500;
  std::uint64_t seed = 0x5eed5eedULL;
};

inline ComplexVector gaussian_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = Complex(re, im);
  }
  return v;
}

/// Estimates ||A|| by power iteration on A*A, given matrix-free products.
/// The returned value ||A v|| (v unit) never exceeds the true norm.
template <typename Apply, typename ApplyAdjoint>
double spectral_norm_power(std::size_t dim, Apply&& apply, ApplyAdjoint&& apply_adjoint,
                           const PowerIterationOptions& options = {}) {
  if (dim == 0) return 0.0;
  std::mt19937_64 rng(options.seed);
  ComplexVector v = gaussian_vector(dim, rng);
  v.normalize();
  double sigma = 0.0;
  double previous = -1.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const ComplexVector w = apply(v);
    sigma = std::max(sigma, w.norm());
    const ComplexVector z = apply_adjoint(w);
    const double zn = z.norm();
    if (zn == 0.0) break;
    v = z / zn;
    if (it >= 2 && std::abs(sigma - previous) <= options.relative_tolerance * sigma) break;
    previous = sigma;
  }
  return sigma;
}

/// Largest singular value: exact SVD up to kDenseNormLimit, power iteration above.
inline double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (static_cast<std::size_t>(std::max(m.rows(), m.cols())) <= kDenseNormLimit) {
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  }
  return spectral_norm_power(
      static_cast<std::size_t>(m.cols()), [&](const ComplexVector& v) -> ComplexVector { return m * v; },
      [&](const ComplexVector& v) -> ComplexVector { return m.adjoint() * v; });
}

/// Permutation matrix with arbitrary complex weights: row i holds value(i) at column col(i).
class MonomialMatrix {
 public:
  MonomialMatrix() = default;

  MonomialMatrix(std::vector<std::size_t> cols, std::vector<Complex> values)
      : cols_(std::move(cols)), values_(std::move(values)) {
    if (cols_.size() != values_.size()) throw StructureError("monomial matrix: column/value length mismatch");
    std::vector<bool> seen(cols_.size(), false);
    for (std::size_t c : cols_) {
      if (c >= cols_.size() || seen[c]) throw StructureError("monomial matrix: columns are not a permutation");
      seen[c] = true;
    }
  }

  static MonomialMatrix identity(std::size_t n) {
    std::vector<std::size_t> cols(n);
    for (std::size_t i = 0; i < n; ++i) cols[i] = i;
    return MonomialMatrix(std::move(cols), std::vector<Complex>(n, Complex(1.0, 0.0)));
  }

  std::size_t dim() const { return cols_.size(); }
  std::size_t col(std::size_t row) const { return cols_[row]; }
  Complex value(std::size_t row) const { return values_[row]; }
  const std::vector<std::size_t>& cols() const { return cols_; }
  const std::vector<Complex>& values() const { return values_; }

  bool same_pattern(const MonomialMatrix& other) const { return cols_ == other.cols_; }

  MonomialMatrix operator*(const MonomialMatrix& rhs) const {
    if (dim() != rhs.dim()) throw StructureError("monomial product: dimension mismatch");
    std::vector<std::size_t> cols(dim());
    std::vector<Complex> values(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      const std::size_t mid = cols_[i];
      cols[i] = rhs.cols_[mid];
      values[i] = values_[i] * rhs.values_[mid];
    }
    return MonomialMatrix(std::move(cols), std::move(values));
  }

  MonomialMatrix adjoint() const {
    std::vector<std::size_t> cols(dim());
    std::vector<Complex> values(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      cols[cols_[i]] = i;
      values[cols_[i]] = std::conj(values_[i]);
    }
    return MonomialMatrix(std::move(cols), std::move(values));
  }

  MonomialMatrix scaled(Complex s) const {
    std::vector<Complex> values(values_);
    for (auto& v : values) v *= s;
    return MonomialMatrix(cols_, std::move(values));
  }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim(); ++i)
      if (cols_[i] == i) t += values_[i];
    return t;
  }

  ComplexMatrix dense() const {
    const auto n = static_cast<Eigen::Index>(dim());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < dim(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols_[i])) = values_[i];
    return m;
  }

 private:
  std::vector<std::size_t> cols_;
  std::vector<Complex> values_;
};

/// Returns the monomial form of m when every row and column has exactly one nonzero entry.
inline std::optional<MonomialMatrix> as_monomial(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<std::size_t> cols(n);
  std::vector<Complex> values(n);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    int found = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const Complex v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != Complex(0.0, 0.0)) {
        if (++found > 1) return std::nullopt;
        cols[i] = j;
        values[i] = v;
      }
    }
    if (found != 1 || seen[cols[i]]) return std::nullopt;
    seen[cols[i]] = true;
  }
  return MonomialMatrix(std::move(cols), std::move(values));
}

/// Immutable square operator stored either in monomial or dense form.
/// Copies share storage.
class Operator {
 public:
  Operator() : Operator(MonomialMatrix()) {}
  Operator(MonomialMatrix m) : rep_(std::make_shared<const Rep>(std::move(m))) {}
  Operator(ComplexMatrix m) : rep_(std::make_shared<const Rep>(std::move(m))) {
    const auto& d = std::get<ComplexMatrix>(*rep_);
    if (d.rows() != d.cols()) throw StructureError("operator: matrix is not square");
  }

  static Operator identity(std::size_t n) { return Operator(MonomialMatrix::identity(n)); }

  /// Dense input is converted to monomial form when its sparsity pattern allows it.
  static Operator compact(const ComplexMatrix& m) {
    if (auto mono = as_monomial(m)) return Operator(std::move(*mono));
    return Operator(m);
  }

  std::size_t dim() const {
    if (const auto* m = std::get_if<MonomialMatrix>(rep_.get())) return m->dim();
    return static_cast<std::size_t>(std::get<ComplexMatrix>(*rep_).rows());
  }

  bool is_monomial() const { return std::holds_alternative<MonomialMatrix>(*rep_); }

  const MonomialMatrix& monomial() const {
    if (!is_monomial()) throw StructureError("operator is not monomial");
    return std::get<MonomialMatrix>(*rep_);
  }

  /// Dense matrix; borrowed when already dense.
  const ComplexMatrix& dense_ref(ComplexMatrix& scratch) const {
    if (const auto* d = std::get_if<ComplexMatrix>(rep_.get())) return *d;
    scratch = std::get<MonomialMatrix>(*rep_).dense();
    return scratch;
  }

  ComplexMatrix dense() const {
    ComplexMatrix scratch;
    return dense_ref(scratch);
  }

  Operator adjoint() const {
    if (is_monomial()) return Operator(monomial().adjoint());
    return Operator(ComplexMatrix(std::get<ComplexMatrix>(*rep_).adjoint()));
  }

  Operator scaled(Complex s) const {
    if (is_monomial()) return Operator(monomial().scaled(s));
    return Operator(ComplexMatrix(std::get<ComplexMatrix>(*rep_) * s));
  }

  Complex trace() const {
    if (is_monomial()) return monomial().trace();
    return std::get<ComplexMatrix>(*rep_).trace();
  }

  Complex entry(std::size_t i, std::size_t j) const {
    if (is_monomial()) return monomial().col(i) == j ? monomial().value(i) : Complex(0.0, 0.0);
    return std::get<ComplexMatrix>(*rep_)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// out = A * in, for vector segments of length dim().
  template <typename In, typename Out>
  void apply(const In& in, Out&& out) const {
    if (const auto* m = std::get_if<MonomialMatrix>(rep_.get())) {
      for (std::size_t i = 0; i < m->dim(); ++i)
        out[static_cast<Eigen::Index>(i)] = m->value(i) * in[static_cast<Eigen::Index>(m->col(i))];
    } else {
      out.noalias() = std::get<ComplexMatrix>(*rep_) * in;
    }
  }

  ComplexVector operator*(const ComplexVector& v) const {
    if (static_cast<std::size_t>(v.size()) != dim()) throw StructureError("operator apply: dimension mismatch");
    ComplexVector out(v.size());
    apply(v, out);
    return out;
  }

  friend Operator operator*(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw StructureError("operator product: dimension mismatch");
    const auto* am = std::get_if<MonomialMatrix>(a.rep_.get());
    const auto* bm = std::get_if<MonomialMatrix>(b.rep_.get());
    if (am && bm) return Operator((*am) * (*bm));
    const auto n = static_cast<Eigen::Index>(a.dim());
    if (am) {
      const auto& bd = std::get<ComplexMatrix>(*b.rep_);
      ComplexMatrix out(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        out.row(i) = am->value(static_cast<std::size_t>(i)) * bd.row(static_cast<Eigen::Index>(am->col(static_cast<std::size_t>(i))));
      return Operator(std::move(out));
    }
    const auto& ad = std::get<ComplexMatrix>(*a.rep_);
    if (bm) {
      // column col(i) of the product is value(i) times column i of a
      ComplexMatrix out(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        out.col(static_cast<Eigen::Index>(bm->col(static_cast<std::size_t>(i)))) = bm->value(static_cast<std::size_t>(i)) * ad.col(i);
      return Operator(std::move(out));
    }
    return Operator(ComplexMatrix(ad * std::get<ComplexMatrix>(*b.rep_)));
  }

 private:
  using Rep = std::variant<MonomialMatrix, ComplexMatrix>;
  std::shared_ptr<const Rep> rep_;
};

/// tr(a b) without forming the product.
inline Complex trace_product(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw StructureError("trace_product: dimension mismatch");
  if (a.is_monomial()) {
    const auto& m = a.monomial();
    Complex t = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) t += m.value(i) * b.entry(m.col(i), i);
    return t;
  }
  if (b.is_monomial()) return trace_product(b, a);
  ComplexMatrix sa, sb;
  const auto& da = a.dense_ref(sa);
  const auto& db = b.dense_ref(sb);
  return (da.array() * db.transpose().array()).sum();
}

/// ||a - b|| in the operator norm.
inline double distance(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw StructureError("distance: dimension mismatch");
  if (a.is_monomial() && b.is_monomial()) {
    const auto& ma = a.monomial();
    const auto& mb = b.monomial();
    if (ma.same_pattern(mb)) {
      double worst = 0.0;
      for (std::size_t i = 0; i < ma.dim(); ++i) worst = std::max(worst, std::abs(ma.value(i) - mb.value(i)));
      return worst;
    }
    if (a.dim() > kDenseNormLimit) {
      return spectral_norm_power(
          a.dim(), [&](const ComplexVector& v) -> ComplexVector { return ComplexVector(a * v - b * v); },
          [&](const ComplexVector& v) -> ComplexVector {
            return ComplexVector(a.adjoint() * v - b.adjoint() * v);
          });
    }
  }
  ComplexMatrix sa, sb;
  return operator_norm(a.dense_ref(sa) - b.dense_ref(sb));
}

inline double norm(const Operator& a) {
  if (a.is_monomial()) {
    double worst = 0.0;
    for (const auto& v : a.monomial().values()) worst = std::max(worst, std::abs(v));
    return worst;
  }
  ComplexMatrix scratch;
  return operator_norm(a.dense_ref(scratch));
}

/// ||a* a - I||.
inline double unitarity_defect(const Operator& a) {
  if (a.is_monomial()) {
    double worst = 0.0;
    for (const auto& v : a.monomial().values()) worst = std::max(worst, std::abs(std::norm(v) - 1.0));
    return worst;
  }
  ComplexMatrix scratch;
  const auto& d = a.dense_ref(scratch);
  return operator_norm(d.adjoint() * d - ComplexMatrix::Identity(d.rows(), d.cols()));
}

/// Running maximum of ||a - b|| over many pairs. Dense differences whose
/// Frobenius norm cannot beat the current maximum skip the SVD.
class MaxResidual {
 public:
  void observe(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw StructureError("residual: dimension mismatch");
    if (a.is_monomial() && b.is_monomial()) {
      value_ = std::max(value_, distance(a, b));
      return;
    }
    ComplexMatrix sa, sb;
    const ComplexMatrix diff = a.dense_ref(sa) - b.dense_ref(sb);
    if (diff.norm() <= value_) return;
    value_ = std::max(value_, operator_norm(diff));
  }
  void observe(double residual) { value_ = std::max(value_, residual); }
  double value() const { return value_; }

 private:
  double value_ = 0.0;
};

/// Block-diagonal sum of operators; monomial when every summand is.
inline Operator block_diagonal(std::span<const Operator> blocks) {
  std::size_t total = 0;
  bool monomial = true;
  for (const auto& b : blocks) {
    total += b.dim();
    monomial = monomial && b.is_monomial();
  }
  if (monomial) {
    std::vector<std::size_t> cols;
    std::vector<Complex> values;
    cols.reserve(total);
    values.reserve(total);
    std::size_t offset = 0;
    for (const auto& b : blocks) {
      const auto& m = b.monomial();
      for (std::size_t i = 0; i < m.dim(); ++i) {
        cols.push_back(offset + m.col(i));
        values.push_back(m.value(i));
      }
      offset += m.dim();
    }
    return Operator(MonomialMatrix(std::move(cols), std::move(values)));
  }
  const auto n = static_cast<Eigen::Index>(total);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    const auto k = static_cast<Eigen::Index>(b.dim());
    out.block(offset, offset, k, k) = b.dense();
    offset += k;
  }
  return Operator(std::move(out));
}

/// Haar-distributed unitary: QR of a seeded complex Gaussian matrix with the
/// phases of R's diagonal moved into Q.
inline ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto k = static_cast<Eigen::Index>(n);
  ComplexMatrix g(k, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < k; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(k, k);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < k; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

}  // namespace ccr
