#pragma once

// Plancherel transform on S = R^d x R^d:
//   F[(x, y), (t, s)] = |S|^{-1/2} lambda(t.x) lambda(s.y),
// rows and columns indexed by x + |R^d| y. F = F1 (x) F1 with
// F1[x, t] = |R^d|^{-1/2} lambda(t.x), so everything is computed from the
// |R^d| x |R^d| factor.

#include <cmath>
#include <cstddef>

#include <Eigen/Eigenvalues>

#include "ccr/characters.hpp"
#include "ccr/errors.hpp"
#include "ccr/linalg.hpp"

namespace ccr {

/// Largest |S| for which dense() materializes F.
inline constexpr std::size_t kMaxDenseTransform = 1024;

namespace detail {

/// (A (x) A (x) I_n) v in the index ((y * m + x) * n + h), i.e. A acting on
/// both S-coordinates and the identity on the carrier.
inline ComplexVector kron_apply(const ComplexMatrix& a, const ComplexVector& v, std::size_t n) {
  const auto m = a.rows();
  const auto N = static_cast<Eigen::Index>(n);
  if (v.size() != m * m * N) throw StructureError("transform apply: dimension mismatch");
  // columns are y, rows are h + N x
  Eigen::Map<const ComplexMatrix> in(v.data(), N * m, m);
  ComplexMatrix step = in * a.transpose();
  ComplexVector out(v.size());
  for (Eigen::Index y = 0; y < m; ++y) {
    Eigen::Map<const ComplexMatrix> block(step.col(y).data(), N, m);
    Eigen::Map<ComplexMatrix> dst(out.data() + y * N * m, N, m);
    dst.noalias() = block * a.transpose();
  }
  return out;
}

}  // namespace detail

class PlancherelTransform {
 public:
  PlancherelTransform(const Character& lambda, std::size_t degree)
      : lambda_(lambda), module_(lambda.ring(), degree) {
    if (lambda.degree() != 1) throw StructureError("Plancherel transform needs a character of (R, +)");
    const std::size_t n = module_.size();
    if (n * n > kMaxDim) throw ResourceError("|S| = " + std::to_string(n * n) + " exceeds cap");
    const auto k = static_cast<Eigen::Index>(n);
    factor_.resize(k, k);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index x = 0; x < n; ++x)
      for (Index t = 0; t < n; ++t)
        factor_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(t)) = scale * lambda.value(module_.dot(t, x));
    const ComplexMatrix gram = factor_.adjoint() * factor_;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
    const auto& mu = eig.eigenvalues();
    // F*F - I = G (x) G - I has eigenvalues mu_i mu_j - 1
    defect_ = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i)
      for (Eigen::Index j = 0; j < mu.size(); ++j) defect_ = std::max(defect_, std::abs(mu[i] * mu[j] - 1.0));
    Eigen::BDCSVD<ComplexMatrix> svd(factor_);
    factor_rank_ = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-8) ++factor_rank_;
    factor_norm_ = svd.singularValues()[0];
  }

  const Character& lambda() const { return lambda_; }
  std::size_t degree() const { return module_.degree(); }
  const FreeModule& domain() const { return module_; }
  /// |S|
  std::size_t dim() const { return module_.size() * module_.size(); }
  const ComplexMatrix& factor() const { return factor_; }
  double factor_norm() const { return factor_norm_; }
  /// ||F* F - I||, exact from the factor's spectrum.
  double unitarity_defect() const { return defect_; }
  bool unitary(double tol = 1e-12) const { return defect_ <= tol; }
  std::size_t rank() const { return factor_rank_ * factor_rank_; }

  ComplexMatrix dense() const {
    if (dim() > kMaxDenseTransform) throw ResourceError("dense Plancherel matrix limited to |S| <= 1024");
    const auto m = factor_.rows();
    ComplexMatrix f(m * m, m * m);
    for (Eigen::Index y = 0; y < m; ++y)
      for (Eigen::Index s = 0; s < m; ++s) f.block(y * m, s * m, m, m) = factor_(y, s) * factor_;
    return f;
  }

  ComplexVector apply(const ComplexVector& v) const { return detail::kron_apply(factor_, v, 1); }
  ComplexVector apply_adjoint(const ComplexVector& v) const {
    return detail::kron_apply(factor_.adjoint(), v, 1);
  }

  /// ||F^2 - J|| with J the parity permutation (x, y) -> (-x, -y).
  double parity_defect() const {
    const std::size_t n = module_.size();
    ComplexMatrix j = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
    for (Index y = 0; y < n; ++y)
      for (Index x = 0; x < n; ++x)
        j(static_cast<Eigen::Index>(x + n * y), static_cast<Eigen::Index>(module_.neg(x) + n * module_.neg(y))) = 1.0;
    const ComplexMatrix f = dense();
    return operator_norm(f * f - j);
  }

 private:
  static constexpr std::size_t kMaxDim = std::size_t{1} << 16;
  Character lambda_;
  FreeModule module_;
  ComplexMatrix factor_;
  double defect_ = 0.0;
  double factor_norm_ = 0.0;
  std::size_t factor_rank_ = 0;
};

/// F~ = F (x) I_N on L^2(S, H), index s * N + h.
class ExtendedTransform {
 public:
  ExtendedTransform(PlancherelTransform f, std::size_t carrier_dim) : f_(std::move(f)), n_(carrier_dim) {
    if (n_ < 1) throw StructureError("carrier dimension must be positive");
  }

  const PlancherelTransform& base() const { return f_; }
  std::size_t carrier_dim() const { return n_; }
  std::size_t dim() const { return f_.dim() * n_; }

  ComplexVector apply(const ComplexVector& v) const { return detail::kron_apply(f_.factor(), v, n_); }
  ComplexVector apply_adjoint(const ComplexVector& v) const {
    return detail::kron_apply(f_.factor().adjoint(), v, n_);
  }

  ComplexMatrix dense() const {
    if (dim() > kMaxDenseTransform) throw ResourceError("dense extended transform limited to dimension 1024");
    const ComplexMatrix f = f_.dense();
    const auto N = static_cast<Eigen::Index>(n_);
    ComplexMatrix out = ComplexMatrix::Zero(f.rows() * N, f.cols() * N);
    for (Eigen::Index r = 0; r < f.rows(); ++r)
      for (Eigen::Index c = 0; c < f.cols(); ++c)
        for (Eigen::Index h = 0; h < N; ++h) out(r * N + h, c * N + h) = f(r, c);
    return out;
  }

 private:
  PlancherelTransform f_;
  std::size_t n_;
};

/// F~ for a unitary F; refuses non-unitary input.
inline ExtendedTransform extend_to_vectors(const PlancherelTransform& f, std::size_t carrier_dim, double tol = 1e-12) {
  if (!f.unitary(tol))
    throw PreconditionError("Plancherel transform is not unitary (||F*F - I|| = " + std::to_string(f.unitarity_defect()) + ")");
  return ExtendedTransform(f, carrier_dim);
}

}  // namespace ccr
