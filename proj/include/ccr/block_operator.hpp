#pragma once

// Operators on L^2(S, H) = C^S (x) C^N that move whole blocks: block row r
// holds the single block B_r in block column c(r). Translations, inflations
// and the intertwiners of the regular pair are all of this shape, and
// distances between two such operators with the same block pattern reduce to
// per-block norms.

#include <cstddef>
#include <vector>

#include "ccr/errors.hpp"
#include "ccr/linalg.hpp"

namespace ccr {

class BlockOperator {
 public:
  BlockOperator(std::vector<std::size_t> cols, std::vector<Operator> blocks)
      : cols_(std::move(cols)), blocks_(std::move(blocks)) {
    if (cols_.size() != blocks_.size() || cols_.empty()) throw StructureError("block operator: bad block count");
    block_dim_ = blocks_[0].dim();
    std::vector<bool> seen(cols_.size(), false);
    for (std::size_t r = 0; r < cols_.size(); ++r) {
      if (blocks_[r].dim() != block_dim_) throw StructureError("block operator: blocks of different sizes");
      if (cols_[r] >= cols_.size() || seen[cols_[r]]) throw StructureError("block operator: columns are not a permutation");
      seen[cols_[r]] = true;
    }
  }

  static BlockOperator diagonal(std::vector<Operator> blocks) {
    std::vector<std::size_t> cols(blocks.size());
    for (std::size_t r = 0; r < cols.size(); ++r) cols[r] = r;
    return BlockOperator(std::move(cols), std::move(blocks));
  }

  /// P (x) I_N for the permutation row r -> column cols[r].
  static BlockOperator permutation(std::vector<std::size_t> cols, std::size_t block_dim) {
    std::vector<Operator> blocks(cols.size(), Operator::identity(block_dim));
    return BlockOperator(std::move(cols), std::move(blocks));
  }

  std::size_t block_count() const { return cols_.size(); }
  std::size_t block_dim() const { return block_dim_; }
  std::size_t dim() const { return block_count() * block_dim_; }
  std::size_t col(std::size_t r) const { return cols_[r]; }
  const Operator& block(std::size_t r) const { return blocks_[r]; }

  bool same_pattern(const BlockOperator& other) const { return cols_ == other.cols_ && block_dim_ == other.block_dim_; }

  BlockOperator adjoint() const {
    std::vector<std::size_t> cols(block_count());
    std::vector<Operator> blocks(block_count());
    for (std::size_t r = 0; r < block_count(); ++r) {
      cols[cols_[r]] = r;
      blocks[cols_[r]] = blocks_[r].adjoint();
    }
    return BlockOperator(std::move(cols), std::move(blocks));
  }

  friend BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
    if (a.block_count() != b.block_count() || a.block_dim() != b.block_dim())
      throw StructureError("block operator product: shape mismatch");
    std::vector<std::size_t> cols(a.block_count());
    std::vector<Operator> blocks(a.block_count());
    for (std::size_t r = 0; r < a.block_count(); ++r) {
      const std::size_t mid = a.cols_[r];
      cols[r] = b.cols_[mid];
      blocks[r] = a.blocks_[r] * b.blocks_[mid];
    }
    return BlockOperator(std::move(cols), std::move(blocks));
  }

  ComplexVector apply(const ComplexVector& v) const {
    if (static_cast<std::size_t>(v.size()) != dim()) throw StructureError("block operator apply: dimension mismatch");
    ComplexVector out(v.size());
    const auto n = static_cast<Eigen::Index>(block_dim_);
    for (std::size_t r = 0; r < block_count(); ++r)
      blocks_[r].apply(v.segment(static_cast<Eigen::Index>(cols_[r]) * n, n),
                       out.segment(static_cast<Eigen::Index>(r) * n, n));
    return out;
  }

  /// The full operator; monomial when every block is.
  Operator flatten() const {
    bool monomial = true;
    for (const auto& b : blocks_) monomial = monomial && b.is_monomial();
    const std::size_t n = block_dim_;
    if (monomial) {
      std::vector<std::size_t> cols(dim());
      std::vector<Complex> values(dim());
      for (std::size_t r = 0; r < block_count(); ++r) {
        const auto& m = blocks_[r].monomial();
        for (std::size_t i = 0; i < n; ++i) {
          cols[r * n + i] = cols_[r] * n + m.col(i);
          values[r * n + i] = m.value(i);
        }
      }
      return Operator(MonomialMatrix(std::move(cols), std::move(values)));
    }
    const auto total = static_cast<Eigen::Index>(dim());
    ComplexMatrix out = ComplexMatrix::Zero(total, total);
    const auto k = static_cast<Eigen::Index>(n);
    for (std::size_t r = 0; r < block_count(); ++r)
      out.block(static_cast<Eigen::Index>(r) * k, static_cast<Eigen::Index>(cols_[r]) * k, k, k) = blocks_[r].dense();
    return Operator(std::move(out));
  }

 private:
  std::vector<std::size_t> cols_;
  std::vector<Operator> blocks_;
  std::size_t block_dim_ = 0;
};

/// ||a - b||. With a shared block pattern the difference is a block
/// permutation times a block-diagonal, so its norm is the largest block norm.
inline double distance(const BlockOperator& a, const BlockOperator& b) {
  if (a.dim() != b.dim()) throw StructureError("distance: dimension mismatch");
  if (a.same_pattern(b)) {
    MaxResidual worst;
    for (std::size_t r = 0; r < a.block_count(); ++r) worst.observe(a.block(r), b.block(r));
    return worst.value();
  }
  if (a.dim() <= kDenseNormLimit) return distance(a.flatten(), b.flatten());
  const auto aa = a.adjoint();
  const auto ba = b.adjoint();
  return spectral_norm_power(
      a.dim(), [&](const ComplexVector& v) -> ComplexVector { return a.apply(v) - b.apply(v); },
      [&](const ComplexVector& v) -> ComplexVector { return aa.apply(v) - ba.apply(v); });
}

inline double unitarity_defect(const BlockOperator& a) {
  double worst = 0.0;
  for (std::size_t r = 0; r < a.block_count(); ++r) worst = std::max(worst, unitarity_defect(a.block(r)));
  return worst;
}

}  // namespace ccr
