#pragma once

#include "mvdyn/dense.hpp"
#include "mvdyn/error.hpp"
#include "mvdyn/tolerance.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace mvdyn {

/// A finite direct sum of full matrix algebras M_{n_1} (+) ... (+) M_{n_m}.
class BlockAlgebra {
 public:
  BlockAlgebra() : sizes_{1} {}

  explicit BlockAlgebra(std::vector<int> block_sizes) : sizes_(std::move(block_sizes)) {
    if (sizes_.empty()) throw Error(ErrorCode::invariant_violation, "an algebra needs at least one block");
    for (int n : sizes_)
      if (n < 1) throw Error(ErrorCode::invariant_violation, "block sizes must be positive");
  }

  const std::vector<int>& block_sizes() const { return sizes_; }
  int num_blocks() const { return static_cast<int>(sizes_.size()); }
  int block_size(int k) const { return sizes_.at(k); }

  /// Complex dimension, sum of n_k^2.
  int dimension() const {
    int d = 0;
    for (int n : sizes_) d += n * n;
    return d;
  }

  /// Size of the block-diagonal matrix realizing the algebra, sum of n_k.
  int matrix_size() const { return std::accumulate(sizes_.begin(), sizes_.end(), 0); }

  /// Offset of block k in the coordinate vector.
  int coordinate_offset(int k) const {
    int off = 0;
    for (int i = 0; i < k; ++i) off += sizes_[i] * sizes_[i];
    return off;
  }

  bool center_is_trivial() const { return sizes_.size() == 1; }
  bool is_commutative() const {
    return std::all_of(sizes_.begin(), sizes_.end(), [](int n) { return n == 1; });
  }

  friend bool operator==(const BlockAlgebra&, const BlockAlgebra&) = default;

 private:
  std::vector<int> sizes_;
};

/// An element of a BlockAlgebra, stored block by block.
class AlgebraElement {
 public:
  AlgebraElement() : AlgebraElement(zero(BlockAlgebra{})) {}

  AlgebraElement(BlockAlgebra algebra, std::vector<Matrix> blocks)
      : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != algebra_.num_blocks())
      throw Error(ErrorCode::malformed_element, "expected " + std::to_string(algebra_.num_blocks()) +
                                                    " blocks, got " + std::to_string(blocks_.size()));
    for (int k = 0; k < algebra_.num_blocks(); ++k) {
      const int n = algebra_.block_size(k);
      if (blocks_[k].rows() != n || blocks_[k].cols() != n)
        throw Error(ErrorCode::malformed_element, "block " + std::to_string(k) + " is not " +
                                                      std::to_string(n) + "x" + std::to_string(n));
    }
  }

  static AlgebraElement zero(const BlockAlgebra& algebra) {
    std::vector<Matrix> blocks;
    for (int n : algebra.block_sizes()) blocks.push_back(Matrix::Zero(n, n));
    return {algebra, std::move(blocks)};
  }

  static AlgebraElement identity(const BlockAlgebra& algebra) {
    std::vector<Matrix> blocks;
    for (int n : algebra.block_sizes()) blocks.push_back(Matrix::Identity(n, n));
    return {algebra, std::move(blocks)};
  }

  /// e_{row,col} inside block k.
  static AlgebraElement matrix_unit(const BlockAlgebra& algebra, int k, int row, int col) {
    AlgebraElement e = zero(algebra);
    e.blocks_.at(k)(row, col) = 1.0;
    return e;
  }

  /// Inverse of coordinates(): blockwise column-major vectorization.
  static AlgebraElement from_coordinates(const BlockAlgebra& algebra, const Vector& coords) {
    if (coords.size() != algebra.dimension())
      throw Error(ErrorCode::malformed_element, "coordinate vector has wrong length");
    std::vector<Matrix> blocks;
    Eigen::Index off = 0;
    for (int n : algebra.block_sizes()) {
      blocks.push_back(unvec(coords.segment(off, n * n), n, n));
      off += n * n;
    }
    return {algebra, std::move(blocks)};
  }

  const BlockAlgebra& algebra() const { return algebra_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  const Matrix& block(int k) const { return blocks_.at(k); }

  Vector coordinates() const {
    Vector out(algebra_.dimension());
    Eigen::Index off = 0;
    for (const auto& b : blocks_) {
      out.segment(off, b.size()) = vec(b);
      off += b.size();
    }
    return out;
  }

  AlgebraElement adjoint() const {
    std::vector<Matrix> blocks;
    for (const auto& b : blocks_) blocks.push_back(b.adjoint());
    return {algebra_, std::move(blocks)};
  }

  /// Block-diagonal assembly. Only oracles and serializers should need this.
  Matrix assemble() const { return block_diagonal(blocks_); }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    return combine(a, b, [](const Matrix& x, const Matrix& y) -> Matrix { return x + y; });
  }
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    return combine(a, b, [](const Matrix& x, const Matrix& y) -> Matrix { return x - y; });
  }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    return combine(a, b, [](const Matrix& x, const Matrix& y) -> Matrix { return x * y; });
  }
  friend AlgebraElement operator*(Complex s, const AlgebraElement& a) {
    std::vector<Matrix> blocks;
    for (const auto& b : a.blocks_) blocks.push_back(s * b);
    return {a.algebra_, std::move(blocks)};
  }

 private:
  template <class Op>
  static AlgebraElement combine(const AlgebraElement& a, const AlgebraElement& b, Op op) {
    if (!(a.algebra_ == b.algebra_)) throw Error(ErrorCode::algebra_mismatch, "operands live in different algebras");
    std::vector<Matrix> blocks;
    for (std::size_t k = 0; k < a.blocks_.size(); ++k) blocks.push_back(op(a.blocks_[k], b.blocks_[k]));
    return {a.algebra_, std::move(blocks)};
  }

  BlockAlgebra algebra_;
  std::vector<Matrix> blocks_;
};

/// C*-norm of a direct sum: the largest block spectral norm.
inline double op_norm(const AlgebraElement& a) {
  double n = 0.0;
  for (const auto& b : a.blocks()) n = std::max(n, spectral_norm(b));
  return n;
}

/// The sum n_k^2 matrix units, ordered by block, then row, then column.
inline std::vector<AlgebraElement> matrix_units(const BlockAlgebra& algebra) {
  std::vector<AlgebraElement> units;
  units.reserve(algebra.dimension());
  for (int k = 0; k < algebra.num_blocks(); ++k)
    for (int r = 0; r < algebra.block_size(k); ++r)
      for (int c = 0; c < algebra.block_size(k); ++c) units.push_back(AlgebraElement::matrix_unit(algebra, k, r, c));
  return units;
}

/// A *-isomorphism between block algebras.
///
/// perm[k] names the source block that feeds target block k, and unitaries[k]
/// (size of target block k) conjugates it:  phi(a)_k = u_k a_{perm[k]} u_k^*.
class StarIsomorphism {
 public:
  StarIsomorphism() : StarIsomorphism(identity(BlockAlgebra{})) {}

  StarIsomorphism(BlockAlgebra source, BlockAlgebra target, std::vector<int> perm, std::vector<Matrix> unitaries,
                  const Tolerances& tol = {})
      : source_(std::move(source)), target_(std::move(target)), perm_(std::move(perm)), unitaries_(std::move(unitaries)) {
    const int m = target_.num_blocks();
    if (source_.num_blocks() != m || static_cast<int>(perm_.size()) != m || static_cast<int>(unitaries_.size()) != m)
      throw Error(ErrorCode::invariant_violation, "block map must be a bijection between equally many blocks");
    std::vector<bool> seen(m, false);
    for (int k = 0; k < m; ++k) {
      const int s = perm_[k];
      if (s < 0 || s >= m || seen[s]) throw Error(ErrorCode::invariant_violation, "block map is not a bijection");
      seen[s] = true;
      const int n = target_.block_size(k);
      if (source_.block_size(s) != n)
        throw Error(ErrorCode::invariant_violation, "block map must preserve block sizes");
      if (unitaries_[k].rows() != n || unitaries_[k].cols() != n)
        throw Error(ErrorCode::invariant_violation, "unitary " + std::to_string(k) + " has the wrong shape");
      const double res = unitarity_residual(unitaries_[k]);
      if (!(res <= tol.unit * std::max(1.0, spectral_norm(unitaries_[k]))))
        throw Error(ErrorCode::invariant_violation,
                    "unitary " + std::to_string(k) + " violates tau_unit (residual " + std::to_string(res) + ")");
    }
  }

  static StarIsomorphism identity(const BlockAlgebra& algebra) {
    std::vector<int> perm(algebra.num_blocks());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Matrix> us;
    for (int n : algebra.block_sizes()) us.push_back(Matrix::Identity(n, n));
    return {algebra, algebra, std::move(perm), std::move(us)};
  }

  /// Ad(u) for a unitary u in the algebra.
  static StarIsomorphism inner(const AlgebraElement& u) {
    std::vector<int> perm(u.algebra().num_blocks());
    std::iota(perm.begin(), perm.end(), 0);
    return {u.algebra(), u.algebra(), std::move(perm), u.blocks()};
  }

  const BlockAlgebra& source() const { return source_; }
  const BlockAlgebra& target() const { return target_; }
  const std::vector<int>& perm() const { return perm_; }
  const std::vector<Matrix>& unitaries() const { return unitaries_; }
  bool is_automorphism() const { return source_ == target_; }

 private:
  BlockAlgebra source_;
  BlockAlgebra target_;
  std::vector<int> perm_;
  std::vector<Matrix> unitaries_;
};

inline AlgebraElement apply(const StarIsomorphism& phi, const AlgebraElement& a) {
  if (!(a.algebra() == phi.source()))
    throw Error(ErrorCode::algebra_mismatch, "element does not belong to the source algebra");
  std::vector<Matrix> blocks;
  for (int k = 0; k < phi.target().num_blocks(); ++k) {
    const Matrix& u = phi.unitaries()[k];
    blocks.push_back(u * a.block(phi.perm()[k]) * u.adjoint());
  }
  return {phi.target(), std::move(blocks)};
}

/// phi o psi.
inline StarIsomorphism compose(const StarIsomorphism& phi, const StarIsomorphism& psi) {
  if (!(psi.target() == phi.source())) throw Error(ErrorCode::algebra_mismatch, "composition of incompatible maps");
  const int m = phi.target().num_blocks();
  std::vector<int> perm(m);
  std::vector<Matrix> us;
  for (int k = 0; k < m; ++k) {
    const int mid = phi.perm()[k];
    perm[k] = psi.perm()[mid];
    us.push_back(phi.unitaries()[k] * psi.unitaries()[mid]);
  }
  return {psi.source(), phi.target(), std::move(perm), std::move(us)};
}

inline StarIsomorphism invert_morphism(const StarIsomorphism& phi) {
  const int m = phi.target().num_blocks();
  std::vector<int> perm(m);
  std::vector<Matrix> us(m);
  for (int k = 0; k < m; ++k) {
    const int s = phi.perm()[k];
    perm[s] = k;
    us[s] = phi.unitaries()[k].adjoint();
  }
  return {phi.target(), phi.source(), std::move(perm), std::move(us)};
}

/// Inner automorphisms of a direct sum of matrix algebras are exactly the
/// ones that fix every block.
inline bool is_inner(const StarIsomorphism& alpha) {
  if (!alpha.is_automorphism()) throw Error(ErrorCode::algebra_mismatch, "is_inner needs an automorphism");
  for (int k = 0; k < static_cast<int>(alpha.perm().size()); ++k)
    if (alpha.perm()[k] != k) return false;
  return true;
}

/// Largest violation of multiplicativity and *-preservation over matrix units.
inline double homomorphism_residual(const StarIsomorphism& phi) {
  const auto units = matrix_units(phi.source());
  std::vector<AlgebraElement> images;
  for (const auto& e : units) images.push_back(apply(phi, e));
  double res = 0.0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    res = std::max(res, op_norm(apply(phi, units[i].adjoint()) - images[i].adjoint()));
    for (std::size_t j = 0; j < units.size(); ++j)
      res = std::max(res, op_norm(apply(phi, units[i] * units[j]) - images[i] * images[j]));
  }
  return res;
}

/// An algebra together with a nonempty tuple of automorphisms.
class MultivariableSystem {
 public:
  MultivariableSystem(BlockAlgebra algebra, std::vector<StarIsomorphism> maps)
      : algebra_(std::move(algebra)), maps_(std::move(maps)) {
    if (maps_.empty()) throw Error(ErrorCode::invariant_violation, "a system needs at least one map");
    for (const auto& m : maps_)
      if (!(m.source() == algebra_) || !(m.target() == algebra_))
        throw Error(ErrorCode::invariant_violation, "every map must be an automorphism of the system algebra");
  }

  const BlockAlgebra& algebra() const { return algebra_; }
  const std::vector<StarIsomorphism>& maps() const { return maps_; }
  const StarIsomorphism& map(int i) const { return maps_.at(i); }
  int arity() const { return static_cast<int>(maps_.size()); }

 private:
  BlockAlgebra algebra_;
  std::vector<StarIsomorphism> maps_;
};

/// A unital representation of a block algebra on C^d, stored through the
/// images of the matrix units (same order as matrix_units()).
class Representation {
 public:
  Representation(BlockAlgebra algebra, int dimension, std::vector<Matrix> unit_images)
      : algebra_(std::move(algebra)), dimension_(dimension), images_(std::move(unit_images)) {
    if (static_cast<int>(images_.size()) != algebra_.dimension())
      throw Error(ErrorCode::dimension_mismatch, "need one image per matrix unit");
    for (const auto& m : images_)
      if (m.rows() != dimension_ || m.cols() != dimension_)
        throw Error(ErrorCode::dimension_mismatch, "matrix-unit image has the wrong size");
    surjective_ = compute_surjective();
  }

  /// rho_k, the projection onto block k.
  static Representation canonical(const BlockAlgebra& algebra, int k) {
    return from_irreps(algebra, {k}, Matrix::Identity(algebra.block_size(k), algebra.block_size(k)));
  }

  /// b -> V diag(b_{k_1}, ..., b_{k_r}) V^*. Every unital representation is
  /// unitarily equivalent to one of this form.
  static Representation from_irreps(const BlockAlgebra& algebra, const std::vector<int>& irreps, const Matrix& v) {
    int d = 0;
    for (int k : irreps) d += algebra.block_size(k);
    if (irreps.empty() || v.rows() != d || v.cols() != d)
      throw Error(ErrorCode::dimension_mismatch, "conjugating unitary does not match the irreducible content");
    std::vector<Matrix> images;
    for (const auto& e : matrix_units(algebra)) {
      Matrix img = Matrix::Zero(d, d);
      int off = 0;
      for (int k : irreps) {
        const int n = algebra.block_size(k);
        img.block(off, off, n, n) = e.block(k);
        off += n;
      }
      images.push_back(v * img * v.adjoint());
    }
    return {algebra, d, std::move(images)};
  }

  const BlockAlgebra& algebra() const { return algebra_; }
  int dimension() const { return dimension_; }
  const std::vector<Matrix>& unit_images() const { return images_; }
  bool is_surjective() const { return surjective_; }

  Matrix operator()(const AlgebraElement& a) const {
    if (!(a.algebra() == algebra_)) throw Error(ErrorCode::algebra_mismatch, "element not in the represented algebra");
    Matrix out = Matrix::Zero(dimension_, dimension_);
    std::size_t idx = 0;
    for (int k = 0; k < algebra_.num_blocks(); ++k) {
      const Matrix& b = a.block(k);
      for (int r = 0; r < b.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c, ++idx)
          if (b(r, c) != Complex(0.0)) out += b(r, c) * images_[idx];
    }
    return out;
  }

  /// rho o phi, a representation of phi.source().
  Representation compose(const StarIsomorphism& phi) const {
    if (!(phi.target() == algebra_)) throw Error(ErrorCode::algebra_mismatch, "cannot compose: algebra mismatch");
    std::vector<Matrix> images;
    for (const auto& e : matrix_units(phi.source())) images.push_back((*this)(apply(phi, e)));
    return {phi.source(), dimension_, std::move(images)};
  }

  double homomorphism_residual() const {
    const auto units = matrix_units(algebra_);
    double res = 0.0;
    for (std::size_t i = 0; i < units.size(); ++i) {
      res = std::max(res, spectral_norm((*this)(units[i].adjoint()) - images_[i].adjoint()));
      for (std::size_t j = 0; j < units.size(); ++j)
        res = std::max(res, spectral_norm((*this)(units[i] * units[j]) - images_[i] * images_[j]));
    }
    return res;
  }

 private:
  bool compute_surjective() const {
    const int d2 = dimension_ * dimension_;
    if (static_cast<int>(images_.size()) < d2) return false;
    Matrix stacked(d2, images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) stacked.col(i) = vec(images_[i]);
    Eigen::JacobiSVD<Matrix> svd(stacked);
    const auto& s = svd.singularValues();
    return s(d2 - 1) > Tolerances{}.zero * s(0);
  }

  BlockAlgebra algebra_;
  int dimension_;
  std::vector<Matrix> images_;
  bool surjective_ = false;
};

/// An m x n matrix with entries in a block algebra, i.e. an element of M_{m,n}(B).
class ElementMatrix {
 public:
  ElementMatrix(BlockAlgebra algebra, int rows, int cols)
      : algebra_(std::move(algebra)), rows_(rows), cols_(cols),
        entries_(static_cast<std::size_t>(rows) * cols, AlgebraElement::zero(algebra_)) {}

  static ElementMatrix identity(const BlockAlgebra& algebra, int n) {
    ElementMatrix m(algebra, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = AlgebraElement::identity(algebra);
    return m;
  }

  /// Inverse of block_matrix(): per-block (rows*n_k) x (cols*n_k) matrices.
  static ElementMatrix from_blocks(const BlockAlgebra& algebra, int rows, int cols, const std::vector<Matrix>& per_block) {
    if (static_cast<int>(per_block.size()) != algebra.num_blocks())
      throw Error(ErrorCode::dimension_mismatch, "one assembled matrix per block is required");
    ElementMatrix out(algebra, rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        std::vector<Matrix> blocks;
        for (int k = 0; k < algebra.num_blocks(); ++k) {
          const int n = algebra.block_size(k);
          if (per_block[k].rows() != rows * n || per_block[k].cols() != cols * n)
            throw Error(ErrorCode::dimension_mismatch, "assembled block has the wrong shape");
          blocks.push_back(per_block[k].block(i * n, j * n, n, n));
        }
        out.at(i, j) = AlgebraElement(algebra, std::move(blocks));
      }
    return out;
  }

  const BlockAlgebra& algebra() const { return algebra_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  AlgebraElement& at(int i, int j) { return entries_.at(index(i, j)); }
  const AlgebraElement& at(int i, int j) const { return entries_.at(index(i, j)); }

  /// The image of the matrix under id_n (x) rho_k.
  Matrix block_matrix(int k) const {
    const int n = algebra_.block_size(k);
    Matrix out(rows_ * n, cols_ * n);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out.block(i * n, j * n, n, n) = at(i, j).block(k);
    return out;
  }

  ElementMatrix adjoint() const {
    ElementMatrix out(algebra_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j).adjoint();
    return out;
  }

  /// Norm in M_{m,n}(B): the largest norm over the canonical irreducibles.
  double norm() const {
    double n = 0.0;
    for (int k = 0; k < algebra_.num_blocks(); ++k) n = std::max(n, spectral_norm(block_matrix(k)));
    return n;
  }

  friend ElementMatrix operator*(const ElementMatrix& a, const ElementMatrix& b) {
    if (!(a.algebra_ == b.algebra_) || a.cols_ != b.rows_)
      throw Error(ErrorCode::dimension_mismatch, "incompatible element matrices");
    ElementMatrix out(a.algebra_, a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) {
        AlgebraElement acc = AlgebraElement::zero(a.algebra_);
        for (int l = 0; l < a.cols_; ++l) acc = acc + a.at(i, l) * b.at(l, j);
        out.at(i, j) = acc;
      }
    return out;
  }

  friend ElementMatrix operator-(const ElementMatrix& a, const ElementMatrix& b) {
    if (!(a.algebra_ == b.algebra_) || a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw Error(ErrorCode::dimension_mismatch, "incompatible element matrices");
    ElementMatrix out(a.algebra_, a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.entries_.size(); ++i) out.entries_[i] = a.entries_[i] - b.entries_[i];
    return out;
  }

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw Error(ErrorCode::dimension_mismatch, "index out of range");
    return static_cast<std::size_t>(i) * cols_ + j;
  }

  BlockAlgebra algebra_;
  int rows_;
  int cols_;
  std::vector<AlgebraElement> entries_;
};

}  // namespace mvdyn
