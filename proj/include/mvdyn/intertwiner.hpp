#pragma once

#include "mvdyn/algebra.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace mvdyn {

/// max_g || phi(g) c - c psi(g) || over the matrix units g.
inline double intertwining_residual(const Representation& phi, const Matrix& c, const Representation& psi) {
  double res = 0.0;
  const auto& a = phi.unit_images();
  const auto& b = psi.unit_images();
  for (std::size_t g = 0; g < a.size(); ++g) res = std::max(res, spectral_norm(a[g] * c - c * b[g]));
  return res;
}

/// An m x n array of d x d matrices c_ij together with the representation
/// families {phi_i} (rows) and {psi_j} (columns) it is meant to intertwine.
class IntertwinerMatrix {
 public:
  IntertwinerMatrix(std::vector<Representation> row_reps, std::vector<Representation> col_reps,
                    std::vector<Matrix> entries)
      : row_reps_(std::move(row_reps)), col_reps_(std::move(col_reps)), entries_(std::move(entries)) {
    if (row_reps_.empty() || col_reps_.empty())
      throw Error(ErrorCode::dimension_mismatch, "intertwiner matrix needs at least one row and one column");
    if (entries_.size() != row_reps_.size() * col_reps_.size())
      throw Error(ErrorCode::dimension_mismatch, "entry count does not match rows x cols");
    dim_ = row_reps_.front().dimension();
    const BlockAlgebra& alg = row_reps_.front().algebra();
    for (const auto* family : {&row_reps_, &col_reps_})
      for (const auto& r : *family)
        if (r.dimension() != dim_ || !(r.algebra() == alg))
          throw Error(ErrorCode::dimension_mismatch, "all representations must share algebra and dimension");
    for (const auto& e : entries_)
      if (e.rows() != dim_ || e.cols() != dim_) throw Error(ErrorCode::dimension_mismatch, "entry has the wrong size");
    residual_ = 0.0;
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < cols(); ++j)
        residual_ = std::max(residual_, intertwining_residual(row_reps_[i], entry(i, j), col_reps_[j]));
  }

  int rows() const { return static_cast<int>(row_reps_.size()); }
  int cols() const { return static_cast<int>(col_reps_.size()); }
  int dimension() const { return dim_; }
  const Matrix& entry(int i, int j) const { return entries_.at(static_cast<std::size_t>(i) * cols() + j); }
  const std::vector<Matrix>& entries() const { return entries_; }
  const std::vector<Representation>& row_reps() const { return row_reps_; }
  const std::vector<Representation>& col_reps() const { return col_reps_; }
  double residual() const { return residual_; }

  /// Largest entry norm; the reference scale for zero decisions.
  double scale() const {
    double s = 0.0;
    for (const auto& e : entries_) s = std::max(s, spectral_norm(e));
    return s;
  }

  Matrix assemble() const {
    Matrix out(rows() * dim_, cols() * dim_);
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < cols(); ++j) out.block(i * dim_, j * dim_, dim_, dim_) = entry(i, j);
    return out;
  }

 private:
  std::vector<Representation> row_reps_;
  std::vector<Representation> col_reps_;
  std::vector<Matrix> entries_;
  int dim_ = 0;
  double residual_ = 0.0;
};

inline double verify_intertwining(const IntertwinerMatrix& m) { return m.residual(); }

/// Hilbert-Schmidt orthonormal basis of {c : phi(b) c = c psi(b) for all b}.
///
/// The space is the kernel of c -> (phi(g) c - c psi(g))_g over matrix units
/// g. With column-major vec this map is the stack of I (x) phi(g) - psi(g)^T (x) I.
inline std::vector<Matrix> intertwiner_space(const Representation& phi, const Representation& psi,
                                             const Tolerances& tol = {}) {
  if (!(phi.algebra() == psi.algebra()) || phi.dimension() != psi.dimension())
    throw Error(ErrorCode::dimension_mismatch, "representations must share algebra and dimension");
  const int d = phi.dimension();
  const int d2 = d * d;
  const auto& a = phi.unit_images();
  const auto& b = psi.unit_images();
  const Matrix id = Matrix::Identity(d, d);
  Matrix k(static_cast<Eigen::Index>(a.size()) * d2, d2);
  for (std::size_t g = 0; g < a.size(); ++g)
    k.middleRows(static_cast<Eigen::Index>(g) * d2, d2) = kron(id, a[g]) - kron(b[g].transpose(), id);
  const Matrix basis = null_space(k, tol.zero);
  std::vector<Matrix> out;
  for (Eigen::Index c = 0; c < basis.cols(); ++c) out.push_back(unvec(basis.col(c), d, d));
  return out;
}

struct Dichotomy {
  enum class Kind { zero, invertible, borderline, not_an_intertwiner };

  Kind kind = Kind::zero;
  double norm = 0.0;
  /// Intertwining residual, or the scalar-defect of cc^* / c^*c when the
  /// relation held but the products were not scalar.
  double residual = 0.0;
  /// cc^* = lambda I for invertible c.
  double lambda = 0.0;
  /// max(||cc^* - lambda I||, ||c^*c - lambda I||).
  double scalar_residual = 0.0;
  Matrix inverse;
  Matrix unitary;

  bool is_invertible() const { return kind == Kind::invertible; }
};

inline std::string_view to_string(Dichotomy::Kind kind) {
  switch (kind) {
    case Dichotomy::Kind::zero: return "Zero";
    case Dichotomy::Kind::invertible: return "Invertible";
    case Dichotomy::Kind::borderline: return "Borderline";
    case Dichotomy::Kind::not_an_intertwiner: return "NotAnIntertwiner";
  }
  return "Unknown";
}

/// Zero-or-invertible classification of an intertwiner between two
/// representations onto M_d.
///
/// `scale` is the reference magnitude for the zero decision (the largest
/// entry norm when called from elimination). Throws not_surjective when either
/// representation does not map onto M_d.
inline Dichotomy key_dichotomy(const Matrix& c, const Representation& phi, const Representation& psi,
                               double scale = 1.0, const Tolerances& tol = {}) {
  if (!phi.is_surjective() || !psi.is_surjective())
    throw Error(ErrorCode::not_surjective, "key_dichotomy needs representations onto the full matrix algebra");
  if (c.rows() != phi.dimension() || c.cols() != psi.dimension())
    throw Error(ErrorCode::dimension_mismatch, "candidate intertwiner has the wrong size");

  Dichotomy out;
  out.norm = spectral_norm(c);
  out.residual = intertwining_residual(phi, c, psi);
  if (out.residual > tol.hom * std::max(out.norm, scale)) {
    out.kind = Dichotomy::Kind::not_an_intertwiner;
    return out;
  }
  const double zero_cut = tol.zero * scale;
  if (out.norm <= zero_cut) {
    out.kind = Dichotomy::Kind::zero;
    return out;
  }
  if (out.norm < tol.borderline_factor * zero_cut) {
    out.kind = Dichotomy::Kind::borderline;
    return out;
  }

  const Eigen::Index d = c.rows();
  const Matrix cc = c * c.adjoint();
  const Matrix ctc = c.adjoint() * c;
  const double lambda = cc.trace().real() / static_cast<double>(d);
  const Matrix id = Matrix::Identity(d, d);
  out.lambda = lambda;
  out.scalar_residual = std::max(spectral_norm(cc - lambda * id), spectral_norm(ctc - lambda * id));
  if (out.scalar_residual > tol.zero * out.norm * out.norm) {
    out.kind = Dichotomy::Kind::not_an_intertwiner;
    out.residual = out.scalar_residual;
    return out;
  }
  out.kind = Dichotomy::Kind::invertible;
  out.inverse = c.adjoint() / lambda;
  out.unitary = c / std::sqrt(lambda);
  return out;
}

/// Entries of an element matrix in block k, seen as an intertwiner between
/// rho_k o beta_i (rows) and rho_k o theta_j (columns).
inline IntertwinerMatrix block_intertwiner(const ElementMatrix& m, int k, const std::vector<StarIsomorphism>& row_maps,
                                           const std::vector<StarIsomorphism>& col_maps) {
  if (static_cast<int>(row_maps.size()) != m.rows() || static_cast<int>(col_maps.size()) != m.cols())
    throw Error(ErrorCode::dimension_mismatch, "one map per row and per column is required");
  const Representation rho = Representation::canonical(m.algebra(), k);
  std::vector<Representation> rows, cols;
  for (const auto& beta : row_maps) rows.push_back(rho.compose(beta));
  for (const auto& theta : col_maps) cols.push_back(rho.compose(theta));
  std::vector<Matrix> entries;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) entries.push_back(m.at(i, j).block(k));
  return {std::move(rows), std::move(cols), std::move(entries)};
}

/// max over i, j, matrix units b of || beta_i(b) m_ij - m_ij theta_j(b) ||.
inline double element_intertwining_residual(const ElementMatrix& m, const std::vector<StarIsomorphism>& row_maps,
                                            const std::vector<StarIsomorphism>& col_maps) {
  double res = 0.0;
  for (int k = 0; k < m.algebra().num_blocks(); ++k)
    res = std::max(res, verify_intertwining(block_intertwiner(m, k, row_maps, col_maps)));
  return res;
}

}  // namespace mvdyn
