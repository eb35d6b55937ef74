#pragma once

#include "mvdyn/hash.hpp"
#include "mvdyn/intertwiner.hpp"

#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mvdyn {

/// Adds multiplier * (row pivot) to row target.
struct RowOperation {
  int target = 0;
  int pivot = 0;
  Matrix multiplier;
};

struct EliminationCertificate {
  std::string input_hash;
  /// Column j of the eliminated matrix is column column_permutation[j] of the input.
  std::vector<int> column_permutation;
  /// Triangularizing operations first, then the diagonalizing pass.
  std::vector<RowOperation> row_ops;
  std::size_t forward_ops = 0;
  std::vector<Matrix> diagonal;
  std::vector<double> step_residuals;
};

/// Elimination ran into a row that is zero in every column.
struct DimensionContradiction {
  int zero_row = 0;
  IntertwinerMatrix state;
};

using EliminationResult = std::variant<EliminationCertificate, DimensionContradiction>;

inline std::string hash_intertwiner_matrix(const IntertwinerMatrix& m) {
  Fnv1a h;
  const int shape[3] = {m.rows(), m.cols(), m.dimension()};
  h.update(shape, sizeof(shape));
  auto feed = [&h](const Matrix& x) {
    // Adding +0.0 maps -0.0 to +0.0, so serialized copies hash alike.
    const Matrix y = x.unaryExpr([](const Complex& z) { return Complex(z.real() + 0.0, z.imag() + 0.0); });
    h.update(y.data(), sizeof(Complex) * static_cast<std::size_t>(y.size()));
  };
  for (const auto& e : m.entries()) feed(e);
  for (const auto* family : {&m.row_reps(), &m.col_reps()})
    for (const auto& r : *family)
      for (const auto& img : r.unit_images()) feed(img);
  return h.hex();
}

/// M F_pi: column j of the result is column perm[j] of m, with col_reps permuted alike.
inline IntertwinerMatrix column_permute(const IntertwinerMatrix& m, std::span<const int> perm) {
  const int n = m.cols();
  if (static_cast<int>(perm.size()) != n) throw Error(ErrorCode::dimension_mismatch, "permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) throw Error(ErrorCode::dimension_mismatch, "not a permutation");
    seen[p] = true;
  }
  std::vector<Representation> cols;
  for (int j = 0; j < n; ++j) cols.push_back(m.col_reps()[perm[j]]);
  std::vector<Matrix> entries;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < n; ++j) entries.push_back(m.entry(i, perm[j]));
  return {m.row_reps(), std::move(cols), std::move(entries)};
}

namespace detail {

inline IntertwinerMatrix add_row_multiple(const IntertwinerMatrix& m, int target, int pivot, const Matrix& multiplier) {
  std::vector<Matrix> entries = m.entries();
  for (int j = 0; j < m.cols(); ++j) {
    auto& e = entries[static_cast<std::size_t>(target) * m.cols() + j];
    e = e + multiplier * m.entry(pivot, j);
  }
  return {m.row_reps(), m.col_reps(), std::move(entries)};
}

}  // namespace detail

struct RowElimination {
  IntertwinerMatrix result;
  Matrix multiplier;
};

/// E_hk M: clears entry (h, k) using the invertible pivot c_kk.
/// `scale` is the reference for the pivot's zero decision; 0 means "use M's own scale".
inline RowElimination row_eliminate(const IntertwinerMatrix& m, int h, int k, const Tolerances& tol = {},
                                    double scale = 0.0) {
  if (h == k || h < 0 || k < 0 || h >= m.rows() || k >= m.rows() || k >= m.cols())
    throw Error(ErrorCode::dimension_mismatch, "row_eliminate needs distinct in-range rows and a diagonal pivot");
  if (scale <= 0.0) scale = m.scale();
  const Dichotomy pivot = key_dichotomy(m.entry(k, k), m.row_reps()[k], m.col_reps()[k], scale, tol);
  if (!pivot.is_invertible())
    throw Error(ErrorCode::non_invertible_pivot, "pivot (" + std::to_string(k) + "," + std::to_string(k) +
                                                     ") classified as " + std::string(to_string(pivot.kind)));
  Matrix multiplier = -m.entry(h, k) * pivot.inverse;
  return {detail::add_row_multiple(m, h, k, multiplier), std::move(multiplier)};
}

/// Intertwining-preserving Gaussian elimination over a trivial-center target.
///
/// Row r picks, among columns j >= r whose entry classifies as invertible,
/// the best conditioned one; the column swap is recorded, the entries below
/// are cleared, and a final pass clears everything above the diagonal.
inline EliminationResult gaussian_eliminate(const IntertwinerMatrix& input, const Tolerances& tol = {}) {
  const int m = input.rows();
  const int n = input.cols();
  if (m < n) throw Error(ErrorCode::dimension_mismatch, "elimination needs at least as many rows as columns");
  for (const auto* family : {&input.row_reps(), &input.col_reps()})
    for (const auto& r : *family)
      if (!r.is_surjective())
        throw Error(ErrorCode::not_surjective, "elimination needs representations onto the full matrix algebra");

  const double scale = input.scale();
  EliminationCertificate cert;
  cert.input_hash = hash_intertwiner_matrix(input);
  cert.column_permutation.resize(n);
  std::iota(cert.column_permutation.begin(), cert.column_permutation.end(), 0);

  IntertwinerMatrix work = input;
  if (scale == 0.0) return DimensionContradiction{0, std::move(work)};

  for (int r = 0; r < n; ++r) {
    int best = -1;
    double best_sigma = -1.0;
    bool ambiguous = false;
    for (int j = r; j < n; ++j) {
      const Dichotomy d = key_dichotomy(work.entry(r, j), work.row_reps()[r], work.col_reps()[j], scale, tol);
      switch (d.kind) {
        case Dichotomy::Kind::invertible:
          if (std::sqrt(d.lambda) > best_sigma) {
            best_sigma = std::sqrt(d.lambda);
            best = j;
          }
          break;
        case Dichotomy::Kind::borderline: ambiguous = true; break;
        case Dichotomy::Kind::not_an_intertwiner:
          throw Error(ErrorCode::not_an_intertwiner,
                      "entry (" + std::to_string(r) + "," + std::to_string(j) + ") does not intertwine");
        case Dichotomy::Kind::zero: break;
      }
    }
    if (best < 0) {
      if (ambiguous)
        throw Error(ErrorCode::numerically_indeterminate, "row " + std::to_string(r) + " has only borderline pivots");
      return DimensionContradiction{r, std::move(work)};
    }
    if (best != r) {
      std::vector<int> swap(n);
      std::iota(swap.begin(), swap.end(), 0);
      std::swap(swap[r], swap[best]);
      work = column_permute(work, swap);
      std::swap(cert.column_permutation[r], cert.column_permutation[best]);
      cert.step_residuals.push_back(work.residual());
    }
    for (int h = r + 1; h < m; ++h) {
      if (work.entry(h, r).norm() == 0.0) continue;
      RowElimination step = row_eliminate(work, h, r, tol, scale);
      cert.row_ops.push_back({h, r, std::move(step.multiplier)});
      work = std::move(step.result);
      cert.step_residuals.push_back(work.residual());
    }
  }
  // Everything below the diagonal is cleared, so surplus rows are zero.
  if (m > n) return DimensionContradiction{n, std::move(work)};
  cert.forward_ops = cert.row_ops.size();

  for (int k = n - 1; k > 0; --k)
    for (int h = 0; h < k; ++h) {
      if (work.entry(h, k).norm() == 0.0) continue;
      RowElimination step = row_eliminate(work, h, k, tol, scale);
      cert.row_ops.push_back({h, k, std::move(step.multiplier)});
      work = std::move(step.result);
      cert.step_residuals.push_back(work.residual());
    }
  for (int i = 0; i < n; ++i) cert.diagonal.push_back(work.entry(i, i));
  return cert;
}

/// Re-applies the recorded column permutation and row operations to `input`.
inline IntertwinerMatrix replay(const IntertwinerMatrix& input, const EliminationCertificate& cert) {
  IntertwinerMatrix work = column_permute(input, cert.column_permutation);
  for (const auto& op : cert.row_ops) {
    if (op.target < 0 || op.target >= work.rows() || op.pivot < 0 || op.pivot >= work.rows())
      throw Error(ErrorCode::dimension_mismatch, "row operation out of range");
    work = detail::add_row_multiple(work, op.target, op.pivot, op.multiplier);
  }
  return work;
}

struct EliminationCheck {
  bool hash_matches = false;
  /// Largest deviation of the replayed matrix from diag(cert.diagonal), relative to the input scale.
  double replay_error = 0.0;
  /// Largest residual of d_i between phi_i and psi_{pi(i)}, relative to the input scale.
  double diagonal_residual = 0.0;
  bool diagonal_invertible = false;
  bool passed = false;
};

inline EliminationCheck verify_elimination_certificate(const IntertwinerMatrix& input, const EliminationCertificate& cert,
                                                       const Tolerances& tol = {}, double replay_tol = 1e-9) {
  EliminationCheck out;
  out.hash_matches = cert.input_hash == hash_intertwiner_matrix(input);
  const int n = input.cols();
  if (input.rows() != n || static_cast<int>(cert.diagonal.size()) != n ||
      static_cast<int>(cert.column_permutation.size()) != n)
    return out;
  const double scale = std::max(input.scale(), 1e-300);
  const IntertwinerMatrix replayed = replay(input, cert);
  out.diagonal_invertible = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Matrix expected = i == j ? cert.diagonal[i] : Matrix::Zero(input.dimension(), input.dimension());
      out.replay_error = std::max(out.replay_error, spectral_norm(replayed.entry(i, j) - expected) / scale);
    }
  for (int i = 0; i < n; ++i) {
    const auto& phi = input.row_reps()[i];
    const auto& psi = input.col_reps()[cert.column_permutation[i]];
    out.diagonal_residual = std::max(out.diagonal_residual, intertwining_residual(phi, cert.diagonal[i], psi) / scale);
    if (!key_dichotomy(cert.diagonal[i], phi, psi, scale, tol).is_invertible()) out.diagonal_invertible = false;
  }
  out.passed = out.hash_matches && out.diagonal_invertible && out.replay_error <= replay_tol &&
               out.diagonal_residual <= replay_tol;
  return out;
}

struct RightInverseResult {
  bool right_invertible = false;
  std::optional<ElementMatrix> witness;
  double witness_residual = 0.0;
  /// Smallest row-rank singular value over all blocks, relative to the largest.
  double relative_gap = 0.0;
};

/// Decides right invertibility of an m x n matrix over B block by block:
/// the image under id_n (x) rho_k must have full row rank for every k.
inline RightInverseResult right_invertible_test(const ElementMatrix& b, const Tolerances& tol = {},
                                                double witness_tol = 1e-8) {
  RightInverseResult out;
  const BlockAlgebra& alg = b.algebra();
  if (b.rows() > b.cols()) return out;
  std::vector<Eigen::JacobiSVD<Matrix>> svds;
  double scale = 0.0;
  for (int k = 0; k < alg.num_blocks(); ++k) {
    svds.emplace_back(b.block_matrix(k), Eigen::ComputeThinU | Eigen::ComputeThinV);
    scale = std::max(scale, svds.back().singularValues()(0));
  }
  if (scale == 0.0) return out;
  double gap = 1.0;
  std::vector<Matrix> pinv;
  for (int k = 0; k < alg.num_blocks(); ++k) {
    const auto& svd = svds[k];
    const auto& s = svd.singularValues();
    const Eigen::Index r = b.rows() * alg.block_size(k);
    gap = std::min(gap, s(r - 1) / scale);
    if (s(r - 1) <= tol.zero * scale) {
      out.relative_gap = gap;
      return out;
    }
    const Matrix& u = svd.matrixU();
    const Matrix& v = svd.matrixV();
    pinv.push_back(v.leftCols(r) * s.head(r).cwiseInverse().asDiagonal() * u.leftCols(r).adjoint());
  }
  out.relative_gap = gap;
  ElementMatrix d = ElementMatrix::from_blocks(alg, b.cols(), b.rows(), pinv);
  out.witness_residual = (b * d - ElementMatrix::identity(alg, b.rows())).norm();
  out.right_invertible = out.witness_residual <= witness_tol;
  out.witness = std::move(d);
  return out;
}

/// A right inverse of a square matrix over a finite-dimensional algebra is
/// automatically a left inverse; both products are checked.
inline ElementMatrix two_sided_inverse(const ElementMatrix& b, const Tolerances& tol = {}, double check_tol = 1e-8) {
  if (b.rows() != b.cols()) throw Error(ErrorCode::not_square, "two_sided_inverse needs a square matrix");
  RightInverseResult r = right_invertible_test(b, tol, check_tol);
  if (!r.right_invertible) throw Error(ErrorCode::not_right_invertible, "matrix has no right inverse");
  const ElementMatrix& d = *r.witness;
  const ElementMatrix id = ElementMatrix::identity(b.algebra(), b.rows());
  const double left = (d * b - id).norm();
  if (left > check_tol)
    throw Error(ErrorCode::numerically_indeterminate, "left-inverse residual " + std::to_string(left));
  return d;
}

}  // namespace mvdyn
