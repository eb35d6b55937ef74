#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <vector>

namespace mvdyn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest singular value; 0 for an empty matrix.
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double smallest_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

inline double unitarity_residual(const Matrix& u) {
  const Matrix id = Matrix::Identity(u.rows(), u.rows());
  return std::max(spectral_norm(u * u.adjoint() - id), spectral_norm(u.adjoint() * u - id));
}

/// Orthonormal basis (as columns) of the kernel of `k`. Singular values at or
/// below `relative_tol` times max(largest singular value, `scale`) count as
/// zero, so an operator that vanishes up to rounding keeps its full kernel.
inline Matrix null_space(const Matrix& k, double relative_tol, double scale = 1.0) {
  const Eigen::Index n = k.cols();
  if (k.rows() == 0 || k.norm() == 0.0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = relative_tol * std::max(s(0), scale);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

/// Column-major vectorization, matching Eigen storage.
inline Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

}  // namespace mvdyn
