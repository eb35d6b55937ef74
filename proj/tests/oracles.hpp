#pragma once

// Reference computations for the tests. Each one takes a different route
// from the library: full LU instead of SVD null spaces, explicit
// enumeration instead of matching, word-length bookkeeping instead of gauge
// averages.

#include "mvdyn/mvdyn.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <numeric>
#include <vector>

namespace oracle {

using mvdyn::Complex;
using mvdyn::Matrix;

/// Largest singular value of the assembled block-diagonal matrix via BDCSVD.
inline double assembled_norm(const mvdyn::AlgebraElement& a) {
  Eigen::BDCSVD<Matrix> svd(a.assemble());
  return svd.singularValues()(0);
}

/// The d^2 x d^2 matrices phi(g) (x) ... are assembled entry by entry here
/// (no kron helper) and the nullity is read off a full-pivot LU.
inline int intertwiner_nullity(const mvdyn::Representation& phi, const mvdyn::Representation& psi,
                               double threshold = 1e-9) {
  const int d = phi.dimension();
  const auto& a = phi.unit_images();
  const auto& b = psi.unit_images();
  Matrix k = Matrix::Zero(static_cast<Eigen::Index>(a.size()) * d * d, d * d);
  for (std::size_t g = 0; g < a.size(); ++g)
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        // Row for entry (r, c) of phi(g) X - X psi(g); unknown X(p, q) sits at column q*d + p.
        const Eigen::Index row = static_cast<Eigen::Index>(g) * d * d + c * d + r;
        for (int p = 0; p < d; ++p) k(row, c * d + p) += a[g](r, p);
        for (int q = 0; q < d; ++q) k(row, q * d + r) -= b[g](q, c);
      }
  // Pivots count when above threshold * max(1, largest pivot): the images of
  // matrix units have norm one, so rounding-level systems have full kernel.
  Eigen::FullPivLU<Matrix> lu(k);
  if (lu.maxPivot() == 0.0) return d * d;
  lu.setThreshold(threshold * std::max(1.0, lu.maxPivot()) / lu.maxPivot());
  return d * d - static_cast<int>(lu.rank());
}

/// Intertwiner-space membership: c lies in the space iff it is annihilated
/// by every commutator-difference, measured relative to ||c||.
inline bool is_member(const Matrix& c, const mvdyn::Representation& phi, const mvdyn::Representation& psi,
                      double rel = 1e-9) {
  const double n = c.norm();
  for (std::size_t g = 0; g < phi.unit_images().size(); ++g)
    if ((phi.unit_images()[g] * c - c * psi.unit_images()[g]).norm() > rel * std::max(1.0, n)) return false;
  return true;
}

/// Gaussian elimination with column pivoting by largest modulus in the
/// current row. Returns the diagonal of U and the column order.
struct RowPivotLU {
  std::vector<Complex> diagonal;
  std::vector<int> columns;
};

inline RowPivotLU row_pivot_lu(Matrix a) {
  const int n = static_cast<int>(a.rows());
  RowPivotLU out;
  out.columns.resize(n);
  std::iota(out.columns.begin(), out.columns.end(), 0);
  for (int r = 0; r < n; ++r) {
    int best = r;
    for (int j = r + 1; j < n; ++j)
      if (std::abs(a(r, j)) > std::abs(a(r, best))) best = j;
    a.col(r).swap(a.col(best));
    std::swap(out.columns[r], out.columns[best]);
    for (int h = r + 1; h < n; ++h) {
      const Complex f = a(h, r) / a(r, r);
      a.row(h) -= f * a.row(r);
    }
    out.diagonal.push_back(a(r, r));
  }
  return out;
}

/// Brute-force outer conjugacy over a single full matrix algebra: try every
/// permutation and ask for a nonzero intertwiner on each pair.
inline bool brute_force_outer(const mvdyn::MultivariableSystem& a, const mvdyn::MultivariableSystem& b) {
  if (a.arity() != b.arity() || !(a.algebra() == b.algebra())) return false;
  const int n = a.arity();
  const auto rho = mvdyn::Representation::canonical(b.algebra(), 0);
  std::vector<std::vector<bool>> ok(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ok[i][j] = intertwiner_nullity(rho.compose(b.map(i)), rho.compose(a.map(j))) > 0;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    bool all = true;
    for (int i = 0; i < n && all; ++i) all = ok[i][p[i]];
    if (all) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

/// Degree-d part of T by word-length bookkeeping: keep block (v, w) iff |v| - |w| = d.
inline mvdyn::FockOperator graded_part(const mvdyn::FockOperator& t, int d) {
  mvdyn::FockOperator out(t.layout_ptr());
  for (const auto& [k, m] : t.blocks())
    if (t.layout().length(k.first) - t.layout().length(k.second) == d) out.add_block(k.first, k.second, m);
  return out;
}

/// Brute-force piecewise conjugacy for tiny spectra: enumerate bijections and
/// every per-point assignment.
inline bool brute_force_piecewise(const mvdyn::SpectrumDynamicalSystem& s, const mvdyn::SpectrumDynamicalSystem& t) {
  const int m = t.points();
  const int n = t.arity();
  if (s.points() != m || s.arity() != n) return false;
  std::vector<int> phi(m);
  std::iota(phi.begin(), phi.end(), 0);
  do {
    bool ok = true;
    for (int p = 0; p < m && ok; ++p) ok = s.labels[p] == t.labels[phi[p]];
    if (!ok) continue;
    std::vector<int> inv(m);
    for (int p = 0; p < m; ++p) inv[phi[p]] = p;
    for (int x = 0; x < m && ok; ++x) {
      std::vector<int> g(n);
      std::iota(g.begin(), g.end(), 0);
      bool found = false;
      do {
        bool good = true;
        for (int i = 0; i < n && good; ++i) good = t.maps[i][x] == phi[s.maps[g[i]][inv[x]]];
        found = good;
      } while (!found && std::next_permutation(g.begin(), g.end()));
      ok = found;
    }
    if (ok) return true;
  } while (std::next_permutation(phi.begin(), phi.end()));
  return false;
}

}  // namespace oracle
