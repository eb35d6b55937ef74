#pragma once

#include "mvdyn/elimination.hpp"
#include "mvdyn/intertwiner.hpp"
#include "mvdyn/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace mvdyn {

namespace detail {

/// Unitary factor W V^* of M = W S V^*; throws when M is singular.
inline Matrix polar_factor(const Matrix& m, const Tolerances& tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= tol.zero * s(0))
    throw Error(ErrorCode::not_invertible, "polar decomposition of a singular matrix");
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace detail

/// Unitary part w of the polar decomposition M = w |M|. When M intertwines
/// two families, so does w, because |M| commutes with the column family.
inline IntertwinerMatrix polar_unitary(const IntertwinerMatrix& m, const Tolerances& tol = {}) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::not_square, "polar_unitary needs a square matrix");
  const int d = m.dimension();
  const Matrix w = detail::polar_factor(m.assemble(), tol);
  std::vector<Matrix> entries;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) entries.push_back(w.block(i * d, j * d, d, d));
  return {m.row_reps(), m.col_reps(), std::move(entries)};
}

/// Blockwise polar unitary of a square matrix over B, one canonical irreducible at a time.
inline ElementMatrix polar_unitary(const ElementMatrix& m, const Tolerances& tol = {}) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::not_square, "polar_unitary needs a square matrix");
  std::vector<Matrix> blocks;
  for (int k = 0; k < m.algebra().num_blocks(); ++k) blocks.push_back(detail::polar_factor(m.block_matrix(k), tol));
  return ElementMatrix::from_blocks(m.algebra(), m.rows(), m.cols(), blocks);
}

/// gamma alpha_j gamma^{-1} for every map of `a`.
inline std::vector<StarIsomorphism> transported_maps(const MultivariableSystem& a, const StarIsomorphism& gamma) {
  const StarIsomorphism inv = invert_morphism(gamma);
  std::vector<StarIsomorphism> out;
  for (const auto& alpha : a.maps()) out.push_back(compose(gamma, compose(alpha, inv)));
  return out;
}

// ---------------------------------------------------------------------------
// Unitary equivalence of the correspondences

struct UnitaryEquivalenceCertificate {
  StarIsomorphism gamma;
  /// n_beta x n_alpha over B.
  ElementMatrix matrix;
};

struct UnitaryEquivalenceReport {
  double left_unitarity = 0.0;   // ||U U^* - I||
  double right_unitarity = 0.0;  // ||U^* U - I||
  double intertwining = 0.0;
  double isomorphism = 0.0;      // homomorphism residual of gamma
  bool passed = false;
};

inline UnitaryEquivalenceReport certify_unitary_equivalence(const UnitaryEquivalenceCertificate& cert,
                                                            const MultivariableSystem& a, const MultivariableSystem& b,
                                                            double threshold = 1e-8) {
  UnitaryEquivalenceReport out;
  const auto& u = cert.matrix;
  if (!(cert.gamma.source() == a.algebra()) || !(cert.gamma.target() == b.algebra()) ||
      !(u.algebra() == b.algebra()) || u.rows() != b.arity() || u.cols() != a.arity()) {
    out.left_unitarity = out.right_unitarity = out.intertwining = std::numeric_limits<double>::infinity();
    return out;
  }
  out.left_unitarity = (u * u.adjoint() - ElementMatrix::identity(b.algebra(), u.rows())).norm();
  out.right_unitarity = (u.adjoint() * u - ElementMatrix::identity(b.algebra(), u.cols())).norm();
  out.intertwining = element_intertwining_residual(u, b.maps(), transported_maps(a, cert.gamma));
  out.isomorphism = homomorphism_residual(cert.gamma);
  out.passed = out.left_unitarity <= threshold && out.right_unitarity <= threshold && out.intertwining <= threshold &&
               out.isomorphism <= threshold;
  return out;
}

// ---------------------------------------------------------------------------
// Outer conjugacy over trivial-center algebras

struct OuterConjugacyCertificate {
  StarIsomorphism gamma;
  /// beta_i = Ad(w_i) o gamma o alpha_{permutation[i]} o gamma^{-1}.
  std::vector<int> permutation;
  std::vector<AlgebraElement> unitaries;
};

struct OuterConjugacyReport {
  double unitarity = 0.0;
  double conjugacy = 0.0;
  bool passed = false;
};

inline OuterConjugacyReport verify_outer_conjugacy(const OuterConjugacyCertificate& cert, const MultivariableSystem& a,
                                                   const MultivariableSystem& b, double threshold = 1e-8) {
  OuterConjugacyReport out;
  const int n = b.arity();
  if (a.arity() != n || static_cast<int>(cert.permutation.size()) != n || static_cast<int>(cert.unitaries.size()) != n ||
      !(cert.gamma.source() == a.algebra()) || !(cert.gamma.target() == b.algebra())) {
    out.unitarity = out.conjugacy = std::numeric_limits<double>::infinity();
    return out;
  }
  const auto theta = transported_maps(a, cert.gamma);
  const auto units = matrix_units(b.algebra());
  const AlgebraElement one = AlgebraElement::identity(b.algebra());
  for (int i = 0; i < n; ++i) {
    const AlgebraElement& w = cert.unitaries[i];
    out.unitarity = std::max({out.unitarity, op_norm(w * w.adjoint() - one), op_norm(w.adjoint() * w - one)});
    const int j = cert.permutation[i];
    if (j < 0 || j >= n) {
      out.conjugacy = std::numeric_limits<double>::infinity();
      continue;
    }
    for (const auto& e : units)
      out.conjugacy = std::max(out.conjugacy, op_norm(apply(b.map(i), e) - w * apply(theta[j], e) * w.adjoint()));
  }
  out.passed = out.unitarity <= threshold && out.conjugacy <= threshold && homomorphism_residual(cert.gamma) <= threshold;
  return out;
}

/// The diagonal-up-to-permutation matrix U with u_{i,pi(i)} = w_i.
inline UnitaryEquivalenceCertificate to_unitary_equivalence(const OuterConjugacyCertificate& cert,
                                                            const MultivariableSystem& a, const MultivariableSystem& b) {
  ElementMatrix u(b.algebra(), b.arity(), a.arity());
  for (int i = 0; i < b.arity(); ++i) u.at(i, cert.permutation.at(i)) = cert.unitaries.at(i);
  return {cert.gamma, std::move(u)};
}

struct OuterConjugacyOutcome {
  enum class Status { conjugate, not_conjugate, arity_mismatch };
  Status status = Status::not_conjugate;
  std::optional<OuterConjugacyCertificate> certificate;
  /// Rows i (maps of b) whose admissible partners j are too few: a Hall violator.
  std::vector<int> hall_violator;
};

/// Fixes a phase so that the largest-modulus entry of u (first in
/// column-major order on ties) is real and positive.
inline Matrix normalize_phase(const Matrix& u) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < u.size(); ++i)
    if (std::abs(u.data()[i]) > std::abs(u.data()[best]) * (1.0 + 1e-12)) best = i;
  const Complex z = u.data()[best];
  if (std::abs(z) == 0.0) return u;
  return u * (std::conj(z) / std::abs(z));
}

/// Decides outer conjugacy of automorphic systems over full matrix algebras.
///
/// gamma is the canonical identification M_d = M_d; any other choice differs
/// by an inner automorphism that the w_i absorb. Pair (i, j) is admissible
/// when beta_i and gamma alpha_j gamma^{-1} have a nonzero intertwiner, whose
/// unitary part then implements beta_i = Ad(w) o gamma alpha_j gamma^{-1}.
inline OuterConjugacyOutcome decide_outer_conjugacy(const MultivariableSystem& a, const MultivariableSystem& b,
                                                    const Tolerances& tol = {}) {
  if (!a.algebra().center_is_trivial() || !b.algebra().center_is_trivial())
    throw Error(ErrorCode::trivial_center_required, "outer-conjugacy decider needs single-block algebras");
  if (!(a.algebra() == b.algebra()))
    throw Error(ErrorCode::algebra_mismatch, "no *-isomorphism between matrix algebras of different sizes");
  OuterConjugacyOutcome out;
  if (a.arity() != b.arity()) {
    out.status = OuterConjugacyOutcome::Status::arity_mismatch;
    return out;
  }
  const int n = a.arity();
  const StarIsomorphism gamma = StarIsomorphism::identity(b.algebra());
  const auto theta = transported_maps(a, gamma);
  const Representation rho = Representation::canonical(b.algebra(), 0);

  BipartiteAdjacency adj(n);
  std::vector<std::vector<Matrix>> witness(n, std::vector<Matrix>(n));
  for (int i = 0; i < n; ++i) {
    const Representation row = rho.compose(b.map(i));
    for (int j = 0; j < n; ++j) {
      const auto basis = intertwiner_space(row, rho.compose(theta[j]), tol);
      if (basis.empty()) continue;
      const Dichotomy d = key_dichotomy(basis.front(), row, rho.compose(theta[j]), 1.0, tol);
      if (!d.is_invertible()) continue;
      adj[i].push_back(j);
      witness[i][j] = normalize_phase(d.unitary);
    }
  }
  const Matching m = maximum_matching(adj, n);
  if (m.size < n) {
    out.hall_violator = hall_violator(adj, n, m);
    return out;
  }
  OuterConjugacyCertificate cert{gamma, m.left_to_right, {}};
  for (int i = 0; i < n; ++i)
    cert.unitaries.emplace_back(b.algebra(), std::vector<Matrix>{witness[i][m.left_to_right[i]]});
  out.status = OuterConjugacyOutcome::Status::conjugate;
  out.certificate = std::move(cert);
  return out;
}

// ---------------------------------------------------------------------------
// Unitary equivalence over commutative algebras C^m

struct UnitaryEquivalenceOutcome {
  enum class Status { equivalent, not_equivalent, arity_mismatch, spectrum_size_mismatch };
  Status status = Status::not_equivalent;
  std::optional<UnitaryEquivalenceCertificate> certificate;
};

struct SearchOptions {
  int max_points = 8;
};

/// Over C^m every automorphism is a point permutation, and a unitary over B
/// is a point-indexed family of unitary n x n matrices. The intertwining
/// relation restricts u_ij(x) to the pairs where beta_i and the transported
/// alpha_j send x to the same point; a unitary with that support exists iff
/// a permutation matrix does, so each point needs a perfect matching.
inline UnitaryEquivalenceOutcome decide_unitary_equivalence_commutative(const MultivariableSystem& a,
                                                                        const MultivariableSystem& b,
                                                                        const SearchOptions& opts = {}) {
  if (!a.algebra().is_commutative() || !b.algebra().is_commutative())
    throw Error(ErrorCode::commutative_required, "commutative decider needs block sizes all equal to 1");
  UnitaryEquivalenceOutcome out;
  if (a.arity() != b.arity()) {
    out.status = UnitaryEquivalenceOutcome::Status::arity_mismatch;
    return out;
  }
  const int m = b.algebra().num_blocks();
  if (a.algebra().num_blocks() != m) {
    out.status = UnitaryEquivalenceOutcome::Status::spectrum_size_mismatch;
    return out;
  }
  if (m > opts.max_points)
    throw Error(ErrorCode::search_budget_exceeded, std::to_string(m) + " points exceed the search bound");
  const int n = a.arity();

  std::vector<int> g(m);
  std::iota(g.begin(), g.end(), 0);
  do {
    std::vector<Matrix> ones(m, Matrix::Identity(1, 1));
    const StarIsomorphism gamma(a.algebra(), b.algebra(), g, ones);
    const auto theta = transported_maps(a, gamma);
    std::vector<std::vector<int>> per_point;
    for (int x = 0; x < m; ++x) {
      BipartiteAdjacency adj(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (b.map(i).perm()[x] == theta[j].perm()[x]) adj[i].push_back(j);
      auto match = perfect_matching(adj, n);
      if (!match) break;
      per_point.push_back(std::move(*match));
    }
    if (static_cast<int>(per_point.size()) < m) continue;

    ElementMatrix u(b.algebra(), n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::vector<Matrix> blocks;
        for (int x = 0; x < m; ++x) blocks.push_back(Matrix::Constant(1, 1, per_point[x][i] == j ? 1.0 : 0.0));
        u.at(i, j) = AlgebraElement(b.algebra(), std::move(blocks));
      }
    out.status = UnitaryEquivalenceOutcome::Status::equivalent;
    out.certificate = UnitaryEquivalenceCertificate{gamma, std::move(u)};
    return out;
  } while (std::next_permutation(g.begin(), g.end()));
  return out;
}

}  // namespace mvdyn
