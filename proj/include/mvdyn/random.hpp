#pragma once

#include "mvdyn/deciders.hpp"
#include "mvdyn/fock.hpp"
#include "mvdyn/spectrum.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace mvdyn {

using Rng = std::mt19937_64;

inline Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      m(i, j) = Complex(re, normal(rng));
    }
  return m;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's diagonal removed.
inline Matrix haar_unitary(Rng& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rng, n, n));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const Complex z = r(j, j);
    if (std::abs(z) > 0.0) q.col(j) *= z / std::abs(z);
  }
  return q;
}

inline AlgebraElement random_element(Rng& rng, const BlockAlgebra& alg) {
  std::vector<Matrix> blocks;
  for (int n : alg.block_sizes()) blocks.push_back(gaussian_matrix(rng, n, n));
  return {alg, std::move(blocks)};
}

inline AlgebraElement random_unitary(Rng& rng, const BlockAlgebra& alg) {
  std::vector<Matrix> blocks;
  for (int n : alg.block_sizes()) blocks.push_back(haar_unitary(rng, n));
  return {alg, std::move(blocks)};
}

/// A uniformly random permutation of the blocks that preserves block sizes.
inline std::vector<int> random_block_permutation(Rng& rng, const BlockAlgebra& alg) {
  std::map<int, std::vector<int>> by_size;
  for (int k = 0; k < alg.num_blocks(); ++k) by_size[alg.block_size(k)].push_back(k);
  std::vector<int> perm(alg.num_blocks());
  for (auto& [size, ks] : by_size) {
    std::vector<int> shuffled = ks;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t i = 0; i < ks.size(); ++i) perm[ks[i]] = shuffled[i];
  }
  return perm;
}

inline StarIsomorphism random_automorphism(Rng& rng, const BlockAlgebra& alg) {
  std::vector<Matrix> us;
  for (int n : alg.block_sizes()) us.push_back(haar_unitary(rng, n));
  return {alg, alg, random_block_permutation(rng, alg), std::move(us)};
}

inline MultivariableSystem random_system(Rng& rng, const BlockAlgebra& alg, int arity) {
  std::vector<StarIsomorphism> maps;
  for (int i = 0; i < arity; ++i) maps.push_back(random_automorphism(rng, alg));
  return {alg, std::move(maps)};
}

/// Maps drawn with replacement from a pool of `pool` automorphisms, so that
/// repeated maps (and hence non-monomial equivalences) are common.
inline MultivariableSystem random_system_with_repeats(Rng& rng, const BlockAlgebra& alg, int arity, int pool) {
  std::vector<StarIsomorphism> candidates;
  for (int i = 0; i < std::max(1, pool); ++i) candidates.push_back(random_automorphism(rng, alg));
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  std::vector<StarIsomorphism> maps;
  for (int i = 0; i < arity; ++i) maps.push_back(candidates[pick(rng)]);
  return {alg, std::move(maps)};
}

inline std::vector<int> random_permutation(Rng& rng, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// The direct sum of representations of one algebra, acting block-diagonally.
inline Representation direct_sum(const std::vector<Representation>& reps) {
  if (reps.empty()) throw Error(ErrorCode::dimension_mismatch, "direct sum of nothing");
  const BlockAlgebra& alg = reps.front().algebra();
  int d = 0;
  for (const auto& r : reps) d += r.dimension();
  std::vector<Matrix> images;
  for (std::size_t g = 0; g < reps.front().unit_images().size(); ++g) {
    std::vector<Matrix> parts;
    for (const auto& r : reps) parts.push_back(r.unit_images()[g]);
    images.push_back(block_diagonal(parts));
  }
  return {alg, d, std::move(images)};
}

/// Gaussian combination of an orthonormal basis of the intertwiner space; zero when the space is.
inline Matrix random_intertwiner(Rng& rng, const Representation& phi, const Representation& psi,
                                 const Tolerances& tol = {}) {
  Matrix c = Matrix::Zero(phi.dimension(), psi.dimension());
  for (const auto& b : intertwiner_space(phi, psi, tol)) c += gaussian_matrix(rng, 1, 1)(0, 0) * b;
  return c;
}

struct EquivalentPair {
  MultivariableSystem system;
  UnitaryEquivalenceCertificate certificate;
};

/// A system unitarily equivalent to `a`, with a certificate.
///
/// beta_i = Ad(w_i) gamma alpha_{pi(i)} gamma^{-1}. The certificate matrix is
/// the polar part of a random intertwiner between the families, so when `a`
/// repeats maps it mixes columns instead of being a permuted diagonal.
inline EquivalentPair random_unitary_equivalent(Rng& rng, const MultivariableSystem& a, const Tolerances& tol = {}) {
  const BlockAlgebra& alg = a.algebra();
  const int n = a.arity();
  const StarIsomorphism gamma = random_automorphism(rng, alg);
  const auto theta = transported_maps(a, gamma);
  const auto pi = random_permutation(rng, n);
  std::vector<StarIsomorphism> beta;
  std::vector<AlgebraElement> w;
  for (int i = 0; i < n; ++i) {
    w.push_back(random_unitary(rng, alg));
    beta.push_back(compose(StarIsomorphism::inner(w.back()), theta[pi[i]]));
  }
  MultivariableSystem b(alg, beta);

  std::vector<Matrix> per_block;
  try {
    for (int k = 0; k < alg.num_blocks(); ++k) {
      const Representation rho = Representation::canonical(alg, k);
      std::vector<Representation> rows, cols;
      for (const auto& x : beta) rows.push_back(rho.compose(x));
      for (const auto& x : theta) cols.push_back(rho.compose(x));
      per_block.push_back(detail::polar_factor(random_intertwiner(rng, direct_sum(rows), direct_sum(cols), tol), tol));
    }
  } catch (const Error&) {
    // A singular draw; fall back to the permuted diagonal.
    ElementMatrix u(alg, n, n);
    for (int i = 0; i < n; ++i) u.at(i, pi[i]) = w[i];
    return {std::move(b), {gamma, std::move(u)}};
  }
  return {std::move(b), {gamma, ElementMatrix::from_blocks(alg, n, n, per_block)}};
}

/// An m x n intertwiner matrix between compressions rho_k o beta_i and
/// rho_k o theta_j of random automorphisms of a `blocks`-fold sum of M_d,
/// with m = n + extra_rows. The first n rows are matched to the columns by a
/// random permutation, so square instances are generically invertible.
inline IntertwinerMatrix random_elimination_instance(Rng& rng, int n, int d, int extra_rows = 0, int blocks = 2,
                                                     const Tolerances& tol = {}) {
  const BlockAlgebra alg(std::vector<int>(std::max(1, blocks), d));
  const Representation rho = Representation::canonical(alg, 0);
  std::vector<StarIsomorphism> theta;
  for (int j = 0; j < n; ++j) theta.push_back(random_automorphism(rng, alg));
  const auto pi = random_permutation(rng, n);
  std::uniform_int_distribution<int> any(0, n - 1);
  std::vector<Representation> rows, cols;
  for (int i = 0; i < n + extra_rows; ++i) {
    const int j = i < n ? pi[i] : any(rng);
    rows.push_back(rho.compose(compose(StarIsomorphism::inner(random_unitary(rng, alg)), theta[j])));
  }
  for (const auto& t : theta) cols.push_back(rho.compose(t));
  std::vector<Matrix> entries;
  for (const auto& r : rows)
    for (const auto& c : cols) entries.push_back(random_intertwiner(rng, r, c, tol));
  return {std::move(rows), std::move(cols), std::move(entries)};
}

inline SpectrumDynamicalSystem random_spectrum_system(Rng& rng, const std::vector<int>& labels, int arity) {
  const BlockAlgebra alg(labels);
  SpectrumDynamicalSystem s{labels, {}};
  for (int i = 0; i < arity; ++i) s.maps.push_back(random_block_permutation(rng, alg));
  return s;
}

/// An operator with `count` random dense blocks at random positions.
inline FockOperator random_fock_operator(Rng& rng, const FockRep& rep, int count) {
  FockOperator t = rep.zero();
  std::uniform_int_distribution<int> word(0, rep.layout().num_words() - 1);
  const int d = rep.layout().block_dim();
  for (int c = 0; c < count; ++c) t.add_block(word(rng), word(rng), gaussian_matrix(rng, d, d));
  return t;
}

}  // namespace mvdyn
