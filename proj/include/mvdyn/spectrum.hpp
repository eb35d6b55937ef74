#pragma once

#include "mvdyn/algebra.hpp"
#include "mvdyn/deciders.hpp"
#include "mvdyn/matching.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

namespace mvdyn {

/// Induced dynamics on the spectrum of a direct sum of matrix algebras: one
/// point per block, labeled by the block size, and one point permutation per map.
struct SpectrumDynamicalSystem {
  std::vector<int> labels;
  std::vector<std::vector<int>> maps;

  int points() const { return static_cast<int>(labels.size()); }
  int arity() const { return static_cast<int>(maps.size()); }

  void validate() const {
    const int m = points();
    if (m == 0 || maps.empty()) throw Error(ErrorCode::invariant_violation, "spectrum system needs points and maps");
    for (const auto& f : maps) {
      if (static_cast<int>(f.size()) != m) throw Error(ErrorCode::invariant_violation, "map has the wrong length");
      std::vector<bool> seen(m, false);
      for (int x = 0; x < m; ++x) {
        const int y = f[x];
        if (y < 0 || y >= m || seen[y]) throw Error(ErrorCode::invariant_violation, "spectrum map is not a bijection");
        if (labels[y] != labels[x]) throw Error(ErrorCode::invariant_violation, "spectrum map mixes block sizes");
        seen[y] = true;
      }
    }
  }
};

/// k -> sigma(k): rho_k o alpha is equivalent to rho_{sigma(k)} because
/// (rho_k o alpha)(b) = u_k b_{sigma(k)} u_k^*.
inline std::vector<int> induced_spectrum_map(const StarIsomorphism& alpha) {
  if (!alpha.is_automorphism()) throw Error(ErrorCode::algebra_mismatch, "induced map needs an automorphism");
  return alpha.perm();
}

inline SpectrumDynamicalSystem spectrum_of(const MultivariableSystem& s) {
  SpectrumDynamicalSystem out{s.algebra().block_sizes(), {}};
  for (const auto& alpha : s.maps()) out.maps.push_back(induced_spectrum_map(alpha));
  return out;
}

/// phi maps points of the source system to points of the target system;
/// assignment[x][i] = g_x(i) for every target point x.
struct PiecewiseCertificate {
  std::vector<int> bijection;
  std::vector<std::vector<int>> assignment;
};

/// Checks tau_i(x) = phi(sigma_{g_x(i)}(phi^{-1}(x))) pointwise.
inline bool verify_piecewise_certificate(const PiecewiseCertificate& cert, const SpectrumDynamicalSystem& s,
                                         const SpectrumDynamicalSystem& t) {
  const int m = t.points();
  const int n = t.arity();
  if (s.points() != m || s.arity() != n || static_cast<int>(cert.bijection.size()) != m ||
      static_cast<int>(cert.assignment.size()) != m)
    return false;
  std::vector<int> inverse(m, -1);
  for (int p = 0; p < m; ++p) {
    const int x = cert.bijection[p];
    if (x < 0 || x >= m || inverse[x] >= 0 || s.labels[p] != t.labels[x]) return false;
    inverse[x] = p;
  }
  for (int x = 0; x < m; ++x) {
    const auto& g = cert.assignment[x];
    if (static_cast<int>(g.size()) != n) return false;
    std::vector<bool> seen(n, false);
    for (int i = 0; i < n; ++i) {
      if (g[i] < 0 || g[i] >= n || seen[g[i]]) return false;
      seen[g[i]] = true;
      if (t.maps[i][x] != cert.bijection[s.maps[g[i]][inverse[x]]]) return false;
    }
  }
  return true;
}

struct PiecewiseOutcome {
  enum class Status { conjugate, not_conjugate, arity_mismatch };
  Status status = Status::not_conjugate;
  std::optional<PiecewiseCertificate> certificate;
};

/// Brute force over label-preserving bijections in lexicographic order; for
/// each one, every target point needs a perfect matching between the tau_i
/// and the transported sigma_j evaluated there.
inline PiecewiseOutcome decide_piecewise_conjugacy(const SpectrumDynamicalSystem& s, const SpectrumDynamicalSystem& t,
                                                   const SearchOptions& opts = {}) {
  s.validate();
  t.validate();
  PiecewiseOutcome out;
  if (s.arity() != t.arity()) {
    out.status = PiecewiseOutcome::Status::arity_mismatch;
    return out;
  }
  const int m = t.points();
  if (s.points() != m) return out;
  if (m > opts.max_points)
    throw Error(ErrorCode::search_budget_exceeded, std::to_string(m) + " points exceed the search bound");
  {
    auto a = s.labels, b = t.labels;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return out;
  }
  const int n = t.arity();

  std::vector<int> phi(m);
  std::iota(phi.begin(), phi.end(), 0);
  do {
    bool labels_ok = true;
    for (int p = 0; p < m && labels_ok; ++p) labels_ok = s.labels[p] == t.labels[phi[p]];
    if (!labels_ok) continue;
    std::vector<int> inverse(m);
    for (int p = 0; p < m; ++p) inverse[phi[p]] = p;

    PiecewiseCertificate cert{phi, {}};
    for (int x = 0; x < m; ++x) {
      BipartiteAdjacency adj(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (t.maps[i][x] == phi[s.maps[j][inverse[x]]]) adj[i].push_back(j);
      auto match = perfect_matching(adj, n);
      if (!match) break;
      cert.assignment.push_back(std::move(*match));
    }
    if (static_cast<int>(cert.assignment.size()) == m) {
      out.status = PiecewiseOutcome::Status::conjugate;
      out.certificate = std::move(cert);
      return out;
    }
  } while (std::next_permutation(phi.begin(), phi.end()));
  return out;
}

/// Certificate for T -> S from one for S -> T.
inline PiecewiseCertificate invert(const PiecewiseCertificate& c) {
  const int m = static_cast<int>(c.bijection.size());
  PiecewiseCertificate out{std::vector<int>(m), std::vector<std::vector<int>>(m)};
  for (int p = 0; p < m; ++p) {
    const int x = c.bijection[p];
    out.bijection[x] = p;
    const auto& g = c.assignment[x];
    std::vector<int> g_inv(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) g_inv[g[i]] = static_cast<int>(i);
    out.assignment[p] = std::move(g_inv);
  }
  return out;
}

/// Certificate for S -> U from S -> T (first) and T -> U (second):
/// phi = phi_2 o phi_1 and g_z = g^1_{phi_2^{-1}(z)} o g^2_z.
inline PiecewiseCertificate compose(const PiecewiseCertificate& second, const PiecewiseCertificate& first) {
  const int m = static_cast<int>(first.bijection.size());
  PiecewiseCertificate out{std::vector<int>(m), std::vector<std::vector<int>>(m)};
  std::vector<int> second_inverse(m);
  for (int y = 0; y < m; ++y) second_inverse[second.bijection[y]] = y;
  for (int p = 0; p < m; ++p) out.bijection[p] = second.bijection[first.bijection[p]];
  for (int z = 0; z < m; ++z) {
    const auto& g2 = second.assignment[z];
    const auto& g1 = first.assignment[second_inverse[z]];
    std::vector<int> g(g2.size());
    for (std::size_t i = 0; i < g2.size(); ++i) g[i] = g1[g2[i]];
    out.assignment[z] = std::move(g);
  }
  return out;
}

}  // namespace mvdyn
