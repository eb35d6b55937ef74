#pragma once

#include "mvdyn/deciders.hpp"
#include "mvdyn/intertwiner.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace mvdyn {

/// Words over {0..n-1} of length <= L, ordered by length then
/// lexicographically. Every word carries one copy of A.
class FockLayout {
 public:
  FockLayout(int arity, int level, int block_dim) : arity_(arity), level_(level), block_dim_(block_dim) {
    words_.push_back({});
    for (std::size_t start = 0; start < words_.size(); ++start) {
      if (static_cast<int>(words_[start].size()) == level_) continue;
      // Words are generated in length order, so appending keeps the ordering.
      for (int i = 0; i < arity_; ++i) {
        std::vector<int> w = words_[start];
        w.push_back(i);
        words_.push_back(std::move(w));
      }
    }
    std::sort(words_.begin(), words_.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    for (std::size_t i = 0; i < words_.size(); ++i) index_[words_[i]] = static_cast<int>(i);
  }

  int arity() const { return arity_; }
  int level() const { return level_; }
  int block_dim() const { return block_dim_; }
  int num_words() const { return static_cast<int>(words_.size()); }
  std::size_t dimension() const { return static_cast<std::size_t>(num_words()) * block_dim_; }
  const std::vector<int>& word(int w) const { return words_.at(w); }
  int length(int w) const { return static_cast<int>(words_.at(w).size()); }

  int index_of(const std::vector<int>& word) const { return index_.at(word); }

  /// Index of the word i.w, or -1 when it would exceed the truncation level.
  int prepend(int i, int w) const {
    if (length(w) >= level_) return -1;
    std::vector<int> v{i};
    v.insert(v.end(), words_[w].begin(), words_[w].end());
    return index_.at(v);
  }

 private:
  int arity_;
  int level_;
  int block_dim_;
  std::vector<std::vector<int>> words_;
  std::map<std::vector<int>, int> index_;
};

/// Operator on the truncated Fock space, stored as nonzero dense blocks
/// between word summands.
class FockOperator {
 public:
  using Key = std::pair<int, int>;

  explicit FockOperator(std::shared_ptr<const FockLayout> layout) : layout_(std::move(layout)) {}

  const FockLayout& layout() const { return *layout_; }
  const std::shared_ptr<const FockLayout>& layout_ptr() const { return layout_; }
  const std::map<Key, Matrix>& blocks() const { return blocks_; }

  Matrix block(int row_word, int col_word) const {
    auto it = blocks_.find({row_word, col_word});
    if (it != blocks_.end()) return it->second;
    return Matrix::Zero(layout_->block_dim(), layout_->block_dim());
  }

  void add_block(int row_word, int col_word, const Matrix& m) {
    auto [it, inserted] = blocks_.try_emplace({row_word, col_word}, m);
    if (!inserted) it->second += m;
  }

  FockOperator adjoint() const {
    FockOperator out(layout_);
    for (const auto& [k, m] : blocks_) out.blocks_.emplace(Key{k.second, k.first}, m.adjoint());
    return out;
  }

  friend FockOperator operator+(const FockOperator& a, const FockOperator& b) {
    FockOperator out = a;
    for (const auto& [k, m] : b.blocks_) out.add_block(k.first, k.second, m);
    return out;
  }
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b) { return a + Complex(-1.0) * b; }
  friend FockOperator operator*(Complex s, const FockOperator& a) {
    FockOperator out = a;
    for (auto& [k, m] : out.blocks_) m *= s;
    return out;
  }
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b) {
    FockOperator out(a.layout_);
    for (const auto& [ka, ma] : a.blocks_) {
      const int mid = ka.second;
      for (auto it = b.blocks_.lower_bound({mid, INT_MIN}); it != b.blocks_.end() && it->first.first == mid; ++it)
        out.add_block(ka.first, it->first.second, ma * it->second);
    }
    return out;
  }

  /// T P, with P the projection onto words of length <= max_length.
  FockOperator compress_right(int max_length) const {
    FockOperator out(layout_);
    for (const auto& [k, m] : blocks_)
      if (layout_->length(k.second) <= max_length) out.blocks_.emplace(k, m);
    return out;
  }

  /// Upper bound for the operator norm.
  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& [k, m] : blocks_) s += m.squaredNorm();
    return std::sqrt(s);
  }

  Matrix assemble() const {
    const int d = layout_->block_dim();
    Matrix out = Matrix::Zero(layout_->dimension(), layout_->dimension());
    for (const auto& [k, m] : blocks_) out.block(k.first * d, k.second * d, d, d) = m;
    return out;
  }

  /// Blocks of column `col_word` stacked vertically: T restricted to one summand.
  Matrix column_slab(int col_word) const {
    std::vector<const Matrix*> parts;
    for (const auto& [k, m] : blocks_)
      if (k.second == col_word) parts.push_back(&m);
    const int d = layout_->block_dim();
    Matrix out = Matrix::Zero(std::max<Eigen::Index>(1, static_cast<Eigen::Index>(parts.size())) * d, d);
    for (std::size_t i = 0; i < parts.size(); ++i) out.middleRows(static_cast<Eigen::Index>(i) * d, d) = *parts[i];
    return out;
  }

  /// Operator norm. Exact for block-monomial patterns (at most one block per
  /// block row and column) and for assembled sizes up to `dense_limit`;
  /// otherwise power iteration on T^*T.
  double norm(std::size_t dense_limit = 3000) const {
    std::map<int, int> row_count, col_count;
    bool monomial = true;
    for (const auto& [k, m] : blocks_) {
      if (++row_count[k.first] > 1 || ++col_count[k.second] > 1) {
        monomial = false;
        break;
      }
    }
    if (monomial) {
      double n = 0.0;
      for (const auto& [k, m] : blocks_) n = std::max(n, spectral_norm(m));
      return n;
    }
    if (layout_->dimension() <= dense_limit) return spectral_norm(assemble());
    return power_norm();
  }

 private:
  double power_norm(int iterations = 300) const {
    const int d = layout_->block_dim();
    const Eigen::Index dim = static_cast<Eigen::Index>(layout_->dimension());
    Vector x = Vector::Ones(dim) / std::sqrt(static_cast<double>(dim));
    const FockOperator adj = adjoint();
    auto apply_to = [d](const FockOperator& t, const Vector& v) {
      Vector out = Vector::Zero(v.size());
      for (const auto& [k, m] : t.blocks_) out.segment(k.first * d, d) += m * v.segment(k.second * d, d);
      return out;
    };
    double estimate = 0.0;
    for (int it = 0; it < iterations; ++it) {
      Vector y = apply_to(adj, apply_to(*this, x));
      const double n = y.norm();
      if (n == 0.0) return 0.0;
      estimate = std::sqrt(n);
      x = y / n;
    }
    return estimate;
  }

  std::shared_ptr<const FockLayout> layout_;
  std::map<Key, Matrix> blocks_;
};

/// Left multiplication by a on A, in the coordinates of AlgebraElement::coordinates().
inline Matrix left_multiplication(const AlgebraElement& a) {
  std::vector<Matrix> parts;
  for (const auto& b : a.blocks()) parts.push_back(kron(Matrix::Identity(b.rows(), b.rows()), b));
  return block_diagonal(parts);
}

/// Truncated Fock representation of the tensor algebra of (A, alpha).
///
/// pi(a) acts on the summand of word w by left multiplication with
/// alpha_w(a), where alpha_{i w} = alpha_w o alpha_i; s_i maps the summand of
/// w identically onto the summand of i.w and kills the top level. With this
/// convention a s_i = s_i alpha_i(a) holds exactly.
class FockRep {
 public:
  FockRep(MultivariableSystem system, int level, std::size_t max_dimension = 20000)
      : system_(std::move(system)), level_(level) {
    if (level_ < 1) throw Error(ErrorCode::invariant_violation, "truncation level must be at least 1");
    const int n = system_.arity();
    std::size_t words = 0, power = 1;
    for (int l = 0; l <= level_; ++l, power *= n) words += power;
    const std::size_t dim = words * static_cast<std::size_t>(system_.algebra().dimension());
    if (dim > max_dimension)
      throw Error(ErrorCode::dimension_budget_exceeded,
                  "Fock dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(max_dimension));
    layout_ = std::make_shared<const FockLayout>(n, level_, system_.algebra().dimension());

    word_maps_.reserve(layout_->num_words());
    word_maps_.push_back(StarIsomorphism::identity(system_.algebra()));
    for (int w = 1; w < layout_->num_words(); ++w) {
      const auto& word = layout_->word(w);
      const int tail = layout_->index_of(std::vector<int>(word.begin() + 1, word.end()));
      word_maps_.push_back(compose(word_maps_[tail], system_.map(word.front())));
    }

    const Matrix id = Matrix::Identity(layout_->block_dim(), layout_->block_dim());
    for (int i = 0; i < n; ++i) {
      FockOperator s(layout_);
      for (int w = 0; w < layout_->num_words(); ++w) {
        const int target = layout_->prepend(i, w);
        if (target >= 0) s.add_block(target, w, id);
      }
      generators_.push_back(std::move(s));
    }
  }

  const MultivariableSystem& system() const { return system_; }
  int level() const { return level_; }
  int arity() const { return system_.arity(); }
  const FockLayout& layout() const { return *layout_; }
  const std::shared_ptr<const FockLayout>& layout_ptr() const { return layout_; }
  std::size_t dimension() const { return layout_->dimension(); }
  const StarIsomorphism& word_map(int w) const { return word_maps_.at(w); }

  const FockOperator& generator(int i) const { return generators_.at(i); }

  FockOperator pi(const AlgebraElement& a) const {
    FockOperator out(layout_);
    for (int w = 0; w < layout_->num_words(); ++w) out.add_block(w, w, left_multiplication(apply(word_maps_[w], a)));
    return out;
  }

  FockOperator zero() const { return FockOperator(layout_); }

  /// Projection onto the words of length <= max_length.
  FockOperator projection(int max_length) const {
    FockOperator out(layout_);
    const Matrix id = Matrix::Identity(layout_->block_dim(), layout_->block_dim());
    for (int w = 0; w < layout_->num_words(); ++w)
      if (layout_->length(w) <= max_length) out.add_block(w, w, id);
    return out;
  }

  FockOperator identity() const { return projection(level_); }

 private:
  MultivariableSystem system_;
  int level_;
  std::shared_ptr<const FockLayout> layout_;
  std::vector<StarIsomorphism> word_maps_;
  std::vector<FockOperator> generators_;
};

inline FockRep build_fock(const MultivariableSystem& system, int level, std::size_t max_dimension = 20000) {
  return FockRep(system, level, max_dimension);
}

/// U^k T U^{-k}, U acting as omega^{|w|} on the summand of w, omega = exp(2 pi i / (2L+1)).
inline FockOperator gauge_rotate(const FockOperator& t, int k) {
  const FockLayout& lay = t.layout();
  const double period = 2.0 * lay.level() + 1.0;
  FockOperator out(t.layout_ptr());
  for (const auto& [key, m] : t.blocks()) {
    const int shift = lay.length(key.first) - lay.length(key.second);
    out.add_block(key.first, key.second, std::polar(1.0, 2.0 * std::numbers::pi * k * shift / period) * m);
  }
  return out;
}

/// E_d(T) = (1/(2L+1)) sum_{k=0}^{2L} omega^{-dk} U^k T U^{-k}.
///
/// The 2L+1 rotations separate all degrees in [-L, L] exactly; blocks whose
/// root-of-unity sum cancels are dropped rather than kept at rounding level.
inline FockOperator gauge_expectation(const FockOperator& t, int degree, const FockRep& rep) {
  const int level = rep.level();
  if (degree < -level || degree > level) throw Error(ErrorCode::invariant_violation, "degree outside [-L, L]");
  const int period = 2 * level + 1;
  FockOperator acc(t.layout_ptr());
  for (int k = 0; k < period; ++k) {
    const Complex weight = std::polar(1.0, -2.0 * std::numbers::pi * degree * k / period) / static_cast<double>(period);
    acc = acc + weight * gauge_rotate(t, k);
  }
  FockOperator out(t.layout_ptr());
  for (const auto& [key, m] : acc.blocks()) {
    const Matrix& original = t.blocks().at(key);
    if (m.norm() > 1e-12 * std::max(1.0, original.norm())) out.add_block(key.first, key.second, m);
  }
  return out;
}

/// F_i(T) = s_i s_i^* E_1(T).
inline FockOperator coefficient_map(const FockOperator& t, int i, const FockRep& rep) {
  const FockOperator& s = rep.generator(i);
  return s * (s.adjoint() * gauge_expectation(t, 1, rep));
}

/// max over i and matrix units a of ||pi(a) s_i - s_i pi(alpha_i(a))|| (Frobenius bound).
inline double covariance_residual(const FockRep& rep) {
  double res = 0.0;
  for (const auto& a : matrix_units(rep.system().algebra()))
    for (int i = 0; i < rep.arity(); ++i) {
      const FockOperator& s = rep.generator(i);
      res = std::max(res, (rep.pi(a) * s - s * rep.pi(apply(rep.system().map(i), a))).frobenius_norm());
    }
  return res;
}

/// max over i, j of ||s_i^* s_j - delta_ij P_{<=L-1}|| (Frobenius bound).
inline double isometry_residual(const FockRep& rep) {
  double res = 0.0;
  const FockOperator p = rep.projection(rep.level() - 1);
  for (int i = 0; i < rep.arity(); ++i)
    for (int j = 0; j < rep.arity(); ++j) {
      FockOperator prod = rep.generator(i).adjoint() * rep.generator(j);
      if (i == j) prod = prod - p;
      res = std::max(res, prod.frobenius_norm());
    }
  return res;
}

struct InducedImages {
  std::vector<FockOperator> images;
  /// max over j and matrix units a of ||(gamma(a) gamma(s_j) - gamma(s_j) gamma(alpha_j(a))) P_{<=L-1}||.
  double covariance_residual = 0.0;
};

/// gamma(s_j) = sum_i t_i pi_B(u_ij) for a verified unitary-equivalence certificate.
inline InducedImages induced_iso_images(const UnitaryEquivalenceCertificate& cert, const MultivariableSystem& a,
                                        const FockRep& fb, double certificate_tol = 1e-8) {
  const auto& b = fb.system();
  if (a.arity() != b.arity()) throw Error(ErrorCode::dimension_mismatch, "arities differ");
  if (!certify_unitary_equivalence(cert, a, b, certificate_tol).passed)
    throw Error(ErrorCode::unverified_certificate, "certificate does not verify against the systems");
  const int n = b.arity();
  InducedImages out;
  for (int j = 0; j < n; ++j) {
    FockOperator img = fb.zero();
    for (int i = 0; i < n; ++i) img = img + fb.generator(i) * fb.pi(cert.matrix.at(i, j));
    out.images.push_back(std::move(img));
  }
  const int below_top = fb.level() - 1;
  for (const auto& e : matrix_units(a.algebra())) {
    const FockOperator ga = fb.pi(apply(cert.gamma, e));
    for (int j = 0; j < n; ++j) {
      const FockOperator gaj = fb.pi(apply(cert.gamma, apply(a.map(j), e)));
      const FockOperator diff = ga * out.images[j] - out.images[j] * gaj;
      out.covariance_residual = std::max(out.covariance_residual, diff.compress_right(below_top).frobenius_norm());
    }
  }
  return out;
}

struct AssociatedMatrix {
  /// b_ij, the degree-one coefficients, n_B x n_images.
  ElementMatrix entries;
  /// b_0j, the degree-zero coefficients.
  std::vector<AlgebraElement> constant_terms;
  /// max over j of ||gamma(s_j) - E_0 - sum_i F_i|| on the level-zero summand.
  double remainder_norm = 0.0;
};

/// Reads b_ij off t_i^* F_i(gamma(s_j)): on the level-zero summand that
/// operator is left multiplication by b_ij, so its value on the unit is b_ij.
inline AssociatedMatrix extract_associated_matrix(std::span<const FockOperator> images, const FockRep& fb) {
  const BlockAlgebra& alg = fb.system().algebra();
  const int n = fb.arity();
  const int cols = static_cast<int>(images.size());
  AssociatedMatrix out{ElementMatrix(alg, n, cols), {}, 0.0};
  const Vector unit = AlgebraElement::identity(alg).coordinates();
  for (int j = 0; j < cols; ++j) {
    const FockOperator& img = images[j];
    if (img.layout_ptr() != fb.layout_ptr() && img.layout().dimension() != fb.dimension())
      throw Error(ErrorCode::dimension_mismatch, "image does not act on this Fock space");
    const FockOperator e0 = gauge_expectation(img, 0, fb);
    out.constant_terms.push_back(AlgebraElement::from_coordinates(alg, e0.block(0, 0) * unit));
    FockOperator remainder = img - e0;
    for (int i = 0; i < n; ++i) {
      const FockOperator fi = coefficient_map(img, i, fb);
      remainder = remainder - fi;
      const FockOperator compressed = fb.generator(i).adjoint() * fi;
      out.entries.at(i, j) = AlgebraElement::from_coordinates(alg, compressed.block(0, 0) * unit);
    }
    out.remainder_norm = std::max(out.remainder_norm, spectral_norm(remainder.column_slab(0)));
  }
  return out;
}

}  // namespace mvdyn
