#pragma once

#include "mvdyn/elimination.hpp"
#include "mvdyn/fock.hpp"
#include "mvdyn/random.hpp"

#include <optional>

namespace mvdyn {

struct FockCheckThresholds {
  double covariance = 1e-12;
  double idempotence = 1e-12;
  double recovery = 1e-10;
  double intertwining = 1e-9;
};

/// Residuals for one Fock representation, and optionally for the operators
/// induced by an equivalence certificate onto it.
struct FockValidation {
  std::size_t dimension = 0;
  double covariance = 0.0;
  double isometry = 0.0;
  /// Relative to the probe size.
  double e0_idempotence = 0.0;
  double f_idempotence = 0.0;
  double f_annihilation = 0.0;
  double e0_of_f = 0.0;
  double gauge_partition = 0.0;
  /// min over i and probes a of ||s_i pi(a)|| / ||a||.
  double isometric_ratio = 1.0;

  bool has_certificate = false;
  double induced_covariance = 0.0;
  double recovery = 0.0;
  double associated_intertwining = 0.0;
  bool associated_right_invertible = false;
  double constant_term_norm = 0.0;
  double remainder_norm = 0.0;

  bool passed = false;
};

/// Runs the invariant checks on `fb` with `probes` random operators, and the
/// plant-and-recover checks when a certificate from `a` to fb's system is given.
inline FockValidation validate_fock(const FockRep& fb, Rng& rng, int probes = 2,
                                    const std::optional<UnitaryEquivalenceCertificate>& cert = std::nullopt,
                                    const MultivariableSystem* a = nullptr, const FockCheckThresholds& thr = {}) {
  FockValidation v;
  v.dimension = fb.dimension();
  v.covariance = covariance_residual(fb);
  v.isometry = isometry_residual(fb);
  const int n = fb.arity();
  const int level = fb.level();

  for (int p = 0; p < probes; ++p) {
    const FockOperator t = random_fock_operator(rng, fb, 2 * fb.layout().num_words());
    const double scale = std::max(1.0, t.frobenius_norm());
    const FockOperator e0 = gauge_expectation(t, 0, fb);
    v.e0_idempotence = std::max(v.e0_idempotence, (gauge_expectation(e0, 0, fb) - e0).frobenius_norm() / scale);
    FockOperator parts = fb.zero();
    for (int d = -level; d <= level; ++d) parts = parts + gauge_expectation(t, d, fb);
    v.gauge_partition = std::max(v.gauge_partition, (parts - t).frobenius_norm() / scale);
    std::vector<FockOperator> f;
    for (int i = 0; i < n; ++i) f.push_back(coefficient_map(t, i, fb));
    for (int i = 0; i < n; ++i) {
      v.e0_of_f = std::max(v.e0_of_f, gauge_expectation(f[i], 0, fb).frobenius_norm() / scale);
      for (int j = 0; j < n; ++j) {
        const double r = (coefficient_map(f[i], j, fb) - (i == j ? f[i] : fb.zero())).frobenius_norm() / scale;
        if (i == j)
          v.f_idempotence = std::max(v.f_idempotence, r);
        else
          v.f_annihilation = std::max(v.f_annihilation, r);
      }
    }
    const AlgebraElement x = random_element(rng, fb.system().algebra());
    for (int i = 0; i < n; ++i)
      v.isometric_ratio = std::min(v.isometric_ratio, (fb.generator(i) * fb.pi(x)).norm() / op_norm(x));
  }

  bool ok = v.covariance <= thr.covariance && v.isometry <= thr.covariance && v.e0_idempotence <= thr.idempotence &&
            v.f_idempotence <= thr.idempotence && v.f_annihilation <= thr.idempotence &&
            v.e0_of_f <= thr.idempotence && v.gauge_partition <= thr.idempotence &&
            v.isometric_ratio >= 1.0 - thr.idempotence;

  if (cert && a) {
    v.has_certificate = true;
    const InducedImages images = induced_iso_images(*cert, *a, fb);
    v.induced_covariance = images.covariance_residual;
    const AssociatedMatrix am = extract_associated_matrix(images.images, fb);
    for (int i = 0; i < am.entries.rows(); ++i)
      for (int j = 0; j < am.entries.cols(); ++j)
        v.recovery = std::max(v.recovery, op_norm(am.entries.at(i, j) - cert->matrix.at(i, j)));
    for (const auto& b0 : am.constant_terms) v.constant_term_norm = std::max(v.constant_term_norm, op_norm(b0));
    v.remainder_norm = am.remainder_norm;
    v.associated_intertwining =
        element_intertwining_residual(am.entries, fb.system().maps(), transported_maps(*a, cert->gamma));
    v.associated_right_invertible = right_invertible_test(am.entries).right_invertible;
    ok = ok && v.induced_covariance <= thr.intertwining && v.recovery <= thr.recovery &&
         v.associated_intertwining <= thr.intertwining && v.associated_right_invertible;
  }
  v.passed = ok;
  return v;
}

}  // namespace mvdyn
