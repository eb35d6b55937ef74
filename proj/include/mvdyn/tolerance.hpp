#pragma once

namespace mvdyn {

/// One tolerance hierarchy shared by every module.
///
/// `hom` and `unit` bound structural identities (homomorphism and unitarity
/// residuals, relative to operand norms). `zero` is the single threshold that
/// separates "zero" from "invertible" in rank and dichotomy decisions.
struct Tolerances {
  double hom = 1e-10;
  double unit = 1e-10;
  double zero = 1e-8;
  /// Norms in (zero*scale, borderline_factor*zero*scale) are refused as ambiguous.
  double borderline_factor = 10.0;
};

}  // namespace mvdyn
