#pragma once

#include <algorithm>

namespace nilspec {

/// Every numerical threshold used by the library, in one place.
///
/// Relative thresholds are multiplied by `scale(x) = max(1, |x|)` of the
/// quantity under test, so that unit-sized inputs see absolute tolerances.
struct Tolerances {
  double structural = 1e-12;  ///< symmetric / skew checks
  double orthogonal = 1e-10;  ///< ||M^T M - I||_F
  double spectral = 1e-10;    ///< eigen residuals, nullspace cut-off
  double comparison = 1e-9;   ///< equality of derived quantities
};

inline constexpr Tolerances kDefaultTolerances{};

inline double scale_of(double magnitude) { return std::max(1.0, magnitude); }

}  // namespace nilspec
