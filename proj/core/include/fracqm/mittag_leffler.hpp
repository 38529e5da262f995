#ifndef FRACQM_MITTAG_LEFFLER_HPP
#define FRACQM_MITTAG_LEFFLER_HPP

#include <complex>

#include "fracqm/eval_result.hpp"

namespace fracqm::specfun {

struct MittagLefflerConfig {
    double target_abs_err = 1e-12;
    int max_terms = 600;        // power series budget
    double series_peak_cap = 2e4; // largest tolerable intermediate term
};

// One-parameter Mittag-Leffler E_alpha(z) = sum_k z^k / Gamma(alpha k + 1),
// alpha in (0, 2]. Power series while the intermediate terms stay small
// enough for the target accuracy; otherwise the Laplace-inversion contour
// (two rays bracketing the negative axis, plus the residue of any captured
// branch-point pole). Orders in (1, 2] reduce by the duplication identity
// E_a(z) = (E_{a/2}(sqrt z) + E_{a/2}(-sqrt z)) / 2.
EvalResult mittag_leffler(double alpha, Complex z,
                          const MittagLefflerConfig& cfg = {});

namespace detail {
// The two routes individually, for overlap cross-checks.
EvalResult ml_series(double alpha, Complex z, const MittagLefflerConfig& cfg);
EvalResult ml_contour(double alpha, Complex z, const MittagLefflerConfig& cfg);
// Largest |z| at which the series roundoff stays within cfg's cap.
double ml_series_radius(double alpha, const MittagLefflerConfig& cfg);
}

} // namespace fracqm::specfun

#endif
