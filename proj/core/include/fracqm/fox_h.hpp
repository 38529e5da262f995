#ifndef FRACQM_FOX_H_HPP
#define FRACQM_FOX_H_HPP

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "fracqm/eval_result.hpp"

namespace fracqm::specfun {

// One index pair: (a_j, A_j) in the upper list, (b_j, B_j) in the lower.
struct FoxHPair {
    Complex c{0.0, 0.0}; // a_j or b_j
    double scale = 1.0;  // A_j or B_j, strictly positive
};

// H^{m,n}_{p,q}(z) defined through the Mellin-Barnes kernel
//   h(s) = prod_{j<=m} G(b_j + B_j s) prod_{j<=n} G(1 - a_j - A_j s)
//        / [ prod_{j>n} G(a_j + A_j s) prod_{j>m} G(1 - b_j - B_j s) ]
// with a contour separating the two pole families.
struct FoxHParams {
    int m = 0, n = 0, p = 0, q = 0;
    std::vector<FoxHPair> upper; // size p
    std::vector<FoxHPair> lower; // size q
};

enum class AnalyticDomain { AllNonzeroZ, DiskOfRadiusInvBetaStar, Undetermined };

struct ConvergenceProfile {
    double mu = 0.0;        // sum B_j - sum A_j
    double beta_star = 1.0; // prod A^A / prod B^B
    AnalyticDomain analytic_domain = AnalyticDomain::Undetermined;
};

struct MellinBarnesConfig {
    // NaN selects the midpoint of the pole-separation gap.
    double contour_abscissa = std::numeric_limits<double>::quiet_NaN();
    // 0 grows the truncation height until the integrand tail is below
    // target_abs_err / 10.
    double truncation_height = 0.0;
    int node_count = 64; // initial uniform panels on the truncated contour
    double target_abs_err = 1e-10;
};

// Structural validation plus the convergence descriptors mu, beta_star.
// Throws InvalidParametersError (naming the constraint) on bad index
// ranges, non-positive scales, or coincident left/right pole families.
ConvergenceProfile foxh_validate(const FoxHParams& h);

// Vertical-contour Mellin-Barnes quadrature at the configured abscissa.
EvalResult foxh_eval_contour(const FoxHParams& h, Complex z,
                             const MellinBarnesConfig& cfg = {});

// Residue series over the left pole family when mu >= 0 (or inside the
// convergence disk); for mu < 0 the argument-inversion identity maps the
// sum onto the right family. Pole multiplicities up to 2 are supported.
EvalResult foxh_eval_series(const FoxHParams& h, Complex z,
                            const MellinBarnesConfig& cfg = {});

// Contour quadrature where the argument lies inside the absolute
// convergence sector, residue series otherwise.
EvalResult foxh_eval(const FoxHParams& h, Complex z,
                     const MellinBarnesConfig& cfg = {});

// A parameter-set transform result. Prefactors are kept as metadata and
// never folded into the coefficient lists, so each transform stays
// auditable: the represented function is
//   var^{prefactor_power} * H(params at  a * var^{argument_power}).
struct TransformedFoxH {
    FoxHParams params;
    Complex prefactor_power{0.0, 0.0};
    double argument_power = 1.0;
    std::string note;
};

// Laplace image of x^{rho-1} H_{p,q+1}(a x^sigma | upper; lower+(1-rho,sigma)):
// the trailing (1-rho, sigma) lower pair is removed and the image reads
// s^{-rho} H_{p,q}(a s^{-sigma}). Validates sigma > 0, the presence of the
// (1-rho, sigma) pair, and the argument-sector bound on the upper list.
TransformedFoxH foxh_laplace(const FoxHParams& h, Complex rho, double sigma);

// Inverse image of s^{-rho} H_{p,q}(a s^sigma | upper; lower): appends
// (rho, sigma) to the upper list and reads x^{rho-1} H_{p+1,q}(a x^{-sigma}).
TransformedFoxH foxh_inverse_laplace(const FoxHParams& h, Complex rho, double sigma);

// Riemann-Liouville derivative of order beta_ord of
// z^{a_exp} H_{p,q}((c z)^{b_exp}): prepends (-a_exp, b_exp) to the upper
// list, appends (beta_ord - a_exp, b_exp) to the lower list, and reads
// z^{a_exp - beta_ord} H_{p+1,q+1}((c z)^{b_exp}).
TransformedFoxH foxh_rl_derivative(const FoxHParams& h, double a_exp, double b_exp,
                                   double beta_ord, double c_scale);

namespace detail {
// Exact cancellation of identical numerator/denominator gamma factors.
// The represented function is unchanged; convergence descriptors of the
// reduced set are the honest ones.
FoxHParams foxh_canonicalize(const FoxHParams& h);
// H^{m,n}_{p,q}(z | ...) = H^{n,m}_{q,p}(1/z | swapped, reflected lists).
FoxHParams foxh_invert(const FoxHParams& h);
}

} // namespace fracqm::specfun

#endif
