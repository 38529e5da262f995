#ifndef FRACQM_GAMMA_HPP
#define FRACQM_GAMMA_HPP

#include <complex>

#include "fracqm/eval_result.hpp"

namespace fracqm::specfun {

// log Gamma(z), Lanczos approximation with reflection for Re(z) < 0.5.
// Any 2*pi*i branch offset is irrelevant to callers that exponentiate
// or form gamma ratios. Throws GammaPoleError at non-positive integers.
Complex log_gamma_complex(Complex z);

// Gamma(z). Relative error <= 1e-13 for |z| <= 50; throws GammaPoleError
// at non-positive integers and OverflowError when |Gamma| exceeds range.
Complex gamma_complex(Complex z);

// Digamma psi(z) = d/dz log Gamma(z); recurrence plus Stirling tail.
Complex digamma_complex(Complex z);

} // namespace fracqm::specfun

#endif
