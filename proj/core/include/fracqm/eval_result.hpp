#ifndef FRACQM_EVAL_RESULT_HPP
#define FRACQM_EVAL_RESULT_HPP

#include <complex>

namespace fracqm {

using Complex = std::complex<double>;

// Common return type for series/quadrature evaluations: a value, an
// absolute error estimate, and enough diagnostics to judge convergence.
struct EvalResult {
    Complex value{0.0, 0.0};
    double abs_err = 0.0;
    bool converged = true;
    int levels = 0;        // refinement levels or series stages
    long evaluations = 0;  // integrand evaluations / terms summed
};

} // namespace fracqm

#endif
