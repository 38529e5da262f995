#ifndef FRACQM_QUADRATURE_HPP
#define FRACQM_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

#include "fracqm/eval_result.hpp"

namespace fracqm::quadrature {

using Complex = std::complex<double>;
using Integrand = std::function<Complex(double)>;

struct QuadResult {
    Complex value{0.0, 0.0};
    double abs_err_estimate = 0.0;
    int refinement_levels = 0;
    bool converged = false;
};

struct AdaptiveOptions {
    int max_intervals = 4000;
    double min_width = 1e-14; // relative to |b-a|
};

// Adaptive Gauss-Kronrod 7/15 bisection on [a, b]. The reported error
// estimate is the change under one further global refinement level.
// Throws NonConvergenceError (naming the worst subinterval) if the
// interval budget runs out above tol.
QuadResult integrate_adaptive(const Integrand& f, double a, double b, double tol,
                              const AdaptiveOptions& opts = {});

// Integrate f over [a, inf) for absolutely integrable f, via the rational
// map t = a + u/(1-u).
QuadResult integrate_semi_infinite(const Integrand& f, double a, double tol,
                                   const AdaptiveOptions& opts = {});

// Tail integral of a self-oscillating integrand: f is the full integrand
// whose sign flips every half period pi/|frequency|. Consecutive
// half-period chunks are summed with an Euler transformation of the
// alternating partial sums, which also assigns the Abel-regularized value
// when the envelope decays too slowly for absolute convergence.
QuadResult oscillatory_tail(const Integrand& f, double frequency, double from,
                            double tol);

enum class OscKind { Exp, Cos, Sin };

struct Oscillation {
    double frequency = 0.0;
    OscKind kind = OscKind::Exp;
};

struct Pole {
    double location = 0.0;
    int order = 1;
};

// Integrand smooth_part(q) * osc(q) / prod_i (q - poles[i]) over the whole
// real line, with simple real poles taken as a Cauchy principal value.
struct PVProblem {
    Integrand smooth_part;
    std::vector<Pole> poles;
    Oscillation oscillation;
    double tail_exponent = -1.0; // algebraic decay rate of the envelope
};

// Cauchy principal value of a PVProblem. Each pole is removed by
// singularity subtraction over a symmetric window (where the subtracted
// term's PV vanishes by oddness); the regular remainder goes through
// integrate_adaptive and the tails through oscillatory_tail.
QuadResult pv_integrate(const PVProblem& p, double tol);

namespace detail {
// Same engine, but admits tail_exponent == 0 when an oscillation is
// present; the accelerated half-period sums then assign the Abel value.
QuadResult pv_integrate_abel(const PVProblem& p, double tol);
}

} // namespace fracqm::quadrature

#endif
