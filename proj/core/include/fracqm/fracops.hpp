#ifndef FRACQM_FRACOPS_HPP
#define FRACQM_FRACOPS_HPP

#include <complex>
#include <functional>
#include <variant>
#include <vector>

#include "fracqm/eval_result.hpp"
#include "fracqm/quadrature.hpp"

namespace fracqm::fracops {

using Complex = std::complex<double>;

// Uniformly sampled complex function.
struct GridFunction {
    std::vector<Complex> samples;
    double spacing = 1.0;
    double domain_start = 0.0;

    double x(std::size_t i) const { return domain_start + spacing * (double)i; }
};

// Momentum-space descriptions accepted by the quantum Riesz operator.

// Spectrum made of plane-wave atoms: psi(x) = sum w_k e^{i p_k x / hbar}.
struct PlaneWaveSpectrum {
    struct Atom {
        double p0;
        Complex weight;
    };
    std::vector<Atom> atoms;
};

// Rapidly decaying smooth spectrum; |p|^alpha phi(p) must be absolutely
// integrable.
struct SmoothSpectrum {
    std::function<Complex(double)> phi;
    double decay_scale = 1.0; // rough width, used to pick the cutoff probe
};

// phi(p) = numerator(p) * osc(p) / prod_j (p - poles[j]), the momentum
// shape of a box eigenstate: simple real-axis zeros of the denominator
// (removable or genuine) and a trigonometric factor.
struct RationalOscillatorySpectrum {
    std::function<Complex(double)> numerator;
    std::vector<double> poles;
    quadrature::Oscillation osc{0.0, quadrature::OscKind::Cos};
    bool has_osc = false;
    double tail_exponent = -2.0; // decay of numerator / pole product
};

struct SpectralFunction {
    std::variant<PlaneWaveSpectrum, SmoothSpectrum, RationalOscillatorySpectrum> kind;
    double hbar = 1.0;
};

// (1/2 pi hbar) int dp e^{i p x / hbar} |p|^alpha Phi(p), the momentum
// multiplier form of the fractional kinetic operator; principal-value /
// Abel machinery engages for rational-oscillatory spectra.
EvalResult quantum_riesz_apply(const SpectralFunction& f, double alpha, double x);

enum class GridExtension { Periodic, ZeroPadded };

struct RieszGridResult {
    GridFunction grid;
    double tail_fraction = 0.0;  // spectral mass in the top octave
    bool aliasing_warning = false;
};

// Spectral Riesz derivative on a uniform grid: multiply the discrete
// spectrum by -|omega|^q and invert. ZeroPadded extends by 4x to suppress
// wrap-around for compactly supported samples.
RieszGridResult riesz_apply_grid(const GridFunction& f, double q_ord,
                                 GridExtension ext = GridExtension::Periodic);

// Caputo derivative of order q in (0,1) at time t, L1 scheme on the
// sampled grid over [0, T]; O(spacing^{2-q}) accurate.
EvalResult caputo_derivative(const GridFunction& f, double q_ord, double t);

// Residual |L{caputo f}(s) - (s^q f~(s) - s^{q-1} f(0))| computed
// numerically from the samples; both transforms truncated to the grid.
double caputo_laplace_check(const GridFunction& f, double q_ord, Complex s);

} // namespace fracqm::fracops

#endif
