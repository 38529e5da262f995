#ifndef FRACQM_FREE_PARTICLE_HPP
#define FRACQM_FREE_PARTICLE_HPP

#include <array>
#include <complex>
#include <string>

#include "fracqm/eval_result.hpp"

namespace fracqm::freeparticle {

using Complex = std::complex<double>;

// Orders and coefficient of the space-time fractional evolution.
// alpha in (0, 1] is the time order, beta in (1, 2] the space order;
// the closed endpoints carry the limiting cases.
struct FracParams {
    double alpha = 1.0;
    double beta = 2.0;
    double d_check = 0.5; // evolution coefficient; 1/(2 mass) at (1, 2)
    double hbar = 1.0;
    Complex psi0{1.0, 0.0};
};

enum class Method {
    IntegralCosine,    // cosine-transform of the Mittag-Leffler kernel
    FoxHClosed,        // closed H-function form of the same wavefunction
    FoxHTimeFracA,     // the three equivalent time-fractional H-forms
    FoxHTimeFracB,
    FoxHTimeFracC,
    GaussianClosedForm,
    FoxHSpaceFrac,     // space-fractional H-form
    FoxHSpaceFracAlt,  // alternative published space-fractional H-form
};

const char* method_name(Method m);

struct WavefieldSample {
    double x = 0.0;
    double t = 0.0;
    Complex value{0.0, 0.0};
    Method method = Method::IntegralCosine;
    double err = 0.0;
    bool converged = true;
};

// (psi0/pi) int_0^inf cos(k x) E_alpha(-(i^alpha/hbar) D hbar^beta k^beta
// t^alpha) dk. The tail is summed by half-period acceleration for
// alpha < 1; at alpha = 1 the kernel is a unimodular chirp and the ray is
// rotated into the decaying sector instead.
WavefieldSample psi_integral(const FracParams& p, double x, double t);

// psi0/(sqrt(pi)|x|) times the closed H-function form at argument
// (i^alpha/hbar) D hbar^beta t^alpha (2/|x|)^beta.
WavefieldSample psi_foxh(const FracParams& p, double x, double t);

// beta = 2: the three equivalent H-forms of the time-fractional
// wavefunction, all evaluated; they must agree within combined errors.
std::array<WavefieldSample, 3> psi_time_fractional(const FracParams& p, double x,
                                                   double t);

// alpha = 1: the space-fractional H-form and the alternative published
// form. Their ratio is measured output, not corrected.
std::array<WavefieldSample, 2> psi_space_fractional(const FracParams& p, double x,
                                                    double t);

// psi0 (4 pi i D1 t)^{-1/2} exp(-|x|^2 / (4 i D1 t)), principal roots.
Complex gaussian_limit(double x, double t, double d1, Complex psi0);

} // namespace fracqm::freeparticle

#endif
