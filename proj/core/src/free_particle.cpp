#include "fracqm/free_particle.hpp"

#include <cmath>

#include "fracqm/errors.hpp"
#include "fracqm/fox_h.hpp"
#include "fracqm/mittag_leffler.hpp"
#include "fracqm/quadrature.hpp"

namespace fracqm::freeparticle {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_params(const FracParams& p) {
    if (!(p.alpha > 0.0) || p.alpha > 1.0) {
        throw InvalidParametersError("free particle: alpha must lie in (0, 1]");
    }
    if (!(p.beta > 1.0) || p.beta > 2.0) {
        throw InvalidParametersError("free particle: beta must lie in (1, 2]");
    }
    if (!(p.d_check > 0.0) || !(p.hbar > 0.0)) {
        throw InvalidParametersError("free particle: d_check and hbar must be positive");
    }
}

void check_xt(double x, double t, bool allow_x0) {
    if (!(t > 0.0)) throw InvalidParametersError("free particle: t must be positive");
    if (!allow_x0 && x == 0.0) {
        throw InvalidParametersError("free particle: x must be nonzero for the H-form");
    }
}

// i^alpha on the principal branch.
Complex i_pow(double alpha) { return std::exp(Complex(0.0, 0.5 * kPi * alpha)); }

// Kinetic factor: z(k) = -i^alpha c k^beta with c = D hbar^{beta-1} t^alpha.
double kinetic_scale(const FracParams& p, double t) {
    return p.d_check * std::pow(p.hbar, p.beta - 1.0) * std::pow(t, p.alpha);
}

specfun::FoxHParams closed_form_params(double alpha, double beta) {
    specfun::FoxHParams h;
    h.m = 1;
    h.n = 2;
    h.p = 3;
    h.q = 2;
    h.upper = {{{0.5, 0.0}, beta / 2.0}, {{0.0, 0.0}, 1.0}, {{0.0, 0.0}, beta / 2.0}};
    h.lower = {{{0.0, 0.0}, 1.0}, {{0.0, 0.0}, alpha}};
    return h;
}

// Unimodular-chirp case: rotate the ray by -pi/(2 beta) so the kernel
// decays like exp(-c u^beta); the plane-wave growth is dominated for
// beta > 1.
WavefieldSample integral_alpha1(const FracParams& p, double x, double t) {
    const double c = kinetic_scale(p, t);
    const double theta = 0.5 * kPi / p.beta;
    const Complex rot = std::exp(Complex(0.0, -theta));
    const double sin_theta = std::sin(theta);

    double U = 4.0;
    while (c * std::pow(U, p.beta) - std::abs(x) * U * sin_theta < 50.0) {
        U *= 1.5;
        if (U > 1e9) {
            throw NonConvergenceError("psi_integral: rotated ray fails to decay");
        }
    }
    auto integrand = [&](double u) -> Complex {
        Complex k = rot * u;
        Complex damp = std::exp(-c * std::pow(u, p.beta));
        Complex osc = std::exp(Complex(0.0, 1.0) * (x * k)) +
                      std::exp(Complex(0.0, -1.0) * (x * k));
        return damp * osc;
    };
    quadrature::QuadResult r = quadrature::integrate_adaptive(integrand, 0.0, U, 1e-10);
    WavefieldSample out;
    out.x = x;
    out.t = t;
    out.method = Method::IntegralCosine;
    out.value = p.psi0 / (2.0 * kPi) * rot * r.value;
    out.err = r.abs_err_estimate / (2.0 * kPi) * std::abs(p.psi0);
    out.converged = r.converged;
    return out;
}

} // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::IntegralCosine: return "integral_cosine";
        case Method::FoxHClosed: return "foxh_closed";
        case Method::FoxHTimeFracA: return "foxh_timefrac_a";
        case Method::FoxHTimeFracB: return "foxh_timefrac_b";
        case Method::FoxHTimeFracC: return "foxh_timefrac_c";
        case Method::GaussianClosedForm: return "gaussian_closed_form";
        case Method::FoxHSpaceFrac: return "foxh_spacefrac";
        case Method::FoxHSpaceFracAlt: return "foxh_spacefrac_alt";
    }
    return "unknown";
}

WavefieldSample psi_integral(const FracParams& p, double x, double t) {
    check_params(p);
    check_xt(x, t, true);
    if (p.alpha == 1.0) return integral_alpha1(p, x, t);

    const double c = kinetic_scale(p, t);
    const Complex ray = -i_pow(p.alpha); // z(k) = ray * c * k^beta
    specfun::MittagLefflerConfig ml_cfg;
    ml_cfg.target_abs_err = 1e-11;

    // Beyond |z| = z_floor the kernel is purely algebraic: the captured
    // exponential of E_alpha decays like exp(-|cos(pi/alpha - pi/2)|
    // |z|^{1/alpha}) and would otherwise chirp against the half-period
    // acceleration of the tail.
    double z_floor = 6.0;
    const double exp_angle = kPi / p.alpha - 0.5 * kPi;
    if (exp_angle < kPi) {
        double kappa = std::max(std::abs(std::cos(exp_angle)), 1e-3);
        z_floor = std::max(z_floor, std::pow(23.0 / kappa, p.alpha));
    }

    auto kernel = [&](double k) -> Complex {
        if (k == 0.0) return {1.0, 0.0};
        Complex z = ray * (c * std::pow(k, p.beta));
        return specfun::mittag_leffler(p.alpha, z, ml_cfg).value;
    };

    WavefieldSample out;
    out.x = x;
    out.t = t;
    out.method = Method::IntegralCosine;

    if (x == 0.0) {
        // No oscillation: head integral plus the algebraic kernel tail
        //   E_alpha(z) = -sum_j z^{-j}/Gamma(1-j alpha) + O(z^{-4})
        double K = std::pow(std::max(400.0, z_floor) / c, 1.0 / p.beta);
        K = std::max(K, 4.0);
        quadrature::QuadResult head =
            quadrature::integrate_adaptive(kernel, 0.0, K, 1e-10);
        Complex tail(0.0, 0.0);
        for (int j = 1; j <= 3; ++j) {
            double g = 1.0 - (double)j * p.alpha;
            double rg = std::abs(g - std::round(g)) < 1e-12
                            ? 0.0
                            : 1.0 / std::tgamma(g); // zero at the poles
            tail -= std::pow(ray * c, (double)-j) * rg *
                    std::pow(K, 1.0 - (double)j * p.beta) /
                    ((double)j * p.beta - 1.0);
        }
        double tail_err = std::pow(c * std::pow(K, p.beta), -4.0) * K / (4.0 * p.beta - 1.0);
        out.value = p.psi0 / kPi * (head.value + tail);
        out.err = (head.abs_err_estimate + tail_err) * std::abs(p.psi0) / kPi;
        out.converged = head.converged;
        return out;
    }

    auto integrand = [&](double k) { return std::cos(k * x) * kernel(k); };
    const double k0 =
        std::max(2.0 * kPi / std::abs(x), std::pow(z_floor / c, 1.0 / p.beta));
    quadrature::QuadResult head = quadrature::integrate_adaptive(integrand, 0.0, k0, 2e-10);
    quadrature::QuadResult tail = quadrature::oscillatory_tail(integrand, std::abs(x), k0, 2e-9);
    out.value = p.psi0 / kPi * (head.value + tail.value);
    out.err = (head.abs_err_estimate + tail.abs_err_estimate) * std::abs(p.psi0) / kPi;
    out.converged = head.converged && tail.converged;
    return out;
}

WavefieldSample psi_foxh(const FracParams& p, double x, double t) {
    check_params(p);
    check_xt(x, t, false);
    const double c = kinetic_scale(p, t);
    Complex zeta = i_pow(p.alpha) * c * std::pow(2.0 / std::abs(x), p.beta);
    specfun::FoxHParams h = closed_form_params(p.alpha, p.beta);
    EvalResult r = specfun::foxh_eval(h, zeta);
    WavefieldSample out;
    out.x = x;
    out.t = t;
    out.method = Method::FoxHClosed;
    Complex pref = p.psi0 / (std::sqrt(kPi) * std::abs(x));
    out.value = pref * r.value;
    out.err = std::abs(pref) * r.abs_err;
    out.converged = r.converged;
    return out;
}

std::array<WavefieldSample, 3> psi_time_fractional(const FracParams& p, double x,
                                                   double t) {
    check_params(p);
    check_xt(x, t, false);
    if (p.beta != 2.0) {
        throw InvalidParametersError("psi_time_fractional: requires beta = 2");
    }
    const double d_alpha = p.d_check * p.hbar;
    const Complex zeta = 4.0 * i_pow(p.alpha) * d_alpha * std::pow(t, p.alpha) / (x * x);

    std::array<WavefieldSample, 3> out;
    const Complex pref_sqrtpi = p.psi0 / (std::sqrt(kPi) * std::abs(x));
    const Complex pref_plain = p.psi0 / std::abs(x);

    {
        specfun::FoxHParams h;
        h.m = 1; h.n = 2; h.p = 3; h.q = 2;
        h.upper = {{{0.5, 0.0}, 1.0}, {{0.0, 0.0}, 1.0}, {{0.0, 0.0}, 1.0}};
        h.lower = {{{0.0, 0.0}, 1.0}, {{0.0, 0.0}, p.alpha}};
        EvalResult r = specfun::foxh_eval(h, zeta);
        out[0] = {x, t, pref_sqrtpi * r.value, Method::FoxHTimeFracA,
                  std::abs(pref_sqrtpi) * r.abs_err, r.converged};
    }
    {
        specfun::FoxHParams h;
        h.m = 2; h.n = 0; h.p = 1; h.q = 2;
        h.upper = {{{1.0, 0.0}, p.alpha}};
        h.lower = {{{0.5, 0.0}, 1.0}, {{1.0, 0.0}, 1.0}};
        EvalResult r = specfun::foxh_eval(h, 1.0 / zeta);
        out[1] = {x, t, pref_sqrtpi * r.value, Method::FoxHTimeFracB,
                  std::abs(pref_sqrtpi) * r.abs_err, r.converged};
    }
    {
        specfun::FoxHParams h;
        h.m = 1; h.n = 0; h.p = 1; h.q = 1;
        h.upper = {{{1.0, 0.0}, p.alpha}};
        h.lower = {{{1.0, 0.0}, 2.0}};
        EvalResult r = specfun::foxh_eval(h, 4.0 / zeta);
        out[2] = {x, t, pref_plain * r.value, Method::FoxHTimeFracC,
                  std::abs(pref_plain) * r.abs_err, r.converged};
    }
    return out;
}

std::array<WavefieldSample, 2> psi_space_fractional(const FracParams& p, double x,
                                                    double t) {
    check_params(p);
    check_xt(x, t, false);
    if (p.alpha != 1.0) {
        throw InvalidParametersError("psi_space_fractional: requires alpha = 1");
    }
    const double d_beta = p.d_check;
    std::array<WavefieldSample, 2> out;
    {
        const double c = kinetic_scale(p, t);
        Complex zeta = Complex(0.0, 1.0) * c * std::pow(2.0 / std::abs(x), p.beta);
        specfun::FoxHParams h = closed_form_params(1.0, p.beta);
        EvalResult r = specfun::foxh_eval(h, zeta);
        Complex pref = p.psi0 / (std::sqrt(kPi) * std::abs(x));
        out[0] = {x, t, pref * r.value, Method::FoxHSpaceFrac,
                  std::abs(pref) * r.abs_err, r.converged};
    }
    {
        // (1/hbar) (hbar / (i D t))^{1/beta} |x|, principal root.
        Complex base = p.hbar / (Complex(0.0, 1.0) * d_beta * t);
        Complex u = std::pow(base, 1.0 / p.beta) * std::abs(x) / p.hbar;
        specfun::FoxHParams h;
        h.m = 1; h.n = 1; h.p = 2; h.q = 2;
        h.upper = {{{1.0, 0.0}, 1.0 / p.beta}, {{1.0, 0.0}, 0.5}};
        h.lower = {{{1.0, 0.0}, 1.0}, {{1.0, 0.0}, 0.5}};
        EvalResult r = specfun::foxh_eval(h, u);
        Complex pref = kPi * p.psi0 / (p.beta * std::abs(x));
        out[1] = {x, t, pref * r.value, Method::FoxHSpaceFracAlt,
                  std::abs(pref) * r.abs_err, r.converged};
    }
    return out;
}

Complex gaussian_limit(double x, double t, double d1, Complex psi0) {
    if (!(t > 0.0)) throw InvalidParametersError("gaussian_limit: t must be positive");
    if (!(d1 > 0.0)) throw InvalidParametersError("gaussian_limit: d1 must be positive");
    Complex denom = Complex(0.0, 4.0 * d1 * t);
    return psi0 * std::pow(kPi * denom, -0.5) * std::exp(-x * x / denom);
}

} // namespace fracqm::freeparticle
