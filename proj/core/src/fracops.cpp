#include "fracqm/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracqm/errors.hpp"

namespace fracqm::fracops {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ------------------------------------------------------------------
// FFT: iterative radix-2 core with a Bluestein wrapper for general N.
// ------------------------------------------------------------------

void fft_pow2(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * kPi / (double)len * (inverse ? 1.0 : -1.0);
        Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                Complex u = a[i + k];
                Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (Complex& c : a) c /= (double)n;
    }
}

std::vector<Complex> fft_any(const std::vector<Complex>& in, bool inverse) {
    const std::size_t n = in.size();
    if ((n & (n - 1)) == 0) {
        std::vector<Complex> a(in);
        fft_pow2(a, inverse);
        return a;
    }
    // Bluestein chirp-z through a power-of-two convolution.
    const double sign = inverse ? 1.0 : -1.0;
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    std::vector<Complex> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        double ang = sign * kPi * (double)((unsigned long long)k * k % (2 * n)) / (double)n;
        chirp[k] = Complex(std::cos(ang), std::sin(ang));
    }
    std::vector<Complex> a(m, Complex(0, 0)), b(m, Complex(0, 0));
    for (std::size_t k = 0; k < n; ++k) a[k] = in[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_pow2(a, true);
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
    if (inverse) {
        for (Complex& c : out) c /= (double)n;
    }
    return out;
}

void check_grid(const GridFunction& f) {
    if (f.samples.size() < 4) {
        throw InvalidParametersError("grid function: need at least 4 samples");
    }
    if (!(f.spacing > 0.0)) {
        throw InvalidParametersError("grid function: spacing must be positive");
    }
}

} // namespace

RieszGridResult riesz_apply_grid(const GridFunction& f, double q_ord, GridExtension ext) {
    check_grid(f);
    if (!(q_ord > 0.0) || q_ord > 2.0) {
        throw InvalidParametersError("riesz_apply_grid: order must lie in (0, 2]");
    }
    const std::size_t n = f.samples.size();
    std::vector<Complex> work(f.samples);
    if (ext == GridExtension::ZeroPadded) {
        work.resize(4 * n, Complex(0.0, 0.0));
    }
    const std::size_t nt = work.size();
    std::vector<Complex> spec = fft_any(work, false);

    const double d_omega = 2.0 * kPi / (f.spacing * (double)nt);
    const double omega_max = kPi / f.spacing;

    double total_mass = 0.0, tail_mass = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
        double jj = (j <= nt / 2) ? (double)j : (double)j - (double)nt;
        double omega = std::abs(jj) * d_omega;
        double m2 = std::norm(spec[j]);
        total_mass += m2;
        if (omega >= 0.5 * omega_max) tail_mass += m2;
        spec[j] *= (omega == 0.0) ? 0.0 : -std::pow(omega, q_ord);
    }
    std::vector<Complex> back = fft_any(spec, true);

    RieszGridResult out;
    out.grid.samples.assign(back.begin(), back.begin() + (long)n);
    out.grid.spacing = f.spacing;
    out.grid.domain_start = f.domain_start;
    out.tail_fraction = total_mass > 0.0 ? tail_mass / total_mass : 0.0;
    out.aliasing_warning = out.tail_fraction > 1e-8;
    return out;
}

EvalResult quantum_riesz_apply(const SpectralFunction& f, double alpha, double x) {
    if (!(alpha > 0.0) || alpha > 2.0) {
        throw InvalidParametersError("quantum_riesz_apply: order must lie in (0, 2]");
    }
    const double hbar = f.hbar;
    if (!(hbar > 0.0)) {
        throw InvalidParametersError("quantum_riesz_apply: hbar must be positive");
    }

    EvalResult out;
    if (const auto* pw = std::get_if<PlaneWaveSpectrum>(&f.kind)) {
        Complex v(0.0, 0.0);
        for (const auto& atom : pw->atoms) {
            v += atom.weight * std::pow(std::abs(atom.p0), alpha) *
                 std::exp(Complex(0.0, atom.p0 * x / hbar));
        }
        out.value = v;
        out.abs_err = 0.0;
        out.converged = true;
        return out;
    }

    if (const auto* sm = std::get_if<SmoothSpectrum>(&f.kind)) {
        double P = 8.0 * std::max(sm->decay_scale, 1e-6);
        for (int it = 0; it < 40; ++it) {
            double mag = std::pow(P, alpha) *
                         std::max(std::abs(sm->phi(P)), std::abs(sm->phi(-P)));
            if (mag < 1e-15) break;
            P *= 2.0;
            if (P > 1e7) {
                throw NonConvergenceError("quantum_riesz_apply: spectrum decays too slowly");
            }
        }
        auto g = [&](double p) -> Complex {
            return std::pow(std::abs(p), alpha) * sm->phi(p) *
                   std::exp(Complex(0.0, p * x / hbar)) / (2.0 * kPi * hbar);
        };
        quadrature::QuadResult r1 = quadrature::integrate_adaptive(g, -P, 0.0, 5e-11);
        quadrature::QuadResult r2 = quadrature::integrate_adaptive(g, 0.0, P, 5e-11);
        out.value = r1.value + r2.value;
        out.abs_err = r1.abs_err_estimate + r2.abs_err_estimate;
        out.converged = r1.converged && r2.converged;
        out.levels = std::max(r1.refinement_levels, r2.refinement_levels);
        return out;
    }

    const auto& rat = std::get<RationalOscillatorySpectrum>(f.kind);
    double total_tail = alpha + rat.tail_exponent;
    if (total_tail > 0.0) {
        throw InvalidParametersError(
            "quantum_riesz_apply: |p|^alpha overwhelms the spectrum tail");
    }
    struct Component {
        double freq;
        Complex coeff;
    };
    std::vector<Component> comps;
    if (rat.has_osc) {
        const double w = rat.osc.frequency;
        const Complex half(0.5, 0.0);
        const Complex half_i(0.0, -0.5); // 1/(2i)
        switch (rat.osc.kind) {
            case quadrature::OscKind::Cos:
                comps = {{w, half}, {-w, half}};
                break;
            case quadrature::OscKind::Sin:
                comps = {{w, half_i}, {-w, -half_i}};
                break;
            case quadrature::OscKind::Exp:
                comps = {{w, Complex(1.0, 0.0)}};
                break;
        }
    } else {
        comps = {{0.0, Complex(1.0, 0.0)}};
    }

    Complex total(0.0, 0.0);
    double err = 0.0;
    bool conv = true;
    int levels = 0;
    for (const Component& c : comps) {
        quadrature::PVProblem prob;
        Complex coeff = c.coeff / (2.0 * kPi * hbar);
        prob.smooth_part = [&rat, alpha, coeff](double p) {
            return coeff * std::pow(std::abs(p), alpha) * rat.numerator(p);
        };
        for (double p0 : rat.poles) prob.poles.push_back({p0, 1});
        prob.oscillation = {x / hbar + c.freq, quadrature::OscKind::Exp};
        prob.tail_exponent = total_tail;
        quadrature::QuadResult r = quadrature::detail::pv_integrate_abel(prob, 1e-9);
        total += r.value;
        err += r.abs_err_estimate;
        conv = conv && r.converged;
        levels = std::max(levels, r.refinement_levels);
    }
    out.value = total;
    out.abs_err = err;
    out.converged = conv;
    out.levels = levels;
    return out;
}

namespace {

// L1 kernel: int_a^b (t - tau)^{-q} dtau, exact.
double l1_kernel(double t, double a, double b, double q) {
    return (std::pow(t - a, 1.0 - q) - std::pow(t - b, 1.0 - q)) / (1.0 - q);
}

Complex caputo_value(const GridFunction& f, double q, double t) {
    const double h = f.spacing;
    Complex acc(0.0, 0.0);
    std::size_t k = (std::size_t)std::floor(t / h + 1e-12);
    if (k >= f.samples.size() - 1) k = f.samples.size() - 2;
    for (std::size_t j = 0; j < k; ++j) {
        Complex slope = (f.samples[j + 1] - f.samples[j]) / h;
        acc += slope * l1_kernel(t, h * (double)j, h * (double)(j + 1), q);
    }
    double a = h * (double)k;
    if (t > a + 1e-15 * h) {
        Complex slope = (f.samples[k + 1] - f.samples[k]) / h;
        acc += slope * l1_kernel(t, a, t, q);
    }
    return acc * std::exp(-std::lgamma(1.0 - q)); // 1 / Gamma(1-q), q in (0,1)
}

} // namespace

EvalResult caputo_derivative(const GridFunction& f, double q_ord, double t) {
    check_grid(f);
    if (!(q_ord > 0.0) || !(q_ord < 1.0)) {
        throw InvalidParametersError("caputo_derivative: order must lie in (0, 1)");
    }
    if (std::abs(f.domain_start) > 1e-15) {
        throw InvalidParametersError("caputo_derivative: grid must start at 0");
    }
    const double T = f.spacing * (double)(f.samples.size() - 1);
    if (!(t > 0.0) || t > T * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "caputo_derivative: t = " << t << " outside (0, " << T << "]";
        throw OutOfDomainError(os.str());
    }
    EvalResult out;
    out.value = caputo_value(f, q_ord, std::min(t, T));

    // Error estimate from a 2h coarsening of the same samples.
    GridFunction coarse;
    coarse.spacing = 2.0 * f.spacing;
    coarse.domain_start = 0.0;
    for (std::size_t i = 0; i < f.samples.size(); i += 2) coarse.samples.push_back(f.samples[i]);
    if (coarse.samples.size() >= 4 && t <= coarse.spacing * (double)(coarse.samples.size() - 1)) {
        Complex d2 = caputo_value(coarse, q_ord, t);
        out.abs_err = std::abs(out.value - d2) / (std::pow(2.0, 2.0 - q_ord) - 1.0);
    } else {
        out.abs_err = std::abs(out.value) * 1e-6;
    }
    out.converged = true;
    out.evaluations = (long)(t / f.spacing) + 1;
    return out;
}

namespace {

// int_a^{a+delta} e^{-s tau} (fa + m (tau - a)) dtau. The two reduced
// kernels switch to series for small |s delta| where the closed forms
// cancel:
//   (1 - e^{-x})/x        = sum_{k>=0} (-x)^k / (k+1)!
//   (1 - e^{-x}(1+x))/x^2 = sum_{k>=2} (-1)^k (k-1)/k! x^{k-2}
Complex linear_segment_laplace(Complex s, double a, double delta, Complex fa, Complex m) {
    const Complex x = s * delta;
    Complex j0, j1;
    if (std::abs(x) < 0.05) {
        Complex pw(1.0, 0.0); // (-x)^k / k!
        j0 = Complex(1.0, 0.0);
        j1 = Complex(0.5, 0.0);
        for (int k = 1; k <= 8; ++k) {
            pw *= -x / (double)k;
            j0 += pw / (double)(k + 1);
            j1 += pw / (double)(k + 2);
        }
        j0 *= delta;
        j1 *= delta * delta;
    } else {
        j0 = delta * (1.0 - std::exp(-x)) / x;
        j1 = delta * delta * (1.0 - std::exp(-x) * (1.0 + x)) / (x * x);
    }
    return std::exp(-s * a) * (fa * j0 + m * j1);
}

} // namespace

double caputo_laplace_check(const GridFunction& f, double q_ord, Complex s) {
    check_grid(f);
    if (!(q_ord > 0.0) || !(q_ord < 1.0)) {
        throw InvalidParametersError("caputo_laplace_check: order must lie in (0, 1)");
    }
    if (!(s.real() > 0.0)) {
        throw InvalidParametersError("caputo_laplace_check: Re(s) must be positive");
    }
    const double T = f.spacing * (double)(f.samples.size() - 1);

    // f~(s): exact transform of the piecewise-linear interpolant.
    Complex ftilde(0.0, 0.0);
    for (std::size_t j = 0; j + 1 < f.samples.size(); ++j) {
        Complex m = (f.samples[j + 1] - f.samples[j]) / f.spacing;
        ftilde += linear_segment_laplace(s, f.spacing * (double)j, f.spacing,
                                         f.samples[j], m);
    }

    // L{caputo f}: adaptive quadrature against the L1 values.
    auto integrand = [&](double t) -> Complex {
        if (t <= 0.0) return {0.0, 0.0};
        return std::exp(-s * t) * caputo_value(f, q_ord, t);
    };
    double split = std::min(1.0, T);
    quadrature::QuadResult r1 = quadrature::integrate_adaptive(integrand, 0.0, split, 1e-8);
    quadrature::QuadResult r2 =
        split < T ? quadrature::integrate_adaptive(integrand, split, T, 1e-8)
                  : quadrature::QuadResult{};
    Complex lhs = r1.value + r2.value;

    Complex rhs = std::pow(s, q_ord) * ftilde - std::pow(s, q_ord - 1.0) * f.samples[0];
    return std::abs(lhs - rhs);
}

} // namespace fracqm::fracops
