#include "fracqm/well.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "fracqm/errors.hpp"
#include "fracqm/quadrature.hpp"

namespace fracqm::well {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_spec(const WellSpec& s) {
    if (!(s.a > 0.0) || !(s.d_beta > 0.0) || !(s.hbar > 0.0) || !(s.mass > 0.0)) {
        throw InvalidParametersError("well: a, d_beta, hbar, mass must be positive");
    }
    if (!(s.beta > 1.0) || s.beta > 2.0) {
        throw InvalidParametersError("well: beta must lie in (1, 2]");
    }
}

// sin(n pi / 2) and cos(n pi / 2) without trig roundoff.
int sin_half(int n) { return (n % 4 == 1) ? 1 : (n % 4 == 3 ? -1 : 0); }
int cos_half(int n) { return (n % 4 == 0) ? 1 : (n % 4 == 2 ? -1 : 0); }

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

double Eigenstate::psi(double x) const {
    if (std::abs(x) >= a) return 0.0;
    const double k = (double)n * kPi / (2.0 * a);
    switch (form) {
        case WellForm::CosFamily:
            return amplitude * ((n % 2 == 1) ? std::cos(k * x) : std::sin(k * x));
        case WellForm::SinShifted:
            return amplitude * std::sin(k * (x + a));
    }
    return 0.0;
}

Eigenstate eigenstate(const WellSpec& spec, int n, bool normalized, WellForm form) {
    check_spec(spec);
    if (n < 1) throw InvalidParametersError("well: n must be >= 1");
    Eigenstate st;
    st.n = n;
    st.a = spec.a;
    st.form = form;
    st.energy = spec.d_beta *
                std::pow((double)n * kPi * spec.hbar / (2.0 * spec.a), spec.beta);
    st.amplitude = normalized ? 1.0 / std::sqrt(spec.a) : 1.0;
    return st;
}

Complex momentum_wavefunction(const WellSpec& spec, int n, double p) {
    check_spec(spec);
    if (n < 1) throw InvalidParametersError("well: n must be >= 1");
    const double a = spec.a;
    const double hb = spec.hbar;
    const double kn = (double)n * kPi / (2.0 * a);
    const double pn = hb * kn;
    const double A = 1.0;

    // Closed-form transform of the CosFamily state:
    //   odd n:  phi = -2 A hbar^2 kn sin(n pi/2) cos(a p / hbar) / (p^2 - pn^2)
    //   even n: phi =  2 i A hbar^2 kn (-1)^{n/2} sin(a p / hbar) / (p^2 - pn^2)
    // n = 1 reduces to -A pi (hbar^2/a) cos(a p / hbar) / (p^2 - (pi hbar/2a)^2).
    const bool odd = (n % 2 == 1);
    const double scale = -2.0 * A * hb * hb * kn;
    const double parity = (double)((n / 2) % 2 == 0 ? 1 : -1); // (-1)^{n/2}

    double d = std::abs(p) - pn;
    if (std::abs(d) < 1e-3 * std::max(1.0, pn)) {
        // Local expansion of the removable singularity at |p| = pn.
        double u = a * d / hb;
        double sinc = (std::abs(u) < 1e-14) ? a / hb : std::sin(u) / d;
        if (odd) {
            // sin(n pi/2) cos(a p / hbar) -> -sin(a d / hbar), sin^2 = 1
            return {-scale * sinc / (std::abs(p) + pn), 0.0};
        }
        // (-1)^{n/2} sin(a p / hbar) -> sign(p) sin(a d / hbar)
        double sgn = (p >= 0.0) ? 1.0 : -1.0;
        return Complex(0.0, scale * sgn * sinc / (std::abs(p) + pn));
    }
    double denom = (p - pn) * (p + pn);
    if (odd) {
        return {(double)sin_half(n) * scale * std::cos(a * p / hb) / denom, 0.0};
    }
    return Complex(0.0, parity * scale * std::sin(a * p / hb) / denom);
}

namespace {

struct ExperimentGeometry {
    bool odd;
    Complex prefactor;    // recovered = prefactor * PV(I)
    Complex closed_form;  // contour-route prediction for PV(I)
};

ExperimentGeometry experiment_geometry(int n, double x_over_a) {
    ExperimentGeometry g;
    g.odd = (n % 2 == 1);
    const double cs = std::cos((double)n * kPi * x_over_a / 2.0);
    const double sn = std::sin((double)n * kPi * x_over_a / 2.0);
    if (g.odd) {
        g.prefactor = Complex(-(double)sin_half(n) / kPi, 0.0);
        g.closed_form = Complex(-kPi * (double)sin_half(n) * cs, 0.0);
    } else {
        double parity = (double)((n / 2) % 2 == 0 ? 1 : -1);
        g.prefactor = Complex(0.0, -parity / kPi); // -i (-1)^{n/2} / pi
        g.closed_form = Complex(0.0, kPi * parity * sn);
    }
    return g;
}

// Measured PV of I(n, alpha, x) = int |q|^alpha trig(n pi q / 2)
// e^{i (n pi x / 2a) q} / (q^2 - 1) dq, trig = cos for odd n, sin for even.
quadrature::QuadResult measure_pv(int n, double alpha, double x_over_a, double tol) {
    using namespace fracqm::quadrature;
    const double phase = (double)n * kPi * x_over_a / 2.0;
    const double carrier = (double)n * kPi / 2.0;
    const bool odd = (n % 2 == 1);

    struct Part {
        double freq;
        Complex coeff;
    };
    // cos = (e^{+} + e^{-})/2, sin = (e^{+} - e^{-})/(2i)
    std::vector<Part> parts;
    if (odd) {
        parts = {{phase + carrier, {0.5, 0.0}}, {phase - carrier, {0.5, 0.0}}};
    } else {
        parts = {{phase + carrier, {0.0, -0.5}}, {phase - carrier, {0.0, 0.5}}};
    }

    QuadResult total;
    total.converged = true;
    for (const Part& part : parts) {
        PVProblem prob;
        Complex c = part.coeff;
        prob.smooth_part = [alpha, c](double q) {
            return c * std::pow(std::abs(q), alpha);
        };
        prob.poles = {{1.0, 1}, {-1.0, 1}};
        prob.oscillation = {part.freq, OscKind::Exp};
        prob.tail_exponent = alpha - 2.0;
        QuadResult r = pv_integrate(prob, 0.5 * tol);
        total.value += r.value;
        total.abs_err_estimate += r.abs_err_estimate;
        total.refinement_levels = std::max(total.refinement_levels, r.refinement_levels);
        total.converged = total.converged && r.converged;
    }
    return total;
}

ConsistencyRow experiment_point(const WellSpec& spec, int n, double alpha, double x,
                                double tol) {
    ConsistencyRow row;
    row.n = n;
    row.alpha = alpha;
    row.x = x;
    const ExperimentGeometry geo = experiment_geometry(n, x / spec.a);
    Eigenstate st = eigenstate(spec, n, false);
    row.original = st.psi(x);
    row.closed_form = geo.closed_form;

    if (alpha == 2.0) {
        // Ordinary kinetic operator: recover through the spectral identity.
        fracops::RationalOscillatorySpectrum rat;
        const double kn = (double)n * kPi / (2.0 * spec.a);
        const double pn = spec.hbar * kn;
        const double scale = -2.0 * spec.hbar * spec.hbar * kn;
        const bool odd = geo.odd;
        const double parity = (double)((n / 2) % 2 == 0 ? 1 : -1);
        const Complex numer = odd ? Complex((double)sin_half(n) * scale, 0.0)
                                  : Complex(0.0, parity * scale);
        rat.numerator = [numer](double) { return numer; };
        rat.poles = {pn, -pn};
        rat.osc = {spec.a / spec.hbar,
                   odd ? quadrature::OscKind::Cos : quadrature::OscKind::Sin};
        rat.has_osc = true;
        rat.tail_exponent = -2.0;
        fracops::SpectralFunction f{rat, spec.hbar};
        EvalResult r = fracops::quantum_riesz_apply(f, 2.0, x);
        // recovered = (D / E_n) * multiplier integral = integral / (hbar kn)^2
        row.recovered = r.value / (pn * pn);
        row.pv = row.recovered / geo.prefactor;
        row.pv_err = r.abs_err;
        row.converged = r.converged;
        row.refinement_levels = r.levels;
    } else {
        quadrature::QuadResult r = measure_pv(n, alpha, x / spec.a, tol);
        row.pv = r.value;
        row.pv_err = r.abs_err_estimate;
        row.recovered = geo.prefactor * r.value;
        row.converged = r.converged;
        row.refinement_levels = r.refinement_levels;
    }
    row.residual = row.recovered - Complex(row.original, 0.0);
    return row;
}

} // namespace

bool ConsistencyReport::all_converged() const {
    for (const ConsistencyRow& r : rows) {
        if (!r.converged) return false;
    }
    return !rows.empty();
}

std::string ConsistencyReport::to_csv() const {
    std::ostringstream os;
    os << "n,alpha,x,pv_re,pv_im,pv_err,closed_form,recovered_psi,original_psi,"
          "residual,converged\n";
    for (const ConsistencyRow& r : rows) {
        // closed_form and recovered are reported on the real line for odd n
        // and on the imaginary line (PV) / real line (psi) for even n.
        double cf = (r.n % 2 == 1) ? r.closed_form.real() : r.closed_form.imag();
        os << r.n << ',' << fmt17(r.alpha) << ',' << fmt17(r.x) << ','
           << fmt17(r.pv.real()) << ',' << fmt17(r.pv.imag()) << ','
           << fmt17(r.pv_err) << ',' << fmt17(cf) << ','
           << fmt17(r.recovered.real()) << ',' << fmt17(r.original) << ','
           << fmt17(r.recovered.real() - r.original) << ','
           << (r.converged ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string ConsistencyReport::to_json() const {
    std::ostringstream os;
    os << "{\n  \"spec\": {\"a\": " << fmt17(spec.a) << ", \"beta\": " << fmt17(spec.beta)
       << ", \"d_beta\": " << fmt17(spec.d_beta) << ", \"hbar\": " << fmt17(spec.hbar)
       << ", \"mass\": " << fmt17(spec.mass) << "},\n";
    os << "  \"n\": " << n << ",\n  \"alpha\": " << fmt17(alpha)
       << ",\n  \"tol\": " << fmt17(tol) << ",\n  \"rows\": [\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ConsistencyRow& r = rows[i];
        os << "    {\"x\": " << fmt17(r.x) << ", \"pv_re\": " << fmt17(r.pv.real())
           << ", \"pv_im\": " << fmt17(r.pv.imag()) << ", \"pv_err\": " << fmt17(r.pv_err)
           << ", \"closed_form_re\": " << fmt17(r.closed_form.real())
           << ", \"closed_form_im\": " << fmt17(r.closed_form.imag())
           << ", \"recovered_re\": " << fmt17(r.recovered.real())
           << ", \"recovered_im\": " << fmt17(r.recovered.imag())
           << ", \"original\": " << fmt17(r.original)
           << ", \"residual_re\": " << fmt17(r.residual.real())
           << ", \"residual_im\": " << fmt17(r.residual.imag())
           << ", \"converged\": " << (r.converged ? "true" : "false");
        if (!r.note.empty()) os << ", \"note\": \"" << r.note << "\"";
        os << "}" << (i + 1 < rows.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

ConsistencyReport consistency_experiment(const WellSpec& spec, int n, double alpha,
                                         const std::vector<double>& xs, double tol,
                                         int threads) {
    check_spec(spec);
    if (n < 1) throw InvalidParametersError("well: n must be >= 1");
    const bool diagnostic = (alpha == 0.0);
    if (!diagnostic && (!(alpha > 1.0) || alpha > 2.0)) {
        throw InvalidParametersError(
            "well: alpha must lie in (1, 2]; alpha = 0 runs the meromorphic diagnostic");
    }
    for (double x : xs) {
        if (!(std::abs(x) < spec.a)) {
            throw InvalidParametersError("well: every x must satisfy |x| < a strictly");
        }
    }
    if (!(tol > 0.0)) throw InvalidParametersError("well: tol must be positive");

    ConsistencyReport rep;
    rep.spec = spec;
    rep.n = n;
    rep.alpha = alpha;
    rep.tol = tol;
    rep.rows.resize(xs.size());

    auto work = [&](std::size_t i) {
        try {
            rep.rows[i] = experiment_point(spec, n, alpha, xs[i], tol);
        } catch (const Error& e) {
            ConsistencyRow row;
            row.n = n;
            row.alpha = alpha;
            row.x = xs[i];
            row.converged = false;
            row.note = e.what();
            rep.rows[i] = row;
        }
    };

    int nthreads = std::max(1, threads);
    if (nthreads <= 1 || xs.size() <= 1) {
        for (std::size_t i = 0; i < xs.size(); ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t stride = (std::size_t)nthreads;
        for (std::size_t t = 0; t < stride; ++t) {
            pool.emplace_back([&, t]() {
                for (std::size_t i = t; i < xs.size(); i += stride) work(i);
            });
        }
        for (std::thread& th : pool) th.join();
    }
    return rep;
}

double effective_potential_well(const WellSpec& spec, int n) {
    check_spec(spec);
    if (n < 1) throw InvalidParametersError("well: n must be >= 1");
    const double kn = (double)n * kPi / (2.0 * spec.a);
    return spec.d_beta * std::pow(spec.hbar * kn, spec.beta) -
           spec.hbar * spec.hbar * kn * kn / (2.0 * spec.mass);
}

EffectivePotentialGrid effective_potential_general(const fracops::GridFunction& X,
                                                   double energy, const WellSpec& spec) {
    check_spec(spec);
    if (X.samples.size() < 4) {
        throw InvalidParametersError("effective_potential_general: need >= 4 samples");
    }
    const std::size_t n = X.samples.size();
    double max_mag = 0.0;
    for (const Complex& v : X.samples) max_mag = std::max(max_mag, std::abs(v));
    const double floor = 1e-8 * max_mag;

    EffectivePotentialGrid out;
    out.values.samples.assign(n, Complex(0.0, 0.0));
    out.values.spacing = X.spacing;
    out.values.domain_start = X.domain_start;
    out.flagged.assign(n, 0);
    out.flagged.front() = 1;
    out.flagged.back() = 1;

    const double h2 = X.spacing * X.spacing;
    const double coeff = spec.hbar * spec.hbar / (2.0 * spec.mass);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (std::abs(X.samples[i]) <= floor) {
            out.flagged[i] = 1;
            continue;
        }
        Complex second = (X.samples[i + 1] - 2.0 * X.samples[i] + X.samples[i - 1]) / h2;
        out.values.samples[i] = coeff * second / X.samples[i] + energy;
    }
    return out;
}

} // namespace fracqm::well
