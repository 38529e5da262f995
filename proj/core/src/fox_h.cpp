#include "fracqm/fox_h.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracqm/errors.hpp"
#include "fracqm/gamma.hpp"
#include "fracqm/quadrature.hpp"

namespace fracqm::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct GammaFactor {
    Complex u;      // g(s) = u + v s
    double v;
    bool numerator; // true: G(g) in the numerator of h(s)
};

std::vector<GammaFactor> kernel_factors(const FoxHParams& h) {
    std::vector<GammaFactor> f;
    for (int j = 0; j < h.q; ++j) {
        const FoxHPair& pr = h.lower[j];
        if (j < h.m) {
            f.push_back({pr.c, pr.scale, true});          // G(b + B s)
        } else {
            f.push_back({1.0 - pr.c, -pr.scale, false});  // G(1 - b - B s)
        }
    }
    for (int j = 0; j < h.p; ++j) {
        const FoxHPair& pr = h.upper[j];
        if (j < h.n) {
            f.push_back({1.0 - pr.c, -pr.scale, true});   // G(1 - a - A s)
        } else {
            f.push_back({pr.c, pr.scale, false});         // G(a + A s)
        }
    }
    return f;
}

void structural_check(const FoxHParams& h) {
    if (h.p < 0 || h.q < 0 || (int)h.upper.size() != h.p || (int)h.lower.size() != h.q) {
        throw InvalidParametersError("fox H: upper/lower list sizes must equal p/q");
    }
    if (!(0 <= h.n && h.n <= h.p)) {
        throw InvalidParametersError("fox H: index constraint 0 <= n <= p violated");
    }
    if (!(1 <= h.m && h.m <= h.q)) {
        throw InvalidParametersError("fox H: index constraint 1 <= m <= q violated");
    }
    for (const FoxHPair& pr : h.upper) {
        if (!(pr.scale > 0.0)) {
            throw InvalidParametersError("fox H: all A_j must be positive");
        }
    }
    for (const FoxHPair& pr : h.lower) {
        if (!(pr.scale > 0.0)) {
            throw InvalidParametersError("fox H: all B_j must be positive");
        }
    }
}

// Exponential decay coefficient of |h(c+it)| as |t| grows: |t|-prefactor
// of pi/2 per unit gamma scale, numerator decaying, denominator growing.
double sector_half_width(const FoxHParams& h) {
    double d = 0.0;
    for (int j = 0; j < h.q; ++j) d += (j < h.m ? 1.0 : -1.0) * h.lower[j].scale;
    for (int j = 0; j < h.p; ++j) d += (j < h.n ? 1.0 : -1.0) * h.upper[j].scale;
    return 0.5 * kPi * d;
}

double left_edge(const FoxHParams& h) {
    double L = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < h.m; ++j) {
        L = std::max(L, -h.lower[j].c.real() / h.lower[j].scale);
    }
    return L;
}

double right_edge(const FoxHParams& h) {
    double R = std::numeric_limits<double>::infinity();
    for (int j = 0; j < h.n; ++j) {
        R = std::min(R, (1.0 - h.upper[j].c.real()) / h.upper[j].scale);
    }
    return R;
}

bool pairs_equal(const FoxHPair& a, const FoxHPair& b, double tol = 1e-12) {
    return std::abs(a.c - b.c) <= tol * (1.0 + std::abs(a.c)) &&
           std::abs(a.scale - b.scale) <= tol * (1.0 + std::abs(a.scale));
}

} // namespace

namespace detail {

FoxHParams foxh_canonicalize(const FoxHParams& h) {
    FoxHParams r = h;
    bool changed = true;
    while (changed) {
        changed = false;
        // numerator G(1-a-As), j < n  vs  denominator G(1-b-Bs), j >= m
        for (int i = 0; i < r.n && !changed; ++i) {
            for (int j = r.m; j < r.q && !changed; ++j) {
                if (pairs_equal(r.upper[i], r.lower[j])) {
                    r.upper.erase(r.upper.begin() + i);
                    r.lower.erase(r.lower.begin() + j);
                    --r.n; --r.p; --r.q;
                    changed = true;
                }
            }
        }
        // numerator G(b+Bs), j < m  vs  denominator G(a+As), j >= n
        for (int i = 0; i < r.m && !changed; ++i) {
            for (int j = r.n; j < r.p && !changed; ++j) {
                if (pairs_equal(r.lower[i], r.upper[j])) {
                    r.lower.erase(r.lower.begin() + i);
                    r.upper.erase(r.upper.begin() + j);
                    --r.m; --r.q; --r.p;
                    changed = true;
                }
            }
        }
    }
    return r;
}

FoxHParams foxh_invert(const FoxHParams& h) {
    FoxHParams r;
    r.m = h.n;
    r.n = h.m;
    r.p = h.q;
    r.q = h.p;
    r.upper.reserve(h.q);
    for (const FoxHPair& pr : h.lower) r.upper.push_back({1.0 - pr.c, pr.scale});
    r.lower.reserve(h.p);
    for (const FoxHPair& pr : h.upper) r.lower.push_back({1.0 - pr.c, pr.scale});
    return r;
}

} // namespace detail

ConvergenceProfile foxh_validate(const FoxHParams& h) {
    structural_check(h);

    // Non-coincidence of the two pole families:
    // A_j (b_h + nu) != B_h (a_j - lambda - 1) for nu, lambda = 0, 1, ...
    for (int j = 0; j < h.n; ++j) {
        for (int i = 0; i < h.m; ++i) {
            const Complex a = h.upper[j].c;
            const double A = h.upper[j].scale;
            const Complex b = h.lower[i].c;
            const double B = h.lower[i].scale;
            for (int nu = 0; nu < 4096; ++nu) {
                Complex lam = (a - 1.0) - A * (b + (double)nu) / B;
                if (lam.real() < -0.5) break;
                double lr = std::round(lam.real());
                if (std::abs(lam.imag()) < 1e-9 && lr >= -0.25 &&
                    std::abs(lam.real() - lr) < 1e-9) {
                    std::ostringstream os;
                    os << "fox H: pole families coincide, (a_" << (j + 1) << ", A_"
                       << (j + 1) << ") against (b_" << (i + 1) << ", B_" << (i + 1)
                       << ") at nu = " << nu << ", lambda = " << (long)lr;
                    throw InvalidParametersError(os.str());
                }
            }
        }
    }

    ConvergenceProfile prof;
    double sum_b = 0.0, sum_a = 0.0, log_beta = 0.0;
    for (const FoxHPair& pr : h.lower) {
        sum_b += pr.scale;
        log_beta -= pr.scale * std::log(pr.scale);
    }
    for (const FoxHPair& pr : h.upper) {
        sum_a += pr.scale;
        log_beta += pr.scale * std::log(pr.scale);
    }
    prof.mu = sum_b - sum_a;
    prof.beta_star = std::exp(log_beta);
    if (prof.mu > 1e-13) {
        prof.analytic_domain = AnalyticDomain::AllNonzeroZ;
    } else if (prof.mu >= -1e-13) {
        prof.analytic_domain = AnalyticDomain::DiskOfRadiusInvBetaStar;
    } else {
        prof.analytic_domain = AnalyticDomain::Undetermined;
    }
    return prof;
}

namespace {

// ------------------------------------------------------------------
// Contour route
// ------------------------------------------------------------------

EvalResult contour_eval_reduced(const FoxHParams& h, Complex z,
                                const MellinBarnesConfig& cfg) {
    const double L = left_edge(h);
    const double R = right_edge(h);
    double c = cfg.contour_abscissa;
    if (std::isnan(c)) {
        if (std::isfinite(L) && std::isfinite(R)) {
            if (L >= R - 1e-12) {
                std::ostringstream os;
                os << "fox H: no vertical abscissa separates the pole families "
                   << "(left edge " << L << " >= right edge " << R << ")";
                throw ContourPlacementError(os.str());
            }
            c = 0.5 * (L + R);
        } else if (std::isfinite(L)) {
            c = L + 1.0;
        } else if (std::isfinite(R)) {
            c = R - 1.0;
        } else {
            c = 0.0;
        }
    } else if (c <= L || c >= R) {
        throw ContourPlacementError("fox H: configured abscissa does not separate the pole families");
    }

    const Complex log_z = std::log(z);
    const std::vector<GammaFactor> factors = kernel_factors(h);

    auto integrand = [&](double t) -> Complex {
        const Complex s(c, t);
        Complex acc = -s * log_z;
        for (const GammaFactor& f : factors) {
            Complex g = f.u + f.v * s;
            if (f.numerator) {
                acc += log_gamma_complex(g); // pole here means bad contour
            } else {
                try {
                    acc -= log_gamma_complex(g);
                } catch (const GammaPoleError&) {
                    return {0.0, 0.0}; // 1/Gamma vanishes
                }
            }
        }
        if (acc.real() > 705.0) {
            throw NonConvergenceError("fox H contour: integrand overflow");
        }
        return std::exp(acc);
    };

    const double delta = sector_half_width(h);
    const double decay = delta - std::abs(std::arg(z));
    const double tail_target = cfg.target_abs_err / 10.0;

    double T = cfg.truncation_height > 0.0 ? cfg.truncation_height : 12.0;
    if (cfg.truncation_height <= 0.0) {
        for (int it = 0; it < 60; ++it) {
            double mag = std::max({std::abs(integrand(T)), std::abs(integrand(-T)),
                                   std::abs(integrand(0.93 * T)),
                                   std::abs(integrand(-0.93 * T))});
            if (mag < tail_target) break;
            T *= 1.6;
            if (T > 4000.0) {
                throw NonConvergenceError(
                    "fox H contour: truncation height exceeded 4000 without tail decay");
            }
        }
    }

    // Panels concentrated near t = 0 where the kernel peaks.
    std::vector<double> cuts = {-T, -T / 4.0, -T / 16.0, 0.0, T / 16.0, T / 4.0, T};
    EvalResult out;
    Complex total = 0.0;
    double err = 0.0;
    bool conv = true;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        quadrature::QuadResult r = quadrature::integrate_adaptive(
            integrand, cuts[i], cuts[i + 1], cfg.target_abs_err / 8.0);
        total += r.value;
        err += r.abs_err_estimate;
        conv = conv && r.converged;
        out.levels = std::max(out.levels, r.refinement_levels);
    }
    double tail_mag = std::abs(integrand(T)) + std::abs(integrand(-T));
    err += tail_mag / std::max(decay, 0.05);

    out.value = total / (2.0 * kPi);
    out.abs_err = err / (2.0 * kPi) + tail_mag;
    out.converged = conv && out.abs_err <= cfg.target_abs_err * 4.0;
    return out;
}

// ------------------------------------------------------------------
// Residue series over the left pole family
// ------------------------------------------------------------------

// psi(nu + 1) = -gamma + H_nu for integer nu >= 0.
double psi_of_integer_succ(int nu) {
    double h = 0.0;
    for (int k = 1; k <= nu; ++k) h += 1.0 / k;
    return -0.5772156649015328606 + h;
}

bool near_nonpositive_integer(Complex g, int* nu) {
    double r = std::round(g.real());
    if (r > 0.25) return false;
    if (std::abs(g.imag()) > 3e-9) return false;
    if (std::abs(g.real() - r) > 3e-9) return false;
    *nu = (int)(-r);
    return *nu >= 0;
}

EvalResult series_eval_left(const FoxHParams& h, Complex z,
                            const MellinBarnesConfig& cfg) {
    if (h.m == 0) {
        throw NonConvergenceError("fox H series: no left pole family after reduction");
    }
    const std::vector<GammaFactor> factors = kernel_factors(h);
    const Complex log_z = std::log(z);

    // Candidate pole positions from the m left families.
    const int kDepth = 600;
    std::vector<Complex> cand;
    cand.reserve((std::size_t)h.m * kDepth);
    for (int j = 0; j < h.m; ++j) {
        const Complex b = h.lower[j].c;
        const double B = h.lower[j].scale;
        for (int nu = 0; nu < kDepth; ++nu) {
            cand.push_back(-(b + (double)nu) / B);
        }
    }
    std::sort(cand.begin(), cand.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() < b.imag();
    });
    // Merge floating-point-coincident sites; genuinely near-degenerate
    // (but unequal) pole pairs are rejected rather than summed as a
    // catastrophic cancellation.
    std::vector<Complex> sites;
    for (Complex s : cand) {
        if (!sites.empty() && std::abs(s - sites.back()) < 1e-9) continue;
        if (!sites.empty() && std::abs(s - sites.back()) < 1e-6) {
            throw NonConvergenceError(
                "fox H series: nearly coincident poles; perturb the parameter set");
        }
        sites.push_back(s);
    }

    EvalResult out;
    Complex sum = 0.0;
    double peak = 0.0;
    double last_mag = 0.0;
    int small_streak = 0;
    int grow_streak = 0;
    int processed = 0;

    for (Complex s0 : sites) {
        // Classify every kernel factor at s0.
        Complex log_c0 = -s0 * log_z;
        Complex d_log = -log_z;
        int order = 0;
        for (const GammaFactor& f : factors) {
            Complex g0 = f.u + f.v * s0;
            int nu = 0;
            if (near_nonpositive_integer(g0, &nu)) {
                double lg_fac = std::lgamma((double)nu + 1.0);
                double lg_v = std::log(std::abs(f.v));
                double arg_pi = kPi * ((double)nu + (f.v < 0.0 ? 1.0 : 0.0));
                Complex psi1(psi_of_integer_succ(nu), 0.0);
                if (f.numerator) {
                    ++order;
                    log_c0 += Complex(-lg_fac - lg_v, arg_pi);
                    d_log += psi1 * f.v;
                } else {
                    --order;
                    log_c0 += Complex(lg_fac + lg_v, arg_pi);
                    d_log -= psi1 * f.v;
                }
            } else {
                Complex lg = log_gamma_complex(g0);
                if (f.numerator) {
                    log_c0 += lg;
                    d_log += f.v * digamma_complex(g0);
                } else {
                    log_c0 -= lg;
                    d_log -= f.v * digamma_complex(g0);
                }
            }
        }
        if (order <= 0) continue; // denominator zeros fully cancel the pole
        if (order > 2) {
            throw NonConvergenceError(
                "fox H series: pole of multiplicity > 2 is not supported");
        }
        if (log_c0.real() > 700.0) {
            throw NonConvergenceError("fox H series: term overflow before convergence");
        }
        Complex term = std::exp(log_c0);
        if (order == 2) term *= d_log;
        sum += term;
        ++processed;

        double mag = std::abs(term);
        peak = std::max(peak, mag);
        if (processed >= 6) {
            if (mag < 0.25 * cfg.target_abs_err) {
                if (++small_streak >= 4) break;
            } else {
                small_streak = 0;
            }
            if (mag > last_mag && mag > 1e6 * (std::abs(sum) + 1.0)) {
                if (++grow_streak >= 10) {
                    throw NonConvergenceError("fox H series: residue series diverges");
                }
            } else {
                grow_streak = 0;
            }
        }
        last_mag = mag;
    }
    if (small_streak < 4) {
        throw NonConvergenceError("fox H series: pole budget exhausted before the target");
    }
    out.value = sum;
    out.abs_err = last_mag + 4e-16 * peak * std::sqrt((double)std::max(processed, 1));
    out.evaluations = processed;
    out.converged = true;
    return out;
}

EvalResult series_eval_reduced(const FoxHParams& h, Complex z,
                               const MellinBarnesConfig& cfg) {
    double mu = 0.0;
    double log_beta = 0.0;
    for (const FoxHPair& pr : h.lower) {
        mu += pr.scale;
        log_beta -= pr.scale * std::log(pr.scale);
    }
    for (const FoxHPair& pr : h.upper) {
        mu -= pr.scale;
        log_beta += pr.scale * std::log(pr.scale);
    }
    double beta_star = std::exp(log_beta);

    bool left_ok = mu > 1e-12 || (std::abs(mu) <= 1e-12 && std::abs(z) * beta_star < 0.97);
    bool right_ok = mu < -1e-12 || (std::abs(mu) <= 1e-12 && std::abs(z) * beta_star > 1.03);
    if (left_ok && h.m > 0) {
        return series_eval_left(h, z, cfg);
    }
    if (right_ok) {
        FoxHParams inv = detail::foxh_invert(h);
        if (inv.m > 0) return series_eval_left(inv, 1.0 / z, cfg);
    }
    if (left_ok && h.m == 0) {
        // No left poles at all: the analytic continuation sums to zero
        // residues, which is only consistent for the zero function; treat
        // as unavailable.
        throw NonConvergenceError("fox H series: left family empty");
    }
    throw NonConvergenceError(
        "fox H series: neither residue direction converges for this argument");
}

} // namespace

EvalResult foxh_eval_contour(const FoxHParams& h, Complex z,
                             const MellinBarnesConfig& cfg) {
    foxh_validate(h);
    if (z == Complex(0.0, 0.0)) {
        throw InvalidParametersError("fox H: z must be nonzero");
    }
    return contour_eval_reduced(detail::foxh_canonicalize(h), z, cfg);
}

EvalResult foxh_eval_series(const FoxHParams& h, Complex z,
                            const MellinBarnesConfig& cfg) {
    foxh_validate(h);
    if (z == Complex(0.0, 0.0)) {
        throw InvalidParametersError("fox H: z must be nonzero");
    }
    return series_eval_reduced(detail::foxh_canonicalize(h), z, cfg);
}

EvalResult foxh_eval(const FoxHParams& h, Complex z, const MellinBarnesConfig& cfg) {
    foxh_validate(h);
    if (z == Complex(0.0, 0.0)) {
        throw InvalidParametersError("fox H: z must be nonzero");
    }
    FoxHParams hr = detail::foxh_canonicalize(h);
    const double delta = sector_half_width(hr);
    const double margin = delta - std::abs(std::arg(z));
    const double L = left_edge(hr);
    const double R = right_edge(hr);
    const bool gap = L < R - 1e-12;

    if (gap && margin > 0.15) {
        try {
            return contour_eval_reduced(hr, z, cfg);
        } catch (const NonConvergenceError&) {
            return series_eval_reduced(hr, z, cfg);
        }
    }
    try {
        return series_eval_reduced(hr, z, cfg);
    } catch (const NonConvergenceError&) {
        if (gap && margin > 0.0) {
            return contour_eval_reduced(hr, z, cfg);
        }
        throw;
    }
}

TransformedFoxH foxh_laplace(const FoxHParams& h, Complex rho, double sigma) {
    structural_check(h);
    if (!(sigma > 0.0)) {
        throw ConstraintViolationError("fox H laplace: sigma must be positive");
    }
    if (h.q < 1 || h.q - 1 < h.m) {
        throw ConstraintViolationError(
            "fox H laplace: removing the (1-rho, sigma) pair would leave q < m");
    }
    FoxHPair expect{1.0 - rho, sigma};
    if (!pairs_equal(h.lower.back(), expect, 1e-10)) {
        std::ostringstream os;
        os << "fox H laplace: the lower list must end with (1-rho, sigma) = ("
           << expect.c.real() << (expect.c.imag() < 0 ? " - " : " + ")
           << std::abs(expect.c.imag()) << "i, " << sigma << ")";
        throw ConstraintViolationError(os.str());
    }
    if (h.n >= 1) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < h.n; ++i) {
            worst = std::max(worst,
                             (1.0 + h.upper[i].c.real()) / h.upper[i].scale);
        }
        if (!(rho.real() + sigma * worst > 0.0)) {
            throw ConstraintViolationError(
                "fox H laplace: Re(rho) + sigma*max[(1+Re a_i)/A_i] must be positive");
        }
    }
    TransformedFoxH out;
    out.params = h;
    out.params.lower.pop_back();
    out.params.q -= 1;
    out.prefactor_power = -rho;
    out.argument_power = -sigma;
    out.note = "image = s^(-rho) H(a s^(-sigma)); source read as x^(rho-1) H(a x^sigma)";
    return out;
}

TransformedFoxH foxh_inverse_laplace(const FoxHParams& h, Complex rho, double sigma) {
    structural_check(h);
    if (!(sigma > 0.0)) {
        throw ConstraintViolationError("fox H inverse laplace: sigma must be positive");
    }
    if (h.n >= 1) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < h.n; ++i) {
            worst = std::max(worst,
                             (1.0 + h.upper[i].c.real()) / h.upper[i].scale);
        }
        if (!(rho.real() + sigma * worst > 0.0)) {
            throw ConstraintViolationError(
                "fox H inverse laplace: Re(rho) + sigma*max[(1+Re a_i)/A_i] must be positive");
        }
    }
    TransformedFoxH out;
    out.params = h;
    out.params.upper.push_back({rho, sigma});
    out.params.p += 1;
    out.prefactor_power = rho - 1.0;
    out.argument_power = -sigma;
    out.note = "time side = x^(rho-1) H(a x^(-sigma)); source read as s^(-rho) H(a s^sigma)";
    return out;
}

TransformedFoxH foxh_rl_derivative(const FoxHParams& h, double a_exp, double b_exp,
                                   double beta_ord, double c_scale) {
    structural_check(h);
    if (!(a_exp > 0.0) || !(b_exp > 0.0)) {
        throw ConstraintViolationError("fox H derivative: a and b exponents must be positive");
    }
    if (!(c_scale > 0.0)) {
        throw ConstraintViolationError("fox H derivative: argument scale c must be positive");
    }
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int j = 0; j < h.m; ++j) {
        min_ratio = std::min(min_ratio, h.lower[j].c.real() / h.lower[j].scale);
    }
    if (!(a_exp + b_exp * min_ratio > -1.0)) {
        throw ConstraintViolationError(
            "fox H derivative: a + b*min(b_j/B_j) must exceed -1");
    }
    TransformedFoxH out;
    out.params = h;
    out.params.upper.insert(out.params.upper.begin(), {Complex(-a_exp, 0.0), b_exp});
    out.params.n += 1;
    out.params.p += 1;
    out.params.lower.push_back({Complex(beta_ord - a_exp, 0.0), b_exp});
    out.params.q += 1;
    out.prefactor_power = Complex(a_exp - beta_ord, 0.0);
    out.argument_power = b_exp;
    out.note = "derivative = z^(a-beta) H((c z)^b) with the augmented index lists";
    return out;
}

} // namespace fracqm::specfun
