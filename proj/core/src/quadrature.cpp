#include "fracqm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracqm/errors.hpp"

namespace fracqm::quadrature {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
    Complex value;
    double err;
};

PanelResult gk15(const Integrand& f, double a, double b, long* evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Complex fc = f(c);
    Complex resk = kWgk[7] * fc;
    Complex resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        Complex f1 = f(c - h * kXgk[j]);
        Complex f2 = f(c + h * kXgk[j]);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
    }
    *evals += 15;
    PanelResult r;
    r.value = resk * h;
    r.err = std::abs((resk - resg) * h);
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag())) {
        std::ostringstream os;
        os << "non-finite integrand on [" << a << ", " << b << "]";
        throw NonConvergenceError(os.str());
    }
    return r;
}

struct Segment {
    double a, b;
    Complex value;
    double err;
    int depth;
};

} // namespace

QuadResult integrate_adaptive(const Integrand& f, double a, double b, double tol,
                              const AdaptiveOptions& opts) {
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    long evals = 0;
    std::vector<Segment> segs;
    {
        PanelResult p = gk15(f, a, b, &evals);
        segs.push_back({a, b, p.value, p.err, 0});
    }
    const double width_floor = opts.min_width * std::abs(b - a);
    int max_depth = 0;
    while (true) {
        double total_err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total_err += segs[i].err;
            if (segs[i].err > segs[worst].err) worst = i;
        }
        if (total_err <= 0.5 * tol) break;
        if ((int)segs.size() >= opts.max_intervals ||
            std::abs(segs[worst].b - segs[worst].a) < width_floor) {
            std::ostringstream os;
            os << "adaptive quadrature stalled at estimate " << total_err
               << " > tol " << tol << "; worst subinterval [" << segs[worst].a
               << ", " << segs[worst].b << "] err " << segs[worst].err;
            throw NonConvergenceError(os.str());
        }
        Segment s = segs[worst];
        double m = 0.5 * (s.a + s.b);
        PanelResult p1 = gk15(f, s.a, m, &evals);
        PanelResult p2 = gk15(f, m, s.b, &evals);
        segs[worst] = {s.a, m, p1.value, p1.err, s.depth + 1};
        segs.push_back({m, s.b, p2.value, p2.err, s.depth + 1});
        max_depth = std::max(max_depth, s.depth + 1);
    }
    Complex v1 = 0.0;
    for (const Segment& s : segs) v1 += s.value;

    // One further global refinement level; its change is the error estimate.
    Complex v2 = 0.0;
    for (const Segment& s : segs) {
        double m = 0.5 * (s.a + s.b);
        v2 += gk15(f, s.a, m, &evals).value;
        v2 += gk15(f, m, s.b, &evals).value;
    }
    out.value = v2;
    out.abs_err_estimate = std::max(std::abs(v1 - v2), 4e-16 * std::abs(v2));
    out.refinement_levels = max_depth + 1;
    out.converged = out.abs_err_estimate <= tol;
    return out;
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, double tol,
                                   const AdaptiveOptions& opts) {
    auto mapped = [&](double u) -> Complex {
        double d = 1.0 - u;
        double t = a + u / d;
        return f(t) / (d * d);
    };
    return integrate_adaptive(mapped, 0.0, 1.0 - 1e-9, tol, opts);
}

namespace {

// Euler transformation of the partial-sum sequence; est2 receives the
// estimate one averaging level earlier for an internal error measure.
Complex euler_transform(const std::vector<Complex>& partials, Complex* est2) {
    std::vector<Complex> t(partials);
    *est2 = t.back();
    while (t.size() > 1) {
        if (t.size() == 2) *est2 = 0.5 * (t[0] + t[1]);
        for (std::size_t i = 0; i + 1 < t.size(); ++i) t[i] = 0.5 * (t[i] + t[i + 1]);
        t.pop_back();
    }
    return t[0];
}

} // namespace

QuadResult oscillatory_tail(const Integrand& f, double frequency, double from,
                            double tol) {
    if (frequency == 0.0) {
        throw InvalidParametersError("oscillatory_tail: frequency must be nonzero");
    }
    const double half = kPi / std::abs(frequency);
    long evals = 0;

    std::vector<Complex> chunks;
    std::vector<Complex> partials;
    Complex plain_sum = 0.0;
    double chunk_err = 0.0;
    double peak = 0.0;

    auto add_chunk = [&](int k) {
        double lo = from + k * half;
        double hi = lo + half;
        double m = 0.5 * (lo + hi);
        PanelResult whole = gk15(f, lo, hi, &evals);
        PanelResult h1 = gk15(f, lo, m, &evals);
        PanelResult h2 = gk15(f, m, hi, &evals);
        Complex v = h1.value + h2.value;
        chunk_err += std::abs(whole.value - v) + 1e-16 * std::abs(v);
        chunks.push_back(v);
        plain_sum += v;
        partials.push_back(plain_sum);
        peak = std::max(peak, std::abs(v));
    };

    Complex prev_est = 0.0;
    bool have_prev = false;
    int batches = 0;
    const int kBatch = 8;
    const int kMaxChunks = 720;

    while (true) {
        for (int j = 0; j < kBatch; ++j) add_chunk((int)chunks.size());
        ++batches;
        std::size_t n = chunks.size();

        // Fast-decaying envelopes: the plain sum already settles.
        double last = std::abs(chunks[n - 1]);
        double prev_mag = std::abs(chunks[n - 2]);
        if (peak == 0.0 || last < 1e-300) {
            QuadResult out;
            out.value = plain_sum;
            out.abs_err_estimate = chunk_err + last;
            out.refinement_levels = batches;
            out.converged = true;
            return out;
        }
        if (prev_mag > 0.0 && last / prev_mag < 0.8) {
            double r = last / prev_mag;
            double bound = last * r / (1.0 - r);
            if (bound + chunk_err <= 0.5 * tol) {
                QuadResult out;
                out.value = plain_sum;
                out.abs_err_estimate = bound + chunk_err;
                out.refinement_levels = batches;
                out.converged = true;
                return out;
            }
        }

        if (n >= 16) {
            // Acceleration is only valid on an alternating sequence.
            int re_flip = 0, re_tot = 0, im_flip = 0, im_tot = 0;
            for (std::size_t k = 2; k + 1 < n; ++k) {
                double r0 = chunks[k].real(), r1 = chunks[k + 1].real();
                if (std::abs(r0) > 1e-14 * peak && std::abs(r1) > 1e-14 * peak) {
                    ++re_tot;
                    if (r0 * r1 < 0.0) ++re_flip;
                }
                double i0 = chunks[k].imag(), i1 = chunks[k + 1].imag();
                if (std::abs(i0) > 1e-14 * peak && std::abs(i1) > 1e-14 * peak) {
                    ++im_tot;
                    if (i0 * i1 < 0.0) ++im_flip;
                }
            }
            double ratio = 0.0;
            if (re_tot > 0) ratio = std::max(ratio, (double)re_flip / re_tot);
            if (im_tot > 0) ratio = std::max(ratio, (double)im_flip / im_tot);
            if (re_tot + im_tot > 0 && ratio < 0.6) {
                throw NonAlternationError(
                    "oscillatory_tail: half-period contributions do not alternate");
            }

            Complex est2;
            Complex est = euler_transform(partials, &est2);
            double internal = std::abs(est - est2);
            if (have_prev) {
                double change = std::abs(est - prev_est);
                double err = change + internal + chunk_err;
                if (err <= tol) {
                    QuadResult out;
                    out.value = est;
                    out.abs_err_estimate = err;
                    out.refinement_levels = batches;
                    out.converged = true;
                    return out;
                }
            }
            prev_est = est;
            have_prev = true;
        }
        if ((int)chunks.size() >= kMaxChunks) {
            std::ostringstream os;
            os << "oscillatory_tail: no convergence after " << chunks.size()
               << " half-periods (last accel change "
               << (have_prev ? std::abs(prev_est - plain_sum) : 0.0) << ")";
            throw NonConvergenceError(os.str());
        }
    }
}

namespace detail {

Complex osc_factor(const Oscillation& o, double q) {
    switch (o.kind) {
        case OscKind::Exp: return std::exp(Complex(0.0, o.frequency * q));
        case OscKind::Cos: return Complex(std::cos(o.frequency * q), 0.0);
        case OscKind::Sin: return Complex(std::sin(o.frequency * q), 0.0);
    }
    return {1.0, 0.0};
}

struct PoleLocal {
    double q0;
    Complex residue;   // c = lim (q-q0) f(q)
    Complex f1;        // F'(q0) with F(q) = (q-q0) f(q)
    Complex f2;        // F''(q0)
    double est_err;
};

// Richardson extrapolation of phi(h0/2^k), k = 0..n-1, assuming an even
// error expansion in h. Returns the deepest extrapolant.
Complex richardson_even(const std::vector<Complex>& phi, double* err) {
    const std::size_t n = phi.size();
    std::vector<Complex> cur(phi);
    Complex best = cur[n - 1];
    Complex prev = best;
    for (std::size_t m = 1; m < n; ++m) {
        double fac = std::pow(4.0, (double)m);
        for (std::size_t k = n - 1; k >= m; --k) {
            cur[k] = (fac * cur[k] - cur[k - 1]) / (fac - 1.0);
        }
        prev = best;
        best = cur[n - 1];
    }
    *err = std::abs(best - prev) + 1e-15 * std::abs(best);
    return best;
}

QuadResult pv_integrate_impl(const PVProblem& p, double tol, bool allow_zero_tail) {
    if (!p.smooth_part) throw InvalidParametersError("pv_integrate: empty smooth_part");
    for (const Pole& pl : p.poles) {
        if (pl.order != 1) {
            throw InvalidParametersError("pv_integrate: only simple poles supported");
        }
    }
    if (allow_zero_tail ? (p.tail_exponent > 0.0) : (p.tail_exponent >= 0.0)) {
        throw InvalidParametersError("pv_integrate: tail_exponent must be negative");
    }

    std::vector<double> qs;
    for (const Pole& pl : p.poles) qs.push_back(pl.location);
    std::sort(qs.begin(), qs.end());

    double gap = 0.0;
    if (qs.size() >= 2) {
        gap = qs[1] - qs[0];
        for (std::size_t i = 1; i + 1 < qs.size(); ++i) gap = std::min(gap, qs[i + 1] - qs[i]);
    } else if (qs.size() == 1) {
        gap = 2.0 * (1.0 + std::abs(qs[0]));
    } else {
        gap = 2.0;
    }
    if (!qs.empty() && gap < 1e-5) {
        throw PoleTooCloseError("pv_integrate: poles closer than the exclusion window");
    }
    const double w = 0.35 * gap;

    auto full = [&](double q) -> Complex {
        Complex v = p.smooth_part(q) * osc_factor(p.oscillation, q);
        for (double q0 : qs) v /= (q - q0);
        return v;
    };

    // Residue numerators by Richardson-extrapolated symmetric limits of
    // F(q) = (q - q0) f(q); F' and F'' feed the local expansion of the
    // subtracted integrand near the pole.
    std::vector<PoleLocal> locals;
    for (double q0 : qs) {
        auto F = [&](double q) { return (q - q0) * full(q); };
        const int levels = 5;
        double h0 = 0.2 * w;
        std::vector<Complex> sym(levels), der(levels), cur(levels);
        std::vector<Complex> fp(levels), fm(levels);
        for (int k = 0; k < levels; ++k) {
            double h = h0 / std::pow(2.0, k);
            fp[k] = F(q0 + h);
            fm[k] = F(q0 - h);
            sym[k] = 0.5 * (fp[k] + fm[k]);
            der[k] = (fp[k] - fm[k]) / (2.0 * h);
        }
        PoleLocal pl;
        pl.q0 = q0;
        double e_c = 0.0, e_1 = 0.0, e_2 = 0.0;
        pl.residue = richardson_even(sym, &e_c);
        pl.f1 = richardson_even(der, &e_1);
        for (int k = 0; k < levels; ++k) {
            double h = h0 / std::pow(2.0, k);
            cur[k] = (fp[k] - 2.0 * pl.residue + fm[k]) / (h * h);
        }
        pl.f2 = richardson_even(cur, &e_2);
        pl.est_err = e_c;
        locals.push_back(pl);
    }

    const double q_lo = qs.empty() ? -3.0 * gap : qs.front();
    const double q_hi = qs.empty() ? 3.0 * gap : qs.back();
    const double L = q_lo - 3.0 * gap;
    const double R = q_hi + 3.0 * gap;

    const double h_loc = 1e-4;
    QuadResult out;
    Complex total = 0.0;
    double err = 0.0;
    int levels_max = 0;
    bool converged = true;

    const double tol_central = qs.empty() ? 0.5 * tol : 0.4 * tol;
    const double tol_window = qs.empty() ? tol : tol_central / (2.0 * std::max<std::size_t>(qs.size(), 1));

    // Pole windows: integrate f - c/(q-q0); the subtracted term's PV over
    // the symmetric window is zero.
    for (const PoleLocal& pl : locals) {
        auto reg = [&](double q) -> Complex {
            double d = q - pl.q0;
            if (std::abs(d) < h_loc) {
                return pl.f1 + 0.5 * pl.f2 * d;
            }
            return full(q) - pl.residue / d;
        };
        QuadResult r = integrate_adaptive(reg, pl.q0 - w, pl.q0 + w, tol_window);
        total += r.value;
        err += r.abs_err_estimate + pl.est_err;
        levels_max = std::max(levels_max, r.refinement_levels);
        converged = converged && r.converged;
    }

    // Regular stretches between windows, split at q = 0 where the envelope
    // may have a kink.
    std::vector<double> cuts;
    cuts.push_back(L);
    for (double q0 : qs) {
        cuts.push_back(q0 - w);
        cuts.push_back(q0 + w);
    }
    cuts.push_back(R);
    std::vector<std::pair<double, double>> stretches;
    for (std::size_t i = 0; i + 1 < cuts.size(); i += 2) {
        stretches.push_back({cuts[i], cuts[i + 1]});
    }
    double n_stretch = (double)std::max<std::size_t>(stretches.size(), 1);
    for (auto [a, b] : stretches) {
        if (b - a < 1e-15) continue;
        if (a < 0.0 && b > 0.0) {
            QuadResult r1 = integrate_adaptive(full, a, 0.0, 0.25 * tol_central / n_stretch);
            QuadResult r2 = integrate_adaptive(full, 0.0, b, 0.25 * tol_central / n_stretch);
            total += r1.value + r2.value;
            err += r1.abs_err_estimate + r2.abs_err_estimate;
            levels_max = std::max({levels_max, r1.refinement_levels, r2.refinement_levels});
            converged = converged && r1.converged && r2.converged;
        } else {
            QuadResult r = integrate_adaptive(full, a, b, 0.5 * tol_central / n_stretch);
            total += r.value;
            err += r.abs_err_estimate;
            levels_max = std::max(levels_max, r.refinement_levels);
            converged = converged && r.converged;
        }
    }

    // Tails.
    const double fq = p.oscillation.frequency;
    const double tol_tail = 0.25 * tol;
    if (fq != 0.0) {
        QuadResult tr = oscillatory_tail(full, fq, R, tol_tail);
        QuadResult tl = oscillatory_tail([&](double u) { return full(-u); }, fq, -L, tol_tail);
        total += tr.value + tl.value;
        err += tr.abs_err_estimate + tl.abs_err_estimate;
        levels_max = std::max({levels_max, tr.refinement_levels, tl.refinement_levels});
        converged = converged && tr.converged && tl.converged;
    } else {
        if (p.tail_exponent >= -1.0) {
            throw NonConvergenceError(
                "pv_integrate: non-oscillatory tail with exponent >= -1 is not integrable");
        }
        QuadResult tr = integrate_semi_infinite(full, R, tol_tail);
        QuadResult tl = integrate_semi_infinite([&](double u) { return full(-u); }, -L, tol_tail);
        total += tr.value + tl.value;
        err += tr.abs_err_estimate + tl.abs_err_estimate;
        converged = converged && tr.converged && tl.converged;
    }

    out.value = total;
    out.abs_err_estimate = err;
    out.refinement_levels = levels_max;
    out.converged = converged && err <= tol;
    return out;
}

QuadResult pv_integrate_abel(const PVProblem& p, double tol) {
    return pv_integrate_impl(p, tol, true);
}

} // namespace detail

QuadResult pv_integrate(const PVProblem& p, double tol) {
    return detail::pv_integrate_impl(p, tol, false);
}

} // namespace fracqm::quadrature
