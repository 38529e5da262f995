#include "fracqm/gamma.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fracqm/errors.hpp"

namespace fracqm::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogSqrt2Pi = 0.91893853320467274178; // log(sqrt(2*pi))

// Lanczos coefficients, g = 607/128, as tabulated by Godfrey and used in
// Press et al. (3rd ed.). Relative error ~1e-14 on the right half-plane.
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczosC0 = 0.999999999999997092;
constexpr double kLanczosCoef[14] = {
    57.1562356658629235,     -59.5979603554754912,
    14.1360979747417471,     -0.491913816097620199,
    0.339946499848118887e-4, 0.465236289270485756e-4,
    -0.983744753048795646e-4, 0.158088703224912494e-3,
    -0.210264441724104883e-3, 0.217439618115212643e-3,
    -0.164318106536763890e-3, 0.844182239838527433e-4,
    -0.261908384015814087e-4, 0.368991826595316234e-5,
};

bool is_nonpositive_integer(Complex z, double tol = 1e-14) {
    if (z.real() > 0.5) return false;
    double r = std::round(z.real());
    return std::abs(z.imag()) < tol && std::abs(z.real() - r) < tol && r <= 0.0;
}

// log Gamma for Re(z) >= 0.5 only.
Complex log_gamma_right(Complex z) {
    Complex ser(kLanczosC0, 0.0);
    Complex y = z;
    for (double c : kLanczosCoef) {
        y += 1.0;
        ser += c / y;
    }
    Complex t = z + (kLanczosG + 0.5);
    // Gamma(z) = sqrt(2 pi) * ser * t^(z+1/2) * exp(-t) / z
    return kLogSqrt2Pi + (z + 0.5) * std::log(t) - t + std::log(ser) - std::log(z);
}

// log(sin(pi z)) stable for large |Im z|; branch offsets are harmless here.
Complex log_sin_pi(Complex z) {
    if (std::abs(z.imag()) < 20.0) {
        return std::log(std::sin(kPi * z));
    }
    const Complex i(0.0, 1.0);
    if (z.imag() > 0.0) {
        // sin(pi z) = -e^{-i pi z} (1 - e^{2 i pi z}) / (2i)
        return -i * kPi * z + std::log(1.0 - std::exp(2.0 * i * kPi * z)) - std::log(2.0 * i);
    }
    return i * kPi * z + std::log(1.0 - std::exp(-2.0 * i * kPi * z)) - std::log(-2.0 * i);
}

} // namespace

Complex log_gamma_complex(Complex z) {
    if (is_nonpositive_integer(z)) {
        throw GammaPoleError("gamma pole at z = " + std::to_string(z.real()));
    }
    if (z.real() >= 0.5) {
        return log_gamma_right(z);
    }
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(Complex(kPi, 0.0)) - log_sin_pi(z) - log_gamma_right(1.0 - z);
}

Complex gamma_complex(Complex z) {
    Complex lg = log_gamma_complex(z);
    if (lg.real() > 709.0) {
        throw OverflowError("gamma overflow: Re(log Gamma) = " + std::to_string(lg.real()));
    }
    return std::exp(lg);
}

Complex digamma_complex(Complex z) {
    if (is_nonpositive_integer(z)) {
        throw GammaPoleError("digamma pole at z = " + std::to_string(z.real()));
    }
    if (z.real() < 0.5) {
        // psi(z) = psi(1-z) - pi cot(pi z)
        Complex c = std::cos(kPi * z) / std::sin(kPi * z);
        return digamma_complex(1.0 - z) - kPi * c;
    }
    Complex acc(0.0, 0.0);
    while (z.real() < 10.0) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // Stirling: psi(z) ~ log z - 1/(2z) - sum B_{2n} / (2n z^{2n})
    const double b[] = {1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0,
                        1.0 / 132.0, -691.0 / 32760.0};
    Complex inv2 = 1.0 / (z * z);
    Complex term = inv2;
    Complex tail(0.0, 0.0);
    for (double bk : b) {
        tail += bk * term;
        term *= inv2;
    }
    return acc + std::log(z) - 0.5 / z - tail;
}

} // namespace fracqm::specfun
