#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "mwk/policy.hpp"

namespace mwk {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

namespace detail {

// Lanczos approximation, g = 7.
inline constexpr double lanczos_p[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline bool near_nonpositive_integer(Complex w, double tol, double* which = nullptr) {
    if (std::abs(w.imag()) > tol) return false;
    double r = std::round(w.real());
    if (r > 0.5) return false;
    if (std::abs(w.real() - r) > tol) return false;
    if (which) *which = r;
    return true;
}

inline Complex log_gamma_right(Complex z) {
    // Re(z) >= 0.5; log-form keeps the analytic continuation without wrapping.
    Complex zz = z - 1.0;
    Complex x = lanczos_p[0];
    for (int i = 1; i < 9; ++i) x += lanczos_p[i] / (zz + static_cast<double>(i));
    Complex t = zz + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (zz + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace detail

// Principal-branch complex log-gamma. Throws on poles.
inline Complex log_gamma(Complex w) {
    double pole = 0.0;
    if (detail::near_nonpositive_integer(w, 1e-13, &pole))
        throw std::domain_error("log_gamma: pole at nonpositive integer " + std::to_string(static_cast<long>(pole)));
    if (w.real() >= 0.5) return detail::log_gamma_right(w);
    // reflection: Gamma(w) Gamma(1-w) = pi / sin(pi w)
    return std::log(kPi) - std::log(std::sin(kPi * w)) - detail::log_gamma_right(1.0 - w);
}

inline Complex gamma_fn(Complex w) { return std::exp(log_gamma(w)); }

// 1/Gamma, entire: exact zero at nonpositive integers.
inline Complex gamma_reciprocal(Complex w) {
    if (detail::near_nonpositive_integer(w, 1e-13)) return {0.0, 0.0};
    return std::exp(-log_gamma(w));
}

// Digamma psi(w) = Gamma'(w)/Gamma(w). Throws on poles.
inline Complex digamma(Complex w) {
    double pole = 0.0;
    if (detail::near_nonpositive_integer(w, 1e-13, &pole))
        throw std::domain_error("digamma: pole at nonpositive integer " + std::to_string(static_cast<long>(pole)));
    Complex acc = 0.0;
    if (w.real() < 0.5) {
        acc -= kPi / std::tan(kPi * w);
        w = 1.0 - w;
    }
    while (w.real() < 12.0) {
        acc -= 1.0 / w;
        w += 1.0;
    }
    // asymptotic series with Bernoulli numbers B2..B14
    static constexpr double b2n_over_2n[7] = {1.0 / 12,   -1.0 / 120,   1.0 / 252, -1.0 / 240,
                                              1.0 / 132,  -691.0 / 32760, 1.0 / 12};
    Complex inv2 = 1.0 / (w * w);
    Complex sum = 0.0, p = inv2;
    for (double c : b2n_over_2n) {
        sum += c * p;
        p *= inv2;
    }
    return acc + std::log(w) - 0.5 / w - sum;
}

}  // namespace mwk
