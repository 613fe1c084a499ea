#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "mwk/complexfun.hpp"

namespace mwk {

namespace detail {

inline bool near_integer(double v, double tol = 1e-9) {
    return std::abs(v - std::round(v)) < tol;
}

}  // namespace detail

// Admissible parameter pair (z, z') with the derived (a, mu, sigma).
// Either z' = conj(z) off the real axis, or both real non-integers inside a
// common unit interval (m, m+1).
struct ParameterSet {
    Complex z;
    Complex z_prime;
    double a = 0.0;    // (z + z')/2, always real
    Complex mu;        // (z - z')/2, real or pure imaginary
    double sigma = 0.0;

    bool mu_is_real() const { return mu.imag() == 0.0; }
};

// sigma^2 = (cos 2 pi mu - cos 2 pi a)/2; rejects nonpositive values.
inline double sigma_of(double a, Complex mu) {
    Complex c = 0.5 * (std::cos(2.0 * kPi * mu) - std::cos(2.0 * kPi * a));
    if (std::abs(c.imag()) > 1e-12 * (1.0 + std::abs(c)))
        throw std::domain_error("sigma_of: sigma^2 not real; inadmissible (a, mu)");
    if (!(c.real() > 0.0))
        throw std::domain_error("sigma_of: sigma^2 = " + std::to_string(c.real()) +
                                " is not strictly positive; inadmissible (a, mu)");
    return std::sqrt(c.real());
}

inline ParameterSet make_parameters(Complex z, Complex z_prime) {
    ParameterSet p;
    // snap tiny imaginary parts so the real branch is recognized exactly
    if (std::abs(z.imag()) < 1e-12) z = Complex(z.real(), 0.0);
    if (std::abs(z_prime.imag()) < 1e-12) z_prime = Complex(z_prime.real(), 0.0);

    if (z.imag() != 0.0 || z_prime.imag() != 0.0) {
        if (std::abs(z_prime - std::conj(z)) > 1e-9 * (1.0 + std::abs(z)))
            throw std::invalid_argument(
                "make_parameters: complex branch requires z' = conj(z)");
    } else {
        if (detail::near_integer(z.real()))
            throw std::invalid_argument("make_parameters: z must not be an integer");
        if (detail::near_integer(z_prime.real()))
            throw std::invalid_argument("make_parameters: z' must not be an integer");
        double mz = std::floor(z.real()), mzp = std::floor(z_prime.real());
        if (mz != mzp)
            throw std::invalid_argument(
                "make_parameters: real branch requires m < z, z' < m+1 for a common integer m");
    }

    Complex a_c = 0.5 * (z + z_prime);
    if (std::abs(a_c.imag()) > 1e-12)
        throw std::invalid_argument("make_parameters: a = (z+z')/2 must be real");
    p.z = z;
    p.z_prime = z_prime;
    p.a = a_c.real();
    p.mu = 0.5 * (z - z_prime);
    if (std::abs(p.mu.real()) < 1e-12) p.mu = Complex(0.0, p.mu.imag());
    if (std::abs(p.mu.imag()) < 1e-12) p.mu = Complex(p.mu.real(), 0.0);
    if (p.mu == Complex(0.0, 0.0) && detail::near_integer(p.a))
        throw std::invalid_argument("make_parameters: a must not be an integer when mu = 0");
    p.sigma = sigma_of(p.a, p.mu);
    return p;
}

// (z, z') -> (z + N, z' + N); mu unchanged, a shifted by N.
inline ParameterSet shift_parameters(const ParameterSet& p, int n) {
    return make_parameters(p.z + static_cast<double>(n), p.z_prime + static_cast<double>(n));
}

}  // namespace mwk
