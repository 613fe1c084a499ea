#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "mwk/complexfun.hpp"
#include "mwk/policy.hpp"
#include "mwk/series.hpp"
#include "mwk/whittaker.hpp"

namespace mwk {

enum class BesselKind { J, I, K };

namespace detail {

// (X/2)^nu / Gamma(nu+1) * 0F1(nu+1; s (X/2)^2), s = -1 for J, +1 for I.
inline Complex bessel_ji(Complex nu, double x, int s, const AccuracyPolicy& pol) {
    Complex lg = nu * std::log(0.5 * x) - log_gamma(nu + 1.0);
    return std::exp(lg) * hyper_0f1(nu + 1.0, s * 0.25 * x * x, pol);
}

inline Complex bessel_ji_dx(Complex nu, double x, int s, const AccuracyPolicy& pol) {
    // d/dX: (nu/X) B_nu -+ B_{nu+1}; J gets the minus, I the plus.
    Complex b = bessel_ji(nu, x, s, pol);
    Complex b1 = bessel_ji(nu + 1.0, x, s, pol);
    return nu / x * b + static_cast<double>(s) * b1;
}

inline Complex macdonald_raw(Complex nu, double x, const AccuracyPolicy& pol) {
    return kPi / (2.0 * std::sin(kPi * nu)) *
           (bessel_ji(-nu, x, +1, pol) - bessel_ji(nu, x, +1, pol));
}

inline Complex macdonald_raw_dx(Complex nu, double x, const AccuracyPolicy& pol) {
    return kPi / (2.0 * std::sin(kPi * nu)) *
           (bessel_ji_dx(-nu, x, +1, pol) - bessel_ji_dx(nu, x, +1, pol));
}

inline bool bessel_order_degenerate(Complex nu, const AccuracyPolicy& pol) {
    if (std::abs(nu) < pol.mu_epsilon) return true;
    if (std::abs(nu.imag()) > 1e-12) return false;
    return std::abs(nu.real() - std::round(nu.real())) < 2.0 * pol.mu_epsilon;
}

inline double real_part_checked(Complex v, const char* who) {
    if (!(std::abs(v.imag()) <= 1e-8 * std::abs(v) + 1e-280))
        throw numeric_error(std::string(who) + ": imaginary residue above tolerance");
    return v.real();
}

}  // namespace detail

// Complex-valued J/I/K for real or pure-imaginary order (J_{i tau} is genuinely
// complex; only K and certain conjugate combinations are real).
inline Complex bessel_complex(BesselKind kind, Complex nu, double x,
                              const AccuracyPolicy& pol = {}) {
    if (!(x > 0.0)) throw std::domain_error("bessel: requires X > 0");
    switch (kind) {
        case BesselKind::J:
            return detail::bessel_ji(nu, x, -1, pol);
        case BesselKind::I:
            return detail::bessel_ji(nu, x, +1, pol);
        case BesselKind::K:
            return detail::macdonald_raw(nu, x, pol);
    }
    throw std::invalid_argument("bessel_complex: unknown kind");
}

inline Complex bessel_complex_dx(BesselKind kind, Complex nu, double x,
                                 const AccuracyPolicy& pol = {}) {
    if (!(x > 0.0)) throw std::domain_error("bessel_dx: requires X > 0");
    switch (kind) {
        case BesselKind::J:
            return detail::bessel_ji_dx(nu, x, -1, pol);
        case BesselKind::I:
            return detail::bessel_ji_dx(nu, x, +1, pol);
        case BesselKind::K:
            return detail::macdonald_raw_dx(nu, x, pol);
    }
    throw std::invalid_argument("bessel_complex_dx: unknown kind");
}

// Real-valued entry point. J/I require real order; K admits real or pure-imaginary
// order. Integer-order K (where the sine denominator vanishes) goes through the
// eps-shifted Richardson limit, like the logarithmic Whittaker case.
inline double bessel(BesselKind kind, Complex nu, double x, const AccuracyPolicy& pol = {}) {
    if (!(x > 0.0)) throw std::domain_error("bessel: requires X > 0");
    if (kind != BesselKind::K && std::abs(nu.imag()) > 1e-12)
        throw std::domain_error("bessel: J/I of imaginary order are complex; use bessel_complex");
    switch (kind) {
        case BesselKind::J:
            return detail::real_part_checked(detail::bessel_ji(nu, x, -1, pol), "bessel J");
        case BesselKind::I:
            return detail::real_part_checked(detail::bessel_ji(nu, x, +1, pol), "bessel I");
        case BesselKind::K: {
            if (!detail::bessel_order_degenerate(nu, pol))
                return detail::real_part_checked(detail::macdonald_raw(nu, x, pol), "bessel K");
            double center = std::round(nu.real());
            double eps = pol.mu_epsilon;
            auto sym = [&](double t) {
                return 0.5 * (detail::macdonald_raw(Complex(center + t, 0.0), x, pol) +
                              detail::macdonald_raw(Complex(center - t, 0.0), x, pol));
            };
            Complex v = (4.0 * sym(eps) - sym(2.0 * eps)) / 3.0;
            if (!std::isfinite(v.real()))
                throw std::domain_error("bessel K: degenerate order limit failed");
            return detail::real_part_checked(v, "bessel K");
        }
    }
    throw std::invalid_argument("bessel: unknown kind");
}

inline double bessel_dx(BesselKind kind, Complex nu, double x,
                        const AccuracyPolicy& pol = {}) {
    if (!(x > 0.0)) throw std::domain_error("bessel_dx: requires X > 0");
    switch (kind) {
        case BesselKind::J:
            return detail::real_part_checked(detail::bessel_ji_dx(nu, x, -1, pol), "bessel J'");
        case BesselKind::I:
            return detail::real_part_checked(detail::bessel_ji_dx(nu, x, +1, pol), "bessel I'");
        case BesselKind::K: {
            if (!detail::bessel_order_degenerate(nu, pol))
                return detail::real_part_checked(detail::macdonald_raw_dx(nu, x, pol),
                                                 "bessel K'");
            double center = std::round(nu.real());
            double eps = pol.mu_epsilon;
            auto sym = [&](double t) {
                return 0.5 * (detail::macdonald_raw_dx(Complex(center + t, 0.0), x, pol) +
                              detail::macdonald_raw_dx(Complex(center - t, 0.0), x, pol));
            };
            Complex v = (4.0 * sym(eps) - sym(2.0 * eps)) / 3.0;
            return detail::real_part_checked(v, "bessel K'");
        }
    }
    throw std::invalid_argument("bessel_dx: unknown kind");
}

}  // namespace mwk
