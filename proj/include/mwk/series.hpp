#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "mwk/complexfun.hpp"
#include "mwk/policy.hpp"

namespace mwk {

// Declared overflow bound for the confluent series argument.
inline constexpr double kSeriesArgBound = 700.0;

namespace detail {

inline void check_series_args(Complex gamma, double x, const char* who) {
    if (near_nonpositive_integer(gamma, 1e-13))
        throw std::domain_error(std::string(who) + ": lower parameter is a nonpositive integer");
    if (std::abs(x) > kSeriesArgBound)
        throw std::domain_error(std::string(who) + ": |x| exceeds overflow bound");
}

}  // namespace detail

// Kummer 1F1(alpha; gamma; x) = sum (alpha)_m x^m / (m! (gamma)_m).
// Pochhammer factors built iteratively in the term recurrence.
inline Complex kummer_1f1(Complex alpha, Complex gamma, double x,
                          const AccuracyPolicy& pol = {}) {
    detail::check_series_args(gamma, x, "kummer_1f1");
    Complex s = 1.0, t = 1.0;
    int calm = 0;
    for (int m = 0; m < pol.max_terms; ++m) {
        t *= (alpha + static_cast<double>(m)) * x /
             ((gamma + static_cast<double>(m)) * (m + 1.0));
        s += t;
        if (std::abs(t) <= 0.1 * pol.target_rel_error * std::abs(s)) {
            if (++calm >= 2) return s;
        } else {
            calm = 0;
        }
    }
    throw numeric_error("kummer_1f1: series did not converge within max_terms");
}

// 1F1 - 1 (the series starting at m = 1); stable when the sum is O(x).
inline Complex kummer_1f1_m1(Complex alpha, Complex gamma, double x,
                             const AccuracyPolicy& pol = {}) {
    detail::check_series_args(gamma, x, "kummer_1f1");
    Complex t = alpha * x / gamma;
    Complex s = t;
    int calm = 0;
    for (int m = 1; m < pol.max_terms; ++m) {
        t *= (alpha + static_cast<double>(m)) * x /
             ((gamma + static_cast<double>(m)) * (m + 1.0));
        s += t;
        if (std::abs(t) <= 0.1 * pol.target_rel_error * (std::abs(s) + 1.0)) {
            if (++calm >= 2) return s;
        } else {
            calm = 0;
        }
    }
    throw numeric_error("kummer_1f1_m1: series did not converge within max_terms");
}

// d/dx 1F1(alpha; gamma; x) = (alpha/gamma) 1F1(alpha+1; gamma+1; x).
inline Complex kummer_1f1_dx(Complex alpha, Complex gamma, double x,
                             const AccuracyPolicy& pol = {}) {
    return alpha / gamma * kummer_1f1(alpha + 1.0, gamma + 1.0, x, pol);
}

// 0F1(; gamma; x) = sum x^m / (m! (gamma)_m).
inline Complex hyper_0f1(Complex gamma, double x, const AccuracyPolicy& pol = {}) {
    detail::check_series_args(gamma, x, "hyper_0f1");
    Complex s = 1.0, t = 1.0;
    int calm = 0;
    for (int m = 0; m < pol.max_terms; ++m) {
        t *= x / ((gamma + static_cast<double>(m)) * (m + 1.0));
        s += t;
        if (std::abs(t) <= 0.1 * pol.target_rel_error * std::abs(s)) {
            if (++calm >= 2) return s;
        } else {
            calm = 0;
        }
    }
    throw numeric_error("hyper_0f1: series did not converge within max_terms");
}

// d/dx 0F1(; gamma; x) = (1/gamma) 0F1(; gamma+1; x).
inline Complex hyper_0f1_dx(Complex gamma, double x, const AccuracyPolicy& pol = {}) {
    return hyper_0f1(gamma + 1.0, x, pol) / gamma;
}

}  // namespace mwk
