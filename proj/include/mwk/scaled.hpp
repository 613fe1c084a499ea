#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace mwk {

// Sign + log-magnitude representation for quantities whose natural scale
// overflows double (gamma prefactors at large parameters). value = sign * exp(lg).
struct Scaled {
    double lg = -std::numeric_limits<double>::infinity();
    int sgn = 0;

    static Scaled zero() { return {}; }

    static Scaled from(double v) {
        if (v == 0.0) return {};
        return {std::log(std::abs(v)), v > 0 ? 1 : -1};
    }

    static Scaled from_log(double lg_, int sgn_) { return {lg_, sgn_}; }

    double value() const { return sgn == 0 ? 0.0 : sgn * std::exp(lg); }
    bool is_zero() const { return sgn == 0; }

    friend Scaled operator*(Scaled a, Scaled b) {
        if (a.sgn == 0 || b.sgn == 0) return {};
        return {a.lg + b.lg, a.sgn * b.sgn};
    }
    friend Scaled operator*(Scaled a, double b) { return a * from(b); }
    friend Scaled operator/(Scaled a, Scaled b) {
        if (a.sgn == 0) return {};
        return {a.lg - b.lg, a.sgn * b.sgn};
    }
    friend Scaled operator-(Scaled a) { return {a.lg, -a.sgn}; }

    friend Scaled operator+(Scaled a, Scaled b) {
        if (a.sgn == 0) return b;
        if (b.sgn == 0) return a;
        double m = std::max(a.lg, b.lg);
        double s = a.sgn * std::exp(a.lg - m) + b.sgn * std::exp(b.lg - m);
        if (s == 0.0) return {};
        return {m + std::log(std::abs(s)), s > 0 ? 1 : -1};
    }
    friend Scaled operator-(Scaled a, Scaled b) { return a + (-b); }
};

// Complex analogue: mantissa * exp(lg) with |mantissa| kept near 1.
struct ScaledC {
    std::complex<double> m{0.0, 0.0};
    double lg = -std::numeric_limits<double>::infinity();

    static ScaledC zero() { return {}; }

    static ScaledC from(std::complex<double> v) {
        double a = std::abs(v);
        if (a == 0.0) return {};
        return {v / a, std::log(a)};
    }

    static ScaledC from_log(std::complex<double> log_value) {
        return {std::exp(std::complex<double>(0.0, log_value.imag())), log_value.real()};
    }

    bool is_zero() const { return m == std::complex<double>(0.0, 0.0); }
    std::complex<double> value() const { return m * std::exp(lg); }

    ScaledC normalized() const {
        double a = std::abs(m);
        if (a == 0.0) return {};
        return {m / a, lg + std::log(a)};
    }

    friend ScaledC operator*(ScaledC a, ScaledC b) {
        if (a.is_zero() || b.is_zero()) return {};
        return ScaledC{a.m * b.m, a.lg + b.lg}.normalized();
    }
    friend ScaledC operator*(ScaledC a, std::complex<double> b) { return a * from(b); }
    friend ScaledC operator*(ScaledC a, double b) { return a * from(std::complex<double>(b, 0.0)); }
    friend ScaledC operator/(ScaledC a, ScaledC b) {
        if (a.is_zero()) return {};
        return ScaledC{a.m / b.m, a.lg - b.lg}.normalized();
    }
    friend ScaledC operator-(ScaledC a) { return {-a.m, a.lg}; }

    friend ScaledC operator+(ScaledC a, ScaledC b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        double mx = std::max(a.lg, b.lg);
        std::complex<double> s = a.m * std::exp(a.lg - mx) + b.m * std::exp(b.lg - mx);
        return ScaledC{s, mx}.normalized();
    }
    friend ScaledC operator-(ScaledC a, ScaledC b) { return a + (-b); }
};

}  // namespace mwk
