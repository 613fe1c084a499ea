#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "mwk/complexfun.hpp"
#include "mwk/policy.hpp"
#include "mwk/scaled.hpp"
#include "mwk/series.hpp"

namespace mwk {

// W_{kappa,mu}(x) and d/dx W, in scaled form (value = m * exp(lg)).
struct WhittakerScaled {
    ScaledC w;
    ScaledC dw;
    bool epsilon_path = false;  // near-degenerate order handled by the limit path
};

namespace detail {

// 10-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 10> kGl10X = {
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
    -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
    0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
    0.9739065285171717};
inline constexpr std::array<double, 10> kGl10W = {
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
    0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
    0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
    0.0666713443086881};

struct BranchPrefactors {
    Complex lp_plus;   // log[ Gamma(-2mu) / Gamma(1/2-kappa-mu) ]
    Complex lp_minus;  // log[ Gamma(+2mu) / Gamma(1/2-kappa+mu) ]
    bool plus_alive;
    bool minus_alive;
};

inline BranchPrefactors branch_prefactors(double kappa, Complex mu) {
    BranchPrefactors out{};
    out.plus_alive = !near_nonpositive_integer(0.5 - kappa - mu, 1e-13);
    out.minus_alive = !near_nonpositive_integer(0.5 - kappa + mu, 1e-13);
    if (out.plus_alive) out.lp_plus = log_gamma(-2.0 * mu) - log_gamma(0.5 - kappa - mu);
    if (out.minus_alive) out.lp_minus = log_gamma(2.0 * mu) - log_gamma(0.5 - kappa + mu);
    if (!out.plus_alive && !out.minus_alive)
        throw std::domain_error("whittaker_w: both branch gamma factors degenerate");
    return out;
}

// Series zone: x <= series_x_max. Both branches of the confluent representation
// combined with log-scaled prefactors so large kappa stays finite.
inline WhittakerScaled whittaker_series(double kappa, Complex mu, double x,
                                        const AccuracyPolicy& pol) {
    BranchPrefactors bp = branch_prefactors(kappa, mu);
    double lx = std::log(x);
    ScaledC w = ScaledC::zero(), dw = ScaledC::zero();
    for (int sign : {+1, -1}) {
        bool alive = sign > 0 ? bp.plus_alive : bp.minus_alive;
        if (!alive) continue;
        Complex lp = sign > 0 ? bp.lp_plus : bp.lp_minus;
        Complex m = static_cast<double>(sign) * mu;
        Complex alpha = 0.5 - kappa + m, gamma = 2.0 * m + 1.0;
        Complex f = kummer_1f1(alpha, gamma, x, pol);
        Complex df = alpha / gamma * kummer_1f1(alpha + 1.0, gamma + 1.0, x, pol);
        // W-branch = exp(lp) x^{m+1/2} e^{-x/2} F
        ScaledC pref = ScaledC::from_log(lp + (m + 0.5) * lx - 0.5 * x);
        w = w + pref * f;
        dw = dw + pref * (((m + 0.5) / x - 0.5) * f + df);
    }
    return {w, dw, false};
}

// Mid zone: classical integral representation, valid for Re(mu - kappa + 1/2) > 0,
//   W = e^{-x/2} x^kappa / Gamma(c) * int_0^inf e^{-t} t^{c-1} (1 + t/x)^d dt,
// with c = mu - kappa + 1/2, d = kappa + mu - 1/2.
inline ScaledC whittaker_integral_core(double kappa, Complex mu, double x) {
    Complex c = mu - kappa + 0.5;
    Complex d = kappa + mu - 0.5;
    double rc = std::max(c.real(), 0.05);
    double smax = std::max(40.0, 34.0 / rc);
    double plen = std::min(1.0, 1.5 / (1.0 + std::abs(c.imag())));
    int nseg = static_cast<int>(std::ceil(smax / plen));
    Complex acc = 0.0;
    for (int i = 0; i < nseg; ++i) {
        double a = smax * i / nseg, b = smax * (i + 1) / nseg;
        for (int q = 0; q < 10; ++q) {
            double s = 0.5 * (b - a) * kGl10X[q] + 0.5 * (a + b);
            double t = std::exp(-s);
            acc += 0.5 * (b - a) * kGl10W[q] * std::exp(-t) *
                   std::exp(-c * s) * std::pow(Complex(1.0 + t / x, 0.0), d);
        }
    }
    for (int k = 0; k < 50; ++k) {
        double a = 1.0 + k, b = 2.0 + k;
        for (int q = 0; q < 10; ++q) {
            double t = 0.5 * (b - a) * kGl10X[q] + 0.5 * (a + b);
            acc += 0.5 * (b - a) * kGl10W[q] * std::exp(-t) *
                   std::pow(Complex(t, 0.0), c - 1.0) *
                   std::pow(Complex(1.0 + t / x, 0.0), d);
        }
    }
    return ScaledC::from_log(Complex(-0.5 * x + kappa * std::log(x), 0.0) - log_gamma(c)) *
           acc;
}

// W_{kappa+1} = (x - 2 kappa) W_kappa + (mu^2 - (kappa - 1/2)^2) W_{kappa-1}.
inline ScaledC whittaker_mid(double kappa, Complex mu, double x) {
    if (kappa <= 0.25) return whittaker_integral_core(kappa, mu, x);
    int nshift = static_cast<int>(std::ceil(kappa - 0.25));
    double ks = kappa - nshift;
    ScaledC w0 = whittaker_integral_core(ks - 1.0, mu, x);
    ScaledC w1 = whittaker_integral_core(ks, mu, x);
    for (int j = 0; j < nshift; ++j) {
        double kk = ks + j;
        ScaledC w2 = w1 * Complex(x - 2.0 * kk, 0.0) +
                     w0 * (mu * mu - Complex((kk - 0.5) * (kk - 0.5), 0.0));
        w0 = w1;
        w1 = w2;
    }
    return w1;
}

// Large-x zone: W ~ e^{-x/2} x^kappa sum_s (1/2+mu-kappa)_s (1/2-mu-kappa)_s / (s! (-x)^s),
// truncated at the smallest term.
inline ScaledC whittaker_asymptotic(double kappa, Complex mu, double x,
                                    const AccuracyPolicy& pol) {
    Complex s = 1.0, t = 1.0;
    double best = 1.0;
    for (int m = 0; m < 80; ++m) {
        Complex tn = t * (0.5 + mu - kappa + static_cast<double>(m)) *
                     (0.5 - mu - kappa + static_cast<double>(m)) / ((m + 1.0) * (-x));
        if (std::abs(tn) >= best) break;  // divergence onset of the asymptotic tail
        t = tn;
        best = std::abs(t);
        s += t;
        if (best <= 0.1 * pol.target_rel_error * std::abs(s)) break;
    }
    return ScaledC::from_log(Complex(-0.5 * x + kappa * std::log(x), 0.0)) * s;
}

inline ScaledC whittaker_value_dispatch(double kappa, Complex mu, double x,
                                        const AccuracyPolicy& pol) {
    if (x <= pol.series_x_max || kappa > 2.6) return whittaker_series(kappa, mu, x, pol).w;
    if (x >= pol.large_x_switch) return whittaker_asymptotic(kappa, mu, x, pol);
    return whittaker_mid(kappa, mu, x);
}

// d/dx W_{kappa,mu} = (kappa/x - 1/2) W_kappa - (mu^2 - (kappa-1/2)^2)/x W_{kappa-1}.
inline WhittakerScaled whittaker_nondegenerate(double kappa, Complex mu, double x,
                                               const AccuracyPolicy& pol) {
    if (x <= pol.series_x_max || kappa > 2.6) return whittaker_series(kappa, mu, x, pol);
    ScaledC w = whittaker_value_dispatch(kappa, mu, x, pol);
    ScaledC wm = whittaker_value_dispatch(kappa - 1.0, mu, x, pol);
    Complex ck = mu * mu - Complex((kappa - 0.5) * (kappa - 0.5), 0.0);
    ScaledC dw = w * Complex(kappa / x - 0.5, 0.0) - wm * (ck / x);
    return {w, dw, false};
}

inline bool order_degenerate(Complex mu, const AccuracyPolicy& pol) {
    if (std::abs(mu) < 2.0 * pol.mu_epsilon) return true;  // logarithmic case mu -> 0
    if (std::abs(mu.imag()) > 1e-12) return false;
    double two = 2.0 * mu.real();
    return std::abs(two - std::round(two)) < 4.0 * pol.mu_epsilon;
}

}  // namespace detail

// W_{kappa,mu}(x) with derivative, scaled. kappa real; mu real or pure imaginary.
// Degenerate orders (2 mu integer, including the logarithmic case mu = 0) are
// evaluated at mu shifted by +-eps and Richardson-extrapolated in the even variable.
inline WhittakerScaled whittaker_w_scaled(double kappa, Complex mu, double x,
                                          const AccuracyPolicy& pol = {}) {
    if (!(x > 0.0)) throw std::domain_error("whittaker_w: requires x > 0");
    if (std::abs(mu.real()) > 1e-12 && std::abs(mu.imag()) > 1e-12)
        throw std::domain_error("whittaker_w: mu must be real or pure imaginary");
    if (!detail::order_degenerate(mu, pol))
        return detail::whittaker_nondegenerate(kappa, mu, x, pol);

    double center = std::round(2.0 * mu.real()) / 2.0;
    double eps = pol.mu_epsilon;
    auto sym = [&](double t) {
        WhittakerScaled a =
            detail::whittaker_nondegenerate(kappa, Complex(center + t, 0.0), x, pol);
        WhittakerScaled b =
            detail::whittaker_nondegenerate(kappa, Complex(center - t, 0.0), x, pol);
        return std::pair<ScaledC, ScaledC>{(a.w + b.w) * 0.5, (a.dw + b.dw) * 0.5};
    };
    auto [w1, d1] = sym(eps);
    auto [w2, d2] = sym(2.0 * eps);
    // Richardson on the even function of the order offset: (4 S(e) - S(2e)) / 3.
    WhittakerScaled out;
    out.w = (w1 * 4.0 - w2) * (1.0 / 3.0);
    out.dw = (d1 * 4.0 - d2) * (1.0 / 3.0);
    out.epsilon_path = true;
    return out;
}

namespace detail {

inline double real_with_residue_check(ScaledC v, const char* who) {
    Complex z = v.m;
    if (!(std::abs(z.imag()) <= 1e-7 * std::abs(z) + 1e-300))
        throw numeric_error(std::string(who) + ": imaginary residue above tolerance");
    double out = (ScaledC{Complex(z.real(), 0.0), v.lg}).value().real();
    if (!std::isfinite(out) && v.m != Complex(0.0, 0.0) && v.lg > 0)
        throw numeric_error(std::string(who) + ": overflow in final value");
    return out;
}

}  // namespace detail

inline double whittaker_w(double kappa, Complex mu, double x, const AccuracyPolicy& pol = {}) {
    return detail::real_with_residue_check(whittaker_w_scaled(kappa, mu, x, pol).w,
                                           "whittaker_w");
}

inline double whittaker_w_dx(double kappa, Complex mu, double x,
                             const AccuracyPolicy& pol = {}) {
    return detail::real_with_residue_check(whittaker_w_scaled(kappa, mu, x, pol).dw,
                                           "whittaker_w_dx");
}

// Second derivative from parameter-shifted evaluations (not from the ODE, which is
// reserved as an independent test).
inline double whittaker_w_dxx(double kappa, Complex mu, double x,
                              const AccuracyPolicy& pol = {}) {
    if (x <= pol.series_x_max && !detail::order_degenerate(mu, pol)) {
        detail::BranchPrefactors bp = detail::branch_prefactors(kappa, mu);
        double lx = std::log(x);
        ScaledC acc = ScaledC::zero();
        for (int sign : {+1, -1}) {
            bool alive = sign > 0 ? bp.plus_alive : bp.minus_alive;
            if (!alive) continue;
            Complex lp = sign > 0 ? bp.lp_plus : bp.lp_minus;
            Complex m = static_cast<double>(sign) * mu;
            Complex alpha = 0.5 - kappa + m, gamma = 2.0 * m + 1.0;
            Complex s = m + 0.5;
            Complex f = kummer_1f1(alpha, gamma, x, pol);
            Complex df = alpha / gamma * kummer_1f1(alpha + 1.0, gamma + 1.0, x, pol);
            Complex ddf = alpha * (alpha + 1.0) / (gamma * (gamma + 1.0)) *
                          kummer_1f1(alpha + 2.0, gamma + 2.0, x, pol);
            Complex poly = (s * (s - 1.0) / (x * x) - s / x + 0.25) * f +
                           (2.0 * s / x - 1.0) * df + ddf;
            acc = acc + ScaledC::from_log(lp + s * lx - 0.5 * x) * poly;
        }
        return detail::real_with_residue_check(acc, "whittaker_w_dxx");
    }
    // chain the first-derivative contiguous relation
    WhittakerScaled k0 = whittaker_w_scaled(kappa, mu, x, pol);
    WhittakerScaled k1 = whittaker_w_scaled(kappa - 1.0, mu, x, pol);
    Complex ck = mu * mu - Complex((kappa - 0.5) * (kappa - 0.5), 0.0);
    ScaledC ddw = k0.dw * Complex(kappa / x - 0.5, 0.0) - k0.w * Complex(kappa / (x * x), 0.0) +
                  k1.w * (ck / (x * x)) - k1.dw * (ck / x);
    return detail::real_with_residue_check(ddw, "whittaker_w_dxx");
}

// Branch decomposition at small x (used by the tail-limit paths):
//   x^{-1/2} W_{kappa,mu}(x) = e^{-x/2} [ x^{+mu} e^{lp_plus} F_plus + x^{-mu} e^{lp_minus} F_minus ].
// Callers pass log(x) so the decomposition stays valid when x underflows.
struct WhittakerBranchParts {
    Complex lp_plus, lp_minus;  // log prefactors
    bool plus_alive, minus_alive;
    Complex f_plus, f_minus;      // 1F1 values
    Complex f1_plus, f1_minus;    // 1F1 - 1
    Complex df_plus, df_minus;    // d/dx 1F1
};

inline WhittakerBranchParts whittaker_branches(double kappa, Complex mu, double log_x,
                                               const AccuracyPolicy& pol = {}) {
    detail::BranchPrefactors bp = detail::branch_prefactors(kappa, mu);
    double x = std::exp(log_x);  // may underflow; series below degrade gracefully to x = 0
    WhittakerBranchParts out{};
    out.lp_plus = bp.lp_plus;
    out.lp_minus = bp.lp_minus;
    out.plus_alive = bp.plus_alive;
    out.minus_alive = bp.minus_alive;
    for (int sign : {+1, -1}) {
        bool alive = sign > 0 ? bp.plus_alive : bp.minus_alive;
        if (!alive) continue;
        Complex m = static_cast<double>(sign) * mu;
        Complex alpha = 0.5 - kappa + m, gamma = 2.0 * m + 1.0;
        Complex f1 = kummer_1f1_m1(alpha, gamma, x, pol);
        Complex df = alpha / gamma * kummer_1f1(alpha + 1.0, gamma + 1.0, x, pol);
        if (sign > 0) {
            out.f1_plus = f1;
            out.f_plus = 1.0 + f1;
            out.df_plus = df;
        } else {
            out.f1_minus = f1;
            out.f_minus = 1.0 + f1;
            out.df_minus = df;
        }
    }
    return out;
}

}  // namespace mwk
