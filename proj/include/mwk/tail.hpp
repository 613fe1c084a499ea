#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mwk/bessel.hpp"
#include "mwk/kernels.hpp"
#include "mwk/params.hpp"
#include "mwk/whittaker.hpp"

namespace mwk {

// Constants of the logarithmic rescaling toward the origin:
// density C with K_{++}(x,x) ~ C/x, decay rate B = 1/(2C), oscillation rate A = (z-z')B.
struct TailConstants {
    double c_density = 0.0;
    double rate_b = 0.0;
    Complex rate_a;
};

inline TailConstants tail_constants(const ParameterSet& p) {
    if (std::abs(p.z - p.z_prime) < 1e-12)
        throw std::invalid_argument("tail_constants: z = z' is not supported");
    Complex zmz = p.z - p.z_prime;
    Complex c = zmz * std::sin(kPi * p.z) * std::sin(kPi * p.z_prime) /
                (kPi * std::sin(kPi * zmz));
    if (std::abs(c.imag()) > 1e-12 * std::abs(c))
        throw numeric_error("tail_constants: density constant not real");
    if (!(c.real() > 0.0)) throw numeric_error("tail_constants: density constant not positive");
    TailConstants out;
    out.c_density = c.real();
    out.rate_b = 1.0 / (2.0 * out.c_density);
    out.rate_a = zmz * out.rate_b;
    return out;
}

// Translation-invariant limit blocks. The plus-plus and minus-minus blocks equal
// sh(A d)/((z-z') sh(B d)) with value 1 at d = 0; the plus-minus block is
// [sin(pi z) e^{-A d} - sin(pi z') e^{A d}] / ((z-z') sigma (e^{B d} + e^{-B d})),
// and the minus-plus block is its reflected negative.
inline double tail_block(Block tag, const ParameterSet& p, double delta) {
    TailConstants tc = tail_constants(p);
    Complex zmz = p.z - p.z_prime;
    switch (tag) {
        case Block::PP:
        case Block::MM: {
            if (delta == 0.0) return 1.0;
            Complex v = std::sinh(tc.rate_a * delta) /
                        (zmz * std::sinh(tc.rate_b * delta));
            return detail::real_part_checked(v, "tail_block");
        }
        case Block::PM: {
            Complex num = std::sin(kPi * p.z) * std::exp(-tc.rate_a * delta) -
                          std::sin(kPi * p.z_prime) * std::exp(tc.rate_a * delta);
            Complex v = num / (zmz * p.sigma * 2.0 * std::cosh(tc.rate_b * delta));
            return detail::real_part_checked(v, "tail_block");
        }
        case Block::MP:
            return -tail_block(Block::PM, p, -delta);
    }
    throw std::invalid_argument("tail_block: unknown tag");
}

// Fourier symbol of the matrix tail kernel under g(u) = int e^{i u zeta} k(zeta) d zeta.
inline double symbol_f(const ParameterSet& p, double u) {
    TailConstants tc = tail_constants(p);
    Complex v = 2.0 * std::sin(kPi * p.z) * std::sin(kPi * p.z_prime) /
                (std::cos(kPi * (p.z - p.z_prime)) + std::cosh(kPi * u / tc.rate_b));
    return detail::real_part_checked(v, "symbol_f");
}

inline Complex symbol_g(const ParameterSet& p, double u) {
    TailConstants tc = tail_constants(p);
    return 2.0 * p.sigma * std::cos(kPi * Complex(p.a, u / (2.0 * tc.rate_b))) /
           (std::cos(kPi * (p.z - p.z_prime)) + std::cosh(kPi * u / tc.rate_b));
}

// [[f(u), g(u)], [-conj(g(u)), f(u)]]
inline std::array<std::array<Complex, 2>, 2> fourier_symbol(const ParameterSet& p, double u) {
    double f = symbol_f(p, u);
    Complex g = symbol_g(p, u);
    return {{{Complex(f, 0.0), g}, {-std::conj(g), Complex(f, 0.0)}}};
}

// Numeric Fourier transform of the sampled single-variable profile k_{++} or k_{+-}
// over the window |zeta| <= 60 / rate_b with 2^16 samples (trapezoid in the window;
// the profile decays exponentially, so the truncation is below 1e-5).
inline Complex profile_transform(const ParameterSet& p, Block tag, double u) {
    TailConstants tc = tail_constants(p);
    const int n = 1 << 16;
    double half = 60.0 / tc.rate_b;
    double dz = 2.0 * half / n;
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double zeta = -half + (j + 0.5) * dz;
        acc += tail_block(tag, p, zeta) * std::exp(Complex(0.0, u * zeta));
    }
    return acc * dz;
}

// Stable evaluation of the rescaled kernel sqrt(x'(xi) y'(eta)) K(x(xi), y(eta)),
// x = e^{-xi/C}, entirely in the log variable: the Whittaker branch decomposition
// is assembled with the exact gamma-recurrence cancellations, so the deep-tail
// regime (x far below double underflow of interest) stays well conditioned.
class TailMachine {
  public:
    TailMachine(ParameterSet params, AccuracyPolicy pol = {})
        : p_(std::move(params)), pol_(pol), tc_(tail_constants(p_)) {
        lg_pp_ = log_gamma(p_.z) + log_gamma(p_.z_prime);
        lg_mm_ = log_gamma(-p_.z) + log_gamma(-p_.z_prime);
    }

    const TailConstants& constants() const { return tc_; }

    double rescaled_block(Block tag, double xi, double eta) const {
        double lx = -xi / tc_.c_density, ly = -eta / tc_.c_density;
        switch (tag) {
            case Block::PP:
                return diag_type(p_.a, lg_pp_, lx, ly);
            case Block::MM:
                return diag_type(-p_.a, lg_mm_, lx, ly);
            case Block::PM:
                return plus_minus(lx, ly);
            case Block::MP:
                return -plus_minus(ly, lx);
        }
        throw std::invalid_argument("rescaled_block: unknown tag");
    }

  private:
    struct Fam {
        WhittakerBranchParts x, y;
    };

    // numerator coefficient c_{st} for the antisymmetric (pp/mm) type
    static ScaledC css_antisym(const WhittakerBranchParts& f1x, const WhittakerBranchParts& f2x,
                               const WhittakerBranchParts& f1y, const WhittakerBranchParts& f2y,
                               int s) {
        auto part = [&](const WhittakerBranchParts& b) {
            return s > 0 ? std::pair{b.lp_plus, b.f1_plus} : std::pair{b.lp_minus, b.f1_minus};
        };
        auto [lp1, a] = part(f1x);
        auto [lp2, b] = part(f2y);
        auto [lp2x, c] = part(f2x);
        auto [lp1y, d] = part(f1y);
        Complex stable = (a + b - c - d) + (a * b - c * d);
        return ScaledC::from_log(lp1 + lp2) * stable;
    }

    double diag_type(double a_signed, Complex lg, double lx, double ly) const {
        double kap1 = a_signed + 0.5, kap2 = a_signed - 0.5;
        WhittakerBranchParts f1x = whittaker_branches(kap1, p_.mu, lx, pol_);
        WhittakerBranchParts f2x = whittaker_branches(kap2, p_.mu, lx, pol_);
        if (std::abs(lx - ly) < 1e-6) return diag_type_diagonal(a_signed, lg, lx, f1x, f2x);
        WhittakerBranchParts f1y = whittaker_branches(kap1, p_.mu, ly, pol_);
        WhittakerBranchParts f2y = whittaker_branches(kap2, p_.mu, ly, pol_);

        ScaledC num = ScaledC::zero();
        for (int s : {+1, -1}) {
            // same-branch contribution, stabilized
            ScaledC c_ss = css_antisym(f1x, f2x, f1y, f2y, s);
            num = num + ScaledC::from_log(p_.mu * (double(s) * (lx + ly))) * c_ss;
            // cross-branch contribution
            int t = -s;
            auto lp = [&](const WhittakerBranchParts& b, int sg) {
                return sg > 0 ? b.lp_plus : b.lp_minus;
            };
            auto fv = [&](const WhittakerBranchParts& b, int sg) {
                return sg > 0 ? b.f_plus : b.f_minus;
            };
            ScaledC cross = ScaledC::from_log(lp(f1x, s) + lp(f2y, t)) * (fv(f1x, s) * fv(f2y, t)) -
                            ScaledC::from_log(lp(f2x, s) + lp(f1y, t)) * (fv(f2x, s) * fv(f1y, t));
            num = num + ScaledC::from_log(p_.mu * (double(s) * lx + double(t) * ly)) * cross;
        }
        double x = std::exp(lx), y = std::exp(ly);
        ScaledC val = num * ScaledC::from_log(Complex(-0.5 * (x + y), 0.0) - lg);
        double denom = 2.0 * std::sinh(0.5 * (lx - ly));
        return detail::real_with_residue_check(val, "rescaled_block") /
               (denom * tc_.c_density);
    }

    // xi = eta: the limit -x d/dy [e^{-(x+y)/2} N(x,y)] / (Gamma pair) / C
    double diag_type_diagonal(double a_signed, Complex lg, double lx,
                              const WhittakerBranchParts& f1, const WhittakerBranchParts& f2) const {
        double x = std::exp(lx);
        ScaledC acc = ScaledC::zero();
        auto lp = [&](const WhittakerBranchParts& b, int sg) {
            return sg > 0 ? b.lp_plus : b.lp_minus;
        };
        auto fv = [&](const WhittakerBranchParts& b, int sg) {
            return sg > 0 ? b.f_plus : b.f_minus;
        };
        auto dfv = [&](const WhittakerBranchParts& b, int sg) {
            return sg > 0 ? b.df_plus : b.df_minus;
        };
        for (int s : {+1, -1}) {
            // t = s: c_ss(x,x) = 0; x d/dy of the stabilized difference
            Complex dss = fv(f1, s) * dfv(f2, s) - fv(f2, s) * dfv(f1, s);
            acc = acc + ScaledC::from_log(p_.mu * (2.0 * s * lx) + lp(f1, s) + lp(f2, s)) *
                            (x * dss);
            // t = -s: t mu c_st(x,x) + x d_y c_st(x,x)
            int t = -s;
            ScaledC c_st = ScaledC::from_log(lp(f1, s) + lp(f2, t)) * (fv(f1, s) * fv(f2, t)) -
                           ScaledC::from_log(lp(f2, s) + lp(f1, t)) * (fv(f2, s) * fv(f1, t));
            ScaledC dc_st =
                ScaledC::from_log(lp(f1, s) + lp(f2, t)) * (fv(f1, s) * dfv(f2, t)) -
                ScaledC::from_log(lp(f2, s) + lp(f1, t)) * (fv(f2, s) * dfv(f1, t));
            acc = acc + c_st * (double(t) * p_.mu) + dc_st * Complex(x, 0.0);
        }
        ScaledC val = acc * ScaledC::from_log(Complex(-x, 0.0) - lg) * (-1.0);
        return detail::real_with_residue_check(val, "rescaled_block diagonal") / tc_.c_density;
    }

    double plus_minus(double lx, double ly) const {
        WhittakerBranchParts p1x = whittaker_branches(p_.a + 0.5, p_.mu, lx, pol_);
        WhittakerBranchParts p2x = whittaker_branches(p_.a - 0.5, p_.mu, lx, pol_);
        WhittakerBranchParts q1y = whittaker_branches(-p_.a + 0.5, p_.mu, ly, pol_);
        WhittakerBranchParts q2y = whittaker_branches(-p_.a - 0.5, p_.mu, ly, pol_);
        auto lp = [&](const WhittakerBranchParts& b, int sg) {
            return sg > 0 ? b.lp_plus : b.lp_minus;
        };
        auto fv = [&](const WhittakerBranchParts& b, int sg) {
            return sg > 0 ? b.f_plus : b.f_minus;
        };
        auto f1v = [&](const WhittakerBranchParts& b, int sg) {
            return sg > 0 ? b.f1_plus : b.f1_minus;
        };
        Complex zzp = p_.z * p_.z_prime;
        ScaledC num = ScaledC::zero();
        for (int s : {+1, -1}) {
            // same-branch: z z' P2 Q2 = -P1 Q1 exactly (gamma recurrence), so
            // d_ss = P1 Q1 [F1(x) G1(y) - F2(x) G2(y)], assembled from F - 1
            Complex a = f1v(p1x, s), b = f1v(q1y, s), c = f1v(p2x, s), d = f1v(q2y, s);
            Complex stable = (a + b - c - d) + (a * b - c * d);
            num = num + ScaledC::from_log(p_.mu * (double(s) * (lx + ly)) + lp(p1x, s) +
                                          lp(q1y, s)) *
                            stable;
            int t = -s;
            ScaledC cross =
                ScaledC::from_log(lp(p1x, s) + lp(q1y, t)) * (fv(p1x, s) * fv(q1y, t)) +
                ScaledC::from_log(lp(p2x, s) + lp(q2y, t)) * (fv(p2x, s) * fv(q2y, t)) * zzp;
            num = num + ScaledC::from_log(p_.mu * (double(s) * lx + double(t) * ly)) * cross;
        }
        double x = std::exp(lx), y = std::exp(ly);
        ScaledC val = num * ScaledC::from_log(Complex(-0.5 * (x + y), 0.0));
        double denom = 2.0 * std::cosh(0.5 * (lx - ly));
        return p_.sigma / kPi *
               detail::real_with_residue_check(val, "rescaled_block pm") /
               (denom * tc_.c_density);
    }

    ParameterSet p_;
    AccuracyPolicy pol_;
    TailConstants tc_;
    Complex lg_pp_, lg_mm_;
};

struct TailRow {
    double xi, eta;
    double rescaled;
    double tail;
    double abs_err;
};

inline std::vector<TailRow> tail_convergence(const ParameterSet& p, Block tag,
                                             const std::vector<std::pair<double, double>>& pts,
                                             const AccuracyPolicy& pol = {}) {
    TailMachine tm(p, pol);
    std::vector<TailRow> out;
    for (auto [xi, eta] : pts) {
        double rescaled = tm.rescaled_block(tag, xi, eta);
        double tail = tail_block(tag, p, xi - eta);
        out.push_back({xi, eta, rescaled, tail, std::abs(rescaled - tail)});
    }
    return out;
}

}  // namespace mwk
