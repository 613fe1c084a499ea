#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "mwk/params.hpp"
#include "mwk/policy.hpp"
#include "mwk/scaled.hpp"
#include "mwk/whittaker.hpp"

namespace mwk {

// Block of the two-by-two matrix kernel, indexed by row/column sign.
enum class Block { PP, PM, MP, MM };

inline int row_sign(Block b) { return (b == Block::PP || b == Block::PM) ? +1 : -1; }
inline int col_sign(Block b) { return (b == Block::PP || b == Block::MP) ? +1 : -1; }

enum class AuxName { Phi, PhiMinus, Psi, PsiMinus, PhiTilde, PsiTilde };
enum class LBlock { A, B };

// Evaluator for the matrix Whittaker kernel blocks, the elementary L-kernel
// blocks, and their auxiliary functions, at fixed parameters.
class KernelMachine {
  public:
    KernelMachine(ParameterSet params, AccuracyPolicy pol = {})
        : p_(std::move(params)), pol_(pol) {
        zzp_ = (p_.z * p_.z_prime).real();
        lg_pp_ = log_gamma(p_.z) + log_gamma(p_.z_prime);
        lg_mm_ = log_gamma(-p_.z) + log_gamma(-p_.z_prime);
    }

    const ParameterSet& params() const { return p_; }
    const AccuracyPolicy& policy() const { return pol_; }

    // phi(x) = x^{-1/2} e^{x/2} W_{a+1/2,mu}(x) and companions; the tilde
    // variants are x * d/dx of phi resp. psi.
    double aux(AuxName name, double x) const {
        require_positive(x);
        switch (name) {
            case AuxName::Phi: return phi_family(p_.a + 0.5, x).first;
            case AuxName::PhiMinus: return phi_family(p_.a - 0.5, x).first;
            case AuxName::Psi: return phi_family(-p_.a + 0.5, x).first;
            case AuxName::PsiMinus: return phi_family(-p_.a - 0.5, x).first;
            case AuxName::PhiTilde: return phi_family(p_.a + 0.5, x).second;
            case AuxName::PsiTilde: return phi_family(-p_.a + 0.5, x).second;
        }
        throw std::invalid_argument("aux: unknown name");
    }

    // The four kernel blocks. The minus-plus block is defined through the
    // plus-minus one, so K_{-+}(x,y) = -K_{+-}(y,x) holds exactly.
    double k_block(Block tag, double x, double y) const {
        require_positive(x);
        require_positive(y);
        switch (tag) {
            case Block::PP:
                return diagonal_type_block(p_.a, lg_pp_, x, y);
            case Block::MM:
                return diagonal_type_block(-p_.a, lg_mm_, x, y);
            case Block::PM:
                return plus_minus(x, y);
            case Block::MP:
                return -plus_minus(y, x);
        }
        throw std::invalid_argument("k_block: unknown tag");
    }

    // Elementary resolvent kernels: A(x,y) = D(y,x) = (sigma/pi) (x/y)^{a} e^{-(x+y)/2}/(x+y),
    // B(x,y) = D(x,y) = A(y,x).
    double l_block(LBlock which, double x, double y) const {
        require_positive(x);
        require_positive(y);
        if (which == LBlock::B) return l_block(LBlock::A, y, x);
        return p_.sigma / kPi * std::exp(p_.a * std::log(x / y) - 0.5 * (x + y)) / (x + y);
    }

    double c_kernel(double x, double y) const { return k_block(Block::PM, x, y); }
    double d_kernel(double x, double y) const { return l_block(LBlock::B, x, y); }

    // Per-node cache of the two damped Whittaker families, so grid assembly costs
    // O(n) special-function evaluations instead of O(n^2).
    struct KernelProfile {
        double x;
        ScaledC p, t;  // family at kappa = a + 1/2
        ScaledC q, s;  // family at kappa = -a + 1/2
    };

    KernelProfile profile(double x) const {
        require_positive(x);
        auto [p, t] = damped_family(p_.a + 0.5, x);
        auto [q, s] = damped_family(-p_.a + 0.5, x);
        return {x, p, t, q, s};
    }

    double k_block_from(Block tag, const KernelProfile& fx, const KernelProfile& fy) const {
        double x = fx.x, y = fy.x;
        switch (tag) {
            case Block::PP:
            case Block::MM: {
                bool pp = tag == Block::PP;
                if (std::abs(x - y) < 1e-3 * std::max(x, y))
                    return k_block(tag, x, y);  // midpoint-derivative path
                ScaledC num = pp ? fx.p * fy.t - fx.t * fy.p : fx.q * fy.s - fx.s * fy.q;
                ScaledC pref =
                    ScaledC::from_log(-(pp ? lg_pp_ : lg_mm_)) * Complex(1.0 / zzp_, 0.0);
                return detail::real_with_residue_check(num * pref, "k_block") / (x - y);
            }
            case Block::PM: {
                ScaledC num = fx.p * fy.q + (fx.t - fx.p * Complex(p_.a, 0.0)) *
                                                (fy.s + fy.q * Complex(p_.a, 0.0)) *
                                                Complex(1.0 / zzp_, 0.0);
                return p_.sigma / kPi *
                       detail::real_with_residue_check(num, "k_block pm") / (x + y);
            }
            case Block::MP:
                return -k_block_from(Block::PM, fy, fx);
        }
        throw std::invalid_argument("k_block_from: unknown tag");
    }

  private:
    static void require_positive(double v) {
        if (!(v > 0.0)) throw std::domain_error("kernel evaluation requires x, y > 0");
    }

    // (phi, phi~) for the family at index kappa: phi = x^{-1/2} e^{x/2} W,
    // phi~ = x phi' = (x-1)/2 phi + x^{1/2} e^{x/2} W'.
    std::pair<double, double> phi_family(double kappa, double x) const {
        WhittakerScaled w = whittaker_w_scaled(kappa, p_.mu, x, pol_);
        double scale = 0.5 * x - 0.5 * std::log(x);
        double wv = detail::real_with_residue_check(
            w.w * ScaledC::from_log({scale, 0.0}), "aux");
        double dv = detail::real_with_residue_check(
            w.dw * ScaledC::from_log({scale + std::log(x), 0.0}), "aux");
        return {wv, (x - 1.0) / 2.0 * wv + dv};
    }

    // P(x) = x^{-1/2} W_{kappa,mu}(x), T(x) = (x-1)/2 P + x^{1/2} W' (both damped,
    // so e^{-(x+y)/2} times the phi-form numerator is P(x)T(y) - T(x)P(y)).
    std::pair<ScaledC, ScaledC> damped_family(double kappa, double x) const {
        WhittakerScaled w = whittaker_w_scaled(kappa, p_.mu, x, pol_);
        double lhalf = 0.5 * std::log(x);
        ScaledC pv = w.w * ScaledC::from_log({-lhalf, 0.0});
        ScaledC tv = pv * Complex((x - 1.0) / 2.0, 0.0) +
                     w.dw * ScaledC::from_log({lhalf, 0.0});
        return {pv, tv};
    }

    // K_{++} (sign = +a) and K_{--} (sign = -a):
    //   e^{(x+y)/2} K = [phi(x) phi~(y) - phi~(x) phi(y)] / (Gamma Gamma z z' (x-y)).
    double diagonal_type_block(double a_signed, Complex lg, double x, double y) const {
        double thresh = 1e-3 * std::max(x, y);
        ScaledC pref = ScaledC::from_log(-lg) * Complex(1.0 / zzp_, 0.0);
        if (std::abs(x - y) < thresh) {
            double mid = 0.5 * (x + y);
            return detail::real_with_residue_check(
                numerator_derivative(a_signed, mid) * pref * (-1.0), "k_block diagonal");
        }
        auto [px, tx] = damped_family(a_signed + 0.5, x);
        auto [py, ty] = damped_family(a_signed + 0.5, y);
        ScaledC num = px * ty - tx * py;
        return detail::real_with_residue_check(num * pref, "k_block") / (x - y);
    }

    // d/dy [P(x) T(y) - T(x) P(y)] at y = x by the 4-point Richardson stencil.
    ScaledC numerator_derivative(double a_signed, double x) const {
        double h = std::min(1e-3 * std::max(x, 1.0), 0.01 * x);
        auto [p0, t0] = damped_family(a_signed + 0.5, x);
        auto g = [&](double y) {
            auto [py, ty] = damped_family(a_signed + 0.5, y);
            return p0 * ty - t0 * py;
        };
        ScaledC d = (g(x - 2.0 * h) - g(x - h) * 8.0 + g(x + h) * 8.0 - g(x + 2.0 * h)) *
                    (1.0 / (12.0 * h));
        return d;
    }

    // K_{+-}(x,y) = (sigma/pi) e^{-(x+y)/2} [phi psi + (phi~ - a phi)(psi~ + a psi)/(z z')] / (x+y)
    double plus_minus(double x, double y) const {
        auto [px, tx] = damped_family(p_.a + 0.5, x);
        auto [qy, sy] = damped_family(-p_.a + 0.5, y);
        ScaledC num = px * qy + (tx - px * Complex(p_.a, 0.0)) *
                                    (sy + qy * Complex(p_.a, 0.0)) *
                                    Complex(1.0 / zzp_, 0.0);
        return p_.sigma / kPi *
               detail::real_with_residue_check(num, "k_block pm") / (x + y);
    }

    ParameterSet p_;
    AccuracyPolicy pol_;
    double zzp_;
    Complex lg_pp_, lg_mm_;
};

}  // namespace mwk
