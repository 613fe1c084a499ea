#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "mwk/bessel.hpp"
#include "mwk/kernels.hpp"
#include "mwk/params.hpp"
#include "mwk/series.hpp"

namespace mwk {

enum class LimitFn { A, B, ATilde, BTilde };

// Shifted-parameter family for the scaling limit: (z0 + N, z0' + N) with N even.
struct LimitParameters {
    ParameterSet base;
    int shift = 0;

    LimitParameters(ParameterSet base_, int n) : base(std::move(base_)), shift(n) {
        if (n <= 0 || n % 2 != 0)
            throw std::invalid_argument("LimitParameters: shift must be a positive even integer");
        shift_parameters(base, n);  // validates admissibility of the shifted pair
    }
};

// Evaluators for the Bessel/Macdonald limit functions and the limit kernel blocks.
class LimitKernelFamily {
  public:
    explicit LimitKernelFamily(ParameterSet base, AccuracyPolicy pol = {})
        : p_(std::move(base)), pol_(pol) {
        two_mu_ = 2.0 * p_.mu;
        sin_two_mu_ = std::sin(kPi * two_mu_);
        if (std::abs(sin_two_mu_) < 1e-10)
            throw std::invalid_argument(
                "LimitKernelFamily: degenerate order (2 mu integer or mu = 0) unsupported");
        sin_z_ = std::sin(kPi * p_.z);
        sin_zp_ = std::sin(kPi * p_.z_prime);
        sigma0_sq_ = (sin_z_ * sin_zp_).real();
    }

    const ParameterSet& base() const { return p_; }

    // scalar factor of the Macdonald kernel: (2/pi^2)(cos 2 pi mu - cos 2 pi a0),
    // equal to 4 sin(pi z0) sin(pi z0') / pi^2
    double macdonald_const() const {
        return detail::real_part_checked(
            2.0 / (kPi * kPi) * (std::cos(2.0 * kPi * p_.mu) - std::cos(2.0 * kPi * p_.a)),
            "macdonald_const");
    }

    double limit_function(LimitFn which, double xi) const {
        if (!(xi > 0.0)) throw std::domain_error("limit_function: requires xi > 0");
        double root = 2.0 * std::sqrt(xi);
        switch (which) {
            case LimitFn::A: {
                Complex v = (sin_z_ * bessel_complex(BesselKind::J, two_mu_, root, pol_) -
                             sin_zp_ * bessel_complex(BesselKind::J, -two_mu_, root, pol_)) /
                            sin_two_mu_;
                return detail::real_part_checked(v, "limit A");
            }
            case LimitFn::ATilde: {
                Complex v = std::sqrt(xi) *
                            (sin_z_ * bessel_complex_dx(BesselKind::J, two_mu_, root, pol_) -
                             sin_zp_ * bessel_complex_dx(BesselKind::J, -two_mu_, root, pol_)) /
                            sin_two_mu_;
                return detail::real_part_checked(v, "limit A~");
            }
            case LimitFn::B:
                return bessel(BesselKind::K, two_mu_, root, pol_);
            case LimitFn::BTilde:
                return std::sqrt(xi) * bessel_dx(BesselKind::K, two_mu_, root, pol_);
        }
        throw std::invalid_argument("limit_function: unknown name");
    }

    double limit_block(Block tag, double xi, double eta) const {
        if (!(xi > 0.0) || !(eta > 0.0))
            throw std::domain_error("limit_block: requires xi, eta > 0");
        switch (tag) {
            case Block::PP:
                return antisym_block(LimitFn::A, LimitFn::ATilde, 1.0, xi, eta);
            case Block::MM:
                return antisym_block(LimitFn::B, LimitFn::BTilde,
                                     4.0 * sigma0_sq_ / (kPi * kPi), xi, eta);
            case Block::PM: {
                double c = -2.0 * std::sqrt(sigma0_sq_) / kPi;
                return c *
                       (limit_function(LimitFn::A, xi) * limit_function(LimitFn::BTilde, eta) -
                        limit_function(LimitFn::ATilde, xi) * limit_function(LimitFn::B, eta)) /
                       (xi + eta);
            }
            case Block::MP:
                return -limit_block(Block::PM, eta, xi);
        }
        throw std::invalid_argument("limit_block: unknown tag");
    }

  private:
    // [F(xi) G(eta) - G(xi) F(eta)] / (xi - eta) with the Richardson limit on the diagonal
    double antisym_block(LimitFn f, LimitFn g, double coeff, double xi, double eta) const {
        if (std::abs(xi - eta) < 1e-3 * std::max(xi, eta)) {
            double mid = 0.5 * (xi + eta);
            double h = std::min(1e-3 * std::max(mid, 1.0), 0.01 * mid);
            auto num = [&](double e) {
                return limit_function(f, mid) * limit_function(g, e) -
                       limit_function(g, mid) * limit_function(f, e);
            };
            double d = (num(mid - 2.0 * h) - 8.0 * num(mid - h) + 8.0 * num(mid + h) -
                        num(mid + 2.0 * h)) /
                       (12.0 * h);
            return -coeff * d;
        }
        return coeff *
               (limit_function(f, xi) * limit_function(g, eta) -
                limit_function(g, xi) * limit_function(f, eta)) /
               (xi - eta);
    }

    ParameterSet p_;
    AccuracyPolicy pol_;
    Complex two_mu_;
    Complex sin_two_mu_, sin_z_, sin_zp_;
    double sigma0_sq_ = 0.0;
};

struct SweepRow {
    int n;
    double scaled;      // (1/N) K_block(xi/N, eta/N) at shifted parameters
    double limit;       // limit kernel block
    double abs_err;
    double coeff_gap;   // |1 - Gamma(a+1)^2 / (Gamma(z) Gamma(z') z z')|
};

inline std::vector<SweepRow> scaled_convergence(const ParameterSet& base,
                                                const std::vector<int>& shifts, Block tag,
                                                double xi, double eta,
                                                const AccuracyPolicy& pol = {}) {
    LimitKernelFamily fam(base, pol);
    double lim = fam.limit_block(tag, xi, eta);
    std::vector<SweepRow> out;
    for (int n : shifts) {
        LimitParameters lp(base, n);
        ParameterSet shifted = shift_parameters(base, n);
        KernelMachine mc(shifted, pol);
        double scaled = mc.k_block(tag, xi / n, eta / n) / n;
        Complex lg = 2.0 * log_gamma(Complex(shifted.a + 1.0, 0.0)) - log_gamma(shifted.z) -
                     log_gamma(shifted.z_prime) - std::log(shifted.z) -
                     std::log(shifted.z_prime);
        double coeff_gap = std::abs(1.0 - std::exp(lg));
        out.push_back({n, scaled, lim, std::abs(scaled - lim), coeff_gap});
    }
    return out;
}

struct DegenerationRow {
    double alpha_abs;
    double err;
};

// |1F1(alpha; gamma; xi/alpha) - 0F1(gamma; xi)| along an |alpha| sweep.
inline std::vector<DegenerationRow> limit_1f1_to_0f1(const std::vector<double>& alpha_abs,
                                                     Complex gamma, double xi,
                                                     const AccuracyPolicy& pol = {}) {
    std::vector<DegenerationRow> out;
    Complex target = hyper_0f1(gamma, xi, pol);
    for (double a : alpha_abs) {
        Complex alpha(a + 0.3, 0.0);
        Complex v = kummer_1f1(alpha, gamma, xi / (a + 0.3), pol);
        out.push_back({a, std::abs(v - target)});
    }
    return out;
}

}  // namespace mwk
