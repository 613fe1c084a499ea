#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "mwk/operators.hpp"
#include "mwk/params.hpp"
#include "mwk/whittaker.hpp"

namespace mwk {

// Continual eigenbasis element f_{a,m}(x) = (1/x) W_{a,im}(x), real for x > 0.
inline double f_am(double a, double m, double x, const AccuracyPolicy& pol = {}) {
    return whittaker_w(a, Complex(0.0, m), x, pol) / x;
}

// Residual of the Sturm-Liouville eigen-equation
//   D(a) f = -(d/dx) x^2 (d/dx) f + (a - x/2)^2 f = (a^2 + 1/4 + m^2) f,
// normalized by the largest term; derivatives from parameter-shifted series.
inline double sl_residual(double a, double m, double x, const AccuracyPolicy& pol = {}) {
    Complex mu(0.0, m);
    double w = whittaker_w(a, mu, x, pol);
    double dw = whittaker_w_dx(a, mu, x, pol);
    double ddw = whittaker_w_dxx(a, mu, x, pol);
    double f = w / x;
    double df = dw / x - w / (x * x);
    double ddf = ddw / x - 2.0 * dw / (x * x) + 2.0 * w / (x * x * x);
    double t1 = -x * x * ddf - 2.0 * x * df;
    double t2 = (a - 0.5 * x) * (a - 0.5 * x) * f;
    double lam = (a * a + 0.25 + m * m) * f;
    double scale = std::max({std::abs(t1), std::abs(t2), std::abs(lam)});
    return std::abs(t1 + t2 - lam) / scale;
}

// AB f_{a,m} = lambda_AB f_{a,m}, lambda_AB = (cos 2pi mu - cos 2pi a)/(cosh 2pi m + cos 2pi a).
inline double ab_eigenvalue(const ParameterSet& p, double m) {
    double num = (std::cos(2.0 * kPi * p.mu) - std::cos(2.0 * kPi * p.a)).real();
    return num / (std::cosh(2.0 * kPi * m) + std::cos(2.0 * kPi * p.a));
}

// K_{++} f_{a,m} = lambda_K f_{a,m}, lambda_K = (cos 2pi mu - cos 2pi a)/(cosh 2pi m + cos 2pi mu).
inline double kpp_eigenvalue(const ParameterSet& p, double m) {
    double num = (std::cos(2.0 * kPi * p.mu) - std::cos(2.0 * kPi * p.a)).real();
    double cos_mu = std::cos(2.0 * kPi * p.mu).real();
    return num / (std::cosh(2.0 * kPi * m) + cos_mu);
}

enum class TransformSide { A, B };

struct TransformProbe {
    double x;
    double lhs;        // quadrature of the integral transform
    double rhs;        // gamma-factor eigenvalue times the target eigenfunction
    double residual;   // relative
};

// Transform identities: A f_{-a,m} = (sigma/pi) Gamma(1/2-a+im) Gamma(1/2-a-im) f_{a,m},
// B f_{a,m}  = (sigma/pi) Gamma(1/2+a+im) Gamma(1/2+a-im) f_{-a,m}.
inline std::vector<TransformProbe> transform_identity(TransformSide side,
                                                      const ParameterSet& p, double m,
                                                      const std::vector<double>& probes,
                                                      int nodes = 240, double guard = 1e-15,
                                                      const AccuracyPolicy& pol = {}) {
    if (!(std::abs(p.a) < 0.5))
        throw std::invalid_argument("transform_identity: requires |a| < 1/2");
    KernelMachine mc(p, pol);
    auto gg = detail::guarded_composite(1e-3, 40.0, nodes, guard);
    double sign = side == TransformSide::A ? +1.0 : -1.0;

    std::vector<double> source(gg.grid.size());
    for (int i = 0; i < gg.grid.size(); ++i)
        source[i] = f_am(-sign * p.a, m, gg.grid.nodes[i], pol);

    Complex lg = log_gamma(Complex(0.5 - sign * p.a, m)) +
                 log_gamma(Complex(0.5 - sign * p.a, -m));
    double eigen = p.sigma / kPi * std::exp(lg.real()) * std::cos(lg.imag());

    // analytic tail of the truncated [0, x_min) piece: there the kernel behaves as
    // (sigma/pi) x^{s a - 1} e^{-x/2} y^{-s a} and the eigenfunction as
    // y^{-1/2} (q+ y^{im} + q- y^{-im}), which integrates in closed form
    double g_edge = gg.grid.x_min;
    WhittakerBranchParts br = whittaker_branches(-sign * p.a, Complex(0.0, m),
                                                 std::log(g_edge), pol);
    Complex tail = 0.0;
    for (int s : {+1, -1}) {
        bool alive = s > 0 ? br.plus_alive : br.minus_alive;
        if (!alive) continue;
        Complex lp = s > 0 ? br.lp_plus : br.lp_minus;
        Complex expo = Complex(0.5 - sign * p.a, s * m);
        tail += std::exp(lp + expo * std::log(g_edge)) / expo;
    }

    std::vector<TransformProbe> out;
    for (double x : probes) {
        double lhs = 0.0;
        for (int j = 0; j < gg.grid.size(); ++j) {
            double kernel = side == TransformSide::A ? mc.l_block(LBlock::A, x, gg.grid.nodes[j])
                                                     : mc.l_block(LBlock::B, x, gg.grid.nodes[j]);
            lhs += gg.grid.weights[j] * kernel * source[j];
        }
        lhs += p.sigma / kPi * std::pow(x, sign * p.a - 1.0) * std::exp(-0.5 * x) *
               tail.real();
        double rhs = eigen * f_am(sign * p.a, m, x, pol);
        out.push_back({x, lhs, rhs, std::abs(lhs - rhs) / std::abs(rhs)});
    }
    return out;
}

// Rayleigh quotient of the discretized K_{++} against the sampled eigenfunction,
// evaluated on the reporting window of a guarded grid.
inline double rayleigh_kpp_eigenvalue(const ParameterSet& p, double m, int nodes = 240,
                                      double guard = 1e-15, const AccuracyPolicy& pol = {}) {
    KernelMachine mc(p, pol);
    auto gg = detail::guarded_composite(1e-3, 40.0, nodes, guard);
    int n = gg.grid.size();
    MatrixR kpp = discretize_kernel_block(mc, Block::PP, gg.grid);
    VectorR f(n);
    for (int i = 0; i < n; ++i)
        f(i) = std::sqrt(gg.grid.weights[i]) * f_am(p.a, m, gg.grid.nodes[i], pol);
    VectorR g = kpp * f;
    double num = 0.0, den = 0.0;
    for (int i : gg.report) {
        num += f(i) * g(i);
        den += f(i) * f(i);
    }
    return num / den;
}

struct PlancherelResult {
    double reconstructed = 0.0;
    double direct = 0.0;
    double rel_err = 0.0;
    double m_cutoff = 0.0;
    bool cutoff_warning = false;
};

// Spectral reconstruction of (f, g) over the continual basis. The density is the
// index-transform Plancherel weight m sinh(2 pi m) Gamma(1/2-a+im) Gamma(1/2-a-im) / pi^2
// (at a = 0 it reduces to the Kontorovich-Lebedev density).
inline PlancherelResult plancherel_reconstruct(double a,
                                               const std::function<double(double)>& f,
                                               const std::function<double(double)>& g,
                                               double support_lo, double support_hi,
                                               const AccuracyPolicy& pol = {}) {
    if (!(std::abs(a) < 0.5))
        throw std::invalid_argument("plancherel_reconstruct: requires |a| < 1/2");
    if (!(support_lo > 0.0 && support_hi > support_lo))
        throw std::invalid_argument("plancherel_reconstruct: bad support");

    // quadrature nodes over the common support
    const int x_pts = 200;
    std::vector<double> gx, gw;
    gauss_legendre(x_pts, gx, gw);
    std::vector<double> xs(x_pts), ws(x_pts), fv(x_pts), gv(x_pts);
    for (int i = 0; i < x_pts; ++i) {
        xs[i] = 0.5 * (support_hi - support_lo) * gx[i] + 0.5 * (support_hi + support_lo);
        ws[i] = 0.5 * (support_hi - support_lo) * gw[i];
        fv[i] = f(xs[i]);
        gv[i] = g(xs[i]);
    }
    PlancherelResult out;
    for (int i = 0; i < x_pts; ++i) out.direct += ws[i] * fv[i] * gv[i];

    auto coeffs = [&](double m) {
        double pf = 0.0, pg = 0.0;
        for (int i = 0; i < x_pts; ++i) {
            double e = f_am(a, m, xs[i], pol);
            pf += ws[i] * fv[i] * e;
            pg += ws[i] * gv[i] * e;
        }
        return std::pair<double, double>{pf, pg};
    };

    // composite Gauss in m, 32 points per unit; the cutoff reads the envelope of
    // recent segment contributions (they oscillate in m, so single segments lie)
    const double seg = 0.25;
    std::vector<double> mx, mw;
    gauss_legendre(8, mx, mw);
    const double m_cap = 60.0;
    std::vector<double> recent;
    double scale_ref = 0.0;
    for (double lo = 0.0; lo < m_cap; lo += seg) {
        double contrib = 0.0;
        for (int q = 0; q < 8; ++q) {
            double m = 0.5 * seg * mx[q] + lo + 0.5 * seg;
            auto [pf, pg] = coeffs(m);
            Complex lg = log_gamma(Complex(0.5 - a, m)) + log_gamma(Complex(0.5 - a, -m));
            double density =
                m * std::sinh(2.0 * kPi * m) * std::exp(lg.real()) * std::cos(lg.imag()) /
                (kPi * kPi);
            contrib += 0.5 * seg * mw[q] * pf * pg * density;
        }
        out.reconstructed += contrib;
        out.m_cutoff = lo + seg;
        scale_ref = std::max(scale_ref, std::abs(out.reconstructed));
        recent.push_back(std::abs(contrib));
        if (recent.size() >= 16) {
            double env = 0.0, prev_env = 0.0;
            for (std::size_t k = recent.size() - 8; k < recent.size(); ++k)
                env = std::max(env, recent[k]);
            for (std::size_t k = recent.size() - 16; k < recent.size() - 8; ++k)
                prev_env = std::max(prev_env, recent[k]);
            double scale = std::max(scale_ref, 1e-300);
            if (env < 3e-7 * scale) break;
            // past the spectral peak the envelope only rises when quadrature noise
            // (amplified by the density) takes over; integrate no further
            if (prev_env < 1e-5 * scale && env > prev_env && lo > 10.0) break;
        }
    }
    if (out.m_cutoff >= m_cap) out.cutoff_warning = true;
    out.rel_err = std::abs(out.reconstructed - out.direct) /
                  std::max(std::abs(out.direct), 1e-300);
    return out;
}

}  // namespace mwk
