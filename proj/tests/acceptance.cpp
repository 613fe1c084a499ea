// Acceptance suite: runs every contract-level criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "mwk/besselimit.hpp"
#include "mwk/finite.hpp"
#include "mwk/operators.hpp"
#include "mwk/spectral.hpp"
#include "mwk/tail.hpp"

using namespace mwk;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s  criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------------------

void criterion_1_resolvent() {
    bool ok = true;
    std::string detail;
    for (auto params : {make_parameters({0.3, 0.4}, {0.3, -0.4}),
                        make_parameters({0.2, 0.0}, {0.7, 0.0})}) {
        auto t0 = std::chrono::steady_clock::now();
        ResidualReport rep = verify_resolvent(params, 200, 40.0, 3);
        double dt = seconds_since(t0);
        double worst = 0.0;
        for (const auto& [name, r] : rep.levels.back().residuals) worst = std::max(worst, r);
        bool inst_ok = worst <= 1e-2 && rep.strictly_decreasing() && dt <= 60.0;
        ok = ok && inst_ok;
        detail += "a=" + fmt(params.a) + ": worst=" + fmt(worst) + " t=" + fmt(dt) + "s; ";
    }
    report(1, ok, "resolvent identity K = L(1+L)^{-1}", detail);
}

void criterion_2_factorization() {
    bool ok = true;
    std::string detail;
    for (auto params : {make_parameters({0.3, 0.4}, {0.3, -0.4}),
                        make_parameters({0.2, 0.0}, {0.7, 0.0})}) {
        auto t0 = std::chrono::steady_clock::now();
        ResidualReport rep = verify_factorization(params, 200, 40.0, 3);
        double dt = seconds_since(t0);
        double worst = 0.0;
        for (const auto& [name, r] : rep.levels.back().residuals) worst = std::max(worst, r);
        bool inst_ok = worst <= 1e-2 && rep.strictly_decreasing() && dt <= 60.0;
        ok = ok && inst_ok;
        detail += "a=" + fmt(params.a) + ": worst=" + fmt(worst) + " t=" + fmt(dt) + "s; ";
    }
    report(2, ok, "factorization K = [[CD, C], [DCD-D, DC]] and proof identities", detail);
}

void criterion_3_finite_model() {
    auto t0 = std::chrono::steady_clock::now();
    bool minors_ok = true, corr_ok = true, blocks_ok = true, balance_ok = true;
    double worst_corr = 0.0, worst_block = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        int n1 = 1 + static_cast<int>(seed % 4);
        int n2 = 1 + static_cast<int>((seed / 4) % 4);
        FiniteKernel l = random_j_hermitian(n1, n2, 9000 + seed);
        WeightTable table;
        try {
            table = weight_distribution(l);  // throws on a minor below -1e-10
        } catch (const numeric_error&) {
            minors_ok = false;
            continue;
        }
        FiniteKernel k = k_from_l(l);
        int n = l.order();
        // correlations vs configuration sums, up to 3 points
        std::vector<std::vector<int>> pts;
        for (int i = 0; i < n; ++i) {
            pts.push_back({i});
            for (int j = i + 1; j < n; ++j) {
                pts.push_back({i, j});
                if (j + 1 < n) pts.push_back({i, j, j + 1});
            }
        }
        for (const auto& pset : pts) {
            std::uint32_t need = 0;
            for (int p : pset) need |= 1u << p;
            double brute = 0.0;
            for (std::uint32_t mask = 0; mask < table.probabilities.size(); ++mask)
                if ((mask & need) == need) brute += table.probabilities[mask];
            double err = std::abs(correlation(k, pset).real() - brute);
            worst_corr = std::max(worst_corr, err);
            if (err > 1e-9) corr_ok = false;
        }
        // blockwise transforms vs global ones
        double scale = 1.0 + k.entries.norm();
        double e1 = (block_k_from_l(l).entries - k.entries).norm() / scale;
        double e2 = (block_l_from_k(k).entries - l.entries).norm() / scale;
        worst_block = std::max({worst_block, e1, e2});
        if (e1 > 1e-10 || e2 > 1e-10) blocks_ok = false;

        // balanced-support dichotomy on the off-diagonal companion
        MatrixC off = MatrixC::Zero(n, n);
        off.topRightCorner(n1, n2) = l.b12();
        off.bottomLeftCorner(n2, n1) = l.b21();
        WeightTable toff = weight_distribution(FiniteKernel{off, n1, n2});
        for (std::uint32_t mask = 0; mask < toff.probabilities.size(); ++mask) {
            int b1 = __builtin_popcount(mask & ((1u << n1) - 1u));
            int b2 = __builtin_popcount(mask) - b1;
            if (b1 != b2 && toff.probabilities[mask] != 0.0) balance_ok = false;
        }
        MatrixC pos = off;
        pos(0, 0) = 0.3;
        WeightTable tpos = weight_distribution(FiniteKernel{pos, n1, n2});
        if (!(tpos.probabilities[1] > 0.0)) balance_ok = false;
    }
    double dt = seconds_since(t0);
    bool ok = minors_ok && corr_ok && blocks_ok && balance_ok && dt <= 30.0;
    report(3, ok, "finite-model master oracle over 200 seeded instances",
           "minors=" + std::string(minors_ok ? "ok" : "BAD") +
               " corr_err=" + fmt(worst_corr) + " block_err=" + fmt(worst_block) +
               " balance=" + std::string(balance_ok ? "ok" : "BAD") + " t=" + fmt(dt) + "s");
}

void criterion_4_spectral() {
    bool ok = true;
    std::string detail;
    int skipped = 0;
    // the stated grid {0, 0.2} x {0.1i, 0.25}: real mu = 0.25 requires
    // a in (m + 1/4, m + 3/4), so those two combinations are inadmissible and the
    // (0.2, 0.7) pair (a = 0.45, mu = -0.25) carries the real-mu column instead
    std::vector<ParameterSet> sets;
    for (double a : {0.0, 0.2}) {
        sets.push_back(make_parameters({a, 0.1}, {a, -0.1}));
        try {
            sets.push_back(make_parameters({a + 0.25, 0.0}, {a - 0.25, 0.0}));
        } catch (const std::invalid_argument&) {
            ++skipped;
        }
    }
    sets.push_back(make_parameters({0.2, 0.0}, {0.7, 0.0}));
    double worst = 0.0;
    for (const auto& p : sets) {
        for (double m : {0.3, 0.6, 1.2}) {
            auto rows = transform_identity(TransformSide::A, p, m, {0.5, 1.0, 4.0}, 240);
            for (const auto& r : rows) worst = std::max(worst, r.residual);
            auto rows_b = transform_identity(TransformSide::B, p, m, {0.5, 1.0, 4.0}, 240);
            for (const auto& r : rows_b) worst = std::max(worst, r.residual);
        }
    }
    ok = ok && worst <= 1e-3;
    detail += "transform worst=" + fmt(worst) + " (skipped " + std::to_string(skipped) +
              " inadmissible real-mu combos); ";

    double worst_alg = 0.0;
    for (const auto& p : sets)
        for (double m : {0.1, 0.3, 0.6, 1.2, 2.5}) {
            double lab = ab_eigenvalue(p, m);
            worst_alg = std::max(worst_alg,
                                 std::abs(kpp_eigenvalue(p, m) - lab / (1.0 + lab)));
        }
    ok = ok && worst_alg <= 1e-14;
    detail += "lambda algebra=" + fmt(worst_alg) + "; ";

    auto p0 = make_parameters({0.0, 0.3}, {0.0, -0.3});
    double worst_a0 = 0.0;
    for (double m : {0.3, 0.6, 1.2}) {
        auto rows = transform_identity(TransformSide::A, p0, m, {1.0}, 240);
        double eig = rows[0].rhs / f_am(0.0, m, 1.0);
        worst_a0 = std::max(worst_a0,
                            std::abs(eig - p0.sigma / std::cosh(kPi * m)) /
                                (p0.sigma / std::cosh(kPi * m)));
    }
    ok = ok && worst_a0 <= 1e-6;
    detail += "a=0 eigenvalue err=" + fmt(worst_a0);
    report(4, ok, "spectral identities (transform, eigenvalue algebra, a=0 reduction)", detail);
}

void criterion_5_specfun_gates() {
    double worst_ode = 0.0;
    for (double kappa : {-0.95, -0.45, 0.0, 0.45, 0.95}) {
        for (Complex mu : {Complex{0.25, 0.0}, Complex{0.45, 0.0}, Complex{0.0, 0.3},
                           Complex{0.0, 1.2}}) {
            for (double x = 1e-2; x < 50.0; x *= 2.0) {
                double w = whittaker_w(kappa, mu, x);
                double ww = whittaker_w_dxx(kappa, mu, x);
                double q = -0.25 + kappa / x + (0.25 - (mu * mu).real()) / (x * x);
                worst_ode = std::max(worst_ode, std::abs(ww + q * w) /
                                                    std::max(std::abs(ww), std::abs(q * w)));
            }
        }
    }
    double worst_sym = 0.0;
    for (double kappa : {-0.9, 0.0, 0.6}) {
        for (double x : {0.3, 2.0, 11.0, 35.0}) {
            double s1 = std::abs(whittaker_w(kappa, {0.3, 0.0}, x) -
                                 whittaker_w(kappa, {-0.3, 0.0}, x)) /
                        std::abs(whittaker_w(kappa, {0.3, 0.0}, x));
            worst_sym = std::max(worst_sym, s1);
        }
    }
    double worst_bk = 0.0;
    for (double m : {0.5, 1.5}) {
        for (double x = 0.1; x <= 10.0; x *= 1.7) {
            double lhs = whittaker_w(0.0, {0.0, m}, x) / x;
            double rhs = bessel(BesselKind::K, {0.0, m}, x / 2.0) / std::sqrt(kPi * x);
            worst_bk = std::max(worst_bk, std::abs(lhs - rhs) / std::abs(rhs));
        }
    }
    bool degeneration_ok = true;
    double prev = 1e300;
    for (double n : {1e2, 1e3, 1e4}) {
        Complex v = kummer_1f1(Complex(n + 0.3, 0.0), {1.5, 0.0}, 2.0 / (n + 0.3));
        double err = std::abs(v - hyper_0f1({1.5, 0.0}, 2.0));
        if (prev < 1e200 && err * 5.0 > prev) degeneration_ok = false;
        prev = err;
    }
    bool ok = worst_ode <= 1e-7 && worst_sym <= 1e-10 && worst_bk <= 1e-8 && degeneration_ok;
    report(5, ok, "special-function quality gates",
           "ode=" + fmt(worst_ode) + " symmetry=" + fmt(worst_sym) + " besselK=" +
               fmt(worst_bk) + " degeneration=" + std::string(degeneration_ok ? "ok" : "BAD"));
}

void criterion_6_tail() {
    bool ok = true;
    std::string detail;
    double worst_diag = 0.0;
    for (int k = 0; k < 20; ++k) {
        ParameterSet q = (k % 2 == 0)
                             ? make_parameters({0.1 + 0.035 * k, 0.0}, {0.95 - 0.03 * k, 0.0})
                             : make_parameters({0.05 * k, 0.1 + 0.02 * k},
                                               {0.05 * k, -0.1 - 0.02 * k});
        worst_diag = std::max(worst_diag, std::abs(tail_block(Block::PP, q, 0.0) - 1.0));
    }
    ok = ok && worst_diag <= 1e-12;
    detail += "diag_norm=" + fmt(worst_diag) + "; ";

    double worst_fft = 0.0;
    for (auto p : {make_parameters({0.6, 0.0}, {0.4, 0.0}),
                   make_parameters({0.5, 0.3}, {0.5, -0.3})}) {
        for (double u = -4.0; u <= 4.0; u += 0.5) {
            worst_fft = std::max(worst_fft,
                                 std::abs(profile_transform(p, Block::PP, u) -
                                          Complex(symbol_f(p, u), 0.0)));
            worst_fft = std::max(
                worst_fft, std::abs(profile_transform(p, Block::PM, u) - symbol_g(p, u)));
        }
    }
    ok = ok && worst_fft <= 1e-4;
    detail += "fft=" + fmt(worst_fft) + "; ";

    auto p = make_parameters({0.6, 0.0}, {0.4, 0.0});
    auto rows = tail_convergence(p, Block::PP, {{10.0, 10.0}, {20.0, 20.0}, {40.0, 40.0}});
    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].abs_err > rows[i - 1].abs_err + 1e-13) monotone = false;
    ok = ok && monotone;
    detail += "rescaled errs=" + fmt(rows[0].abs_err) + "," + fmt(rows[1].abs_err) + "," +
              fmt(rows[2].abs_err) + " (monotone to the roundoff floor)";
    report(6, ok, "tail suite (normalization, Fourier symbols, rescaled convergence)", detail);
}

void criterion_7_scaling_limit() {
    bool ok = true;
    std::string detail;
    for (auto base : {make_parameters({0.55, 0.0}, {0.35, 0.0}),
                      make_parameters({0.5, 0.3}, {0.5, -0.3})}) {
        double worst_ratio = 0.0;
        for (auto [xi, eta] : {std::pair{1.0, 2.0}, {0.5, 0.5 + 1e-3}}) {
            for (Block b : {Block::PP, Block::MM, Block::PM}) {
                auto rows = scaled_convergence(base, {8, 16, 32, 64}, b, xi, eta);
                for (std::size_t i = 1; i < rows.size(); ++i)
                    worst_ratio =
                        std::max(worst_ratio, rows[i].abs_err / rows[i - 1].abs_err);
            }
        }
        ok = ok && worst_ratio <= 0.7;
        detail += "a0=" + fmt(base.a) + " worst ratio=" + fmt(worst_ratio) + "; ";
    }
    // Comment-1 covariance under the +1 shift of the base pair
    auto f0 = LimitKernelFamily(make_parameters({0.55, 0.0}, {0.35, 0.0}));
    auto f1 = LimitKernelFamily(make_parameters({1.55, 0.0}, {1.35, 0.0}));
    double worst_cov = 0.0;
    for (auto [xi, eta] : {std::pair{1.0, 2.0}, {0.7, 0.7}}) {
        for (Block b : {Block::PP, Block::MM}) {
            double v0 = f0.limit_block(b, xi, eta), v1 = f1.limit_block(b, xi, eta);
            worst_cov = std::max(worst_cov, std::abs(v1 - v0) / std::max(std::abs(v0), 1e-30));
        }
        for (Block b : {Block::PM, Block::MP}) {
            double v0 = f0.limit_block(b, xi, eta), v1 = f1.limit_block(b, xi, eta);
            worst_cov = std::max(worst_cov, std::abs(v1 + v0) / std::max(std::abs(v0), 1e-30));
        }
    }
    ok = ok && worst_cov <= 1e-10;
    detail += "sign covariance=" + fmt(worst_cov);
    report(7, ok, "Bessel scaling limit with per-doubling error ratio <= 0.7", detail);
}

void criterion_8_norm_law() {
    auto params = make_parameters({0.1, 0.2}, {0.1, -0.2});
    KernelMachine mc(params);
    double target = params.sigma / std::cos(kPi * params.a);
    double prev = 0.0;
    bool from_below = true, monotone = true;
    struct Stage {
        double xmin, xmax;
        int n;
    };
    for (Stage st : {Stage{1e-6, 40.0, 320}, Stage{1e-14, 60.0, 480},
                     Stage{1e-30, 100.0, 800}}) {
        auto g = QuadratureGrid::composite(st.xmin, st.xmax, st.n);
        auto op = discretize(
            [&](double x, double y) { return mc.l_block(LBlock::A, x, y); }, g);
        double nrm = operator_norm(op.matrix);
        from_below = from_below && nrm < target;
        monotone = monotone && nrm > prev;
        prev = nrm;
    }
    bool ok = from_below && monotone && prev > 0.98 * target;
    report(8, ok, "operator norm of A converges from below to sigma/cos(pi a)",
           "finest=" + fmt(prev) + " target=" + fmt(target) +
               " ratio=" + fmt(prev / target));
}

}  // namespace

int main() {
    criterion_1_resolvent();
    criterion_2_factorization();
    criterion_3_finite_model();
    criterion_4_spectral();
    criterion_5_specfun_gates();
    criterion_6_tail();
    criterion_7_scaling_limit();
    criterion_8_norm_law();
    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
