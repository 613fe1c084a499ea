#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mwk/kernels.hpp"
#include "mwk/params.hpp"
#include "mwk/policy.hpp"
#include "mwk/quadrature.hpp"

namespace mwk {

using MatrixR = Eigen::MatrixXd;
using VectorR = Eigen::VectorXd;

// Nystrom matrix M_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j).
struct DiscretizedOperator {
    MatrixR matrix;
    QuadratureGrid grid;
};

inline DiscretizedOperator discretize(const std::function<double(double, double)>& kernel,
                                      const QuadratureGrid& grid) {
    int n = grid.size();
    MatrixR m(n, n);
    std::vector<double> sw(n);
    for (int i = 0; i < n; ++i) sw[i] = std::sqrt(grid.weights[i]);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double v = kernel(grid.nodes[i], grid.nodes[j]);
            if (!std::isfinite(v))
                throw numeric_error("discretize: non-finite entry at (" +
                                    std::to_string(grid.nodes[i]) + ", " +
                                    std::to_string(grid.nodes[j]) + ")");
            m(i, j) = sw[i] * v * sw[j];
        }
    }
    return {std::move(m), grid};
}

inline double operator_norm(const MatrixR& m) {
    Eigen::SelfAdjointEigenSolver<MatrixR> es(m.transpose() * m);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// det(1 + scale * M) through the log-determinant of the LU factors.
inline double fredholm_det(const DiscretizedOperator& op, double scale) {
    MatrixR a = MatrixR::Identity(op.matrix.rows(), op.matrix.cols()) + scale * op.matrix;
    Eigen::PartialPivLU<MatrixR> lu(a);
    const auto& u = lu.matrixLU();
    double log_abs = 0.0;
    double sign = lu.permutationP().determinant();
    for (int i = 0; i < u.rows(); ++i) {
        double d = u(i, i);
        if (d == 0.0) return 0.0;
        if (d < 0.0) sign = -sign;
        log_abs += std::log(std::abs(d));
    }
    if (log_abs > 700.0) throw numeric_error("fredholm_det: overflow; use the log value");
    return sign * std::exp(log_abs);
}

// One refinement level of a verification run.
struct ResidualLevel {
    int report_nodes = 0;
    int grid_nodes = 0;
    double guard_x_min = 0.0;
    std::map<std::string, double> residuals;
};

struct ResidualReport {
    std::vector<ResidualLevel> levels;

    // every named residual strictly decreases from level to level
    bool strictly_decreasing() const {
        for (std::size_t l = 1; l < levels.size(); ++l)
            for (const auto& [key, val] : levels[l].residuals) {
                auto it = levels[l - 1].residuals.find(key);
                if (it != levels[l - 1].residuals.end() && !(val < it->second)) return false;
            }
        return true;
    }
};

namespace detail {

// The integral operators act on all of (0, infinity); panels are extended below
// the reporting window so domain truncation does not pollute the comparison, and
// the resolvent/product matrices are compared on the reporting nodes only.
struct GuardedGrid {
    QuadratureGrid grid;        // full grid including guard panels
    std::vector<int> report;    // indices of nodes inside [x_min_report, x_max]
};

inline GuardedGrid guarded_composite(double x_min_report, double x_max, int target_nodes,
                                     double guard_x_min) {
    auto edges = QuadratureGrid::panel_edges(x_min_report, x_max);
    int report_panels = static_cast<int>(edges.size()) - 1;
    int per = std::max(2, (target_nodes + report_panels - 1) / report_panels);
    QuadratureGrid g =
        QuadratureGrid::composite(std::min(guard_x_min, x_min_report / 2.0), x_max,
                                  per * (static_cast<int>(QuadratureGrid::panel_edges(
                                             std::min(guard_x_min, x_min_report / 2.0), x_max)
                                             .size()) -
                                         1));
    GuardedGrid out{g, {}};
    for (int i = 0; i < g.size(); ++i)
        if (g.nodes[i] >= x_min_report) out.report.push_back(i);
    return out;
}

inline MatrixR restrict_rows_cols(const MatrixR& m, const std::vector<int>& idx) {
    MatrixR out(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
    return out;
}

inline double rel_fro(const MatrixR& got, const MatrixR& want) {
    return (got - want).norm() / want.norm();
}

struct LevelPlan {
    int nodes;
    double guard;
};

inline std::vector<LevelPlan> level_plans(int base_nodes, int levels) {
    // coarse -> fine: node count doubles up to base_nodes, guard deepens
    std::vector<LevelPlan> plans;
    for (int l = 0; l < levels; ++l) {
        int shift = levels - 1 - l;
        plans.push_back({std::max(16, base_nodes >> shift), std::pow(10.0, -6.0 - 3.0 * l)});
    }
    return plans;
}

struct DiscretizedBlocks {
    MatrixR kpp, kmm, kpm, kmp, a, b, c;
    std::vector<int> report;
    int n = 0;
};

inline MatrixR discretize_block(const KernelMachine& mc, Block tag,
                                const std::vector<KernelMachine::KernelProfile>& profiles,
                                const QuadratureGrid& grid) {
    int n = grid.size();
    MatrixR m(n, n);
    std::vector<double> sw(n);
    for (int i = 0; i < n; ++i) sw[i] = std::sqrt(grid.weights[i]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = sw[i] * mc.k_block_from(tag, profiles[i], profiles[j]) * sw[j];
    return m;
}

inline DiscretizedBlocks build_blocks(const KernelMachine& mc, double x_min, double x_max,
                                      int nodes, double guard) {
    GuardedGrid gg = guarded_composite(x_min, x_max, nodes, guard);
    int n = gg.grid.size();
    DiscretizedBlocks out;
    out.report = gg.report;
    out.n = n;
    std::vector<KernelMachine::KernelProfile> profiles;
    profiles.reserve(n);
    for (double x : gg.grid.nodes) profiles.push_back(mc.profile(x));
    out.kpp = discretize_block(mc, Block::PP, profiles, gg.grid);
    out.kmm = discretize_block(mc, Block::MM, profiles, gg.grid);
    out.kpm = discretize_block(mc, Block::PM, profiles, gg.grid);
    out.kmp = discretize_block(mc, Block::MP, profiles, gg.grid);
    auto wrap = [&](auto&& f) { return discretize(f, gg.grid).matrix; };
    out.a = wrap([&](double x, double y) { return mc.l_block(LBlock::A, x, y); });
    out.b = wrap([&](double x, double y) { return mc.l_block(LBlock::B, x, y); });
    out.c = out.kpm;
    return out;
}

}  // namespace detail

// Weighted Nystrom matrix of one kernel block (per-node profiles, O(n) special
// function evaluations).
inline MatrixR discretize_kernel_block(const KernelMachine& mc, Block tag,
                                       const QuadratureGrid& grid) {
    std::vector<KernelMachine::KernelProfile> profiles;
    profiles.reserve(grid.size());
    for (double x : grid.nodes) profiles.push_back(mc.profile(x));
    return detail::discretize_block(mc, tag, profiles, grid);
}

// Factorization check: K_{++} = C D, K_{--} = D C, K_{-+} = D C D - D with C = K_{+-}, D = B.
inline ResidualReport verify_factorization(const ParameterSet& params, int base_nodes,
                                           double x_max, int levels,
                                           const AccuracyPolicy& pol = {}) {
    if (!(std::abs(params.a) < 0.5))
        throw std::invalid_argument("verify_factorization: requires |a| < 1/2");
    KernelMachine mc(params, pol);
    ResidualReport report;
    for (auto plan : detail::level_plans(base_nodes, levels)) {
        auto blk = detail::build_blocks(mc, 1e-3, x_max, plan.nodes, plan.guard);
        const auto& r = blk.report;
        auto rr = [&](const MatrixR& got, const MatrixR& want) {
            return detail::rel_fro(detail::restrict_rows_cols(got, r),
                                   detail::restrict_rows_cols(want, r));
        };
        ResidualLevel lvl;
        lvl.report_nodes = static_cast<int>(r.size());
        lvl.grid_nodes = blk.n;
        lvl.guard_x_min = plan.guard;
        MatrixR dt = blk.b.transpose();
        lvl.residuals["pp_vs_cd"] = rr(blk.c * blk.b, blk.kpp);
        lvl.residuals["mm_vs_dc"] = rr(blk.b * blk.c, blk.kmm);
        lvl.residuals["mp_vs_dcd_minus_d"] = rr(blk.b * blk.c * blk.b - blk.b, blk.kmp);
        lvl.residuals["c_plus_cddt_vs_dt"] =
            (detail::restrict_rows_cols(blk.c + blk.c * blk.b * dt, r) -
             detail::restrict_rows_cols(dt, r))
                .norm() /
            detail::restrict_rows_cols(dt, r).norm();
        MatrixR lhs2 = blk.b * blk.c + blk.b * blk.c * blk.b * dt - blk.b * dt;
        lvl.residuals["dc_plus_dcddt_minus_ddt"] =
            detail::restrict_rows_cols(lhs2, r).norm() /
            detail::restrict_rows_cols(blk.b * dt, r).norm();
        report.levels.push_back(std::move(lvl));
    }
    return report;
}

// Resolvent check: K = Lambda (1 + Lambda)^{-1} with Lambda = [[0, A], [-B, 0]].
inline ResidualReport verify_resolvent(const ParameterSet& params, int base_nodes,
                                       double x_max, int levels,
                                       const AccuracyPolicy& pol = {}) {
    if (!(std::abs(params.a) < 0.5))
        throw std::invalid_argument("verify_resolvent: requires |a| < 1/2");
    KernelMachine mc(params, pol);
    ResidualReport report;
    for (auto plan : detail::level_plans(base_nodes, levels)) {
        auto blk = detail::build_blocks(mc, 1e-3, x_max, plan.nodes, plan.guard);
        int n = blk.n;
        MatrixR lambda = MatrixR::Zero(2 * n, 2 * n);
        lambda.topRightCorner(n, n) = blk.a;
        lambda.bottomLeftCorner(n, n) = -blk.b;
        Eigen::PartialPivLU<MatrixR> lu(MatrixR::Identity(2 * n, 2 * n) + lambda);
        if (!(lu.rcond() > 1e-13))
            throw numeric_error("verify_resolvent: 1 + Lambda near-singular");
        MatrixR resolvent = lu.solve(lambda);

        const auto& r = blk.report;
        auto rr = [&](const MatrixR& got, const MatrixR& want) {
            return detail::rel_fro(detail::restrict_rows_cols(got, r),
                                   detail::restrict_rows_cols(want, r));
        };
        ResidualLevel lvl;
        lvl.report_nodes = static_cast<int>(r.size());
        lvl.grid_nodes = n;
        lvl.guard_x_min = plan.guard;
        lvl.residuals["pp"] = rr(resolvent.topLeftCorner(n, n), blk.kpp);
        lvl.residuals["pm"] = rr(resolvent.topRightCorner(n, n), blk.kpm);
        lvl.residuals["mp"] = rr(resolvent.bottomLeftCorner(n, n), blk.kmp);
        lvl.residuals["mm"] = rr(resolvent.bottomRightCorner(n, n), blk.kmm);
        report.levels.push_back(std::move(lvl));
    }
    return report;
}

// Commutation check: the kernels with equal a and different mu commute.
inline double commutation_check(double a, Complex mu1, Complex mu2, int nodes, double x_max,
                                bool pp_block_only = false, double guard = 1e-9,
                                const AccuracyPolicy& pol = {}) {
    auto params_of = [&](Complex mu) {
        if (std::abs(mu.imag()) > 0)
            return make_parameters(Complex(a, mu.imag()), Complex(a, -mu.imag()));
        return make_parameters(Complex(a + mu.real(), 0.0), Complex(a - mu.real(), 0.0));
    };
    KernelMachine m1(params_of(mu1), pol), m2(params_of(mu2), pol);
    auto gg = detail::guarded_composite(1e-3, x_max, nodes, guard);
    int n = gg.grid.size();
    auto assemble = [&](const KernelMachine& mc) {
        std::vector<KernelMachine::KernelProfile> profiles;
        for (double x : gg.grid.nodes) profiles.push_back(mc.profile(x));
        if (pp_block_only) return detail::discretize_block(mc, Block::PP, profiles, gg.grid);
        MatrixR k(2 * n, 2 * n);
        k.topLeftCorner(n, n) = detail::discretize_block(mc, Block::PP, profiles, gg.grid);
        k.topRightCorner(n, n) = detail::discretize_block(mc, Block::PM, profiles, gg.grid);
        k.bottomLeftCorner(n, n) = detail::discretize_block(mc, Block::MP, profiles, gg.grid);
        k.bottomRightCorner(n, n) = detail::discretize_block(mc, Block::MM, profiles, gg.grid);
        return k;
    };
    MatrixR k1 = assemble(m1), k2 = assemble(m2);
    // products couple through the guard region; the norm is taken on the window
    std::vector<int> idx = gg.report;
    if (!pp_block_only)
        for (int i : gg.report) idx.push_back(i + n);
    MatrixR comm = k1 * k2 - k2 * k1;
    return detail::restrict_rows_cols(comm, idx).norm() /
           (detail::restrict_rows_cols(k1, idx).norm() *
            detail::restrict_rows_cols(k2, idx).norm());
}

}  // namespace mwk
