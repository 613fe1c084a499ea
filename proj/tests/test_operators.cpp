#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "mwk/operators.hpp"
#include "mwk/spectral.hpp"

using mwk::Block;
using mwk::DiscretizedOperator;
using mwk::KernelMachine;
using mwk::LBlock;
using mwk::make_parameters;
using mwk::MatrixR;
using mwk::QuadratureGrid;

TEST_CASE("gauss_legendre integrates polynomials exactly") {
    std::vector<double> x, w;
    mwk::gauss_legendre(8, x, w);
    CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 2.0) < 1e-14);
    double p14 = 0.0;
    for (int i = 0; i < 8; ++i) p14 += w[i] * std::pow(x[i], 14);
    CHECK(std::abs(p14 - 2.0 / 15.0) < 1e-14);
}

TEST_CASE("composite grid invariants") {
    auto g = QuadratureGrid::composite(1e-3, 40.0, 160);
    double sum = std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
    CHECK(std::abs(sum - (40.0 - 1e-3)) < 1e-12 * 40.0);
    for (double t : g.nodes) {
        CHECK(t > 1e-3);
        CHECK(t < 40.0);
    }
    CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end()));
    CHECK_THROWS_AS(QuadratureGrid::composite(1.0, 1.0, 100), std::invalid_argument);

    auto lg = QuadratureGrid::log_gauss(1e-3, 40.0, 120);
    double lsum = std::accumulate(lg.weights.begin(), lg.weights.end(), 0.0);
    CHECK(std::abs(lsum - (40.0 - 1e-3)) < 1e-8 * 40.0);
}

TEST_CASE("discretize: zero and rank-1 kernels") {
    auto g = QuadratureGrid::composite(0.1, 10.0, 60);
    auto zero = mwk::discretize([](double, double) { return 0.0; }, g);
    CHECK(zero.matrix.norm() == 0.0);

    auto u = [](double x) { return std::exp(-x) * (1.0 + x); };
    auto rank1 = mwk::discretize([&](double x, double y) { return u(x) * u(y); }, g);
    Eigen::JacobiSVD<MatrixR> svd(rank1.matrix);
    CHECK(svd.singularValues()(1) <= 1e-10 * svd.singularValues()(0));

    CHECK_THROWS_AS(
        mwk::discretize([](double x, double) { return x > 1 ? 1.0 / 0.0 : 0.0; }, g),
        mwk::numeric_error);
}

TEST_CASE("Nystrom consistency: matrix apply equals direct quadrature") {
    auto params = make_parameters({0.1, 0.2}, {0.1, -0.2});
    KernelMachine mc(params);
    auto g = QuadratureGrid::composite(1e-3, 40.0, 120);
    auto a_op = mwk::discretize(
        [&](double x, double y) { return mc.l_block(LBlock::A, x, y); }, g);
    auto bump = [](double x) { return (x > 1.0 && x < 2.0) ? (x - 1.0) * (2.0 - x) : 0.0; };
    int n = g.size();
    Eigen::VectorXd fh(n);
    for (int i = 0; i < n; ++i) fh(i) = std::sqrt(g.weights[i]) * bump(g.nodes[i]);
    Eigen::VectorXd applied = a_op.matrix * fh;
    for (int i = 0; i < n; i += 37) {
        double direct = 0.0;
        for (int j = 0; j < n; ++j)
            direct += g.weights[j] * mc.l_block(LBlock::A, g.nodes[i], g.nodes[j]) *
                      bump(g.nodes[j]);
        CHECK(std::abs(applied(i) / std::sqrt(g.weights[i]) - direct) < 1e-10);
    }
}

TEST_CASE("fredholm_det") {
    auto g = QuadratureGrid::composite(0.1, 5.0, 40);
    DiscretizedOperator zero{MatrixR::Zero(g.size(), g.size()), g};
    CHECK(mwk::fredholm_det(zero, 3.0) == Catch::Approx(1.0));

    Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(g.size(), 0.1, 1.0);
    DiscretizedOperator rank1{u * u.transpose(), g};
    CHECK(mwk::fredholm_det(rank1, 0.7) ==
          Catch::Approx(1.0 + 0.7 * u.squaredNorm()).epsilon(1e-12));
    CHECK(mwk::fredholm_det(rank1, 2.0) >= 1.0);
}

TEST_CASE("norm law: discretized A converges from below to sigma/cos(pi a)") {
    auto params = make_parameters({0.1, 0.2}, {0.1, -0.2});
    KernelMachine mc(params);
    double a = params.a;

    // Fourier-multiplier oracle: sup over u of (sigma/pi) * pi / |cos(pi(a + iu))|
    double sup = 0.0;
    for (double u = 0.0; u <= 5.0; u += 1e-3) {
        double m = params.sigma / std::abs(std::cos(mwk::kPi * mwk::Complex(a, u)));
        sup = std::max(sup, m);
    }
    double target = params.sigma / std::cos(mwk::kPi * a);
    REQUIRE(std::abs(sup - target) < 1e-6 * target);

    double prev = 0.0;
    struct Stage {
        double xmin, xmax;
        int nodes;
    };
    for (const Stage& st : {Stage{1e-6, 40.0, 320}, Stage{1e-14, 60.0, 480},
                            Stage{1e-30, 100.0, 800}}) {
        auto g = QuadratureGrid::composite(st.xmin, st.xmax, st.nodes);
        auto a_op = mwk::discretize(
            [&](double x, double y) { return mc.l_block(LBlock::A, x, y); }, g);
        double nrm = mwk::operator_norm(a_op.matrix);
        CHECK(nrm < target);   // from below
        CHECK(nrm > prev);     // monotone in the domain sweep
        prev = nrm;
    }
    CHECK(prev > 0.98 * target);  // within 2% at the finest grid
}

TEST_CASE("factorization residuals decrease under refinement") {
    auto params = make_parameters({0.3, 0.4}, {0.3, -0.4});
    auto report = mwk::verify_factorization(params, 160, 40.0, 3);
    REQUIRE(report.levels.size() == 3);
    for (const auto& lvl : report.levels) {
        for (const auto& [name, r] : lvl.residuals) {
            INFO(name << " at " << lvl.report_nodes << " nodes: " << r);
            CHECK(r < 0.05);
        }
    }
    CHECK(report.levels.back().residuals.at("pp_vs_cd") < 1e-3);
    CHECK(report.strictly_decreasing());
}

TEST_CASE("factorization at a = 0: symmetric construction") {
    auto params = make_parameters({0.0, 0.3}, {0.0, -0.3});
    auto report = mwk::verify_factorization(params, 96, 40.0, 2);
    const auto& fin = report.levels.back().residuals;
    double rpp = fin.at("pp_vs_cd"), rmm = fin.at("mm_vs_dc");
    CHECK(rpp < 2.0 * rmm);
    CHECK(rmm < 2.0 * rpp);
}

TEST_CASE("resolvent residuals: blocks match and decrease") {
    auto params = make_parameters({0.3, 0.4}, {0.3, -0.4});
    auto report = mwk::verify_resolvent(params, 160, 40.0, 3);
    REQUIRE(report.levels.size() == 3);
    CHECK(report.strictly_decreasing());
    for (const auto& [name, r] : report.levels.back().residuals) {
        INFO(name << ": " << r);
        CHECK(r < 1e-2);
    }

    // K_{++} block alone equals AB(1+AB)^{-1}
    KernelMachine mc(params);
    auto gg = QuadratureGrid::composite(1e-9, 40.0, 400);
    MatrixR ah =
        mwk::discretize([&](double x, double y) { return mc.l_block(LBlock::A, x, y); }, gg)
            .matrix;
    MatrixR kpp = mwk::discretize_kernel_block(mc, Block::PP, gg);
    MatrixR ab = ah * ah.transpose();
    MatrixR id = MatrixR::Identity(ab.rows(), ab.cols());
    MatrixR res = (id + ab).lu().solve(ab);
    // compare on the reporting window only
    std::vector<int> idx;
    for (int i = 0; i < gg.size(); ++i)
        if (gg.nodes[i] >= 1e-3) idx.push_back(i);
    CHECK(mwk::detail::rel_fro(mwk::detail::restrict_rows_cols(res, idx),
                               mwk::detail::restrict_rows_cols(kpp, idx)) < 1e-2);
}

TEST_CASE("sign flip a -> -a swaps the diagonal blocks") {
    auto p_plus = make_parameters({0.2, 0.0}, {0.7, 0.0});    // a = 0.45
    auto p_minus = make_parameters({-0.7, 0.0}, {-0.2, 0.0});  // a = -0.45
    KernelMachine m1(p_plus), m2(p_minus);
    for (auto [x, y] : {std::pair{0.5, 1.7}, {2.0, 3.3}}) {
        CHECK(std::abs(m1.k_block(Block::PP, x, y) - m2.k_block(Block::MM, x, y)) <
              1e-9 * std::abs(m1.k_block(Block::PP, x, y)));
        CHECK(std::abs(m1.k_block(Block::MM, x, y) - m2.k_block(Block::PP, x, y)) <
              1e-9 * std::abs(m1.k_block(Block::MM, x, y)));
    }
}

TEST_CASE("commutation of kernels with different mu") {
    CHECK(mwk::commutation_check(0.1, {0.0, 0.1}, {0.0, 0.1}, 80, 40.0) < 1e-13);
    double c = mwk::commutation_check(0.1, {0.0, 0.1}, {0.0, 0.3}, 200, 40.0);
    CHECK(c < 1e-3);
    double c_pp = mwk::commutation_check(0.1, {0.0, 0.1}, {0.0, 0.3}, 200, 40.0, true);
    CHECK(c_pp < 1e-3);
    // decreasing under refinement (deeper guard + more nodes)
    double c_coarse = mwk::commutation_check(0.1, {0.0, 0.1}, {0.0, 0.3}, 100, 40.0, false, 1e-6);
    double c_fine = mwk::commutation_check(0.1, {0.0, 0.1}, {0.0, 0.3}, 200, 40.0, false, 1e-12);
    CHECK(c_fine < c_coarse);
}

TEST_CASE("spectral positivity of the discretized operators") {
    auto params = make_parameters({0.3, 0.4}, {0.3, -0.4});
    KernelMachine mc(params);
    auto g = QuadratureGrid::composite(1e-6, 40.0, 240);
    MatrixR ah =
        mwk::discretize([&](double x, double y) { return mc.l_block(LBlock::A, x, y); }, g)
            .matrix;
    MatrixR ab = ah * ah.transpose();
    Eigen::SelfAdjointEigenSolver<MatrixR> es_ab(ab);
    CHECK(es_ab.eigenvalues().minCoeff() > -1e-10);

    MatrixR kpp = mwk::discretize_kernel_block(mc, Block::PP, g);
    Eigen::SelfAdjointEigenSolver<MatrixR> es_k(0.5 * (kpp + kpp.transpose()));
    CHECK(es_k.eigenvalues().minCoeff() > -1e-8);
    CHECK(es_k.eigenvalues().maxCoeff() < 1.0);
}

TEST_CASE("fredholm determinant growth matches the spectral density") {
    // log det(1 + AB) grows with the log-window width at the rate
    // (1/pi) int_0^inf log(1 + lambda_AB(m)) dm, the eigenvalue formula
    // integrated against the spectral density
    auto params = make_parameters({0.1, 0.2}, {0.1, -0.2});
    KernelMachine mc(params);
    auto logdet_at = [&](double xmin) {
        auto g = QuadratureGrid::composite(xmin, 40.0, 360);
        MatrixR ah =
            mwk::discretize([&](double x, double y) { return mc.l_block(LBlock::A, x, y); }, g)
                .matrix;
        mwk::DiscretizedOperator ab{ah * ah.transpose(), g};
        return std::log(mwk::fredholm_det(ab, 1.0));
    };
    double spectral_rate = 0.0;
    for (double m = 0.0005; m < 8.0; m += 0.001)
        spectral_rate += std::log(1.0 + mwk::ab_eigenvalue(params, m)) * 0.001 / mwk::kPi;
    double growth = (logdet_at(1e-6) - logdet_at(1e-4)) / std::log(1e2);
    CHECK(std::abs(growth - spectral_rate) < 0.05 * spectral_rate);
}
