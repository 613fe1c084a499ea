#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mwk/kernels.hpp"
#include "mwk/params.hpp"

using mwk::AuxName;
using mwk::Block;
using mwk::KernelMachine;
using mwk::LBlock;
using mwk::make_parameters;

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

struct BlockRef {
    double x, y, pp, mm, pm;
};

constexpr BlockRef kComplexRefs[] = {
    {0.5, 2.3, 0.041965697172835955, 0.0086751686525790135, 0.02120679274031078},
    {1.0, 1.0, 0.072778402468485243, 0.016759926766725518, 0.078990606858995249},
    {0.05, 0.07, 2.4961261909765685, 1.978403003391906, 1.4214720385367778},
    {7.0, 9.5, 4.4736758483597839e-6, 1.7200498138053225e-7, 7.8511395408437074e-6},
    {1.0, 1.0004, 0.07274885111837484, 0.016750857549599038, 0.078951610673274639},
    {22.0, 25.0, 2.641606821255691e-13, 3.2893655204267792e-15, 7.1768574516277138e-13},
};

constexpr BlockRef kRealRefs[] = {
    {0.5, 2.3, 0.029556926539700205, 0.0013830916421905469, 0.0075542208658940435},
    {1.0, 1.0, 0.048657349324648749, 0.0027041900976069848, 0.034184340603992237},
    {0.05, 0.07, 1.6511128517267228, 0.62278438095215055, 0.69483417381086734},
    {7.0, 9.5, 4.1425720076818646e-6, 1.5977644660709112e-8, 2.9349982906757347e-6},
    {1.0, 1.0004, 0.048638294503616222, 0.0027025901603296934, 0.03416494440335332},
    {22.0, 25.0, 3.1865239090249236e-13, 2.2686094380648532e-16, 2.7129128207195197e-13},
};

}  // namespace

TEST_CASE("kernel blocks match frozen references") {
    KernelMachine mc(make_parameters({0.3, 0.4}, {0.3, -0.4}));
    for (const auto& r : kComplexRefs) {
        CHECK(rel_err(mc.k_block(Block::PP, r.x, r.y), r.pp) < 1e-6);
        CHECK(rel_err(mc.k_block(Block::MM, r.x, r.y), r.mm) < 1e-6);
        CHECK(rel_err(mc.k_block(Block::PM, r.x, r.y), r.pm) < 1e-8);
    }
    KernelMachine mr(make_parameters({0.2, 0.0}, {0.7, 0.0}));
    for (const auto& r : kRealRefs) {
        CHECK(rel_err(mr.k_block(Block::PP, r.x, r.y), r.pp) < 1e-6);
        CHECK(rel_err(mr.k_block(Block::MM, r.x, r.y), r.mm) < 1e-6);
        CHECK(rel_err(mr.k_block(Block::PM, r.x, r.y), r.pm) < 1e-8);
    }
}

TEST_CASE("aux functions: definition unwinding and contiguous identities") {
    KernelMachine mr(make_parameters({0.2, 0.0}, {0.7, 0.0}));
    double a = 0.45, zzp = 0.2 * 0.7, x = 1.5;

    // phi(x) x^{1/2} e^{-x/2} = W_{a+1/2,mu}(x) by construction at x = 2
    double phi2 = mr.aux(AuxName::Phi, 2.0);
    CHECK(rel_err(phi2, 1.2748000252478042) < 1e-9);
    CHECK(rel_err(phi2 * std::sqrt(2.0) * std::exp(-1.0),
                  mwk::whittaker_w(a + 0.5, {-0.25, 0.0}, 2.0)) < 1e-12);
    CHECK(rel_err(mr.aux(AuxName::Phi, 1.5), 1.094577779829934) < 1e-9);

    // phi- = (phi~ - a phi)/(z z'), psi- = (psi~ + a psi)/(z z')
    double phi = mr.aux(AuxName::Phi, x), phim = mr.aux(AuxName::PhiMinus, x);
    double phit = mr.aux(AuxName::PhiTilde, x);
    CHECK(rel_err(phim, (phit - a * phi) / zzp) < 1e-8);
    double psi = mr.aux(AuxName::Psi, x), psim = mr.aux(AuxName::PsiMinus, x);
    double psit = mr.aux(AuxName::PsiTilde, x);
    CHECK(rel_err(psim, (psit + a * psi) / zzp) < 1e-8);
}

TEST_CASE("J-symmetry of the block family") {
    KernelMachine mc(make_parameters({0.3, 0.4}, {0.3, -0.4}));
    // K_{-+}(x,y) = -K_{+-}(y,x) exactly by construction
    CHECK(mc.k_block(Block::MP, 0.5, 2.3) == -mc.k_block(Block::PM, 2.3, 0.5));

    for (auto [x, y] : {std::pair{0.4, 1.7}, {2.0, 6.5}, {0.08, 0.3}}) {
        CHECK(rel_err(mc.k_block(Block::PP, x, y), mc.k_block(Block::PP, y, x)) < 1e-9);
        CHECK(rel_err(mc.k_block(Block::MM, x, y), mc.k_block(Block::MM, y, x)) < 1e-9);
    }
}

TEST_CASE("parameter swap z <-> z' leaves blocks invariant") {
    KernelMachine m1(make_parameters({0.2, 0.0}, {0.7, 0.0}));
    KernelMachine m2(make_parameters({0.7, 0.0}, {0.2, 0.0}));
    for (auto [x, y] : {std::pair{0.5, 2.3}, {1.1, 0.9}, {4.0, 6.0}}) {
        for (Block b : {Block::PP, Block::MM, Block::PM, Block::MP}) {
            CHECK(rel_err(m1.k_block(b, x, y), m2.k_block(b, x, y)) < 1e-9);
        }
    }
}

TEST_CASE("diagonal via the Richardson limit matches offset evaluations") {
    KernelMachine mc(make_parameters({0.3, 0.4}, {0.3, -0.4}));
    double diag = mc.k_block(Block::PP, 1.0, 1.0);
    // Richardson-extrapolated finite-difference limit oracle in the offset h:
    // the offset expansion has both h and h^2 terms, so extrapolate twice.
    double h = 8e-3;
    auto v = [&](double hh) { return mc.k_block(Block::PP, 1.0, 1.0 + hh); };
    double r1a = 2.0 * v(h / 2) - v(h);
    double r1b = 2.0 * v(h / 4) - v(h / 2);
    double extrapolated = (4.0 * r1b - r1a) / 3.0;
    CHECK(rel_err(diag, extrapolated) < 1e-6);
}

TEST_CASE("diagonal density limit near the origin") {
    // x K_{++}(x,x) -> C(z,z') = (z-z') sin(pi z) sin(pi z') / (pi sin(pi(z-z')))
    KernelMachine mr(make_parameters({0.2, 0.0}, {0.7, 0.0}));
    double c_density = 0.075682672864065698;
    double v = 1e-4 * mr.k_block(Block::PP, 1e-4, 1e-4);
    CHECK(rel_err(v, 0.077211219854469752) < 1e-6);  // frozen value at x = 1e-4
    CHECK(std::abs(v - c_density) < 0.03 * c_density);
    double v2 = 1e-6 * mr.k_block(Block::PP, 1e-6, 1e-6);
    CHECK(std::abs(v2 - c_density) < 0.003 * c_density);  // deficit ~ x^{1-2|mu|}
}

TEST_CASE("L-kernel blocks") {
    KernelMachine mc(make_parameters({0.3, 0.4}, {0.3, -0.4}));
    // B(x,y) = A(y,x) exactly
    for (int i = 0; i < 20; ++i) {
        double x = 0.05 + 0.37 * i, y = 2.3 + 0.11 * i;
        CHECK(mc.l_block(LBlock::B, x, y) == mc.l_block(LBlock::A, y, x));
    }
    CHECK(mc.d_kernel(0.7, 1.9) == mc.l_block(LBlock::B, 0.7, 1.9));
    CHECK(mc.c_kernel(0.7, 1.9) == mc.k_block(Block::PM, 0.7, 1.9));

    // a = 0: A symmetric with the explicit elementary form
    KernelMachine m0(make_parameters({0.0, 0.35}, {0.0, -0.35}));
    double x = 0.8, y = 2.1;
    double sigma = m0.params().sigma;
    CHECK(rel_err(m0.l_block(LBlock::A, x, y),
                  sigma / mwk::kPi * std::exp(-(x + y) / 2.0) / (x + y)) < 1e-14);
    CHECK(m0.l_block(LBlock::A, x, y) == m0.l_block(LBlock::A, y, x));
}

TEST_CASE("mu enters A only through sigma") {
    auto p1 = make_parameters({0.1, 0.25}, {0.1, -0.25});
    auto p2 = make_parameters({0.1, 0.45}, {0.1, -0.45});
    KernelMachine m1(p1), m2(p2);
    for (auto [x, y] : {std::pair{0.3, 1.0}, {2.0, 5.0}}) {
        double lhs = m1.l_block(LBlock::A, x, y) * (p2.sigma / p1.sigma);
        CHECK(rel_err(lhs, m2.l_block(LBlock::A, x, y)) < 1e-14);
    }
}

TEST_CASE("tail decay of all blocks") {
    KernelMachine mc(make_parameters({0.3, 0.4}, {0.3, -0.4}));
    double x = 40.0;
    double envelope = std::exp(-x) * std::pow(x, 3.0);
    for (Block b : {Block::PP, Block::MM, Block::PM, Block::MP}) {
        double v = std::abs(mc.k_block(b, x, x));
        CHECK(v > 0.0);
        CHECK(v < envelope);
    }
}

TEST_CASE("kernel machine rejects nonpositive coordinates") {
    KernelMachine mc(make_parameters({0.3, 0.4}, {0.3, -0.4}));
    CHECK_THROWS_AS(mc.k_block(Block::PP, -1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(mc.k_block(Block::PM, 1.0, 0.0), std::domain_error);
}
