#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mwk/complexfun.hpp"
#include "mwk/policy.hpp"

namespace mwk {

using MatrixC = Eigen::MatrixXcd;

inline constexpr int kMaxEnumerationOrder = 24;  // 2^24 configurations

// Dense kernel on a finite two-block state space; rows/cols 0..n1-1 are block 1.
struct FiniteKernel {
    MatrixC entries;
    int n1 = 0;
    int n2 = 0;

    int order() const { return n1 + n2; }

    FiniteKernel() = default;
    FiniteKernel(MatrixC m, int n1_, int n2_) : entries(std::move(m)), n1(n1_), n2(n2_) {
        if (entries.rows() != entries.cols() || entries.rows() != n1 + n2)
            throw std::invalid_argument("FiniteKernel: block sizes inconsistent with matrix");
    }

    auto b11() const { return entries.topLeftCorner(n1, n1); }
    auto b12() const { return entries.topRightCorner(n1, n2); }
    auto b21() const { return entries.bottomLeftCorner(n2, n1); }
    auto b22() const { return entries.bottomRightCorner(n2, n2); }

    // A11* = A11, A22* = A22, A12* = -A21
    bool is_j_hermitian(double tol = 1e-10) const {
        double s = entries.norm() + 1.0;
        return (b11() - b11().adjoint()).norm() < tol * s &&
               (b22() - b22().adjoint()).norm() < tol * s &&
               (b12().adjoint() + b21()).norm() < tol * s;
    }
};

struct Configuration {
    std::uint32_t mask = 0;

    int count() const { return __builtin_popcount(mask); }
    bool contains(int i) const { return (mask >> i) & 1u; }
    bool operator==(const Configuration&) const = default;
};

struct WeightTable {
    std::vector<double> probabilities;  // indexed by configuration bitmask
    double normalizer = 1.0;            // det(1 + L)
    int n1 = 0, n2 = 0;

    int order() const { return n1 + n2; }
};

namespace detail {

inline MatrixC submatrix(const MatrixC& m, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
    MatrixC out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
    return out;
}

inline Complex det_lu(const MatrixC& m) {
    if (m.rows() == 0) return {1.0, 0.0};
    return Eigen::PartialPivLU<MatrixC>(m).determinant();
}

inline MatrixC inverse_named(const MatrixC& m, const char* what) {
    Eigen::PartialPivLU<MatrixC> lu(m);
    if (!(lu.rcond() > 1e-12))
        throw numeric_error(std::string("near-singular inverse: ") + what);
    return lu.inverse();
}

inline std::vector<int> mask_indices(std::uint32_t mask, int n) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
        if ((mask >> i) & 1u) idx.push_back(i);
    return idx;
}

}  // namespace detail

// Prob{xi} = det L_xi / det(1+L) over all 2^n configurations.
// Kernels with exactly-zero diagonal blocks get their unbalanced minors set to
// zero structurally (such matrices are singular by block shape).
inline WeightTable weight_distribution(const FiniteKernel& l) {
    const int n = l.order();
    if (n > kMaxEnumerationOrder)
        throw std::invalid_argument("weight_distribution: order exceeds enumeration cap 24");
    const MatrixC& m = l.entries;
    const bool zero_diag_blocks =
        l.b11().isZero(0.0) && l.b22().isZero(0.0) && l.n1 > 0 && l.n2 > 0;

    MatrixC one_plus = MatrixC::Identity(n, n) + m;
    Eigen::PartialPivLU<MatrixC> lu(one_plus);
    if (!(lu.rcond() > 1e-12)) throw numeric_error("weight_distribution: 1+L near-singular");
    Complex norm_c = lu.determinant();
    if (std::abs(norm_c.imag()) > 1e-9 * std::max(1.0, std::abs(norm_c)))
        throw numeric_error("weight_distribution: det(1+L) not real");

    WeightTable table;
    table.n1 = l.n1;
    table.n2 = l.n2;
    table.normalizer = norm_c.real();
    table.probabilities.assign(std::size_t{1} << n, 0.0);

    for (std::uint32_t mask = 0; mask < table.probabilities.size(); ++mask) {
        double det;
        if (mask == 0) {
            det = 1.0;  // det of the empty minor
        } else if (zero_diag_blocks &&
                   __builtin_popcount(mask & ((1u << l.n1) - 1u)) * 2 !=
                       __builtin_popcount(mask)) {
            det = 0.0;  // unbalanced restriction of an off-diagonal kernel
        } else {
            auto idx = detail::mask_indices(mask, n);
            Complex d = detail::det_lu(detail::submatrix(m, idx, idx));
            double scale = std::max(1.0, std::abs(d));
            if (std::abs(d.imag()) > 1e-9 * scale)
                throw numeric_error("weight_distribution: complex minor at mask " +
                                    std::to_string(mask));
            if (d.real() < -1e-10 * scale)
                throw numeric_error("weight_distribution: negative minor at mask " +
                                    std::to_string(mask));
            det = std::max(0.0, d.real());
        }
        table.probabilities[mask] = det / table.normalizer;
    }
    return table;
}

// rho_n(x_1..x_n) = det [K(x_i, x_j)].
inline Complex correlation(const FiniteKernel& k, const std::vector<int>& points) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i] < 0 || points[i] >= k.order())
            throw std::invalid_argument("correlation: point index out of range");
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw std::invalid_argument("correlation: points must be pairwise distinct");
    }
    return detail::det_lu(detail::submatrix(k.entries, points, points));
}

// K = L (1+L)^{-1} and L = K (1-K)^{-1}.
inline FiniteKernel k_from_l(const FiniteKernel& l) {
    const int n = l.order();
    MatrixC one_plus = MatrixC::Identity(n, n) + l.entries;
    Eigen::PartialPivLU<MatrixC> lu(one_plus);
    if (!(lu.rcond() > 1e-12)) throw numeric_error("k_from_l: 1+L near-singular");
    return {l.entries * lu.inverse(), l.n1, l.n2};
}

inline FiniteKernel l_from_k(const FiniteKernel& k) {
    const int n = k.order();
    MatrixC one_minus = MatrixC::Identity(n, n) - k.entries;
    Eigen::PartialPivLU<MatrixC> lu(one_minus);
    if (!(lu.rcond() > 1e-12)) throw numeric_error("l_from_k: 1-K near-singular");
    return {k.entries * lu.inverse(), k.n1, k.n2};
}

// Blockwise forms of the same transforms.
inline FiniteKernel block_k_from_l(const FiniteKernel& l) {
    using detail::inverse_named;
    const MatrixC i1 = MatrixC::Identity(l.n1, l.n1), i2 = MatrixC::Identity(l.n2, l.n2);
    MatrixC inv22 = inverse_named(i2 + l.b22(), "1 + L22");
    MatrixC inv11 = inverse_named(i1 + l.b11(), "1 + L11");
    MatrixC p11 = l.b11() - l.b12() * inv22 * l.b21();
    MatrixC p22 = l.b22() - l.b21() * inv11 * l.b12();
    MatrixC k11 = p11 * inverse_named(i1 + p11, "1 + P11");
    MatrixC k22 = p22 * inverse_named(i2 + p22, "1 + P22");
    MatrixC k12 = (i1 - k11) * l.b12() * inv22;
    MatrixC k21 = (i2 - k22) * l.b21() * inv11;
    MatrixC out(l.order(), l.order());
    out << k11, k12, k21, k22;
    return {out, l.n1, l.n2};
}

inline FiniteKernel block_l_from_k(const FiniteKernel& k) {
    using detail::inverse_named;
    const MatrixC i1 = MatrixC::Identity(k.n1, k.n1), i2 = MatrixC::Identity(k.n2, k.n2);
    MatrixC inv22 = inverse_named(i2 - k.b22(), "1 - K22");
    MatrixC inv11 = inverse_named(i1 - k.b11(), "1 - K11");
    MatrixC q11 = k.b11() + k.b12() * inv22 * k.b21();
    MatrixC q22 = k.b22() + k.b21() * inv11 * k.b12();
    MatrixC l11 = q11 * inverse_named(i1 - q11, "1 - Q11");
    MatrixC l22 = q22 * inverse_named(i2 - q22, "1 - Q22");
    MatrixC l12 = (i1 + l11) * k.b12() * inv22;
    MatrixC l21 = (i2 + l22) * k.b21() * inv11;
    MatrixC out(k.order(), k.order());
    out << l11, l12, l21, l22;
    return {out, k.n1, k.n2};
}

// Off-diagonal pair L = [[0, A], [-B, 0]] <-> K = [[CD, C], [DCD-D, DC]],
// C = (1+AB)^{-1} A, D = B. Returns both kernels plus the residuals of the
// instance identities 1 - CD = (1+AB)^{-1} and C (1-DC)^{-1} = (1-CD)^{-1} C = A.
struct CanonicalPair {
    FiniteKernel l;
    FiniteKernel k;
    double residual_inverse_identity;   // 1 - CD vs (1+AB)^{-1}
    double residual_commutation;        // X(1-YX)^{-1} vs (1-XY)^{-1}X at X=C, Y=D
    double residual_a_recovered;        // C(1-DC)^{-1} vs A
};

inline CanonicalPair canonical_pair(const MatrixC& a, const MatrixC& b) {
    const int n1 = static_cast<int>(a.rows()), n2 = static_cast<int>(a.cols());
    if (b.rows() != n2 || b.cols() != n1)
        throw std::invalid_argument("canonical_pair: B must map block 1 to block 2");
    const MatrixC i1 = MatrixC::Identity(n1, n1), i2 = MatrixC::Identity(n2, n2);
    MatrixC inv_ab = detail::inverse_named(i1 + a * b, "1 + AB");
    MatrixC c = inv_ab * a;
    const MatrixC& d = b;

    MatrixC l(n1 + n2, n1 + n2), k(n1 + n2, n1 + n2);
    l << MatrixC::Zero(n1, n1), a, -b, MatrixC::Zero(n2, n2);
    k << c * d, c, d * c * d - d, d * c;

    CanonicalPair out{{l, n1, n2}, {k, n1, n2}, 0.0, 0.0, 0.0};
    double scale = std::max(1.0, a.norm() + b.norm());
    out.residual_inverse_identity = (i1 - c * d - inv_ab).norm() / scale;
    MatrixC lhs = c * detail::inverse_named(i2 - d * c, "1 - DC");
    MatrixC rhs = detail::inverse_named(i1 - c * d, "1 - CD") * c;
    out.residual_commutation = (lhs - rhs).norm() / scale;
    out.residual_a_recovered = (lhs - a).norm() / scale;
    return out;
}

// Kernel of the process restricted to the index set `keep`:
// L_YY - L_YYbar (1 + L_YbarYbar)^{-1} L_YbarY.
inline FiniteKernel truncate(const FiniteKernel& l, const std::vector<int>& keep) {
    const int n = l.order();
    std::vector<int> other;
    std::vector<bool> in_keep(n, false);
    for (int i : keep) {
        if (i < 0 || i >= n) throw std::invalid_argument("truncate: index out of range");
        in_keep[i] = true;
    }
    for (int i = 0; i < n; ++i)
        if (!in_keep[i]) other.push_back(i);

    int n1_new = 0;
    for (int i : keep)
        if (i < l.n1) ++n1_new;

    if (keep.empty()) return {MatrixC::Zero(0, 0), 0, 0};
    MatrixC lyy = detail::submatrix(l.entries, keep, keep);
    if (other.empty()) return {lyy, n1_new, static_cast<int>(keep.size()) - n1_new};
    MatrixC lyo = detail::submatrix(l.entries, keep, other);
    MatrixC loy = detail::submatrix(l.entries, other, keep);
    MatrixC loo = detail::submatrix(l.entries, other, other);
    MatrixC inv = detail::inverse_named(
        MatrixC::Identity(other.size(), other.size()) + loo, "1 + L_complement");
    return {lyy - lyo * inv * loy, n1_new, static_cast<int>(keep.size()) - n1_new};
}

namespace detail {

// Implementation-independent uniform in [0,1) from a seeded 64-bit engine.
inline double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Exact categorical sampling of configurations; i.i.d. for fixed seed.
inline std::vector<Configuration> sample(const WeightTable& table, std::uint64_t seed,
                                         int count) {
    std::vector<double> cumulative(table.probabilities.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < table.probabilities.size(); ++i) {
        acc += table.probabilities[i];
        cumulative[i] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-9)
        throw numeric_error("sample: weight table does not sum to 1");
    std::mt19937_64 rng(seed);
    std::vector<Configuration> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        double u = detail::next_uniform(rng) * acc;
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        out.push_back({static_cast<std::uint32_t>(it - cumulative.begin())});
    }
    return out;
}

// Seeded random J-Hermitian instance [[G1 G1*, M], [-M*, G2 G2*]].
inline FiniteKernel random_j_hermitian(int n1, int n2, std::uint64_t seed,
                                       double scale = 0.5) {
    std::mt19937_64 rng(seed);
    auto gauss = [&rng]() {
        double u1 = std::max(detail::next_uniform(rng), 1e-300);
        double u2 = detail::next_uniform(rng);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    };
    auto cgauss = [&]() { return Complex(gauss(), gauss()) / std::sqrt(2.0); };
    MatrixC g1(n1, n1), g2(n2, n2), m(n1, n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j) g1(i, j) = scale * cgauss();
    for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n2; ++j) g2(i, j) = scale * cgauss();
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) m(i, j) = scale * cgauss();
    MatrixC out(n1 + n2, n1 + n2);
    out << g1 * g1.adjoint(), m, -m.adjoint(), g2 * g2.adjoint();
    return {out, n1, n2};
}

}  // namespace mwk
