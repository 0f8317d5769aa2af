#pragma once

// Seeded sampling helpers. Every stochastic check derives per-sample seeds
// from a master seed with splitmix64 so results do not depend on scheduling.

#include <cstdint>
#include <random>

#include "ncg/matrix.hpp"

namespace ncg {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream for sample `index` of a run seeded with `master`.
inline Rng sample_rng(std::uint64_t master, std::uint64_t index) {
    return Rng(splitmix64(master ^ splitmix64(index + 1)));
}

/// Complex Ginibre matrix: iid entries with standard normal real and imaginary parts.
inline Mat random_complex(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = cplx(re, im);
        }
    }
    return m;
}

inline Mat random_hermitian(Index n, Rng& rng) {
    const Mat b = random_complex(n, n, rng);
    return 0.5 * (b + b.adjoint());
}

/// B B* for a Ginibre B; rank-deficient when rank < n.
inline Mat random_psd(Index n, Rng& rng, Index rank = -1) {
    const Mat b = random_complex(n, rank < 0 ? n : rank, rng);
    return b * b.adjoint();
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
inline Mat random_unitary(Index n, Rng& rng) {
    const Mat z = random_complex(n, n, rng);
    Eigen::HouseholderQR<Mat> qr(z);
    Mat q = qr.householderQ() * identity(n);
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i) {
        const cplx d = r(i, i);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(i) *= d / mag;
    }
    return q;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

} // namespace ncg
