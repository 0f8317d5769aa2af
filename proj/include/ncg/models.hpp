#pragma once

// Ready-made matrix models shared by the CLI scenarios, tests and the
// acceptance runner.

#include <string>
#include <utility>
#include <vector>

#include "ncg/homogeneous.hpp"
#include "ncg/matrix.hpp"
#include "ncg/random.hpp"
#include "ncg/spectral_triple.hpp"

namespace ncg::models {

/// (C^2, span{1, z}, D = x, gamma = z).
inline FiniteSpectralTriple two_point_triple() {
    FiniteSpectralTriple t;
    t.hilbert_dim = 2;
    t.algebra_basis = {identity(2), pauli::z()};
    t.dirac = pauli::x();
    t.grading = pauli::z();
    return t;
}

/// Diagonal matrix units E_ii: a commutative algebra containing 1.
inline std::vector<Mat> diagonal_algebra(Index n) {
    std::vector<Mat> basis;
    for (Index i = 0; i < n; ++i) basis.push_back(matrix_unit(n, i, i));
    return basis;
}

/// Even triple on C^{p+q}: gamma = diag(1_p, -1_q), D = [[0, B], [B*, 0]]
/// for a Ginibre block B, diagonal algebra. Dimension is even in [2, max_dim].
inline FiniteSpectralTriple random_even_triple(Rng& rng, int max_dim) {
    const int half_max = std::max(1, max_dim / 2);
    const Index p = uniform_int(rng, 1, half_max);
    const Index q = uniform_int(rng, 1, half_max);
    const Index n = p + q;
    FiniteSpectralTriple t;
    t.hilbert_dim = n;
    Mat g = identity(n);
    g.bottomRightCorner(q, q) *= -1.0;
    const Mat b = random_complex(p, q, rng) / std::sqrt(static_cast<double>(n));
    Mat d = Mat::Zero(n, n);
    d.topRightCorner(p, q) = b;
    d.bottomLeftCorner(q, p) = b.adjoint();
    t.dirac = d;
    t.grading = g;
    t.algebra_basis = diagonal_algebra(n);
    return t;
}

/// Finite triple on C^n, n in [1, max_dim]: Hermitian D and diagonal algebra.
/// With probability 1/2 (and n >= 2) it is made even like random_even_triple.
inline FiniteSpectralTriple random_finite_triple(Rng& rng, int max_dim) {
    if (max_dim >= 2 && uniform_int(rng, 0, 1) == 1) return random_even_triple(rng, max_dim);
    const Index n = uniform_int(rng, 1, max_dim);
    FiniteSpectralTriple t;
    t.hilbert_dim = n;
    t.dirac = random_hermitian(n, rng) / std::sqrt(static_cast<double>(n));
    t.algebra_basis = diagonal_algebra(n);
    return t;
}

/// H = z, L = sigma_minus: the damped qubit.
inline std::pair<Mat, std::vector<Mat>> decay_model() { return {pauli::z(), {pauli::lower()}}; }

struct FrameModel {
    std::string name;
    std::vector<Mat> nablas;
};

/// Every frame used for the exact operator identities: su(2) irreps up to
/// spin 2, a commuting diagonal frame, a single operator, and a seeded
/// generic (non-Lie) frame.
inline std::vector<FrameModel> shipped_frames() {
    std::vector<FrameModel> out;
    for (int two_j = 1; two_j <= 4; ++two_j) {
        out.push_back({"su2_two_j_" + std::to_string(two_j), homogeneous::su2_irrep(two_j).generator_list()});
    }
    Mat d1 = Mat::Zero(3, 3);
    Mat d2 = Mat::Zero(3, 3);
    d1.diagonal() << cplx(0, 1), cplx(0, -2), cplx(0, 0.5);
    d2.diagonal() << cplx(0, -1), cplx(0, 3), cplx(0, 2);
    out.push_back({"diagonal", {d1, d2}});
    out.push_back({"single", {homogeneous::su2_irrep(2).generators[0]}});
    Rng rng(20261017);
    std::vector<Mat> generic;
    for (int k = 0; k < 3; ++k) {
        const Mat h = random_hermitian(4, rng);
        generic.push_back(kI * h); // skew-Hermitian, like a metric connection in a frame
    }
    out.push_back({"generic_skew_4x4", generic});
    return out;
}

} // namespace ncg::models
