#pragma once

// Quantum dynamical semigroups on Mat_n: Choi matrices, heat semigroups built
// from D^2, GKSL generators, the endomorphism laplacian, and the property
// checks (complete positivity, conservativity, covariance, Markovity).

#include <cstdint>
#include <vector>

#include "ncg/matrix.hpp"
#include "ncg/random.hpp"
#include "ncg/superoperator.hpp"

namespace ncg::qds {

/// Default absolute tolerance on the Choi minimum eigenvalue.
inline constexpr double kCpTol = 1e-9;

/// J(Phi) = sum_ij E_ij (x) Phi(E_ij).
inline Mat choi(const Superoperator& phi) {
    const Index n = phi.dim();
    Mat j = Mat::Zero(n * n, n * n);
    for (Index r = 0; r < n; ++r) {
        for (Index c = 0; c < n; ++c) {
            j.block(r * n, c * n, n, n) = phi.apply(matrix_unit(n, r, c));
        }
    }
    return j;
}

inline PsdResult is_cp(const Superoperator& phi, double tol = kCpTol) {
    if (!phi.is_hermiticity_preserving()) {
        throw NotHermitianError("is_cp: map does not preserve Hermiticity");
    }
    const Mat j = choi(phi);
    return is_psd(0.5 * (j + j.adjoint()), tol);
}

namespace detail {
inline void require_psd(const Mat& dsq, const char* what) {
    require_hermitian(dsq, what);
    const auto res = is_psd(dsq, 1e-10 * std::max(1.0, op_norm(dsq)));
    if (!res.psd) throw NotPsdError(std::string(what) + ": generator is not positive semidefinite");
}
inline void require_time(double t, const char* what) {
    if (!(t >= 0.0)) throw DomainError(std::string(what) + ": time must be nonnegative");
}
} // namespace detail

/// x -> e^{-t D^2/2} x e^{-t D^2/2}: completely positive, HS-symmetric, and
/// with quadratic form Tr(x D^2 x) on self-adjoint x.
inline Superoperator kraus_heat_semigroup(const Mat& dsq, double t) {
    detail::require_time(t, "kraus_heat_semigroup");
    detail::require_psd(dsq, "kraus_heat_semigroup");
    const Mat k = funcalc(dsq, [t](double lam) { return std::exp(-0.5 * t * lam); });
    Superoperator s = Superoperator::sandwich(k, k);
    s.tag(SuperTag::hermiticity_preserving).tag(SuperTag::cp_expected);
    return s;
}

/// Generator of kraus_heat_semigroup: x -> -(D^2 x + x D^2)/2.
inline Superoperator kraus_heat_generator(const Mat& dsq) {
    detail::require_psd(dsq, "kraus_heat_generator");
    const Mat half = -0.5 * dsq;
    return Superoperator::sandwich(half, identity(dsq.rows())) + Superoperator::sandwich(identity(dsq.rows()), half);
}

/// Generator of left_composition_semigroup: x -> -D^2 x.
inline Superoperator left_composition_generator(const Mat& dsq) {
    detail::require_psd(dsq, "left_composition_generator");
    return Superoperator::sandwich(-dsq, identity(dsq.rows()));
}

/// x -> e^{-t D^2} x. HS-symmetric but neither CP nor Hermiticity preserving
/// in general; kept for comparing quadratic forms.
inline Superoperator left_composition_semigroup(const Mat& dsq, double t) {
    detail::require_time(t, "left_composition_semigroup");
    detail::require_psd(dsq, "left_composition_semigroup");
    const Mat k = funcalc(dsq, [t](double lam) { return std::exp(-t * lam); });
    return Superoperator::sandwich(k, identity(dsq.rows()));
}

/// Heisenberg-picture GKSL generator
///   L(x) = i[H, x] + sum_k (L_k* x L_k - 1/2 {L_k* L_k, x}).
inline Superoperator lindblad_generator(const Mat& h, const std::vector<Mat>& jumps) {
    require_hermitian(h, "lindblad_generator");
    const Index n = h.rows();
    const Mat id = identity(n);
    // vec(A x B) = (B^T (x) A) vec(x)
    Mat rep = kI * (kron(id, h) - kron(h.transpose(), id));
    for (const Mat& l : jumps) {
        require_same_shape(h, l, "lindblad_generator");
        const Mat ll = l.adjoint() * l;
        rep += kron(l.transpose(), l.adjoint()) - 0.5 * (kron(id, ll) + kron(ll.transpose(), id));
    }
    return Superoperator(n, std::move(rep), {SuperTag::hermiticity_preserving});
}

/// L(x) = -sum_i [B_i, [B_i, x]] for Hermitian B_i: the laplacian of the
/// commutator connection on End(E). GKSL with jumps sqrt(2) B_i and no Hamiltonian.
inline Superoperator endomorphism_laplacian_generator(const std::vector<Mat>& bs, Index n) {
    std::vector<Mat> jumps;
    jumps.reserve(bs.size());
    for (const Mat& b : bs) {
        require_hermitian(b, "endomorphism_laplacian_generator");
        if (b.rows() != n) throw DimensionError("endomorphism_laplacian_generator: dimension mismatch");
        jumps.push_back(std::sqrt(2.0) * b);
    }
    return lindblad_generator(Mat::Zero(n, n), jumps);
}

inline Superoperator endomorphism_laplacian_generator(const std::vector<Mat>& bs) {
    if (bs.empty()) throw DomainError("endomorphism_laplacian_generator: pass the dimension for an empty list");
    return endomorphism_laplacian_generator(bs, bs.front().rows());
}

/// e^{t L}.
inline Superoperator evolve(const Superoperator& generator, double t) {
    detail::require_time(t, "evolve");
    std::set<SuperTag> tags;
    if (generator.has_tag(SuperTag::hermiticity_preserving)) tags.insert(SuperTag::hermiticity_preserving);
    return Superoperator(generator.dim(), expm(generator.rep(), t), tags);
}

/// ||Phi(1) - 1||.
inline double unitality_residual(const Superoperator& phi) {
    const Mat id = identity(phi.dim());
    return op_norm(phi.apply(id) - id);
}

/// max over g and matrix units x of ||L(U x U*) - U L(x) U*||.
inline double check_covariance(const Superoperator& generator, const std::vector<Mat>& unitaries) {
    const Index n = generator.dim();
    double worst = 0.0;
    for (const Mat& u : unitaries) {
        require_unitary(u, "check_covariance");
        if (u.rows() != n) throw DimensionError("check_covariance: unitary dimension mismatch");
        const Superoperator alpha = Superoperator::sandwich(u, u);
        const Mat diff = generator.compose(alpha).rep() - alpha.compose(generator).rep();
        // columns of diff are the residuals on the matrix units
        for (Index c = 0; c < diff.cols(); ++c) worst = std::max(worst, op_norm(unvec(diff.col(c), n)));
    }
    return worst;
}

/// Largest violation of 0 <= Phi(x) <= 1 over x = 1 and seeded samples with
/// 0 <= x <= 1 (random Hermitians clamped to [0, 1]).
inline double check_markov(const Superoperator& phi, int samples, std::uint64_t seed) {
    if (!phi.is_hermiticity_preserving()) throw NotHermitianError("check_markov: map does not preserve Hermiticity");
    const Index n = phi.dim();
    auto violation = [&](const Mat& x) {
        const Mat y = phi.apply(x);
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (y + y.adjoint()), Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        return std::max({0.0, -ev(0), ev(ev.size() - 1) - 1.0});
    };
    double worst = violation(identity(n));
    for (int s = 0; s < samples; ++s) {
        Rng rng = sample_rng(seed, static_cast<std::uint64_t>(s));
        const Mat h = random_hermitian(n, rng) * 0.5 + 0.5 * identity(n);
        const Mat x = funcalc(h, [](double r) { return std::clamp(r, 0.0, 1.0); });
        worst = std::max(worst, violation(x));
    }
    return worst;
}

/// Unital CP map from seeded random Kraus operators: K_k = A_k S^{-1/2} with
/// S = sum A_k* A_k, so that sum K_k* K_k = 1.
inline Superoperator random_unital_channel(Index n, int kraus_count, Rng& rng) {
    std::vector<Mat> as;
    Mat s = Mat::Zero(n, n);
    for (int k = 0; k < kraus_count; ++k) {
        as.push_back(random_complex(n, n, rng));
        s += as.back().adjoint() * as.back();
    }
    const Mat s_inv_half = funcalc(s, [](double r) { return 1.0 / std::sqrt(r); });
    Superoperator phi = Superoperator::zero(n);
    for (const Mat& a : as) {
        const Mat k = a * s_inv_half;
        // Heisenberg picture: x -> K* x K
        phi = phi + Superoperator::sandwich(k.adjoint(), k.adjoint());
    }
    phi.tag(SuperTag::hermiticity_preserving).tag(SuperTag::unital).tag(SuperTag::cp_expected);
    return phi;
}

/// The transpose map x -> x^T, the canonical positive but not CP map.
inline Superoperator transpose_map(Index n) {
    Superoperator s = Superoperator::from_map(n, [](const Mat& x) -> Mat { return x.transpose(); });
    s.tag(SuperTag::hermiticity_preserving);
    return s;
}

} // namespace ncg::qds
