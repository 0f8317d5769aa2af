#pragma once

// SU(2)/U(1) homogeneous bundles: spin-j irreps, Frobenius sectors of
// induced line bundles over the round 2-sphere, the canonical connection
// laplacian via Casimirs, the symmetric-space Dirac spectrum, and the
// matrix-level frame identities (commutator lemma, tensor laplacian,
// Bochner curvature term) together with Sobolev norms for smoothness.
//
// Spins are passed as doubled integers (two_j = 2j) throughout.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "ncg/clifford.hpp"
#include "ncg/matrix.hpp"
#include "ncg/random.hpp"
#include "ncg/superoperator.hpp"

namespace ncg::homogeneous {

/// Scalar curvature of the unit round sphere with Casimir normalised to j(j+1).
inline constexpr double kSphereCurvature = 2.0;
/// Longest derivation word accepted by sobolev_norm.
inline constexpr int kMaxSobolevOrder = 4;

inline double spin(int two_j) { return 0.5 * two_j; }
inline double casimir_value(int two_j) {
    const double j = spin(two_j);
    return j * (j + 1.0);
}

struct Su2Irrep {
    int two_j = 0;
    /// Skew-Hermitian, [X1, X2] = X3 cyclically, -(X1^2 + X2^2 + X3^2) = j(j+1).
    std::array<Mat, 3> generators;

    Index dim() const { return two_j + 1; }
    double j() const { return spin(two_j); }
    double casimir_eigenvalue() const { return casimir_value(two_j); }

    /// -sum X_k^2.
    Mat casimir() const {
        Mat c = Mat::Zero(dim(), dim());
        for (const Mat& x : generators) c -= x * x;
        return c;
    }

    std::vector<Mat> generator_list() const { return {generators.begin(), generators.end()}; }

    /// Hermitian angular momentum matrices J_k = i X_k.
    std::vector<Mat> hermitian_generators() const {
        std::vector<Mat> out;
        for (const Mat& x : generators) out.push_back(kI * x);
        return out;
    }

    /// exp(theta_1 X_1 + theta_2 X_2 + theta_3 X_3).
    Mat group_element(const std::array<double, 3>& theta) const {
        Mat a = Mat::Zero(dim(), dim());
        for (int k = 0; k < 3; ++k) a += theta[static_cast<std::size_t>(k)] * generators[static_cast<std::size_t>(k)];
        return expm(a);
    }
};

/// Ladder-operator construction in the basis m = j, j-1, ..., -j with
/// X_k = -i J_k.
inline Su2Irrep su2_irrep(int two_j) {
    if (two_j < 0) throw DomainError("su2_irrep: spin must be nonnegative");
    const Index d = two_j + 1;
    const double j = spin(two_j);
    Mat jz = Mat::Zero(d, d);
    Mat jp = Mat::Zero(d, d);
    for (Index r = 0; r < d; ++r) {
        const double m = j - static_cast<double>(r);
        jz(r, r) = m;
        if (r > 0) jp(r - 1, r) = std::sqrt(j * (j + 1.0) - m * (m + 1.0)); // J+ |m> = c |m+1>
    }
    const Mat jm = jp.adjoint();
    const Mat jx = 0.5 * (jp + jm);
    const Mat jy = -0.5 * kI * (jp - jm);
    return Su2Irrep{two_j, {-kI * jx, -kI * jy, -kI * jz}};
}

/// max over cyclic pairs of ||[X_a, X_b] - X_c||.
inline double commutation_residual(const Su2Irrep& rep) {
    const auto& x = rep.generators;
    return std::max({op_norm(commutator(x[0], x[1]) - x[2]), op_norm(commutator(x[1], x[2]) - x[0]),
                     op_norm(commutator(x[2], x[0]) - x[1])});
}

// ---------------------------------------------------------------------------
// Induced bundles over SU(2)/U(1)
// ---------------------------------------------------------------------------

struct Sector {
    int two_j = 0;
    int multiplicity = 1;

    friend bool operator==(const Sector&, const Sector&) = default;
};

struct HomogeneousBundle {
    int h_weight = 0; ///< U(1) weight w; the fibre carries m = w/2
    int two_j_max = 0;
    std::vector<Sector> sectors;
    double kappa = kSphereCurvature;
};

/// Sections of the line bundle of weight w decompose into the spin-j irreps
/// with j >= |w|/2 and j = |w|/2 mod 1, each once, truncated at j_max.
inline HomogeneousBundle decompose_induced_bundle(int h_weight, int two_j_max) {
    const int lowest = std::abs(h_weight);
    if (two_j_max < lowest) {
        throw DomainError("decompose_induced_bundle: j_max below the lowest sector j = " + std::to_string(lowest) +
                          "/2");
    }
    HomogeneousBundle b;
    b.h_weight = h_weight;
    b.two_j_max = two_j_max;
    for (int tj = lowest; tj <= two_j_max; tj += 2) b.sectors.push_back({tj, 1});
    return b;
}

/// U(1) Casimir of weight w, normalised to w^2/4.
inline double u1_casimir(int h_weight) { return 0.25 * h_weight * h_weight; }

/// Delta = -C2(K, Gamma(E)) + C2(H, E): eigenvalue j(j+1) - w^2/4 with
/// multiplicity 2j+1 on each sector.
inline Spectrum connection_laplacian_spectrum(const HomogeneousBundle& bundle) {
    std::vector<SpectrumEntry> raw;
    for (const Sector& s : bundle.sectors) {
        raw.push_back({casimir_value(s.two_j) - u1_casimir(bundle.h_weight), s.multiplicity * (s.two_j + 1)});
    }
    return Spectrum::from_weighted(std::move(raw));
}

/// D^2 = Omega_K + kappa/8 on the full spinor bundle S+ (+) S- of the round
/// sphere: sums the half-spinor bundles of weight +1 and -1.
inline Spectrum dirac_square_spectrum_symmetric(int two_j_max) {
    if (two_j_max < 1) throw DomainError("dirac_square_spectrum_symmetric: j_max must be at least 1/2");
    std::vector<SpectrumEntry> raw;
    for (int w : {+1, -1}) {
        const HomogeneousBundle half = decompose_induced_bundle(w, two_j_max);
        for (const Sector& s : half.sectors) {
            raw.push_back({casimir_value(s.two_j) + half.kappa / 8.0, s.multiplicity * (s.two_j + 1)});
        }
    }
    return Spectrum::from_weighted(std::move(raw));
}

/// Sectorwise residual of D^2 - Delta - kappa/4 on the spinor bundle, using
/// the two spectra above (half-spinor weight 1).
inline double lichnerowicz_residual(int two_j_max) {
    const HomogeneousBundle half = decompose_induced_bundle(1, two_j_max);
    double worst = 0.0;
    for (const Sector& s : half.sectors) {
        const double dsq = casimir_value(s.two_j) + half.kappa / 8.0;
        const double lap = casimir_value(s.two_j) - u1_casimir(half.h_weight);
        worst = std::max(worst, std::abs(dsq - lap - half.kappa / 4.0));
    }
    return worst;
}

struct CubicDiracSquare {
    Mat matrix;
    bool psd = false;
    double min_eigenvalue = 0.0;
};

/// Casimir plus a scalar shift, -sum X_i^2 + shift.
inline CubicDiracSquare cubic_dirac_square(const Su2Irrep& rep, double shift) {
    CubicDiracSquare out;
    out.matrix = rep.casimir() + shift * identity(rep.dim());
    const auto psd = is_psd(out.matrix, 1e-12);
    out.psd = psd.psd;
    out.min_eigenvalue = psd.min_eigenvalue;
    return out;
}

// ---------------------------------------------------------------------------
// Frame identities
// ---------------------------------------------------------------------------

namespace detail {
inline void require_uniform(const std::vector<Mat>& ms, const char* what) {
    if (ms.empty()) return;
    const Index d = ms.front().rows();
    for (const Mat& m : ms) {
        require_square(m, what);
        if (m.rows() != d) throw DimensionError(std::string(what) + ": dimension mismatch");
    }
}
} // namespace detail

/// R(i, j) = [nabla_i, nabla_j].
inline Mat curvature(const std::vector<Mat>& nablas, std::size_t i, std::size_t j) {
    return commutator(nablas.at(i), nablas.at(j));
}

/// Delta = -sum_i nabla_i nabla_i.
inline Mat frame_laplacian(const std::vector<Mat>& nablas) {
    if (nablas.empty()) throw DomainError("frame_laplacian: empty frame");
    Mat lap = Mat::Zero(nablas.front().rows(), nablas.front().cols());
    for (const Mat& n : nablas) lap -= n * n;
    return lap;
}

/// || [-Delta, sum_j nabla_j] - sum_ij R(i,j) nabla_i - sum_ij nabla_i R(i,j) ||.
inline double verify_commutator_lemma(const std::vector<Mat>& nablas) {
    detail::require_uniform(nablas, "verify_commutator_lemma");
    if (nablas.empty()) return 0.0;
    const Index d = nablas.front().rows();
    Mat total = Mat::Zero(d, d);
    for (const Mat& n : nablas) total += n;
    Mat rhs = Mat::Zero(d, d);
    for (std::size_t i = 0; i < nablas.size(); ++i) {
        for (std::size_t j = 0; j < nablas.size(); ++j) {
            const Mat r = curvature(nablas, i, j);
            rhs += r * nablas[i] + nablas[i] * r;
        }
    }
    const Mat lhs = commutator(-frame_laplacian(nablas), total);
    return op_norm(lhs - rhs);
}

/// Laplacian of the product connection nabla^S (x) 1 + 1 (x) nabla^E.
inline Mat tensor_laplacian(const std::vector<Mat>& nabla_s, const std::vector<Mat>& nabla_e) {
    if (nabla_s.size() != nabla_e.size()) throw DimensionError("tensor_laplacian: frame sizes differ");
    detail::require_uniform(nabla_s, "tensor_laplacian");
    detail::require_uniform(nabla_e, "tensor_laplacian");
    std::vector<Mat> combined;
    for (std::size_t i = 0; i < nabla_s.size(); ++i) {
        combined.push_back(kron(nabla_s[i], identity(nabla_e[i].rows())) +
                           kron(identity(nabla_s[i].rows()), nabla_e[i]));
    }
    return frame_laplacian(combined);
}

/// Residual of Delta^{S(x)E} against Delta^S (x) 1 - 2 sum_i nabla_i^S (x) nabla_i^E + 1 (x) Delta^E.
inline double tensor_laplacian_check(const std::vector<Mat>& nabla_s, const std::vector<Mat>& nabla_e) {
    const Mat lap = tensor_laplacian(nabla_s, nabla_e);
    const Index ds = nabla_s.front().rows();
    const Index de = nabla_e.front().rows();
    Mat expansion = kron(frame_laplacian(nabla_s), identity(de)) + kron(identity(ds), frame_laplacian(nabla_e));
    for (std::size_t i = 0; i < nabla_s.size(); ++i) expansion -= 2.0 * kron(nabla_s[i], nabla_e[i]);
    return op_norm(lap - expansion);
}

/// 1/2 sum_{j,k} c(e_j) c(e_k) R(j,k) with the Clifford action and the
/// connection on the same space.
inline Mat bochner_curvature_term(const std::vector<Mat>& nablas, const clifford::TwistedAction& action) {
    const auto& c = action.action_matrices;
    if (nablas.size() != c.size()) throw DimensionError("bochner_curvature_term: frame size differs from Clifford rank");
    detail::require_uniform(nablas, "bochner_curvature_term");
    if (nablas.front().rows() != action.dim()) throw DimensionError("bochner_curvature_term: dimension mismatch");
    Mat out = Mat::Zero(action.dim(), action.dim());
    for (std::size_t j = 0; j < c.size(); ++j) {
        for (std::size_t k = 0; k < c.size(); ++k) out += 0.5 * c[j] * c[k] * curvature(nablas, j, k);
    }
    return out;
}

/// Twisted form: the connection acts on W only, giving
/// 1/2 sum_{j,k} R^W(j,k) (x) e_j e_k on W (x) S (the TwistedAction ordering).
inline Mat bochner_curvature_term(const std::vector<Mat>& nablas_w, const clifford::CliffordRep& rep) {
    if (nablas_w.size() != rep.gammas.size()) {
        throw DimensionError("bochner_curvature_term: frame size differs from Clifford rank");
    }
    detail::require_uniform(nablas_w, "bochner_curvature_term");
    const Index dw = nablas_w.front().rows();
    Mat out = Mat::Zero(dw * rep.dim(), dw * rep.dim());
    for (std::size_t j = 0; j < rep.gammas.size(); ++j) {
        for (std::size_t k = 0; k < rep.gammas.size(); ++k) {
            out += 0.5 * kron(curvature(nablas_w, j, k), rep.gammas[j] * rep.gammas[k]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sobolev norms and smoothness
// ---------------------------------------------------------------------------

/// ||a||_n = sum over words w of length <= n of ||d_w(a)||, d_i(a) = [X_i, a].
inline double sobolev_norm(const Mat& a, int order, const std::vector<Mat>& derivations) {
    if (order < 0 || order > kMaxSobolevOrder) {
        throw CapacityError("sobolev_norm: order must lie in [0, " + std::to_string(kMaxSobolevOrder) + "]");
    }
    detail::require_uniform(derivations, "sobolev_norm");
    double total = 0.0;
    std::vector<Mat> layer{a};
    for (int k = 0; k <= order; ++k) {
        std::vector<Mat> next;
        for (const Mat& m : layer) {
            total += op_norm(m);
            if (k < order) {
                for (const Mat& x : derivations) next.push_back(commutator(x, m));
            }
        }
        layer = std::move(next);
    }
    return total;
}

/// x -> sum_i [X_i, [X_i, x]] for the generators of an irrep.
inline Superoperator casimir_action(const Su2Irrep& rep) {
    const auto gens = rep.generator_list();
    return Superoperator::from_map(rep.dim(), [&](const Mat& x) {
        Mat y = Mat::Zero(x.rows(), x.cols());
        for (const Mat& g : gens) y += commutator(g, commutator(g, x));
        return y;
    });
}

/// Empirical max over seeded samples xi of ||L(xi)||_n / ||xi||_{n+p}.
/// Samples are complex Ginibre matrices; sample k uses sample_rng(seed, k),
/// so a run with more samples extends a shorter one.
inline double smoothness_constant(const Superoperator& l, int order, int p, int samples, std::uint64_t seed,
                                  const std::vector<Mat>& derivations) {
    if (samples <= 0) throw DomainError("smoothness_constant: need at least one sample");
    const Index n = l.dim();
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        Rng rng = sample_rng(seed, static_cast<std::uint64_t>(s));
        Mat xi;
        double denom = 0.0;
        do {
            xi = random_complex(n, n, rng);
            denom = sobolev_norm(xi, order + p, derivations);
        } while (denom <= 0.0);
        worst = std::max(worst, sobolev_norm(l.apply(xi), order, derivations) / denom);
    }
    return worst;
}

} // namespace ncg::homogeneous
