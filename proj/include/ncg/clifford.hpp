#pragma once

// Complex Clifford algebra representations in even rank, their chirality
// operators, twisted actions 1_W (x) e_i, and numerical commutants.

#include <string>
#include <vector>

#include "ncg/lapack.hpp"
#include "ncg/matrix.hpp"

namespace ncg::clifford {

/// Largest supported generator count (representation dimension 2^6 = 64).
inline constexpr int kMaxRank = 12;
/// Singular values below this fraction of the largest count as zero in commutant().
inline constexpr double kNullSpaceRelTol = 1e-9;

enum class Signature {
    plus,  ///< e_i^2 = +1, generators Hermitian
    minus, ///< e_i^2 = -1, generators skew-Hermitian
};

struct CliffordRep {
    int n = 0;
    Signature signature = Signature::minus;
    std::vector<Mat> gammas;
    Mat chirality;

    Index dim() const { return chirality.rows(); }

    /// max_{i,j} || e_i e_j + e_j e_i -/+ 2 delta_ij ||.
    double relation_residual() const {
        const double sign = signature == Signature::plus ? 1.0 : -1.0;
        double worst = 0.0;
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            for (std::size_t j = 0; j < gammas.size(); ++j) {
                Mat r = anticommutator(gammas[i], gammas[j]);
                if (i == j) r -= 2.0 * sign * identity(dim());
                worst = std::max(worst, op_norm(r));
            }
        }
        return worst;
    }
};

/// Iterated Pauli construction. For k = 1..n/2,
///   Gamma_{2k-1} = z^{(k-1)} (x) x (x) 1,   Gamma_{2k} = z^{(k-1)} (x) y (x) 1,
/// with e_i = Gamma_i in plus signature and e_i = i Gamma_i in minus signature.
/// Chirality is (-i)^{n/2} e_1 ... e_n.
inline CliffordRep build_clifford(int n, Signature signature = Signature::minus) {
    if (n <= 0 || n % 2 != 0) {
        throw DomainError("build_clifford: generator count must be even and positive, got " + std::to_string(n));
    }
    if (n > kMaxRank) throw CapacityError("build_clifford: generator count above cap " + std::to_string(kMaxRank));
    const int m = n / 2;
    const cplx factor = signature == Signature::plus ? cplx(1.0) : kI;

    CliffordRep rep;
    rep.n = n;
    rep.signature = signature;
    for (int k = 0; k < m; ++k) {
        for (const Mat& p : {pauli::x(), pauli::y()}) {
            Mat g = Mat::Identity(1, 1);
            for (int l = 0; l < k; ++l) g = kron(g, pauli::z());
            g = kron(g, p);
            for (int l = k + 1; l < m; ++l) g = kron(g, identity(2));
            rep.gammas.push_back(factor * g);
        }
    }
    const Index dim = rep.gammas.front().rows();
    Mat chi = identity(dim);
    for (const Mat& g : rep.gammas) chi = chi * g;
    cplx phase = 1.0;
    for (int k = 0; k < m; ++k) phase *= -kI;
    rep.chirality = phase * chi;
    return rep;
}

struct TwistedAction {
    CliffordRep rep;
    Index dim_w = 1;
    std::vector<Mat> action_matrices; ///< 1_W (x) e_i

    Index dim() const { return dim_w * rep.dim(); }
    Mat chirality() const { return kron(identity(dim_w), rep.chirality); }
};

inline TwistedAction twist(const CliffordRep& rep, Index dim_w) {
    if (dim_w <= 0) throw DomainError("twist: twisting dimension must be positive");
    TwistedAction out{rep, dim_w, {}};
    const Mat id_w = identity(dim_w);
    for (const Mat& g : rep.gammas) out.action_matrices.push_back(kron(id_w, g));
    return out;
}

/// Hilbert-Schmidt orthonormal basis of {X : X M_i = M_i X for all i},
/// computed as the null space of the stacked maps X -> M_i X - X M_i.
inline std::vector<Mat> commutant(const std::vector<Mat>& matrices) {
    if (matrices.empty()) throw DomainError("commutant: empty matrix list");
    const Index d = matrices.front().rows();
    for (const Mat& m : matrices) {
        require_square(m, "commutant");
        if (m.rows() != d) throw DimensionError("commutant: matrices differ in dimension");
    }
    const Index d2 = d * d;
    const Mat id = identity(d);
    // The kernel of the stacked system is the intersection of the kernels of
    // its blocks; refine an orthonormal kernel basis one block at a time.
    Mat kernel = identity(d2);
    for (const Mat& m : matrices) {
        if (kernel.cols() == 0) break;
        // vec(M X) = (1 (x) M) vec X,  vec(X M) = (M^T (x) 1) vec X
        const Mat block = (kron(id, m) - kron(m.transpose(), id)) * kernel;
        const lapack::Svd svd = lapack::svd(block, lapack::Vectors::full_v);
        const Eigen::VectorXd& sv = svd.values;
        const double largest = sv.size() > 0 ? sv(0) : 0.0;
        Index rank = 0;
        if (largest > 0.0) {
            while (rank < sv.size() && sv(rank) > kNullSpaceRelTol * largest) ++rank;
        }
        kernel = kernel * svd.v.rightCols(kernel.cols() - rank);
    }
    std::vector<Mat> basis;
    for (Index c = 0; c < kernel.cols(); ++c) basis.push_back(unvec(kernel.col(c), d));
    return basis;
}

} // namespace ncg::clifford
