#pragma once

// Dense complex linear algebra shared by every other module: the graded
// matrix carrier, spectra, the matrix exponential, Hermitian
// diagonalisation, functional calculus and (graded) Kronecker products.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncg/error.hpp"

namespace ncg {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};

/// Tolerance used when a matrix must be Hermitian / unitary / an involution.
inline constexpr double kStructureTol = 1e-10;
/// Grading operators are held to a tighter standard.
inline constexpr double kGradingTol = 1e-12;
/// Relative tolerance when merging eigenvalues into a Spectrum.
inline constexpr double kSpectrumMergeTol = 1e-8;
/// Largest 1-norm of scale*A accepted by the Pade route of expm.
inline constexpr double kExpmNormCap = 1e4;
/// Largest real part of a scaled eigenvalue accepted by the spectral route of expm.
inline constexpr double kExpmExponentCap = 700.0;

// ---------------------------------------------------------------------------
// Norms and small helpers
// ---------------------------------------------------------------------------

/// Operator (spectral) norm: the largest singular value.
inline double op_norm(const Mat& a) {
    if (a.size() == 0) return 0.0;
    if (a.rows() <= 16 && a.cols() <= 16) {
        Eigen::JacobiSVD<Mat> svd(a);
        return svd.singularValues()(0);
    }
    // The top eigenvalue of A*A is computed to full relative accuracy.
    const Mat gram = a.cols() <= a.rows() ? Mat(a.adjoint() * a) : Mat(a * a.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
}

inline Mat identity(Index n) { return Mat::Identity(n, n); }

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

inline Mat anticommutator(const Mat& a, const Mat& b) { return a * b + b * a; }

inline void require_square(const Mat& a, const char* what) {
    if (a.rows() != a.cols()) {
        throw DimensionError(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + ", expected square");
    }
}

inline void require_same_shape(const Mat& a, const Mat& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": shape mismatch");
    }
}

/// Absolute Hermiticity residual ||A - A*||.
inline double hermiticity_residual(const Mat& a) { return op_norm(a - a.adjoint()); }

inline double unitarity_residual(const Mat& u) {
    return op_norm(u.adjoint() * u - identity(u.cols()));
}

inline bool is_hermitian(const Mat& a, double tol = kStructureTol) {
    return a.rows() == a.cols() && hermiticity_residual(a) <= tol * std::max(1.0, op_norm(a));
}

inline void require_hermitian(const Mat& a, const char* what, double tol = kStructureTol) {
    require_square(a, what);
    if (!is_hermitian(a, tol)) {
        throw NotHermitianError(std::string(what) + ": matrix is not Hermitian (residual " +
                                std::to_string(hermiticity_residual(a)) + ")");
    }
}

inline void require_unitary(const Mat& u, const char* what, double tol = kStructureTol) {
    require_square(u, what);
    if (unitarity_residual(u) > tol) {
        throw NotUnitaryError(std::string(what) + ": matrix is not unitary");
    }
}

// ---------------------------------------------------------------------------
// GradedMatrix
// ---------------------------------------------------------------------------

enum class Parity { even, odd, mixed };

inline const char* to_string(Parity p) {
    switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::mixed: return "mixed";
    }
    return "?";
}

/// Parity of `a` relative to the involution `gamma`.
inline Parity parity_of(const Mat& a, const Mat& gamma, double tol = kStructureTol) {
    require_same_shape(a, gamma, "parity_of");
    const double scale = std::max(1.0, op_norm(a));
    const Mat conj = gamma * a * gamma;
    if (op_norm(conj - a) <= tol * scale) return Parity::even;
    if (op_norm(conj + a) <= tol * scale) return Parity::odd;
    return Parity::mixed;
}

/// Square complex matrix optionally carrying a Z2-grading (a self-adjoint
/// involution on the same space). The grading is validated on construction.
class GradedMatrix {
public:
    GradedMatrix() = default;

    GradedMatrix(Mat data) : data_(std::move(data)) {} // NOLINT(google-explicit-constructor)

    GradedMatrix(Mat data, Mat grading) : data_(std::move(data)) {
        require_square(data_, "GradedMatrix");
        require_same_shape(data_, grading, "GradedMatrix grading");
        const Index n = grading.rows();
        if (op_norm(grading * grading - identity(n)) > kGradingTol ||
            op_norm(grading - grading.adjoint()) > kGradingTol) {
            throw ParityError("GradedMatrix: grading is not a self-adjoint involution");
        }
        grading_ = std::move(grading);
    }

    const Mat& data() const { return data_; }
    const std::optional<Mat>& grading() const { return grading_; }
    bool has_grading() const { return grading_.has_value(); }
    Index rows() const { return data_.rows(); }
    Index cols() const { return data_.cols(); }

    Parity parity(double tol = kStructureTol) const {
        if (!grading_) throw ParityError("GradedMatrix::parity: no grading present");
        return parity_of(data_, *grading_, tol);
    }

    operator const Mat&() const { return data_; } // NOLINT(google-explicit-constructor)

private:
    Mat data_;
    std::optional<Mat> grading_;
};

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

struct SpectrumEntry {
    double eigenvalue = 0.0;
    int multiplicity = 0;

    friend bool operator==(const SpectrumEntry&, const SpectrumEntry&) = default;
};

/// Eigenvalue table, ascending, with clusters merged.
struct Spectrum {
    std::vector<SpectrumEntry> entries;

    /// Merge a list of (eigenvalue, multiplicity) pairs. Values within
    /// kSpectrumMergeTol * max(1, |value|) of a cluster's first member merge.
    static Spectrum from_weighted(std::vector<SpectrumEntry> values,
                                  double rel_tol = kSpectrumMergeTol) {
        std::erase_if(values, [](const SpectrumEntry& e) { return e.multiplicity <= 0; });
        std::sort(values.begin(), values.end(),
                  [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.eigenvalue < b.eigenvalue; });
        Spectrum out;
        double anchor = 0.0;
        double weighted_sum = 0.0;
        for (const auto& v : values) {
            if (!out.entries.empty() &&
                std::abs(v.eigenvalue - anchor) <= rel_tol * std::max(1.0, std::abs(anchor))) {
                auto& last = out.entries.back();
                weighted_sum += v.eigenvalue * v.multiplicity;
                last.multiplicity += v.multiplicity;
                last.eigenvalue = weighted_sum / last.multiplicity;
                continue;
            }
            anchor = v.eigenvalue;
            weighted_sum = v.eigenvalue * v.multiplicity;
            out.entries.push_back(v);
        }
        return out;
    }

    static Spectrum from_eigenvalues(const Eigen::VectorXd& values, double rel_tol = kSpectrumMergeTol) {
        std::vector<SpectrumEntry> raw;
        raw.reserve(static_cast<std::size_t>(values.size()));
        for (Index i = 0; i < values.size(); ++i) raw.push_back({values(i), 1});
        return from_weighted(std::move(raw), rel_tol);
    }

    int total_multiplicity() const {
        int total = 0;
        for (const auto& e : entries) total += e.multiplicity;
        return total;
    }

    double min() const { return entries.empty() ? 0.0 : entries.front().eigenvalue; }
    double max() const { return entries.empty() ? 0.0 : entries.back().eigenvalue; }
};

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition, positivity, functional calculus
// ---------------------------------------------------------------------------

struct HermitianEig {
    Spectrum spectrum;
    Eigen::VectorXd values; ///< ascending, one per eigenvector column
    Mat vectors;            ///< unitary, columns are eigenvectors
};

/// A = U diag(values) U*. Rejects non-Hermitian input with NotHermitianError
/// and non-square input with DimensionError.
inline HermitianEig hermitian_eig(const Mat& a) {
    require_hermitian(a, "hermitian_eig");
    const Mat sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
    if (solver.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver did not converge");
    HermitianEig out;
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    out.spectrum = Spectrum::from_eigenvalues(out.values);
    return out;
}

struct PsdResult {
    bool psd = false;
    double min_eigenvalue = 0.0;
};

inline PsdResult is_psd(const Mat& a, double tol) {
    require_hermitian(a, "is_psd");
    const Mat sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> solver(sym, Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues()(0);
    return {lo >= -tol, lo};
}

/// U f(Lambda) U* for Hermitian A and real-valued f. Throws DomainError when
/// f is not finite at some eigenvalue.
template <typename F>
    requires std::invocable<F, double>
Mat funcalc(const Mat& a, F&& f) {
    const HermitianEig eig = hermitian_eig(a);
    Vec fv(eig.values.size());
    for (Index i = 0; i < eig.values.size(); ++i) {
        const double lam = eig.values(i);
        const auto y = f(lam);
        if (!std::isfinite(std::real(cplx(y))) || !std::isfinite(std::imag(cplx(y)))) {
            throw DomainError("funcalc: function undefined at eigenvalue " + std::to_string(lam));
        }
        fv(i) = cplx(y);
    }
    return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

// ---------------------------------------------------------------------------
// Matrix exponential
// ---------------------------------------------------------------------------

namespace detail {

inline double one_norm(const Mat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Scaling and squaring with diagonal Pade approximants of degree 3..13.
inline Mat expm_pade(const Mat& a) {
    static constexpr std::array<double, 4> theta{1.495585217958292e-2, 2.539398330063230e-1,
                                                 9.504178996162932e-1, 2.097847961257068e0};
    static constexpr std::array<double, 14> b13{
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    const Index n = a.rows();
    const Mat id = identity(n);
    const double norm = one_norm(a);

    auto finish = [](const Mat& u, const Mat& v) -> Mat {
        return (v - u).partialPivLu().solve(v + u);
    };

    const Mat a2 = a * a;
    if (norm <= theta[0]) {
        const Mat u = a * (a2 + 60.0 * id);
        const Mat v = 12.0 * a2 + 120.0 * id;
        return finish(u, v);
    }
    const Mat a4 = a2 * a2;
    if (norm <= theta[1]) {
        const Mat u = a * (a4 + 420.0 * a2 + 15120.0 * id);
        const Mat v = 30.0 * a4 + 3360.0 * a2 + 30240.0 * id;
        return finish(u, v);
    }
    const Mat a6 = a4 * a2;
    if (norm <= theta[2]) {
        const Mat u = a * (a6 + 1512.0 * a4 + 277200.0 * a2 + 8648640.0 * id);
        const Mat v = 56.0 * a6 + 25200.0 * a4 + 1995840.0 * a2 + 17297280.0 * id;
        return finish(u, v);
    }
    if (norm <= theta[3]) {
        const Mat a8 = a6 * a2;
        const Mat u = a * (a8 + 3960.0 * a6 + 2162160.0 * a4 + 302702400.0 * a2 + 8821612800.0 * id);
        const Mat v = 90.0 * a8 + 110880.0 * a6 + 30270240.0 * a4 + 2075673600.0 * a2 + 17643225600.0 * id;
        return finish(u, v);
    }

    constexpr double theta13 = 5.371920351148152;
    int squarings = 0;
    if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    const double s = std::ldexp(1.0, -squarings);
    const Mat as = a * s;
    const Mat b2 = a2 * (s * s);
    const Mat b4 = b2 * b2;
    const Mat b6 = b4 * b2;
    const auto& c = b13;
    const Mat u = as * (b6 * (c[13] * b6 + c[11] * b4 + c[9] * b2) + c[7] * b6 + c[5] * b4 + c[3] * b2 + c[1] * id);
    const Mat v = b6 * (c[12] * b6 + c[10] * b4 + c[8] * b2) + c[6] * b6 + c[4] * b4 + c[2] * b2 + c[0] * id;
    Mat r = finish(u, v);
    for (int k = 0; k < squarings; ++k) r = r * r;
    return r;
}

inline Mat expm_from_eigen(const Mat& vectors, const Vec& exponents) {
    for (Index i = 0; i < exponents.size(); ++i) {
        if (exponents(i).real() > kExpmExponentCap) {
            throw CapacityError("expm: exponent real part exceeds cap; result would overflow");
        }
    }
    const Vec ev = exponents.array().exp();
    return vectors * ev.asDiagonal() * vectors.adjoint();
}

} // namespace detail

/// e^{scale * A}.
///
/// Hermitian and skew-Hermitian arguments go through a unitary
/// eigendecomposition, other normal matrices through a complex Schur form
/// (diagonal for normal input), everything else through Pade scaling and
/// squaring. Throws CapacityError when ||scale*A||_1 > kExpmNormCap on the
/// Pade route, when a scaled eigenvalue has real part > kExpmExponentCap, or
/// when the result is not finite.
inline Mat expm(const Mat& a, double scale = 1.0) {
    require_square(a, "expm");
    const Index n = a.rows();
    if (n == 0) return Mat(0, 0);
    const Mat sa = a * scale;
    const double norm = op_norm(sa);
    if (norm == 0.0) return identity(n);

    const double tol = 1e-13 * norm;
    if (op_norm(sa - sa.adjoint()) <= tol) {
        Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (sa + sa.adjoint()));
        return detail::expm_from_eigen(solver.eigenvectors(), solver.eigenvalues().cast<cplx>());
    }
    if (op_norm(sa + sa.adjoint()) <= tol) {
        // sa = -i h with h Hermitian
        const Mat h = kI * 0.5 * (sa - sa.adjoint());
        Eigen::SelfAdjointEigenSolver<Mat> solver(h);
        const Vec ex = -kI * solver.eigenvalues().cast<cplx>();
        return detail::expm_from_eigen(solver.eigenvectors(), ex);
    }
    if (op_norm(sa * sa.adjoint() - sa.adjoint() * sa) <= 1e-13 * norm * norm) {
        Eigen::ComplexSchur<Mat> schur(sa);
        const Mat& t = schur.matrixT();
        const Mat strict = t.triangularView<Eigen::StrictlyUpper>();
        if (op_norm(strict) <= 1e-12 * norm) {
            return detail::expm_from_eigen(schur.matrixU(), t.diagonal());
        }
    }
    if (detail::one_norm(sa) > kExpmNormCap) {
        throw CapacityError("expm: ||scale*A||_1 exceeds cap " + std::to_string(kExpmNormCap));
    }
    Mat r = detail::expm_pade(sa);
    if (!r.allFinite()) throw CapacityError("expm: result overflowed");
    return r;
}

// ---------------------------------------------------------------------------
// Kronecker products
// ---------------------------------------------------------------------------

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Graded tensor product a (x) b realised as (a * gamma_a^{|b|}) (x) b, where
/// |b| is the parity of b relative to its own grading. The result carries the
/// grading gamma_a (x) gamma_b.
inline GradedMatrix kron_graded(const Mat& a, const GradedMatrix& b, const Mat& gamma_a) {
    if (!b.has_grading()) throw ParityError("kron_graded: right factor carries no grading");
    require_same_shape(a, gamma_a, "kron_graded");
    const Parity pb = b.parity();
    if (pb == Parity::mixed) throw ParityError("kron_graded: right factor has mixed parity");
    const Mat left = (pb == Parity::odd) ? Mat(a * gamma_a) : a;
    return GradedMatrix(kron(left, b.data()), kron(gamma_a, *b.grading()));
}

// ---------------------------------------------------------------------------
// Hilbert-Schmidt geometry
// ---------------------------------------------------------------------------

/// Tr(A* B).
inline cplx hs_inner(const Mat& a, const Mat& b) {
    require_same_shape(a, b, "hs_inner");
    return (a.adjoint() * b).trace();
}

/// Column-stacking vectorisation.
inline Vec vec(const Mat& a) { return Eigen::Map<const Vec>(a.data(), a.size()); }

inline Mat unvec(const Vec& v, Index rows) {
    return Eigen::Map<const Mat>(v.data(), rows, v.size() / rows);
}

/// E_ij, the matrix unit.
inline Mat matrix_unit(Index n, Index i, Index j) {
    Mat e = Mat::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

// Pauli matrices, used throughout tests and model builders.
namespace pauli {
inline Mat x() { Mat m(2, 2); m << 0, 1, 1, 0; return m; }
inline Mat y() { Mat m(2, 2); m << 0, -kI, kI, 0; return m; }
inline Mat z() { Mat m(2, 2); m << 1, 0, 0, -1; return m; }
/// sigma_minus = (x - i y) / 2.
inline Mat lower() { Mat m(2, 2); m << 0, 0, 1, 0; return m; }
} // namespace pauli

} // namespace ncg
