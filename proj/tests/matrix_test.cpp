#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "ncg/matrix.hpp"
#include "ncg/random.hpp"

using namespace ncg;

namespace {

// Truncated Taylor series with scaling and squaring: independent of the Pade
// route and of the eigendecomposition route.
Mat taylor_expm(const Mat& a) {
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int s = 0;
    while (std::ldexp(norm, -s) > 0.25) ++s;
    const Mat b = a * std::ldexp(1.0, -s);
    Mat term = identity(a.rows());
    Mat sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
    }
    for (int k = 0; k < s; ++k) sum = sum * sum;
    return sum;
}

double rel_err(const Mat& a, const Mat& b) { return op_norm(a - b) / std::max(1e-300, op_norm(b)); }

} // namespace

TEST(Expm, ZeroGivesIdentity) {
    EXPECT_EQ(expm(Mat::Zero(2, 2), 1.0), identity(2));
}

TEST(Expm, Diagonal) {
    Mat a = Mat::Zero(2, 2);
    a(0, 0) = std::log(2.0);
    const Mat e = expm(a, 1.0);
    EXPECT_NEAR(std::abs(e(0, 0) - 2.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(e(1, 1) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(e(0, 1)), 0.0, 1e-15);
}

TEST(Expm, NegativeSquaredPauli) {
    const Mat z = pauli::z();
    const Mat e = expm(-(z * z), 1.0);
    EXPECT_LT(op_norm(e - std::exp(-1.0) * identity(2)), 1e-15);
}

TEST(Expm, RejectsNonSquare) {
    EXPECT_THROW(expm(Mat::Zero(2, 3)), DimensionError);
}

TEST(Expm, RejectsOverflow) {
    // Hermitian route: eigenvalue 1000 overflows.
    EXPECT_THROW(expm(identity(2) * 1000.0), CapacityError);
    // Pade route: non-normal with huge norm.
    Mat a(2, 2);
    a << 1, 1e5, 0, 2;
    EXPECT_THROW(expm(a), CapacityError);
}

TEST(Expm, MatchesIndependentOraclesOnGeneralMatrices) {
    for (int seed = 0; seed < 40; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed));
        const Index n = uniform_int(rng, 1, 8);
        Mat a = random_complex(n, n, rng);
        // sweep ||A|| up to 50
        a *= uniform(rng, 0.01, 50.0) / op_norm(a);
        const Mat ours = expm(a, 1.0);
        const Mat theirs = a.exp();
        EXPECT_LT(rel_err(ours, theirs), 1e-10) << "seed " << seed << " norm " << op_norm(a);
    }
}

TEST(Expm, NormalRoutesMatchTaylor) {
    Rng rng(7);
    for (int k = 0; k < 20; ++k) {
        const Mat h = random_hermitian(5, rng);
        EXPECT_LT(rel_err(expm(h, 0.7), taylor_expm(0.7 * h)), 1e-10);          // Hermitian
        EXPECT_LT(rel_err(expm(kI * h, 2.0), taylor_expm(2.0 * kI * h)), 1e-10); // skew
        const Mat u = random_unitary(5, rng);
        Vec d(5);
        for (Index i = 0; i < 5; ++i) d(i) = cplx(uniform(rng, -2, 2), uniform(rng, -2, 2));
        const Mat normal = u * d.asDiagonal() * u.adjoint();
        EXPECT_LT(rel_err(expm(normal), taylor_expm(normal)), 1e-10);
    }
}

TEST(Expm, SemigroupLaw) {
    Rng rng(11);
    for (int k = 0; k < 10; ++k) {
        const Mat a = random_complex(4, 4, rng);
        const Mat lhs = expm(a, 0.3) * expm(a, 0.45);
        EXPECT_LT(rel_err(lhs, expm(a, 0.75)), 1e-9);
    }
}

TEST(HermitianEig, PauliAndIdentity) {
    const auto ex = hermitian_eig(pauli::x());
    ASSERT_EQ(ex.spectrum.entries.size(), 2u);
    EXPECT_NEAR(ex.spectrum.entries[0].eigenvalue, -1.0, 1e-14);
    EXPECT_NEAR(ex.spectrum.entries[1].eigenvalue, 1.0, 1e-14);
    const auto ei = hermitian_eig(identity(5));
    ASSERT_EQ(ei.spectrum.entries.size(), 1u);
    EXPECT_EQ(ei.spectrum.entries[0].multiplicity, 5);
}

TEST(HermitianEig, RoundTrip) {
    Rng rng(3);
    for (int k = 0; k < 20; ++k) {
        const Mat b = random_complex(6, 6, rng);
        const Mat a = b + b.adjoint();
        const auto e = hermitian_eig(a);
        const Mat rebuilt = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
        EXPECT_LT(op_norm(rebuilt - a), 1e-9);
        EXPECT_LT(unitarity_residual(e.vectors), 1e-10);
        EXPECT_LT(op_norm(a * e.vectors - e.vectors * e.values.cast<cplx>().asDiagonal()), 1e-9 * op_norm(a));
    }
}

TEST(HermitianEig, ErrorsAreDistinct) {
    EXPECT_THROW(hermitian_eig(pauli::lower()), NotHermitianError);
    EXPECT_THROW(hermitian_eig(Mat::Zero(2, 3)), DimensionError);
}

TEST(IsPsd, Examples) {
    auto r = is_psd(identity(2), 1e-12);
    EXPECT_TRUE(r.psd);
    EXPECT_NEAR(r.min_eigenvalue, 1.0, 1e-15);
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 1;
    d(1, 1) = -1;
    r = is_psd(d, 1e-12);
    EXPECT_FALSE(r.psd);
    EXPECT_NEAR(r.min_eigenvalue, -1.0, 1e-15);
    EXPECT_THROW(is_psd(pauli::lower(), 1e-12), NotHermitianError);
}

TEST(IsPsd, SwapHasEigenvalueMinusOne) {
    // Choi matrix of the transpose on Mat_2 is the swap operator.
    Mat swap = Mat::Zero(4, 4);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j) swap(i * 2 + j, j * 2 + i) = 1.0;
    const auto r = is_psd(swap, 1e-12);
    EXPECT_FALSE(r.psd);
    EXPECT_NEAR(r.min_eigenvalue, -1.0, 1e-14);
}

TEST(Kron, GradedReducesToPlainForEvenRight) {
    Rng rng(5);
    const Mat a = random_complex(2, 2, rng);
    Mat b = Mat::Zero(2, 2);
    b(0, 0) = 2.0;
    b(1, 1) = cplx(0, 3);
    const GradedMatrix gb(b, pauli::z());
    EXPECT_EQ(gb.parity(), Parity::even);
    EXPECT_LT(op_norm(kron_graded(a, gb, pauli::z()).data() - kron(a, b)), 1e-15);
}

TEST(Kron, CrossTermsAnticommute) {
    Rng rng(9);
    const Mat bm = random_complex(1, 1, rng);
    Mat dm = Mat::Zero(2, 2);
    dm(0, 1) = bm(0, 0);
    dm(1, 0) = std::conj(bm(0, 0));
    const Mat gm = pauli::z();
    ASSERT_LT(op_norm(gm * dm + dm * gm), 1e-15);
    const Mat df = random_hermitian(3, rng);
    const Mat x = kron(dm, identity(3));
    const Mat y = kron(gm, df);
    EXPECT_LE(op_norm(x * y + y * x), 1e-12);
}

TEST(Kron, GradedProductLawKoszulSign) {
    // a, b, c, d with b and c odd: (a(x)b)(c(x)d) = -(ac)(x)(bd).
    Rng rng(13);
    const Mat g = pauli::z();
    auto odd = [&] {
        Mat m = Mat::Zero(2, 2);
        m(0, 1) = random_complex(1, 1, rng)(0, 0);
        m(1, 0) = random_complex(1, 1, rng)(0, 0);
        return m;
    };
    auto even = [&] {
        Mat m = Mat::Zero(2, 2);
        m(0, 0) = random_complex(1, 1, rng)(0, 0);
        m(1, 1) = random_complex(1, 1, rng)(0, 0);
        return m;
    };
    const Mat a = random_complex(2, 2, rng);
    const Mat b = odd();
    const Mat c = odd();
    for (const Mat& d : {odd(), even()}) {
        const Mat lhs = kron_graded(a, GradedMatrix(b, g), g).data() * kron_graded(c, GradedMatrix(d, g), g).data();
        const Mat rhs = kron_graded(a * c, GradedMatrix(b * d, g), g).data();
        EXPECT_LT(op_norm(lhs + rhs), 1e-12);
    }
}

TEST(Kron, GradedErrors) {
    EXPECT_THROW(kron_graded(identity(2), GradedMatrix(pauli::x()), pauli::z()), ParityError);
    EXPECT_THROW(kron_graded(identity(2), GradedMatrix(pauli::x() + pauli::z(), pauli::z()), pauli::z()), ParityError);
    EXPECT_THROW(GradedMatrix(pauli::x(), 2.0 * pauli::z()), ParityError);
}

TEST(HsInner, Examples) {
    EXPECT_NEAR(std::abs(hs_inner(identity(2), identity(2)) - 2.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(hs_inner(pauli::x(), pauli::y())), 0.0, 1e-15);
    EXPECT_THROW(hs_inner(identity(2), identity(3)), DimensionError);
}

TEST(HsInner, MatchesSingularValues) {
    Rng rng(17);
    for (int k = 0; k < 10; ++k) {
        const Mat a = random_complex(5, 5, rng);
        Eigen::JacobiSVD<Mat> svd(a);
        const double expected = svd.singularValues().squaredNorm();
        EXPECT_NEAR(hs_inner(a, a).real(), expected, 1e-10 * expected);
        EXPECT_NEAR(hs_inner(a, a).imag(), 0.0, 1e-12);
    }
}

TEST(HsInner, ConjugateSymmetricAndPositive) {
    Rng rng(19);
    for (int k = 0; k < 20; ++k) {
        const Mat a = random_complex(3, 3, rng);
        const Mat b = random_complex(3, 3, rng);
        EXPECT_LT(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))), 1e-12);
        EXPECT_GE(hs_inner(a, a).real(), 0.0);
    }
}

TEST(Funcalc, Examples) {
    Rng rng(23);
    const Mat h = random_hermitian(5, rng);
    EXPECT_LT(op_norm(funcalc(h, [](double r) { return r; }) - h), 1e-12);
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 1;
    d(1, 1) = -1;
    EXPECT_LT(op_norm(funcalc(d, [](double r) { return std::abs(r); }) - identity(2)), 1e-15);
    EXPECT_LT(op_norm(funcalc(h, [](double r) { return r * r; }) - h * h), 1e-10 * std::max(1.0, op_norm(h * h)));
}

TEST(Funcalc, UndefinedAtEigenvalue) {
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 1.0;
    EXPECT_THROW(funcalc(d, [](double r) { return 1.0 / r; }), DomainError);
    EXPECT_THROW(funcalc(-identity(2), [](double r) { return std::sqrt(r); }), DomainError);
}

TEST(Funcalc, SquaresArePositive) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        Rng rng(s);
        const Mat h = random_hermitian(uniform_int(rng, 1, 6), rng);
        const Mat sq = funcalc(h, [](double r) { return r * r; });
        EXPECT_TRUE(is_psd(sq, 1e-12).psd);
    }
}

TEST(Spectrum, MergesClusters) {
    Eigen::VectorXd v(5);
    v << 2.0, 1.0, 1.0 + 1e-12, 2.0 - 1e-11, 0.0;
    const Spectrum s = Spectrum::from_eigenvalues(v);
    ASSERT_EQ(s.entries.size(), 3u);
    EXPECT_EQ(s.entries[0].multiplicity, 1);
    EXPECT_EQ(s.entries[1].multiplicity, 2);
    EXPECT_EQ(s.entries[2].multiplicity, 2);
    EXPECT_EQ(s.total_multiplicity(), 5);
}
