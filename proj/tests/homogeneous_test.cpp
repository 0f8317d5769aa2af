#include <gtest/gtest.h>

#include <algorithm>

#include "ncg/homogeneous.hpp"
#include "ncg/models.hpp"
#include "ncg/random.hpp"

using namespace ncg;
using namespace ncg::homogeneous;

namespace {

std::vector<Mat> random_skew_frame(Rng& rng, Index dim, int count) {
    std::vector<Mat> out;
    for (int k = 0; k < count; ++k) out.push_back(kI * random_hermitian(dim, rng));
    return out;
}

std::vector<Mat> zeros(Index dim, int count) { return std::vector<Mat>(static_cast<std::size_t>(count), Mat::Zero(dim, dim)); }

} // namespace

TEST(Su2Irrep, RelationsAndCasimir) {
    for (int two_j = 0; two_j <= 8; ++two_j) {
        const Su2Irrep rep = su2_irrep(two_j);
        EXPECT_EQ(rep.dim(), two_j + 1);
        EXPECT_LE(commutation_residual(rep), 1e-12);
        const double jj = 0.5 * two_j * (0.5 * two_j + 1.0);
        EXPECT_LE(op_norm(rep.casimir() - jj * identity(rep.dim())), 1e-12);
        for (const Mat& x : rep.generators) {
            EXPECT_LE(op_norm(x + x.adjoint()), 1e-14);
            // centrality of the Casimir
            EXPECT_LE(op_norm(commutator(rep.casimir(), x)), 1e-10);
        }
        EXPECT_LE(unitarity_residual(rep.group_element({0.3, -1.2, 2.0})), 1e-12);
    }
    EXPECT_THROW(su2_irrep(-1), DomainError);
}

TEST(Su2Irrep, SpinHalfIsPauli) {
    const Su2Irrep rep = su2_irrep(1);
    EXPECT_LE(op_norm(rep.generators[0] - (-0.5 * kI) * pauli::x()), 1e-15);
    EXPECT_LE(op_norm(rep.generators[1] - (-0.5 * kI) * pauli::y()), 1e-15);
    EXPECT_LE(op_norm(rep.generators[2] - (-0.5 * kI) * pauli::z()), 1e-15);
}

TEST(InducedBundle, Sectors) {
    const HomogeneousBundle b = decompose_induced_bundle(1, 5);
    ASSERT_EQ(b.sectors.size(), 3u);
    EXPECT_EQ(b.sectors[0].two_j, 1);
    EXPECT_EQ(b.sectors[1].two_j, 3);
    EXPECT_EQ(b.sectors[2].two_j, 5);
    EXPECT_EQ(decompose_induced_bundle(-2, 2).sectors.size(), 1u);
    EXPECT_THROW(decompose_induced_bundle(3, 2), DomainError);
}

TEST(ConnectionLaplacian, TrivialBundleIsSphericalHarmonics) {
    const Spectrum s = connection_laplacian_spectrum(decompose_induced_bundle(0, 20));
    ASSERT_EQ(s.entries.size(), 11u);
    for (int l = 0; l <= 10; ++l) {
        EXPECT_EQ(s.entries[static_cast<std::size_t>(l)].eigenvalue, static_cast<double>(l * (l + 1)));
        EXPECT_EQ(s.entries[static_cast<std::size_t>(l)].multiplicity, 2 * l + 1);
    }
}

TEST(ConnectionLaplacian, WeightOneLowestSector) {
    const Spectrum s = connection_laplacian_spectrum(decompose_induced_bundle(1, 1));
    ASSERT_EQ(s.entries.size(), 1u);
    EXPECT_DOUBLE_EQ(s.entries[0].eigenvalue, 0.5);
    EXPECT_EQ(s.entries[0].multiplicity, 2);
    for (int w = -4; w <= 4; ++w) EXPECT_GE(connection_laplacian_spectrum(decompose_induced_bundle(w, 12)).min(), 0.0);
}

TEST(DiracSquare, SphereSpectrum) {
    const Spectrum s = dirac_square_spectrum_symmetric(21);
    ASSERT_EQ(s.entries.size(), 11u);
    for (int k = 0; k <= 10; ++k) {
        const auto& e = s.entries[static_cast<std::size_t>(k)];
        EXPECT_NEAR(e.eigenvalue, (k + 1.0) * (k + 1.0), 1e-10);
        EXPECT_EQ(e.multiplicity, 4 * (k + 1));
    }
    const Spectrum low = dirac_square_spectrum_symmetric(1);
    ASSERT_EQ(low.entries.size(), 1u);
    EXPECT_DOUBLE_EQ(low.entries[0].eigenvalue, 1.0);
    EXPECT_EQ(low.entries[0].multiplicity, 4);
    EXPECT_THROW(dirac_square_spectrum_symmetric(0), DomainError);
}

TEST(DiracSquare, SectorwiseLichnerowicz) {
    for (int k = 0; k <= 10; ++k) {
        const double j = k + 0.5;
        EXPECT_NEAR((k + 1.0) * (k + 1.0) - (j * (j + 1.0) - 0.25), kSphereCurvature / 4.0, 1e-12);
    }
    EXPECT_LE(lichnerowicz_residual(21), 1e-9);
}

TEST(CubicDiracSquare, Examples) {
    const auto a = cubic_dirac_square(su2_irrep(1), 0.0);
    EXPECT_LE(op_norm(a.matrix - 0.75 * identity(2)), 1e-14);
    EXPECT_TRUE(a.psd);
    const auto b = cubic_dirac_square(su2_irrep(1), 0.25);
    EXPECT_LE(op_norm(b.matrix - identity(2)), 1e-14);
    const auto c = cubic_dirac_square(su2_irrep(0), -1.0);
    EXPECT_LE(op_norm(c.matrix + identity(1)), 1e-14);
    EXPECT_FALSE(c.psd);
    EXPECT_NEAR(c.min_eigenvalue, -1.0, 1e-14);
}

TEST(CommutatorLemma, ShippedFrames) {
    for (const auto& f : models::shipped_frames()) EXPECT_LE(verify_commutator_lemma(f.nablas), 1e-10) << f.name;
}

TEST(CommutatorLemma, RandomFrames) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const Index dim = uniform_int(rng, 1, 6);
        const int count = uniform_int(rng, 1, 4);
        std::vector<Mat> nablas;
        for (int k = 0; k < count; ++k) nablas.push_back(random_complex(dim, dim, rng));
        EXPECT_LE(verify_commutator_lemma(nablas), 1e-10 * std::max(1.0, std::pow(op_norm(nablas[0]), 3) * count * count));
    }
    EXPECT_THROW(verify_commutator_lemma({identity(2), identity(3)}), DimensionError);
}

TEST(CommutatorLemma, TrivialCases) {
    Mat d = Mat::Zero(2, 2);
    d.diagonal() << cplx(0, 1), cplx(0, 3);
    EXPECT_EQ(verify_commutator_lemma({d, 2.0 * d}), 0.0);
    EXPECT_EQ(verify_commutator_lemma({d}), 0.0);
}

TEST(TensorLaplacian, IrrepPairs) {
    EXPECT_LE(tensor_laplacian_check(su2_irrep(1).generator_list(), su2_irrep(2).generator_list()), 1e-10);
    for (const auto& f : models::shipped_frames()) {
        Rng rng(11);
        const auto e = random_skew_frame(rng, 2, static_cast<int>(f.nablas.size()));
        EXPECT_LE(tensor_laplacian_check(f.nablas, e), 1e-10) << f.name;
    }
    EXPECT_THROW(tensor_laplacian_check(su2_irrep(1).generator_list(), {identity(2)}), DimensionError);
}

TEST(TensorLaplacian, ZeroSecondFactor) {
    const auto s = su2_irrep(3).generator_list();
    const Mat lap = tensor_laplacian(s, zeros(2, 3));
    EXPECT_LE(op_norm(lap - kron(frame_laplacian(s), identity(2))), 1e-12);
}

TEST(TensorLaplacian, ClebschGordanOracle) {
    // V_j (x) V_j = sum_{J=0}^{2j} V_J: the product laplacian is the Casimir
    // of the tensor representation with eigenvalue J(J+1) on 2J+1 states.
    for (int two_j : {1, 2, 3}) {
        const auto g = su2_irrep(two_j).generator_list();
        const Spectrum s = hermitian_eig(tensor_laplacian(g, g)).spectrum;
        std::vector<SpectrumEntry> expected;
        for (int two_big = 0; two_big <= 2 * two_j; two_big += 2) {
            const double big = 0.5 * two_big;
            expected.push_back({big * (big + 1.0), two_big + 1});
        }
        ASSERT_EQ(s.entries.size(), expected.size()) << two_j;
        for (std::size_t k = 0; k < expected.size(); ++k) {
            EXPECT_NEAR(s.entries[k].eigenvalue, expected[k].eigenvalue, 1e-9);
            EXPECT_EQ(s.entries[k].multiplicity, expected[k].multiplicity);
        }
    }
}

TEST(Bochner, FlatModelVanishes) {
    Mat d = Mat::Zero(2, 2);
    d.diagonal() << cplx(0, 1), cplx(0, -1);
    const auto rep = clifford::build_clifford(2);
    EXPECT_EQ(op_norm(bochner_curvature_term({d, 3.0 * d}, rep)), 0.0);
    const auto action = clifford::twist(rep, 1);
    EXPECT_EQ(op_norm(bochner_curvature_term({kron(d, identity(1)), identity(2)}, action)), 0.0);
}

TEST(Bochner, TwistedFormIsHermitianAndMatchesSameSpaceForm) {
    for (int n : {2, 4}) {
        const auto rep = clifford::build_clifford(n);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            Rng rng(seed);
            const auto w = random_skew_frame(rng, 3, n);
            const Mat r = bochner_curvature_term(w, rep);
            EXPECT_LE(hermiticity_residual(r), 1e-10);
            // lift the W-connection to W (x) S and use the same-space form
            std::vector<Mat> lifted;
            for (const Mat& m : w) lifted.push_back(kron(m, identity(rep.dim())));
            EXPECT_LE(op_norm(bochner_curvature_term(lifted, clifford::twist(rep, 3)) - r), 1e-10);
        }
    }
    EXPECT_THROW(bochner_curvature_term(zeros(2, 3), clifford::build_clifford(2)), DimensionError);
}

TEST(Bochner, InvariantUnderSimultaneousRelabeling) {
    const auto rep = clifford::build_clifford(4);
    Rng rng(5);
    auto w = random_skew_frame(rng, 2, 4);
    const Mat r = bochner_curvature_term(w, rep);
    auto swapped = rep;
    std::swap(swapped.gammas[0], swapped.gammas[2]);
    std::swap(w[0], w[2]);
    EXPECT_LE(op_norm(bochner_curvature_term(w, swapped) - r), 1e-12);
}

TEST(Bochner, SphereSpinorModel) {
    // D^2 - Delta - R on each half-spinor sector, with R = kappa/4 I
    const HomogeneousBundle half = decompose_induced_bundle(1, 21);
    for (const Sector& s : half.sectors) {
        const double dsq = casimir_value(s.two_j) + kSphereCurvature / 8.0;
        const double lap = casimir_value(s.two_j) - u1_casimir(1);
        EXPECT_LE(std::abs(dsq - lap - kSphereCurvature / 4.0), 1e-9);
    }
}

TEST(Sobolev, Examples) {
    const auto gens = su2_irrep(1).generator_list();
    for (int n = 0; n <= kMaxSobolevOrder; ++n) {
        EXPECT_NEAR(sobolev_norm(identity(2), n, gens), 1.0, 1e-14);
        EXPECT_NEAR(sobolev_norm(3.0 * identity(2), n, gens), 3.0, 1e-14);
    }
    // [X_k, s1] with X_k = -i s_k / 2 gives 0, -s3, s2, so ||s1||_1 = 1 + 0 + 1 + 1;
    // the second layer contributes 0+0+0 + (1+1+0) + (1+0+1).
    EXPECT_NEAR(sobolev_norm(pauli::x(), 0, gens), 1.0, 1e-14);
    EXPECT_NEAR(sobolev_norm(pauli::x(), 1, gens), 3.0, 1e-14);
    EXPECT_NEAR(sobolev_norm(pauli::x(), 2, gens), 7.0, 1e-14);
    EXPECT_THROW(sobolev_norm(pauli::x(), 5, gens), CapacityError);
    EXPECT_THROW(sobolev_norm(pauli::x(), -1, gens), CapacityError);
}

TEST(Smoothness, IdentityAndScaling) {
    const auto rep = su2_irrep(2);
    const auto gens = rep.generator_list();
    const Superoperator id = Superoperator::identity_map(3);
    const double base = smoothness_constant(id, 1, 2, 50, 3, gens);
    EXPECT_LE(base, 1.0);
    EXPECT_GT(base, 0.0);
    EXPECT_NEAR(smoothness_constant(cplx(-2.5) * id, 1, 2, 50, 3, gens), 2.5 * base, 1e-12);
    EXPECT_THROW(smoothness_constant(id, 1, 2, 0, 3, gens), DomainError);
}

TEST(Smoothness, CasimirFiniteAndPrefixNested) {
    const auto rep = su2_irrep(2);
    const auto gens = rep.generator_list();
    const Superoperator cas = casimir_action(rep);
    const double small = smoothness_constant(cas, 1, 2, 100, 17, gens);
    const double large = smoothness_constant(cas, 1, 2, 200, 17, gens);
    EXPECT_TRUE(std::isfinite(small));
    EXPECT_GE(large, small);
    // every word in ||L(x)||_1 expands into distinct words of length 2 or 3
    // of ||x||_3, so the constant cannot exceed 1
    EXPECT_LE(large, 1.0 + 1e-12);
}
