#include <gtest/gtest.h>

#include "ncg/clifford.hpp"
#include "ncg/random.hpp"

using namespace ncg;
using namespace ncg::clifford;

TEST(BuildClifford, RankTwoMinus) {
    const CliffordRep rep = build_clifford(2, Signature::minus);
    ASSERT_EQ(rep.gammas.size(), 2u);
    EXPECT_LT(op_norm(rep.gammas[0] - kI * pauli::x()), 1e-15);
    EXPECT_LT(op_norm(rep.gammas[1] - kI * pauli::y()), 1e-15);
    for (const Mat& e : rep.gammas) EXPECT_LT(op_norm(e * e + identity(2)), 1e-15);
    EXPECT_LT(op_norm(anticommutator(rep.gammas[0], rep.gammas[1])), 1e-15);
    // (-i) e1 e2 = -z
    EXPECT_LT(op_norm(rep.chirality + pauli::z()), 1e-15);
    EXPECT_LT(op_norm(rep.chirality * rep.chirality - identity(2)), 1e-15);
}

TEST(BuildClifford, RepresentationInvariants) {
    for (int n = 2; n <= kMaxRank; n += 2) {
        for (Signature sig : {Signature::minus, Signature::plus}) {
            const CliffordRep rep = build_clifford(n, sig);
            EXPECT_EQ(rep.dim(), Index{1} << (n / 2));
            EXPECT_LE(rep.relation_residual(), 1e-12);
            const Mat& g = rep.chirality;
            EXPECT_LE(op_norm(g * g - identity(rep.dim())), 1e-12);
            EXPECT_LE(hermiticity_residual(g), 1e-12);
            for (const Mat& e : rep.gammas) {
                EXPECT_LE(op_norm(anticommutator(g, e)), 1e-12);
                EXPECT_LE(op_norm(g * e * g + e), 1e-12);
                EXPECT_LE(unitarity_residual(e), 1e-12);
                if (sig == Signature::minus) {
                    EXPECT_LE(op_norm(e + e.adjoint()), 1e-12);
                } else {
                    EXPECT_LE(op_norm(e - e.adjoint()), 1e-12);
                }
            }
        }
    }
}

TEST(BuildClifford, Errors) {
    EXPECT_THROW(build_clifford(3), DomainError);
    EXPECT_THROW(build_clifford(0), DomainError);
    EXPECT_THROW(build_clifford(14), CapacityError);
}

TEST(BuildClifford, Deterministic) {
    const CliffordRep a = build_clifford(6);
    const CliffordRep b = build_clifford(6);
    for (std::size_t i = 0; i < a.gammas.size(); ++i) EXPECT_TRUE(a.gammas[i] == b.gammas[i]);
    EXPECT_TRUE(a.chirality == b.chirality);
}

TEST(Twist, TrivialAndRelations) {
    const CliffordRep rep = build_clifford(2);
    const TwistedAction one = twist(rep, 1);
    for (std::size_t i = 0; i < rep.gammas.size(); ++i) EXPECT_TRUE(one.action_matrices[i] == rep.gammas[i]);
    const TwistedAction two = twist(rep, 2);
    EXPECT_EQ(two.dim(), 4);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            Mat r = anticommutator(two.action_matrices[i], two.action_matrices[j]);
            if (i == j) r += 2.0 * identity(4);
            EXPECT_LE(op_norm(r), 1e-12);
        }
    }
    EXPECT_THROW(twist(rep, 0), DomainError);
}

TEST(Twist, EndomorphismsOfTwistingFactorCommute) {
    Rng rng(1);
    const TwistedAction act = twist(build_clifford(4), 3);
    const Mat w = random_complex(3, 3, rng);
    const Mat lifted = kron(w, identity(act.rep.dim()));
    for (const Mat& c : act.action_matrices) EXPECT_LE(op_norm(commutator(lifted, c)), 1e-12);
}

TEST(Commutant, Examples) {
    EXPECT_EQ(commutant({identity(3)}).size(), 9u);
    const auto diag = commutant({pauli::z()});
    ASSERT_EQ(diag.size(), 2u);
    for (const Mat& x : diag) {
        EXPECT_LT(std::abs(x(0, 1)), 1e-12);
        EXPECT_LT(std::abs(x(1, 0)), 1e-12);
    }
    EXPECT_THROW(commutant({}), DomainError);
    EXPECT_THROW(commutant({identity(2), identity(3)}), DimensionError);
}

TEST(Commutant, BasisIsOrthonormalAndCommutes) {
    const TwistedAction act = twist(build_clifford(2), 3);
    const auto basis = commutant(act.action_matrices);
    ASSERT_EQ(basis.size(), 9u);
    for (std::size_t a = 0; a < basis.size(); ++a) {
        for (const Mat& m : act.action_matrices) EXPECT_LE(op_norm(commutator(basis[a], m)), 1e-10);
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const cplx ip = hs_inner(basis[a], basis[b]);
            EXPECT_NEAR(std::abs(ip - (a == b ? 1.0 : 0.0)), 0.0, 1e-10);
        }
    }
}

TEST(Commutant, DimensionIsTwistSquared) {
    // n = 8 is restricted to dim_W <= 2 to keep the stacked system tractable.
    for (int n : {2, 4, 6, 8}) {
        const int max_w = n == 8 ? 2 : 4;
        for (int w = 1; w <= max_w; ++w) {
            const auto basis = commutant(twist(build_clifford(n), w).action_matrices);
            EXPECT_EQ(basis.size(), static_cast<std::size_t>(w * w)) << "n=" << n << " dim_W=" << w;
        }
    }
}

TEST(Commutant, ChiralityExtendsCommutant) {
    // Adding nothing odd: the commutant of the even part alone is larger; the
    // chirality operator lies in it but not in the commutant of the full action.
    const TwistedAction act = twist(build_clifford(2), 1);
    const auto full = commutant(act.action_matrices);
    EXPECT_EQ(full.size(), 1u);
    const auto even = commutant({act.action_matrices[0] * act.action_matrices[1]});
    EXPECT_EQ(even.size(), 2u);
}
