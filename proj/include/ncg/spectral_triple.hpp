#pragma once

// Finite spectral triples: explicit matrix algebras acting on C^n with a
// self-adjoint Dirac operator, optional grading, real structure and base
// subalgebra. Validation, graded products and odd perturbations.

#include <optional>
#include <string>
#include <vector>

#include "ncg/lapack.hpp"
#include "ncg/matrix.hpp"
#include "ncg/report.hpp"

namespace ncg {

/// Real structure J = J0 o (entrywise complex conjugation).
struct RealStructure {
    Mat j0;
};

struct FiniteSpectralTriple {
    Index hilbert_dim = 0;
    std::vector<Mat> algebra_basis;
    Mat dirac;
    std::optional<Mat> grading;
    std::optional<RealStructure> real_structure;
    /// Indices into algebra_basis spanning the base subalgebra.
    std::optional<std::vector<std::size_t>> base_indices;

    /// Throws DimensionError unless every operator acts on C^hilbert_dim.
    void check_shapes() const {
        auto check = [&](const Mat& m, const char* what) {
            if (m.rows() != hilbert_dim || m.cols() != hilbert_dim) {
                throw DimensionError(std::string("FiniteSpectralTriple: ") + what + " has wrong dimension");
            }
        };
        if (hilbert_dim <= 0) throw DimensionError("FiniteSpectralTriple: hilbert_dim must be positive");
        check(dirac, "dirac");
        for (const Mat& a : algebra_basis) check(a, "algebra element");
        if (grading) check(*grading, "grading");
        if (real_structure) check(real_structure->j0, "J0");
        if (base_indices) {
            for (std::size_t i : *base_indices) {
                if (i >= algebra_basis.size()) throw DimensionError("FiniteSpectralTriple: base index out of range");
            }
        }
    }
};

/// Orthogonal projector onto the span of a list of matrices (HS geometry).
class SpanProjector {
public:
    explicit SpanProjector(const std::vector<Mat>& elements) {
        if (elements.empty()) return;
        const Index rows = elements.front().rows();
        rows_ = rows;
        Mat cols(elements.front().size(), static_cast<Index>(elements.size()));
        for (std::size_t k = 0; k < elements.size(); ++k) cols.col(static_cast<Index>(k)) = vec(elements[k]);
        const lapack::Svd svd = lapack::svd(cols, lapack::Vectors::thin_u);
        const auto& sv = svd.values;
        Index rank = 0;
        while (rank < sv.size() && sv(rank) > 1e-10 * sv(0)) ++rank;
        basis_ = svd.u.leftCols(rank);
    }

    /// Operator norm of x minus its projection onto the span.
    double residual(const Mat& x) const {
        if (basis_.cols() == 0) return op_norm(x);
        const Vec v = vec(x);
        const Vec r = v - basis_ * (basis_.adjoint() * v);
        return op_norm(unvec(r, rows_));
    }

    Index rank() const { return basis_.cols(); }

private:
    Mat basis_;
    Index rows_ = 0;
};

namespace triple_checks {
inline constexpr double kDefault = 1e-10;
inline constexpr double kGrading = 1e-12;
} // namespace triple_checks

/// Every invariant of a finite spectral triple as a named residual. Never
/// throws on a failing check; shape errors still throw DimensionError.
inline ValidationReport validate(const FiniteSpectralTriple& t) {
    t.check_shapes();
    using triple_checks::kDefault;
    using triple_checks::kGrading;
    ValidationReport rep;
    const Index n = t.hilbert_dim;
    const Mat id = identity(n);

    rep.checks.push_back(CheckResult::make("dirac_self_adjoint", hermiticity_residual(t.dirac), kDefault));

    const SpanProjector span(t.algebra_basis);
    rep.checks.push_back(CheckResult::make("algebra_contains_identity", span.residual(id), kDefault));
    double adj = 0.0;
    for (const Mat& a : t.algebra_basis) adj = std::max(adj, span.residual(a.adjoint()));
    rep.checks.push_back(CheckResult::make("algebra_adjoint_closed", adj, kDefault));

    if (t.grading) {
        const Mat& g = *t.grading;
        rep.checks.push_back(CheckResult::make("grading_involution", op_norm(g * g - id), kGrading));
        rep.checks.push_back(CheckResult::make("grading_self_adjoint", hermiticity_residual(g), kGrading));
        rep.checks.push_back(
            CheckResult::make("grading_anticommutes_dirac", op_norm(anticommutator(g, t.dirac)), kDefault));
        double comm = 0.0;
        for (const Mat& a : t.algebra_basis) comm = std::max(comm, op_norm(commutator(g, a)));
        rep.checks.push_back(CheckResult::make("grading_commutes_algebra", comm, kDefault));
    }

    if (t.real_structure) {
        const Mat& j0 = t.real_structure->j0;
        rep.checks.push_back(CheckResult::make("real_structure_antiunitary", unitarity_residual(j0), kDefault));
        // J^2 = J0 conj(J0) must be +1 or -1.
        const Mat sq = j0 * j0.conjugate();
        const double sign_res = std::min(op_norm(sq - id), op_norm(sq + id));
        rep.checks.push_back(CheckResult::make("real_structure_square_sign", sign_res, kDefault));
    }

    if (t.base_indices) {
        double first_order = 0.0;
        for (std::size_t bi : *t.base_indices) {
            const Mat db = commutator(t.dirac, t.algebra_basis[bi]);
            for (const Mat& a : t.algebra_basis) first_order = std::max(first_order, op_norm(commutator(db, a)));
        }
        rep.checks.push_back(CheckResult::make("first_order_condition", first_order, kDefault));
    }

    // [D, a]^2 in the algebra: holds for almost-commutative models but not for
    // generic finite ones, so it is reported without gating the result.
    double closure = 0.0;
    for (const Mat& a : t.algebra_basis) {
        const Mat c = commutator(t.dirac, a);
        closure = std::max(closure, span.residual(c * c));
    }
    rep.checks.push_back(CheckResult::make("commutator_square_in_algebra", closure, kDefault, false));
    return rep;
}

/// Graded product of an even triple with a second triple:
///   D = D_M (x) 1 + gamma_M (x) D_F,  gamma = gamma_M (x) gamma_F.
inline FiniteSpectralTriple product(const FiniteSpectralTriple& tm, const FiniteSpectralTriple& tf) {
    tm.check_shapes();
    tf.check_shapes();
    if (!tm.grading) throw ParityError("product: first factor must carry a grading");
    const Mat& gm = *tm.grading;
    const Index nf = tf.hilbert_dim;

    FiniteSpectralTriple out;
    out.hilbert_dim = tm.hilbert_dim * nf;
    out.dirac = kron(tm.dirac, identity(nf)) + kron(gm, tf.dirac);
    if (tf.grading) out.grading = kron(gm, *tf.grading);
    for (const Mat& a : tm.algebra_basis) {
        for (const Mat& b : tf.algebra_basis) out.algebra_basis.push_back(kron(a, b));
    }
    if (tm.real_structure && tf.real_structure) {
        out.real_structure = RealStructure{kron(tm.real_structure->j0, tf.real_structure->j0)};
    }
    if (tm.base_indices && tf.base_indices) {
        std::vector<std::size_t> idx;
        for (std::size_t i : *tm.base_indices) {
            for (std::size_t j : *tf.base_indices) idx.push_back(i * tf.algebra_basis.size() + j);
        }
        out.base_indices = std::move(idx);
    }
    return out;
}

/// ||D^2 - D_M^2 (x) 1 - 1 (x) D_F^2|| for the product of tm and tf.
inline double product_square_residual(const FiniteSpectralTriple& tm, const FiniteSpectralTriple& tf) {
    const FiniteSpectralTriple p = product(tm, tf);
    const Mat expected = kron(tm.dirac * tm.dirac, identity(tf.hilbert_dim)) +
                         kron(identity(tm.hilbert_dim), tf.dirac * tf.dirac);
    return op_norm(p.dirac * p.dirac - expected);
}

struct PerturbedTriple {
    FiniteSpectralTriple triple;
    ValidationReport report;
};

/// Replace D by D + A. A must be Hermitian and, when a grading is present, odd.
inline PerturbedTriple perturb(const FiniteSpectralTriple& t, const Mat& a) {
    t.check_shapes();
    require_same_shape(t.dirac, a, "perturb");
    require_hermitian(a, "perturb");
    if (t.grading && op_norm(anticommutator(*t.grading, a)) > kStructureTol * std::max(1.0, op_norm(a))) {
        throw ParityError("perturb: perturbation must be odd with respect to the grading");
    }
    PerturbedTriple out{t, {}};
    out.triple.dirac = t.dirac + a;
    out.report = validate(out.triple);
    return out;
}

} // namespace ncg
