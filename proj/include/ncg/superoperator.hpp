#pragma once

#include <functional>
#include <set>
#include <string>

#include "ncg/matrix.hpp"

namespace ncg {

enum class SuperTag { hermiticity_preserving, unital, cp_expected };

/// Linear map on Mat_n stored as an n^2 x n^2 matrix acting on column-stacked
/// vectors: x -> A x B* is represented by conj(B) (x) A.
class Superoperator {
public:
    Superoperator() = default;

    Superoperator(Index n, Mat rep, std::set<SuperTag> tags = {}) : n_(n), rep_(std::move(rep)), tags_(std::move(tags)) {
        if (rep_.rows() != n * n || rep_.cols() != n * n) {
            throw DimensionError("Superoperator: representation must be n^2 x n^2");
        }
    }

    static Superoperator identity_map(Index n) {
        return {n, ncg::identity(n * n),
                {SuperTag::hermiticity_preserving, SuperTag::unital, SuperTag::cp_expected}};
    }

    static Superoperator zero(Index n) { return {n, Mat::Zero(n * n, n * n), {SuperTag::hermiticity_preserving}}; }

    /// x -> a x b*.
    static Superoperator sandwich(const Mat& a, const Mat& b) {
        require_square(a, "Superoperator::sandwich");
        require_same_shape(a, b, "Superoperator::sandwich");
        return {a.rows(), kron(b.conjugate(), a)};
    }

    /// Tabulate an arbitrary linear map on the matrix units.
    static Superoperator from_map(Index n, const std::function<Mat(const Mat&)>& f) {
        Mat rep(n * n, n * n);
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < n; ++i) rep.col(j * n + i) = vec(f(matrix_unit(n, i, j)));
        }
        return {n, std::move(rep)};
    }

    Index dim() const { return n_; }
    const Mat& rep() const { return rep_; }
    const std::set<SuperTag>& tags() const { return tags_; }
    bool has_tag(SuperTag t) const { return tags_.contains(t); }
    Superoperator& tag(SuperTag t) {
        tags_.insert(t);
        return *this;
    }

    Mat apply(const Mat& x) const {
        if (x.rows() != n_ || x.cols() != n_) throw DimensionError("Superoperator::apply: operand dimension");
        return unvec(rep_ * vec(x), n_);
    }
    Mat operator()(const Mat& x) const { return apply(x); }

    /// (this o other)(x) = this(other(x)).
    Superoperator compose(const Superoperator& other) const {
        check_compatible(other);
        return {n_, rep_ * other.rep_};
    }

    Superoperator operator+(const Superoperator& other) const {
        check_compatible(other);
        return {n_, rep_ + other.rep_};
    }
    Superoperator operator-(const Superoperator& other) const {
        check_compatible(other);
        return {n_, rep_ - other.rep_};
    }
    friend Superoperator operator*(cplx c, const Superoperator& s) { return {s.n_, c * s.rep_}; }

    /// Phi^k by repeated squaring.
    Superoperator power(long k) const {
        if (k < 0) throw DomainError("Superoperator::power: negative exponent");
        Mat result = ncg::identity(n_ * n_);
        Mat base = rep_;
        while (k > 0) {
            if (k & 1) result = result * base;
            k >>= 1;
            if (k > 0) base = base * base;
        }
        return {n_, std::move(result)};
    }

    /// Operator norm of the representation (the Hilbert-Schmidt-to-HS norm).
    double norm() const { return op_norm(rep_); }

    /// max over matrix units of ||Phi(E*) - Phi(E)*||.
    double hermiticity_residual() const {
        double worst = 0.0;
        for (Index j = 0; j < n_; ++j) {
            for (Index i = 0; i < n_; ++i) {
                const Mat e = matrix_unit(n_, i, j);
                worst = std::max(worst, op_norm(apply(e.adjoint()) - apply(e).adjoint()));
            }
        }
        return worst;
    }

    bool is_hermiticity_preserving(double tol = kStructureTol) const {
        return hermiticity_residual() <= tol * std::max(1.0, norm());
    }

private:
    void check_compatible(const Superoperator& other) const {
        if (other.n_ != n_) throw DimensionError("Superoperator: dimension mismatch");
    }

    Index n_ = 0;
    Mat rep_;
    std::set<SuperTag> tags_;
};

/// Phi (x) Psi acting on Mat_{n m} = Mat_n (x) Mat_m.
inline Superoperator tensor(const Superoperator& phi, const Superoperator& psi) {
    const Index n = phi.dim();
    const Index m = psi.dim();
    const Index nm = n * m;
    Mat rep = Mat::Zero(nm * nm, nm * nm);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const Mat left = phi.apply(matrix_unit(n, i, j));
            for (Index l = 0; l < m; ++l) {
                for (Index k = 0; k < m; ++k) {
                    const Mat image = kron(left, psi.apply(matrix_unit(m, k, l)));
                    // input unit E_{(i,k),(j,l)} in Mat_{nm}
                    const Index row = i * m + k;
                    const Index col = j * m + l;
                    rep.col(col * nm + row) = vec(image);
                }
            }
        }
    }
    return {nm, std::move(rep)};
}

} // namespace ncg
