#pragma once

// Quadratic forms E(x) = Tr(x* L x) on Mat_n and the Lipschitz contraction
// test E(f(x)) <= ||f||_lip^2 E(x), plainly and after matrix amplification.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "ncg/matrix.hpp"
#include "ncg/random.hpp"

namespace ncg::dirichlet {

/// Largest amplification accepted by complete_dirichlet_check.
inline constexpr int kMaxAmplification = 3;

class QuadraticForm {
public:
    /// E(x) = Tr(x* L x) with L positive semidefinite.
    static QuadraticForm from_generator(Mat l) {
        require_hermitian(l, "QuadraticForm");
        if (!is_psd(l, 1e-10 * std::max(1.0, op_norm(l))).psd) {
            throw NotPsdError("QuadraticForm: generator is not positive semidefinite");
        }
        return QuadraticForm(std::move(l), std::nullopt);
    }

    /// E(x) = ||S x||_HS^2, i.e. L = S* S.
    static QuadraticForm from_factor(Mat s) {
        require_square(s, "QuadraticForm");
        Mat l = s.adjoint() * s;
        return QuadraticForm(std::move(l), std::move(s));
    }

    Index dim() const { return generator_.rows(); }
    const Mat& generator() const { return generator_; }
    const std::optional<Mat>& factor() const { return factor_; }

    /// Same form with generator L (x) 1_k.
    QuadraticForm amplified(Index k) const {
        if (factor_) return from_factor(kron(*factor_, identity(k)));
        return QuadraticForm(kron(generator_, identity(k)), std::nullopt);
    }

private:
    QuadraticForm(Mat l, std::optional<Mat> s) : generator_(std::move(l)), factor_(std::move(s)) {}

    Mat generator_;
    std::optional<Mat> factor_;
};

/// Tr(x* L x). Real for Hermitian L; the vanishing imaginary part is dropped.
inline double form_value(const QuadraticForm& f, const Mat& x) {
    if (x.rows() != f.dim() || x.cols() != f.dim()) throw DimensionError("form_value: operand dimension");
    return (x.adjoint() * f.generator() * x).trace().real();
}

/// Continuous piecewise-linear f with f(0) = 0. `slopes` has one more entry
/// than `breakpoints`; slopes[k] applies between breakpoints[k-1] and breakpoints[k].
class LipschitzFn {
public:
    LipschitzFn(std::vector<double> breakpoints, std::vector<double> slopes, std::string name = {})
        : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)), name_(std::move(name)) {
        if (slopes_.size() != breakpoints_.size() + 1) throw DomainError("LipschitzFn: need breakpoints+1 slopes");
        if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end())) {
            throw DomainError("LipschitzFn: breakpoints must ascend");
        }
        for (double s : slopes_) lip_ = std::max(lip_, std::abs(s));
    }

    static LipschitzFn identity_fn() { return {{}, {1.0}, "identity"}; }
    static LipschitzFn scaled(double c) { return {{}, {c}, "scaled"}; }
    static LipschitzFn absolute() { return {{0.0}, {-1.0, 1.0}, "abs"}; }
    static LipschitzFn clamp(double bound = 1.0) { return {{-bound, bound}, {0.0, 1.0, 0.0}, "clamp"}; }
    static LipschitzFn positive_part() { return {{0.0}, {0.0, 1.0}, "positive_part"}; }

    /// Three segments with random breakpoints and slopes in [-1, 1].
    static LipschitzFn random_three_piece(Rng& rng) {
        double a = uniform(rng, -2.0, 2.0);
        double b = uniform(rng, -2.0, 2.0);
        if (a > b) std::swap(a, b);
        return {{a, b}, {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}, "random3"};
    }

    /// f(r) = integral of the slope from 0 to r.
    double operator()(double r) const {
        auto segment = [&](double t) {
            const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
            return static_cast<std::size_t>(it - breakpoints_.begin());
        };
        if (r == 0.0) return 0.0;
        const double lo = std::min(0.0, r);
        const double hi = std::max(0.0, r);
        double integral = 0.0;
        double cursor = lo;
        for (double bp : breakpoints_) {
            if (bp <= cursor) continue;
            if (bp >= hi) break;
            integral += slopes_[segment(0.5 * (cursor + bp))] * (bp - cursor);
            cursor = bp;
        }
        integral += slopes_[segment(0.5 * (cursor + hi))] * (hi - cursor);
        return r > 0.0 ? integral : -integral;
    }

    double lip_norm() const { return lip_; }
    const std::string& name() const { return name_; }

private:
    std::vector<double> breakpoints_;
    std::vector<double> slopes_;
    std::string name_;
    double lip_ = 0.0;
};

/// The standard test family: |r|, clamp to [-1, 1], r_+, and `random_count`
/// seeded three-piece contractions.
inline std::vector<LipschitzFn> standard_family(std::uint64_t seed, int random_count = 4) {
    std::vector<LipschitzFn> fns{LipschitzFn::absolute(), LipschitzFn::clamp(), LipschitzFn::positive_part()};
    Rng rng(splitmix64(seed ^ 0x6c69705f666e73ULL));
    for (int k = 0; k < random_count; ++k) fns.push_back(LipschitzFn::random_three_piece(rng));
    return fns;
}

/// max over seeded self-adjoint x and f of E(f(x)) - ||f||_lip^2 E(x).
/// Signed: values slightly above zero are rounding, large ones are failures.
inline double dirichlet_check(const QuadraticForm& form, const std::vector<LipschitzFn>& fns, int samples,
                              std::uint64_t seed) {
    if (fns.empty()) throw DomainError("dirichlet_check: empty function list");
    const Index n = form.dim();
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        Rng rng = sample_rng(seed, static_cast<std::uint64_t>(s));
        const Mat x = random_hermitian(n, rng);
        const HermitianEig eig = hermitian_eig(x);
        const double base = form_value(form, x);
        for (const LipschitzFn& f : fns) {
            Vec fv(eig.values.size());
            for (Index i = 0; i < fv.size(); ++i) fv(i) = f(eig.values(i));
            const Mat fx = eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
            const double lip = f.lip_norm();
            worst = std::max(worst, form_value(form, fx) - lip * lip * base);
        }
    }
    return worst;
}

/// dirichlet_check for the amplified form L (x) 1_{n_amp} on Mat_{n * n_amp}.
inline double complete_dirichlet_check(const QuadraticForm& form, int n_amp, const std::vector<LipschitzFn>& fns,
                                       int samples, std::uint64_t seed) {
    if (n_amp < 1 || n_amp > kMaxAmplification) {
        throw CapacityError("complete_dirichlet_check: amplification must lie in [1, " +
                            std::to_string(kMaxAmplification) + "]");
    }
    if (n_amp == 1) return dirichlet_check(form, fns, samples, seed);
    return dirichlet_check(form.amplified(n_amp), fns, samples, seed);
}

} // namespace ncg::dirichlet
