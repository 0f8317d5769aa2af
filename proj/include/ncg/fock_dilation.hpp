#pragma once

// Repeated-interaction model of an Evans-Hudson dilation. The system C^n
// meets a chain of slots C^{1+d} (vacuum |0> plus d noise directions), one
// per time step dt, through a unitary generated by the jump operators. The
// vacuum compression of one step approximates e^{dt L}; iterating the
// slot unitaries gives the discrete flow j_k of *-homomorphisms.

#include <cmath>
#include <cstdint>
#include <vector>

#include "ncg/matrix.hpp"
#include "ncg/qds.hpp"
#include "ncg/superoperator.hpp"

namespace ncg::fock {

/// Largest total dimension n * (1+d)^N accepted by full_flow.
inline constexpr Index kFullFlowDimCap = 4096;

/// <E(u), E(v)> = exp(<u, v>), inner product antilinear in the first slot.
inline cplx exp_vector_inner(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw DimensionError("exp_vector_inner: length mismatch");
    return std::exp(u.dot(v));
}

struct ToyFockModel {
    Index sys_dim = 1;
    Index noise_dim = 0;
    int slots = 1;
    double dt = 1.0;

    Index slot_dim() const { return 1 + noise_dim; }

    Index total_dim() const {
        Index d = sys_dim;
        for (int k = 0; k < slots; ++k) d *= slot_dim();
        return d;
    }

    static ToyFockModel for_time(Index sys_dim, Index noise_dim, int slots, double t) {
        if (slots < 1) throw DomainError("ToyFockModel: need at least one slot");
        if (!(t > 0.0)) throw DomainError("ToyFockModel: total time must be positive");
        return {sys_dim, noise_dim, slots, t / slots};
    }
};

namespace detail {
inline void check_generator(const Mat& h, const std::vector<Mat>& jumps) {
    require_hermitian(h, "fock");
    for (const Mat& l : jumps) require_same_shape(h, l, "fock jump operator");
}
} // namespace detail

/// V = exp(-i G) on C^n (x) C^{1+d} with
///   G = dt H (x) 1 + sqrt(dt) sum_k (i L_k (x) |k><0| - i L_k* (x) |0><k|).
inline Mat slot_unitary(const Mat& h, const std::vector<Mat>& jumps, double dt) {
    detail::check_generator(h, jumps);
    if (!(dt > 0.0)) throw DomainError("slot_unitary: dt must be positive");
    const Index d = static_cast<Index>(jumps.size());
    const Index s = 1 + d;
    Mat g = dt * kron(h, identity(s));
    const double root = std::sqrt(dt);
    for (Index k = 0; k < d; ++k) {
        const Mat& l = jumps[static_cast<std::size_t>(k)];
        const Mat up = matrix_unit(s, k + 1, 0);
        g += root * (kI * kron(l, up) - kI * kron(l.adjoint(), up.adjoint()));
    }
    return expm(-kI * g);
}

/// Block <k| V |0> of a slot unitary, an operator on the system.
inline Mat slot_block(const Mat& v, Index sys_dim, Index slot_dim, Index k) {
    Mat out(sys_dim, sys_dim);
    for (Index a = 0; a < sys_dim; ++a) {
        for (Index b = 0; b < sys_dim; ++b) out(a, b) = v(a * slot_dim + k, b * slot_dim);
    }
    return out;
}

/// Phi_dt(x) = <0| V* (x (x) 1) V |0> = sum_k V_k0* x V_k0.
inline Superoperator one_slot_map(const Mat& h, const std::vector<Mat>& jumps, double dt) {
    const Mat v = slot_unitary(h, jumps, dt);
    const Index n = h.rows();
    const Index s = 1 + static_cast<Index>(jumps.size());
    Superoperator phi = Superoperator::zero(n);
    for (Index k = 0; k < s; ++k) {
        const Mat block = slot_block(v, n, s, k);
        phi = phi + Superoperator::sandwich(block.adjoint(), block.adjoint());
    }
    phi.tag(SuperTag::hermiticity_preserving).tag(SuperTag::unital).tag(SuperTag::cp_expected);
    return phi;
}

/// ||Phi_{t/N}^N - e^{t L}|| with L the GKSL generator of (H, jumps).
inline double vacuum_dilation_error(const Mat& h, const std::vector<Mat>& jumps, double t, long slots) {
    if (!(t >= 0.0)) throw DomainError("vacuum_dilation_error: t must be nonnegative");
    if (slots < 1) throw DomainError("vacuum_dilation_error: need at least one slot");
    detail::check_generator(h, jumps);
    if (t == 0.0) return 0.0;
    const Superoperator stepped = one_slot_map(h, jumps, t / static_cast<double>(slots)).power(slots);
    const Superoperator exact = qds::evolve(qds::lindblad_generator(h, jumps), t);
    return (stepped - exact).norm();
}

struct ConvergencePoint {
    long slots = 0;
    double dt = 0.0;
    double error = 0.0;
};

struct ConvergenceStudy {
    std::vector<ConvergencePoint> points;
    /// Negated least-squares slope of log(error) against log(N); 1 means first order.
    double order = 0.0;
};

inline ConvergenceStudy convergence_study(const Mat& h, const std::vector<Mat>& jumps, double t,
                                          const std::vector<long>& slot_counts) {
    ConvergenceStudy out;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (long n : slot_counts) {
        const double err = vacuum_dilation_error(h, jumps, t, n);
        out.points.push_back({n, t / static_cast<double>(n), err});
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(slot_counts.size());
    if (m >= 2) out.order = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
    return out;
}

namespace detail {

// Left-multiply `target` (rows indexed by system (x) slot_1 (x) ... (x) slot_N)
// by the slot unitary acting on system and slot `slot` (1-based).
inline Mat apply_slot(const Mat& v, const ToyFockModel& m, int slot, const Mat& target) {
    const Index s = m.slot_dim();
    Index inner = 1; // dimension of slots after `slot`
    for (int k = slot + 1; k <= m.slots; ++k) inner *= s;
    Index middle = 1; // dimension of slots strictly between the system and `slot`
    for (int k = 1; k < slot; ++k) middle *= s;
    const Index n = m.sys_dim;
    Mat out = Mat::Zero(target.rows(), target.cols());
    // full index = ((a * middle + mid) * s + k) * inner + rest
    for (Index mid = 0; mid < middle; ++mid) {
        for (Index rest = 0; rest < inner; ++rest) {
            for (Index a = 0; a < n; ++a) {
                for (Index k = 0; k < s; ++k) {
                    const Index row = ((a * middle + mid) * s + k) * inner + rest;
                    for (Index b = 0; b < n; ++b) {
                        for (Index l = 0; l < s; ++l) {
                            const cplx coeff = v(a * s + k, b * s + l);
                            if (coeff == cplx(0.0)) continue;
                            const Index col = ((b * middle + mid) * s + l) * inner + rest;
                            out.row(row) += coeff * target.row(col);
                        }
                    }
                }
            }
        }
    }
    return out;
}

} // namespace detail

/// j_k(x) = U_k* (x (x) 1) U_k with U_k = V_k ... V_1, for k = 0..N.
inline std::vector<Mat> full_flow(const ToyFockModel& model, const Mat& h, const std::vector<Mat>& jumps,
                                  const Mat& x) {
    detail::check_generator(h, jumps);
    if (h.rows() != model.sys_dim || static_cast<Index>(jumps.size()) != model.noise_dim) {
        throw DimensionError("full_flow: model does not match the generator");
    }
    require_same_shape(h, x, "full_flow");
    if (model.total_dim() > kFullFlowDimCap) {
        throw CapacityError("full_flow: n (1+d)^N exceeds " + std::to_string(kFullFlowDimCap));
    }
    const Index total = model.total_dim();
    const Mat v = slot_unitary(h, jumps, model.dt);
    const Mat lifted = kron(x, identity(total / model.sys_dim));
    std::vector<Mat> flow{lifted};
    Mat u = identity(total);
    for (int k = 1; k <= model.slots; ++k) {
        u = detail::apply_slot(v, model, k, u);
        flow.push_back(u.adjoint() * lifted * u);
    }
    return flow;
}

/// max_k ||j_k(x y) - j_k(x) j_k(y)|| and ||j_k(x*) - j_k(x)*||.
inline double flow_homomorphism_residual(const ToyFockModel& model, const Mat& h, const std::vector<Mat>& jumps,
                                         const Mat& x, const Mat& y) {
    const auto fx = full_flow(model, h, jumps, x);
    const auto fy = full_flow(model, h, jumps, y);
    const auto fxy = full_flow(model, h, jumps, x * y);
    const auto fxs = full_flow(model, h, jumps, x.adjoint());
    double worst = 0.0;
    for (std::size_t k = 0; k < fx.size(); ++k) {
        worst = std::max(worst, op_norm(fxy[k] - fx[k] * fy[k]));
        worst = std::max(worst, op_norm(fxs[k] - fx[k].adjoint()));
    }
    return worst;
}

/// max_k ||j_k(x) - B_k (x) 1_{slots > k}||, with B_k the normalised partial
/// trace of j_k(x) over the slots after k.
inline double adaptedness_residual(const ToyFockModel& model, const std::vector<Mat>& flow) {
    double worst = 0.0;
    const Index s = model.slot_dim();
    for (std::size_t k = 0; k < flow.size(); ++k) {
        Index tail = 1;
        for (int l = static_cast<int>(k) + 1; l <= model.slots; ++l) tail *= s;
        const Index head = flow[k].rows() / tail;
        Mat block = Mat::Zero(head, head);
        for (Index r = 0; r < tail; ++r) {
            for (Index a = 0; a < head; ++a) {
                for (Index b = 0; b < head; ++b) block(a, b) += flow[k](a * tail + r, b * tail + r);
            }
        }
        block /= static_cast<double>(tail);
        worst = std::max(worst, op_norm(flow[k] - kron(block, identity(tail))));
    }
    return worst;
}

/// Compression of j_N(x) to system (x) vacuum: <v Omega, j_N(x) u Omega>.
inline Mat vacuum_compression(const ToyFockModel& model, const Mat& jn) {
    const Index tail = model.total_dim() / model.sys_dim;
    Mat out(model.sys_dim, model.sys_dim);
    for (Index a = 0; a < model.sys_dim; ++a) {
        for (Index b = 0; b < model.sys_dim; ++b) out(a, b) = jn(a * tail, b * tail);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structure maps
// ---------------------------------------------------------------------------

/// theta^mu_nu for mu, nu in {0..d}: theta^0_0 is the GKSL generator,
/// theta^0_k = [L_k*, .], theta^k_0 = [., L_k], theta^k_l = 0 (no scattering).
struct StructureMaps {
    Index sys_dim = 0;
    Index noise_dim = 0;
    std::vector<std::vector<Superoperator>> maps;

    const Superoperator& at(Index mu, Index nu) const {
        return maps[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)];
    }

    /// max over (mu, nu) of
    /// ||theta(xy) - theta(x) y - x theta(y) - sum_{k>=1} theta^mu_k(x) theta^k_nu(y)||.
    double relation_residual(const Mat& x, const Mat& y) const {
        double worst = 0.0;
        for (Index mu = 0; mu <= noise_dim; ++mu) {
            for (Index nu = 0; nu <= noise_dim; ++nu) {
                const Superoperator& th = at(mu, nu);
                Mat r = th.apply(x * y) - th.apply(x) * y - x * th.apply(y);
                for (Index k = 1; k <= noise_dim; ++k) r -= at(mu, k).apply(x) * at(k, nu).apply(y);
                worst = std::max(worst, op_norm(r));
            }
        }
        return worst;
    }

    /// max over (mu, nu) of ||theta^mu_nu(x)* - theta^nu_mu(x*)||.
    double adjoint_residual(const Mat& x) const {
        double worst = 0.0;
        for (Index mu = 0; mu <= noise_dim; ++mu) {
            for (Index nu = 0; nu <= noise_dim; ++nu) {
                worst = std::max(worst, op_norm(at(mu, nu).apply(x).adjoint() - at(nu, mu).apply(x.adjoint())));
            }
        }
        return worst;
    }
};

inline StructureMaps structure_maps(const Mat& h, const std::vector<Mat>& jumps) {
    detail::check_generator(h, jumps);
    const Index n = h.rows();
    const Index d = static_cast<Index>(jumps.size());
    const Mat id = identity(n);
    StructureMaps out{n, d, {}};
    out.maps.assign(static_cast<std::size_t>(d + 1),
                    std::vector<Superoperator>(static_cast<std::size_t>(d + 1), Superoperator::zero(n)));
    out.maps[0][0] = qds::lindblad_generator(h, jumps);
    for (Index k = 1; k <= d; ++k) {
        const Mat& l = jumps[static_cast<std::size_t>(k - 1)];
        const auto ks = static_cast<std::size_t>(k);
        // [A, x] -> (1 (x) A - A^T (x) 1) vec x
        out.maps[0][ks] = Superoperator(n, kron(id, l.adjoint()) - kron(l.adjoint().transpose(), id));
        out.maps[ks][0] = Superoperator(n, kron(l.transpose(), id) - kron(id, l));
    }
    return out;
}

} // namespace ncg::fock
