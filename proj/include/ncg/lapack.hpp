#pragma once

// Thin wrapper over LAPACK zgesvd. Eigen 3.4.0's divide-and-conquer SVD
// returns wrong null spaces for some structured complex inputs, so every
// rank decision in the library goes through here.

#include <complex>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include <Eigen/Dense>

#include "ncg/error.hpp"

namespace ncg::lapack {

struct Svd {
    Eigen::VectorXd values; ///< descending
    Eigen::MatrixXcd u;     ///< thin left singular vectors (when requested)
    Eigen::MatrixXcd v;     ///< full right singular vectors, columns (when requested)
};

enum class Vectors { none, thin_u, full_v };

inline Svd svd(Eigen::MatrixXcd a, Vectors want) {
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    const lapack_int k = std::min(m, n);
    Svd out;
    out.values.resize(k);
    if (k == 0) {
        if (want == Vectors::full_v) out.v = Eigen::MatrixXcd::Identity(n, n);
        return out;
    }
    Eigen::MatrixXcd vt;
    char jobu = 'N';
    char jobvt = 'N';
    if (want == Vectors::thin_u) {
        jobu = 'S';
        out.u.resize(m, k);
    } else if (want == Vectors::full_v) {
        jobvt = 'A';
        vt.resize(n, n);
    }
    Eigen::VectorXd superb(std::max<lapack_int>(1, k - 1));
    std::complex<double> dummy{};
    const lapack_int info = LAPACKE_zgesvd(
        LAPACK_COL_MAJOR, jobu, jobvt, m, n, a.data(), m, out.values.data(),
        want == Vectors::thin_u ? out.u.data() : &dummy, want == Vectors::thin_u ? m : 1,
        want == Vectors::full_v ? vt.data() : &dummy, want == Vectors::full_v ? n : 1, superb.data());
    if (info != 0) throw Error("lapack::svd: zgesvd failed with info " + std::to_string(info));
    if (want == Vectors::full_v) out.v = vt.adjoint();
    return out;
}

} // namespace ncg::lapack
