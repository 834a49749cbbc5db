#pragma once

// Dense complex linear algebra on top of Eigen: matrix products, LU solves
// with explicit singularity reporting, a general non-Hermitian eigensolver
// with an exact closed-form branch for 2x2 blocks, and e^{-iHt} action.
//
// Everything is templated on the real scalar so that the 2x2 fidelity
// kernels can run in long double where double rounding would drown the
// eps^2 signal.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ephunt/errors.hpp"

namespace ephunt {

template <class T>
using Cplx = std::complex<T>;

template <class T>
using Mat = Eigen::Matrix<Cplx<T>, Eigen::Dynamic, Eigen::Dynamic>;

template <class T>
using Vec = Eigen::Matrix<Cplx<T>, Eigen::Dynamic, 1>;

using Matrix = Mat<double>;
using Vector = Vec<double>;
using Complex = Cplx<double>;

inline constexpr double kPivotFloor = 1e-14; // relative to ||A||
inline constexpr double kEigTol = 1e-9;      // relative eigen-residual

template <class T>
bool all_finite(const Mat<T>& a) {
    return a.allFinite();
}

template <class T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
    if (a.cols() != b.rows())
        throw DimensionMismatch("matmul: " + std::to_string(a.cols()) + " x " +
                                std::to_string(b.rows()));
    return a * b;
}

template <class T>
Mat<T> adjoint(const Mat<T>& a) {
    return a.adjoint();
}

/// Solve a*x = rhs by partial-pivot LU. A pivot below kPivotFloor*||a||
/// signals a (numerically) rank-deficient stack, e.g. coalesced
/// eigenvectors at an exceptional point.
template <class T>
Mat<T> lu_solve(const Mat<T>& a, const Mat<T>& rhs) {
    if (a.rows() != a.cols() || a.rows() != rhs.rows())
        throw DimensionMismatch("lu_solve: shape mismatch");
    Eigen::PartialPivLU<Mat<T>> lu(a);
    const T scale = a.template lpNorm<Eigen::Infinity>();
    const T floor = static_cast<T>(kPivotFloor) * std::max<T>(scale, T(1));
    const auto diag = lu.matrixLU().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (std::abs(diag[i]) < floor)
            throw SingularMatrix("lu_solve: pivot " + std::to_string(i) +
                                 " below floor");
    }
    return lu.solve(rhs);
}

template <class T>
struct RawEigenSystem {
    Vec<T> values;         // sorted by (Re, Im) ascending
    Mat<T> right_vectors;  // columns, unnormalized
    std::vector<char> converged;

    Eigen::Index dim() const { return values.size(); }
};

namespace detail {

// Canonical eigenvalue order: real part, then imaginary part, ascending.
template <class T>
std::vector<Eigen::Index> sort_order(const Vec<T>& values) {
    std::vector<Eigen::Index> idx(values.size());
    std::iota(idx.begin(), idx.end(), Eigen::Index(0));
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index i, Eigen::Index j) {
        if (values[i].real() != values[j].real())
            return values[i].real() < values[j].real();
        return values[i].imag() < values[j].imag();
    });
    return idx;
}

// Closed-form eigensystem of a 2x2 block. Exact up to rounding, which is
// what makes the toy and Bloch oracles reliable at tight tolerances.
template <class T>
RawEigenSystem<T> eig2(const Mat<T>& h) {
    const Cplx<T> a = h(0, 0), b = h(0, 1), c = h(1, 0), d = h(1, 1);
    const Cplx<T> half_tr = (a + d) / T(2);
    const Cplx<T> disc = std::sqrt((a - d) * (a - d) / T(4) + b * c);
    Cplx<T> e1 = half_tr - disc, e2 = half_tr + disc;
    if (e2.real() < e1.real() ||
        (e2.real() == e1.real() && e2.imag() < e1.imag()))
        std::swap(e1, e2);

    RawEigenSystem<T> out;
    out.values.resize(2);
    out.values << e1, e2;
    out.right_vectors.resize(2, 2);
    for (int j = 0; j < 2; ++j) {
        const Cplx<T> e = out.values[j];
        Vec<T> v(2);
        if (std::abs(b) >= std::abs(c) && std::abs(b) > T(0)) {
            v << b, e - a;
        } else if (std::abs(c) > T(0)) {
            v << e - d, c;
        } else {
            // diagonal block
            if (std::abs(e - a) <= std::abs(e - d))
                v << Cplx<T>(1), Cplx<T>(0);
            else
                v << Cplx<T>(0), Cplx<T>(1);
        }
        out.right_vectors.col(j) = v;
    }
    out.converged = {1, 1};
    return out;
}

} // namespace detail

/// All eigenvalues and right eigenvectors of a general complex matrix.
/// dim 2 takes the analytic branch; larger matrices go through Eigen's
/// complex Schur/QR machinery. A defective input does not error here:
/// coalescence is diagnosed downstream, by biorthogonalize.
template <class T>
RawEigenSystem<T> eig_general(const Mat<T>& h) {
    if (h.rows() != h.cols() || h.rows() < 1)
        throw DimensionMismatch("eig_general: square matrix required");
    if (!all_finite(h))
        throw Error("eig_general: non-finite entries");
    const Eigen::Index n = h.rows();
    if (n == 1) {
        RawEigenSystem<T> out;
        out.values.resize(1);
        out.values[0] = h(0, 0);
        out.right_vectors = Mat<T>::Identity(1, 1);
        out.converged = {1};
        return out;
    }
    if (n == 2) return detail::eig2(h);

    Eigen::ComplexEigenSolver<Mat<T>> es(h, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw NoConvergence("eig_general: QR iteration failed");
    const auto order = detail::sort_order<T>(es.eigenvalues());
    RawEigenSystem<T> out;
    out.values.resize(n);
    out.right_vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out.values[j] = es.eigenvalues()[order[j]];
        out.right_vectors.col(j) = es.eigenvectors().col(order[j]);
    }
    out.converged.assign(static_cast<std::size_t>(n), 1);
    return out;
}

namespace detail {

// Scaled Taylor fallback for e^{-iht} v, used when the eigenvector stack
// is too ill-conditioned to invert (near-defective h).
template <class T>
Vec<T> expm_action_taylor(const Mat<T>& h, T t, const Vec<T>& v) {
    const Cplx<T> iu(0, 1);
    Mat<T> a = -iu * t * h;
    const T norm = a.template lpNorm<Eigen::Infinity>();
    int s = 0;
    while (norm / std::pow(T(2), s) > T(0.5)) ++s;
    a /= std::pow(T(2), s);
    Vec<T> result = v;
    const long reps = 1L << s;
    for (long rep = 0; rep < reps; ++rep) {
        Vec<T> term = result;
        Vec<T> acc = result;
        for (int k = 1; k < 40; ++k) {
            term = (a * term) / T(k);
            acc += term;
            if (term.norm() <= T(1e-20) * acc.norm()) break;
        }
        result = acc;
    }
    return result;
}

} // namespace detail

/// e^{-iht} v through the eigendecomposition, with a scaled Taylor fallback
/// when the stack is numerically singular.
template <class T>
Vec<T> expm_action(const Mat<T>& h, T t, const Vec<T>& v) {
    if (h.rows() != v.size())
        throw DimensionMismatch("expm_action: dim mismatch");
    if (t == T(0)) return v;
    auto raw = eig_general(h);
    try {
        Mat<T> rhs(v.size(), 1);
        rhs.col(0) = v;
        Mat<T> coeff = lu_solve(raw.right_vectors, rhs);
        const Cplx<T> iu(0, 1);
        for (Eigen::Index j = 0; j < raw.dim(); ++j)
            coeff(j, 0) *= std::exp(-iu * raw.values[j] * t);
        return raw.right_vectors * coeff.col(0);
    } catch (const SingularMatrix&) {
        return detail::expm_action_taylor(h, t, v);
    }
}

} // namespace ephunt
