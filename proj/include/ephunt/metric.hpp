#pragma once

// Hilbert-space metric G built from left eigenvectors, its closed-form
// time evolution for time-independent H, and the equation-of-motion
// residual dG/dt - i(GH - H^dag G).

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ephunt/biortho.hpp"

namespace ephunt {

enum class MetricProvenance { GaugeEq2, Evolved, ClosedFormToy };

inline const char* to_string(MetricProvenance p) {
    switch (p) {
        case MetricProvenance::GaugeEq2: return "gauge-eq2";
        case MetricProvenance::Evolved: return "evolved";
        case MetricProvenance::ClosedFormToy: return "closed-form-toy";
    }
    return "?";
}

template <class T>
struct MetricOperatorT {
    Mat<T> g;
    MetricProvenance provenance = MetricProvenance::GaugeEq2;

    Eigen::Index dim() const { return g.rows(); }
};

using MetricOperator = MetricOperatorT<double>;

/// Smallest eigenvalue of the Hermitian part of g.
template <class T>
T metric_smallest_eigenvalue(const Mat<T>& g) {
    Mat<T> herm = (g + g.adjoint()) / T(2);
    Eigen::SelfAdjointEigenSolver<Mat<T>> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// Hermiticity within 1e-10*||g|| and smallest eigenvalue > 1e-12*||g||.
template <class T>
bool is_valid_metric(const Mat<T>& g) {
    const T scale = std::max<T>(g.norm(), T(1));
    if ((g - Mat<T>(g.adjoint())).norm() > T(1e-10) * scale) return false;
    return metric_smallest_eigenvalue(g) > T(1e-12) * scale;
}

/// G = sum_i |L_i><L_i| in the balanced biorthogonal gauge. Positive
/// definite away from EPs; reproduces the closed-form 2x2 metrics of the
/// PT-symmetric toy model.
template <class T>
MetricOperatorT<T> build_metric(const BiorthogonalSystemT<T>& sys) {
    MetricOperatorT<T> m;
    m.g = sys.lefts.adjoint() * sys.lefts;
    m.provenance = MetricProvenance::GaugeEq2;
    return m;
}

/// Closed-form metric evolution for time-independent H:
/// G(t) = sum_i e^{-2 Im(E_i) t} |L_i><L_i|, the solution of
/// dG/dt = i(GH - H^dag G) with G(0) from build_metric.
template <class T>
MetricOperatorT<T> evolve_metric(const BiorthogonalSystemT<T>& sys, T t) {
    const Eigen::Index n = sys.dim();
    Mat<T> g = Mat<T>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const T weight = std::exp(T(-2) * sys.values[i].imag() * t);
        Vec<T> li = sys.lefts.row(i).adjoint(); // ket form of <L_i|
        g += weight * (li * li.adjoint());
    }
    MetricOperatorT<T> m;
    m.g = std::move(g);
    m.provenance = t == T(0) ? MetricProvenance::GaugeEq2 : MetricProvenance::Evolved;
    return m;
}

/// || dg_dt - i(gH - H^dag g) || / max(||g||, 1)  (Frobenius norms).
template <class T>
T eom_residual(const MetricOperatorT<T>& g, const Mat<T>& dg_dt, const Mat<T>& h) {
    if (g.dim() != h.rows() || dg_dt.rows() != h.rows())
        throw DimensionMismatch("eom_residual: dimension mismatch");
    const Cplx<T> iu(0, 1);
    Mat<T> rhs = iu * (g.g * h - h.adjoint() * g.g);
    return (dg_dt - rhs).norm() / std::max<T>(g.g.norm(), T(1));
}

/// <psi| G |phi>.
template <class T>
Cplx<T> metric_inner(const MetricOperatorT<T>& g, const Vec<T>& psi, const Vec<T>& phi) {
    if (g.dim() != psi.size() || g.dim() != phi.size())
        throw DimensionMismatch("metric_inner: dimension mismatch");
    return psi.dot(g.g * phi);
}

} // namespace ephunt
