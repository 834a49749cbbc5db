#pragma once

// Biorthonormal left/right eigensystems of non-Hermitian matrices.
//
// Lefts come from inverting the right-eigenvector stack, so <L_i|R_j> =
// delta_ij holds to machine precision by construction. Each pair is then
// put in the "balanced" gauge ||l_i|| = ||r_i|| (keeping <l_i|r_i> = 1),
// with the residual phase fixed by making the largest-magnitude entry of
// each right vector real positive. The balanced gauge is what makes
// sum_i |L_i><L_i| land on the standard closed-form metrics for the
// 2x2 PT-symmetric models.

#include <cmath>
#include <string>
#include <vector>

#include "ephunt/linalg.hpp"

namespace ephunt {

inline constexpr double kRigidityHardTol = 1e-8; // defective to machine precision
inline constexpr double kRigiditySoftTol = 1e-1; // dangerously close to an EP

/// Phase rigidity |<l|r>| / (||l|| ||r||) of an eigenpair, computed from
/// pre-normalization vectors. 1 for Hermitian operators, -> 0 at an EP.
/// The bra `l` is passed by its entries: the pairing is a plain dot
/// product, no conjugation.
template <class T>
T rigidity(const Vec<T>& l, const Vec<T>& r) {
    const T nl = l.norm(), nr = r.norm();
    if (nl == T(0) || nr == T(0)) throw ZeroVector("rigidity: zero vector");
    return std::abs(l.dot(r.conjugate())) / (nl * nr); // l.r without conj
}

template <class T>
struct BiorthogonalSystemT {
    Vec<T> values;    // canonical (Re, Im) ascending order
    Mat<T> rights;    // columns |R_i>
    Mat<T> lefts;     // rows <L_i| (bra entries; pairing is plain dot)
    std::vector<T> rigidities;

    Eigen::Index dim() const { return values.size(); }
    Vec<T> right(Eigen::Index i) const { return rights.col(i); }
    Vec<T> left(Eigen::Index i) const { return lefts.row(i).transpose(); }
};

using BiorthogonalSystem = BiorthogonalSystemT<double>;

/// Pair the right eigenvectors with their lefts and normalize to
/// <L_i|R_j> = delta_ij in the balanced gauge. Throws AtExceptionalPoint
/// when the stack is numerically singular or any rigidity < 1e-8.
template <class T>
BiorthogonalSystemT<T> biorthogonalize(const RawEigenSystem<T>& raw) {
    const Eigen::Index n = raw.dim();
    for (char c : raw.converged)
        if (!c) throw NoConvergence("biorthogonalize: unconverged eigenpair");

    Mat<T> v = raw.right_vectors;
    for (Eigen::Index j = 0; j < n; ++j) {
        Vec<T> col = v.col(j);
        const T nrm = col.norm();
        if (nrm == T(0)) throw ZeroVector("biorthogonalize: zero eigenvector");
        col /= nrm;
        Eigen::Index imax = 0;
        col.cwiseAbs().maxCoeff(&imax);
        const Cplx<T> pivot = col[imax];
        col *= std::conj(pivot) / std::abs(pivot);
        v.col(j) = col;
    }

    Mat<T> w; // rows are bras
    try {
        w = lu_solve<T>(v, Mat<T>::Identity(n, n));
    } catch (const SingularMatrix&) {
        throw AtExceptionalPoint(
            "biorthogonalize: right-eigenvector stack is singular");
    }

    BiorthogonalSystemT<T> sys;
    sys.values = raw.values;
    sys.rigidities.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const T nw = w.row(i).norm();
        const T nv = v.col(i).norm(); // = 1
        const T rig = T(1) / (nw * nv); // |<w_i|v_i>| = 1 by construction
        sys.rigidities[static_cast<std::size_t>(i)] = rig;
        if (rig < static_cast<T>(kRigidityHardTol))
            throw AtExceptionalPoint("biorthogonalize: rigidity " +
                                     std::to_string(static_cast<double>(rig)) +
                                     " below tolerance");
        const T s = std::sqrt(nw / nv);
        v.col(i) *= s;
        w.row(i) /= s;
    }
    sys.rights = std::move(v);
    sys.lefts = std::move(w);
    return sys;
}

struct StateMatching {
    std::vector<Eigen::Index> permutation; // old index -> new index
    std::vector<double> overlaps;          // |<L_i(prev)|R_perm(i)(next)>|
    bool crossed_ep = false;               // a rigidity dipped below 1e-1
};

/// Follow eigenstates across a parameter step: greedy assignment on
/// maximal |<L_i(prev)|R_j(next)>|, ties broken by closer eigenvalue,
/// then by lower index.
template <class T>
StateMatching match_states(const BiorthogonalSystemT<T>& prev,
                           const BiorthogonalSystemT<T>& next) {
    const Eigen::Index n = prev.dim();
    if (n != next.dim())
        throw DimensionMismatch("match_states: dimension mismatch");

    Mat<T> ov = prev.lefts * next.rights; // ov(i,j) = <L_i|R_j>
    StateMatching m;
    m.permutation.assign(static_cast<std::size_t>(n), -1);
    m.overlaps.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<char> col_used(static_cast<std::size_t>(n), 0);

    for (Eigen::Index round = 0; round < n; ++round) {
        // global greedy: best unassigned (row, col)
        Eigen::Index bi = -1, bj = -1;
        T best = T(-1);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (m.permutation[static_cast<std::size_t>(i)] >= 0) continue;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (col_used[static_cast<std::size_t>(j)]) continue;
                const T mag = std::abs(ov(i, j));
                bool better = mag > best;
                if (!better && mag == best) {
                    const T de = std::abs(prev.values[i] - next.values[j]);
                    const T dbest = std::abs(prev.values[bi] - next.values[bj]);
                    better = de < dbest || (de == dbest && (i < bi || (i == bi && j < bj)));
                }
                if (better) { best = mag; bi = i; bj = j; }
            }
        }
        // ambiguity gate on the winning row
        T second = T(-1);
        Eigen::Index sj = -1;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == bj || col_used[static_cast<std::size_t>(j)]) continue;
            if (std::abs(ov(bi, j)) > second) { second = std::abs(ov(bi, j)); sj = j; }
        }
        if (sj >= 0 && std::abs(best - second) < T(1e-12)) {
            const T d1 = std::abs(prev.values[bi] - next.values[bj]);
            const T d2 = std::abs(prev.values[bi] - next.values[sj]);
            if (std::abs(d1 - d2) < T(1e-12))
                throw AmbiguousMatching("match_states: degenerate overlaps and eigenvalues");
        }
        m.permutation[static_cast<std::size_t>(bi)] = bj;
        m.overlaps[static_cast<std::size_t>(bi)] = static_cast<double>(best);
        col_used[static_cast<std::size_t>(bj)] = 1;
    }

    for (T r : prev.rigidities)
        if (r < static_cast<T>(kRigiditySoftTol)) m.crossed_ep = true;
    for (T r : next.rigidities)
        if (r < static_cast<T>(kRigiditySoftTol)) m.crossed_ep = true;
    return m;
}

} // namespace ephunt
