#pragma once

// Generalized fidelity between eigenstates at nearby parameters, in both
// the metric form  F = <psi1|G1|psi2><psi2|G2|psi1>  and the biorthogonal
// form  F = <L1|R2><L2|R1>,  plus the finite-difference susceptibility
// chi = (1 - F)/eps^2 with optional Richardson extrapolation.

#include <cmath>
#include <vector>

#include "ephunt/biortho.hpp"
#include "ephunt/family.hpp"
#include "ephunt/metric.hpp"

namespace ephunt {

enum class FidelityForm { Metric, Biorthogonal };

struct FidelityResult {
    Complex f;
    FidelityForm form;
    double epsilon = 0.0;
};

struct SusceptibilityResult {
    Complex chi;
    double re_chi = 0.0;
    double epsilon_used = 0.0;
    bool richardson = false;
};

/// Metric form. Both states must be metric-normalized, <psi_k|g_k|psi_k> = 1.
template <class T>
Cplx<T> fidelity_metric_value(const Vec<T>& psi1, const MetricOperatorT<T>& g1,
                              const Vec<T>& psi2, const MetricOperatorT<T>& g2) {
    if (std::abs(metric_inner<T>(g1, psi1, psi1) - Cplx<T>(1)) > T(1e-10) ||
        std::abs(metric_inner<T>(g2, psi2, psi2) - Cplx<T>(1)) > T(1e-10))
        throw NotNormalized("fidelity_metric: <psi|G|psi> != 1");
    return metric_inner<T>(g1, psi1, psi2) * metric_inner<T>(g2, psi2, psi1);
}

inline FidelityResult fidelity_metric(const Vector& psi1, const MetricOperator& g1,
                                      const Vector& psi2, const MetricOperator& g2) {
    return {fidelity_metric_value<double>(psi1, g1, psi2, g2), FidelityForm::Metric, 0.0};
}

/// Biorthogonal form. Bras are passed by entries; pairing is a plain dot.
template <class T>
Cplx<T> fidelity_biortho_value(const Vec<T>& l1, const Vec<T>& r1,
                               const Vec<T>& l2, const Vec<T>& r2) {
    const Cplx<T> n1 = l1.transpose() * r1;
    const Cplx<T> n2 = l2.transpose() * r2;
    if (std::abs(n1 - Cplx<T>(1)) > T(1e-10) || std::abs(n2 - Cplx<T>(1)) > T(1e-10))
        throw NotBiorthonormal("fidelity_biortho: <l|r> != 1");
    const Cplx<T> a = l1.transpose() * r2;
    const Cplx<T> b = l2.transpose() * r1;
    return a * b;
}

inline FidelityResult fidelity_biortho(const Vector& l1, const Vector& r1,
                                       const Vector& l2, const Vector& r2) {
    return {fidelity_biortho_value<double>(l1, r1, l2, r2), FidelityForm::Biorthogonal, 0.0};
}

namespace detail {

// 1 - F without forming F. The two factors are 1 + O(eps^2) for nearby
// eigenstates; subtracting after the multiplication loses the entire
// signal at small eps, so accumulate the deviations directly. The (r2,l2)
// pair is first phase-aligned to r1 (a gauge transformation; F is
// invariant under it) so the vector differences are genuinely small.
template <class T>
Cplx<T> one_minus_fidelity(const Vec<T>& l1, const Vec<T>& r1,
                           Vec<T> l2, Vec<T> r2) {
    const Cplx<T> ph = r1.dot(r2);
    if (std::abs(ph) > T(0)) {
        const Cplx<T> c = ph / std::abs(ph);
        r2 /= c;
        l2 *= c;
    }
    const Cplx<T> a = (Cplx<T>(1) - Cplx<T>(l1.transpose() * r1)) +
                      Cplx<T>(l1.transpose() * (r1 - r2));
    const Cplx<T> b = (Cplx<T>(1) - Cplx<T>(l2.transpose() * r2)) +
                      Cplx<T>(l2.transpose() * (r2 - r1));
    return a + (Cplx<T>(1) - a) * b;
}

// (1 - F)/eps^2 between the tracked band at lambda and lambda + eps.
template <class T>
Cplx<T> chi_single_step(const HamiltonianFamily& family, T lambda,
                        Eigen::Index band, T eps) {
    auto sys1 = biorthogonalize<T>(eig_general<T>(family.matrix_hp(lambda)));
    auto sys2 = biorthogonalize<T>(eig_general<T>(family.matrix_hp(lambda + eps)));
    if (band < 0 || band >= sys1.dim())
        throw InvalidSpec("susceptibility: band index out of range");
    Eigen::Index j;
    try {
        auto m = match_states<T>(sys1, sys2);
        j = m.permutation[static_cast<std::size_t>(band)];
    } catch (const AmbiguousMatching&) {
        // endpoints on opposite sides of an EP cannot be continued
        throw StepTooLarge("susceptibility: step straddles an EP, shrink epsilon");
    }
    const Cplx<T> omf = one_minus_fidelity<T>(
        sys1.lefts.row(band).transpose(), sys1.rights.col(band),
        sys2.lefts.row(j).transpose(), sys2.rights.col(j));
    if (std::abs(omf) > T(0.5))
        throw StepTooLarge("susceptibility: |1 - F| > 0.5, shrink epsilon");
    return omf / (eps * eps);
}

} // namespace detail

/// Finite-difference susceptibility of the tracked band. Richardson
/// combines the eps and eps/2 estimates as 2*chi(eps/2) - chi(eps),
/// cancelling the O(eps) truncation of the one-sided stencil. With
/// `symmetric`, the stencil spans (lambda - eps, lambda + eps) instead
/// (diagnostic variant).
inline SusceptibilityResult susceptibility_fd(const HamiltonianFamily& family,
                                              double lambda, Eigen::Index band,
                                              double epsilon = 1e-4,
                                              bool use_richardson = true,
                                              bool symmetric = false) {
    using T = long double;
    const T lam = static_cast<T>(lambda);
    const T eps = static_cast<T>(epsilon);
    if (!(epsilon > 0)) throw InvalidSpec("susceptibility: epsilon must be > 0");

    const T base = symmetric ? lam - eps : lam;
    const T step = symmetric ? 2 * eps : eps;
    Cplx<T> chi = detail::chi_single_step<T>(family, base, band, step);
    if (use_richardson) {
        const T base2 = symmetric ? lam - eps / 2 : lam;
        chi = T(2) * detail::chi_single_step<T>(family, base2, band, step / 2) - chi;
    }
    SusceptibilityResult out;
    out.chi = Complex(static_cast<double>(chi.real()), static_cast<double>(chi.imag()));
    out.re_chi = out.chi.real();
    out.epsilon_used = epsilon;
    out.richardson = use_richardson;
    return out;
}

/// Max_t |F(t) - F(0)| / |F(0)| for the eigenstates at lambda and
/// lambda + eps, each evolved by its own Hamiltonian with its own evolved
/// metric. Zero analytically: the metric equation of motion compensates
/// non-unitary growth exactly.
inline double fidelity_time_invariance_check(const HamiltonianFamily& family,
                                             double lambda, double epsilon,
                                             const std::vector<double>& t_grid,
                                             Eigen::Index band = 0) {
    const Matrix h1 = family.matrix(lambda);
    const Matrix h2 = family.matrix(lambda + epsilon);
    auto sys1 = biorthogonalize<double>(eig_general<double>(h1));
    auto sys2 = biorthogonalize<double>(eig_general<double>(h2));
    auto m = match_states<double>(sys1, sys2);
    const Eigen::Index j = m.permutation[static_cast<std::size_t>(band)];

    const Vector r1 = sys1.rights.col(band), r2 = sys2.rights.col(j);
    Complex f0;
    double max_dev = 0.0;
    bool first = true;
    for (double t : t_grid) {
        const Vector p1 = expm_action<double>(h1, t, r1);
        const Vector p2 = expm_action<double>(h2, t, r2);
        const auto g1 = evolve_metric<double>(sys1, t);
        const auto g2 = evolve_metric<double>(sys2, t);
        const Complex f = metric_inner<double>(g1, p1, p2) * metric_inner<double>(g2, p2, p1);
        if (first) {
            f0 = f;
            first = false;
        } else {
            max_dev = std::max(max_dev, std::abs(f - f0) / std::abs(f0));
        }
    }
    return max_dev;
}

} // namespace ephunt
