#pragma once

// Built-in Hamiltonian families with exact oracles: the PT-symmetric 2x2
// toy model H(r) = [[ir, 1], [1, -ir]] and the non-Hermitian SSH chain
// with gain/loss +/- iu, intra-cell hopping v and inter-cell hopping w,
// in both Bloch (2x2 per momentum) and real-space (2N x 2N) form.

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ephunt/family.hpp"
#include "ephunt/metric.hpp"

namespace ephunt {

// ---------------------------------------------------------------- toy model

struct ToyParams {
    double r = 0.0; // EPs at r = +/-1; PT-broken for |r| > 1
};

template <class T>
Mat<T> toy_hamiltonian(T r) {
    Mat<T> h(2, 2);
    const Cplx<T> iu(0, 1);
    h << iu * r, Cplx<T>(1), Cplx<T>(1), -iu * r;
    return h;
}

inline Matrix toy_hamiltonian(const ToyParams& p) { return toy_hamiltonian<double>(p.r); }

/// chi(r) = -1 / (4 (1 - r^2)^2), valid in both PT regions.
inline double toy_chi_exact(const ToyParams& p) {
    const double d = 1.0 - p.r * p.r;
    if (d == 0.0)
        throw AtExceptionalPoint("toy_chi_exact: |r| = 1 is an EP");
    return -1.0 / (4.0 * d * d);
}

/// Closed-form metric: static for |r| < 1, exponentially breathing for
/// |r| > 1 (entries (Lambda +/- r) e^{+/-2 t Lambda} with Lambda = sqrt(r^2-1)).
inline MetricOperator toy_metric_exact(const ToyParams& p, double t = 0.0) {
    const double r = p.r;
    if (std::abs(r) == 1.0)
        throw AtExceptionalPoint("toy_metric_exact: |r| = 1 is an EP");
    Matrix g(2, 2);
    const Complex iu(0, 1);
    if (std::abs(r) < 1.0) {
        const double ca = std::sqrt(1.0 - r * r); // cos(alpha), sin(alpha) = r
        g << 1.0, -iu * r, iu * r, 1.0;
        g /= ca;
    } else {
        const double lam = std::sqrt(r * r - 1.0);
        const double ep = std::exp(2.0 * t * lam), em = std::exp(-2.0 * t * lam);
        g(0, 0) = (lam + r) * em - (lam - r) * ep;
        g(1, 1) = (lam + r) * ep - (lam - r) * em;
        g(0, 1) = -iu * (ep + em);
        g(1, 0) = iu * (ep + em);
        g /= 2.0 * lam;
    }
    return {g, MetricProvenance::ClosedFormToy};
}

class ToyFamily final : public HamiltonianFamily {
public:
    Eigen::Index dim() const override { return 2; }
    Mat<double> matrix(double r) const override { return toy_hamiltonian<double>(r); }
    Mat<long double> matrix_hp(long double r) const override {
        return toy_hamiltonian<long double>(r);
    }
    std::vector<double> gap_branches(double r) const override { return {1.0 - r * r}; }
    double min_band_gap(double r) const override {
        return 2.0 * std::sqrt(std::abs(1.0 - r * r));
    }
};

// ---------------------------------------------------------------- SSH chain

struct SshParams {
    double u = 0.0; // gain/loss, >= 0
    double v = 1.0; // intra-cell hopping
    double w = 1.0; // inter-cell hopping
    int n_cells = 2;

    void validate() const {
        if (u < 0.0) throw InvalidSpec("SshParams: u must be >= 0");
        if (n_cells < 2) throw InvalidSpec("SshParams: N must be >= 2");
    }
};

struct BlochBlock {
    double k = 0.0;
    Complex xi;         // v + w e^{ik}
    Matrix block;       // [[iu, xi], [conj(xi), -iu]]
    std::pair<Complex, Complex> bands; // -/+ sqrt(|xi|^2 - u^2)
};

template <class T>
Mat<T> ssh_bloch_matrix(T u, T v, T w, T k) {
    const Cplx<T> iu(0, 1);
    const Cplx<T> xi = v + w * std::exp(iu * k);
    Mat<T> h(2, 2);
    h << iu * u, xi, std::conj(xi), -iu * u;
    return h;
}

inline BlochBlock ssh_bloch(const SshParams& p, double k) {
    p.validate();
    BlochBlock b;
    b.k = k;
    b.xi = p.v + p.w * std::exp(Complex(0, 1) * k);
    b.block = ssh_bloch_matrix<double>(p.u, p.v, p.w, k);
    const Complex eps = std::sqrt(Complex(std::norm(b.xi) - p.u * p.u));
    b.bands = {-eps, eps};
    return b;
}

/// 2N x 2N single-particle matrix with periodic boundary: +iu/-iu on the
/// gain/loss sublattices, v on intra-cell bonds, w on inter-cell bonds.
/// Basis order: (cell 0, up), (cell 0, down), (cell 1, up), ...
inline Matrix ssh_realspace(const SshParams& p) {
    p.validate();
    const int n = p.n_cells;
    Matrix h = Matrix::Zero(2 * n, 2 * n);
    const Complex iu(0, 1);
    for (int c = 0; c < n; ++c) {
        const int up = 2 * c, dn = 2 * c + 1;
        const int up_next = 2 * ((c + 1) % n);
        h(up, up) = iu * p.u;
        h(dn, dn) = -iu * p.u;
        h(up, dn) += p.v;
        h(dn, up) += p.v;
        h(dn, up_next) += p.w;
        h(up_next, dn) += p.w;
    }
    return h;
}

namespace detail {

// v^2 + w^2 + 2vw cos k - u^2, written as (v+w)^2 - 4vw sin^2(k/2) - u^2
// to avoid cancellation near k = pi when w is close to v.
inline double ssh_denominator_core(double u, double v, double w, double k) {
    const double s = std::sin(0.5 * k);
    return (v + w) * (v + w) - 4.0 * v * w * s * s - u * u;
}

inline double ssh_chi0_summand(double u, double v, double w, double k) {
    const double sk = std::sin(k);
    const double d = ssh_denominator_core(u, v, w, k);
    return (v * v * sk * sk - u * u) / (4.0 * d * d);
}

} // namespace detail

/// Ground-state fidelity susceptibility density: the closed-form sum of
/// per-momentum contributions (v^2 sin^2 k - u^2) / (4 (v^2 + w^2 +
/// 2vw cos k - u^2)^2) over k = 2 pi m / N, divided by N. The summation
/// order is fixed (k ascending) so sweep output is bitwise stable.
inline double ssh_chi0_density(const SshParams& p) {
    p.validate();
    const int n = p.n_cells;
    double sum = 0.0;
    for (int m = 0; m < n; ++m) {
        const double k = 2.0 * std::numbers::pi * m / n;
        const double d = detail::ssh_denominator_core(p.u, p.v, p.w, k);
        const double scale = (p.v + p.w) * (p.v + p.w) + p.u * p.u + 1.0;
        if (std::abs(d) < 1e-12 * scale)
            throw AtExceptionalPoint("ssh_chi0_density: band touching at k = " +
                                     std::to_string(k) + " (m = " + std::to_string(m) + ")");
        const double sk = std::sin(k);
        sum += (p.v * p.v * sk * sk - p.u * p.u) / (4.0 * d * d);
    }
    return sum / n;
}

struct SshEpRoot {
    double k = 0.0;
    double w = 0.0;
    int multiplicity = 1; // 2 when the k <-> 2pi - k partner coincides
};

/// Positive-w roots of v^2 + w^2 + 2vw cos k = u^2 over the finite-N
/// momentum grid: the w values where a Bloch block becomes defective.
/// Roots from mirror momenta k and 2pi - k coincide and are merged with
/// multiplicity 2. Sorted by w ascending.
inline std::vector<SshEpRoot> ssh_ep_locations(double u, double v, int n_cells) {
    if (!(u > 0.0)) throw InvalidSpec("ssh_ep_locations: u must be > 0");
    if (n_cells < 2) throw InvalidSpec("ssh_ep_locations: N must be >= 2");
    std::vector<SshEpRoot> out;
    // m and N - m give the same cos k; walk the half zone only.
    for (int m = 0; m <= n_cells / 2; ++m) {
        const double k = 2.0 * std::numbers::pi * m / n_cells;
        const double disc = v * v * std::cos(k) * std::cos(k) - v * v + u * u;
        if (disc < 0.0) continue;
        const int mult = (m == 0 || 2 * m == n_cells) ? 1 : 2;
        const double sq = std::sqrt(disc);
        for (double w : {-v * std::cos(k) - sq, -v * std::cos(k) + sq}) {
            if (w > 0.0 && (sq > 0.0 || out.empty() || out.back().w != w))
                out.push_back({k, w, mult});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const SshEpRoot& a, const SshEpRoot& b) { return a.w < b.w; });
    return out;
}

enum class SshPhase { PtSymmetricTopological, PtBroken, PtSymmetricTrivial, Boundary };

inline const char* to_string(SshPhase ph) {
    switch (ph) {
        case SshPhase::PtSymmetricTopological: return "pt-symmetric-topological";
        case SshPhase::PtBroken: return "pt-broken";
        case SshPhase::PtSymmetricTrivial: return "pt-symmetric-trivial";
        case SshPhase::Boundary: return "boundary";
    }
    return "?";
}

/// Thermodynamic-limit phase: topological for w > v+u, broken for
/// v-u < w < v+u, trivial for w < v-u.
inline SshPhase ssh_phase(double u, double v, double w) {
    if (w > v + u) return SshPhase::PtSymmetricTopological;
    if (w < v - u) return SshPhase::PtSymmetricTrivial;
    if (w == v + u || w == v - u) return SshPhase::Boundary;
    return SshPhase::PtBroken;
}

/// Single Bloch block as a one-parameter family in w (u, v, k fixed).
class SshBlochFamily final : public HamiltonianFamily {
public:
    SshBlochFamily(double u, double v, double k) : u_(u), v_(v), k_(k) {}

    Eigen::Index dim() const override { return 2; }
    Mat<double> matrix(double w) const override {
        return ssh_bloch_matrix<double>(u_, v_, w, k_);
    }
    Mat<long double> matrix_hp(long double w) const override {
        return ssh_bloch_matrix<long double>(u_, v_, w, static_cast<long double>(k_));
    }
    std::vector<double> gap_branches(double w) const override {
        return {detail::ssh_denominator_core(u_, v_, w, k_)};
    }
    double min_band_gap(double w) const override {
        return 2.0 * std::sqrt(std::abs(detail::ssh_denominator_core(u_, v_, w, k_)));
    }

private:
    double u_, v_, k_;
};

/// The full chain as a w-family for EP hunting: the gap branches are the
/// per-momentum denominators v^2 + w^2 + 2vw cos k - u^2 over the half
/// zone, each vanishing exactly at a finite-N EP.
class SshChainFamily final : public HamiltonianFamily {
public:
    SshChainFamily(double u, double v, int n_cells) : u_(u), v_(v), n_(n_cells) {
        if (n_cells < 2) throw InvalidSpec("SshChainFamily: N must be >= 2");
    }

    Eigen::Index dim() const override { return 2 * n_; }
    Mat<double> matrix(double w) const override {
        return ssh_realspace({u_, v_, w, n_});
    }
    Mat<long double> matrix_hp(long double w) const override {
        return matrix(static_cast<double>(w)).cast<Cplx<long double>>();
    }
    std::vector<double> gap_branches(double w) const override {
        std::vector<double> out;
        for (int m = 0; m <= n_ / 2; ++m) {
            const double k = 2.0 * std::numbers::pi * m / n_;
            out.push_back(detail::ssh_denominator_core(u_, v_, w, k));
        }
        return out;
    }
    double min_band_gap(double w) const override {
        double best = std::numeric_limits<double>::infinity();
        for (double b : gap_branches(w))
            best = std::min(best, 2.0 * std::sqrt(std::abs(b)));
        return best;
    }

    double u() const { return u_; }
    double v() const { return v_; }
    int n_cells() const { return n_; }

private:
    double u_, v_;
    int n_;
};

} // namespace ephunt
