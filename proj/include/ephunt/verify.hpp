#pragma once

// Cross-module verification suite: biorthonormality, metric equation of
// motion (closed form vs central differences and vs an independent RK4
// integration), fidelity time invariance, Hermitian reductions, and the
// model oracles. Used by the `verify` CLI subcommand; the tests exercise
// the same checks piecewise.

#include <random>
#include <string>
#include <vector>

#include "ephunt/io.hpp"

namespace ephunt {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline Matrix random_matrix(std::mt19937& rng, Eigen::Index n, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = Complex(dist(rng), dist(rng));
    return m;
}

/// Random matrix with all rigidities above 1e-3 (comfortably diagonalizable).
inline Matrix random_diagonalizable(std::mt19937& rng, Eigen::Index n, double scale = 1.0) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        Matrix m = random_matrix(rng, n, scale);
        try {
            auto sys = biorthogonalize<double>(eig_general<double>(m));
            bool ok = true;
            for (double r : sys.rigidities)
                if (r < 1e-3) ok = false;
            if (ok) return m;
        } catch (const AtExceptionalPoint&) {
        }
    }
    throw Error("random_diagonalizable: no well-conditioned sample found");
}

/// One RK4 step of dG/dt = i(GH - H^dag G).
inline Matrix eom_rk4_step(const Matrix& g, const Matrix& h, double dt) {
    auto f = [&](const Matrix& x) -> Matrix {
        return Complex(0, 1) * (x * h - h.adjoint() * x);
    };
    const Matrix k1 = f(g);
    const Matrix k2 = f(g + 0.5 * dt * k1);
    const Matrix k3 = f(g + 0.5 * dt * k2);
    const Matrix k4 = f(g + dt * k3);
    return g + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline Matrix eom_rk4_evolve(Matrix g, const Matrix& h, double t, double dt = 1e-3) {
    const long steps = std::lround(t / dt);
    for (long i = 0; i < steps; ++i) g = eom_rk4_step(g, h, dt);
    const double rem = t - steps * dt;
    if (std::abs(rem) > 1e-15) g = eom_rk4_step(g, h, rem);
    return g;
}

} // namespace detail

/// Run the full invariant suite. `perturb_metric` injects a deliberate
/// Hermitian perturbation of the evolved metric before the EOM check
/// (self-test of the suite: a nonzero value must make that check fail).
inline std::vector<CheckResult> run_verification(unsigned seed = 1,
                                                 double perturb_metric = 0.0) {
    std::vector<CheckResult> results;
    std::mt19937 rng(seed);
    const auto add = [&](const std::string& name, bool pass, double value, double bound) {
        results.push_back({name, pass, "value " + fmt17(value) + ", bound " + fmt17(bound)});
    };

    // --- biorthonormality, completeness, Hermitian reduction
    {
        double worst_delta = 0.0, worst_complete = 0.0;
        for (int rep = 0; rep < 5; ++rep) {
            const Matrix h = detail::random_diagonalizable(rng, 4 + rep % 3);
            auto sys = biorthogonalize<double>(eig_general<double>(h));
            const Matrix delta = sys.lefts * sys.rights - Matrix::Identity(sys.dim(), sys.dim());
            worst_delta = std::max(worst_delta, delta.cwiseAbs().maxCoeff());
            const Matrix complete = sys.rights * sys.lefts - Matrix::Identity(sys.dim(), sys.dim());
            worst_complete = std::max(worst_complete, complete.norm());
        }
        add("biorthonormality <L_i|R_j> = delta_ij", worst_delta <= 1e-10, worst_delta, 1e-10);
        add("completeness sum |R_i><L_i| = 1", worst_complete <= 1e-9, worst_complete, 1e-9);
    }
    {
        Matrix h(2, 2);
        h << 0, 1, 1, 0;
        auto sys = biorthogonalize<double>(eig_general<double>(h));
        const double dev = (sys.lefts - Matrix(sys.rights.adjoint())).cwiseAbs().maxCoeff();
        double rig_dev = 0.0;
        for (double r : sys.rigidities) rig_dev = std::max(rig_dev, std::abs(r - 1.0));
        add("Hermitian reduction: lefts = adjoint(rights)", dev <= 1e-10, dev, 1e-10);
        add("Hermitian reduction: rigidity = 1", rig_dev <= 1e-10, rig_dev, 1e-10);
    }

    // --- metric EOM conservation and positivity along evolution
    {
        std::vector<Matrix> set = {toy_hamiltonian<double>(0.5), toy_hamiltonian<double>(2.0)};
        for (int rep = 0; rep < 2; ++rep) set.push_back(detail::random_diagonalizable(rng, 4));
        double worst_resid = 0.0, worst_minev = std::numeric_limits<double>::infinity();
        double worst_rk4 = 0.0;
        const double fd_step = 1e-5;
        for (const auto& h : set) {
            auto sys = biorthogonalize<double>(eig_general<double>(h));
            for (double t : {0.0, 0.3, 1.0, 2.7}) {
                auto g = evolve_metric<double>(sys, t);
                if (perturb_metric != 0.0)
                    g.g += perturb_metric * g.g.norm() * Matrix::Identity(g.dim(), g.dim());
                const Matrix dg = (evolve_metric<double>(sys, t + fd_step).g -
                                   evolve_metric<double>(sys, t - fd_step).g) /
                                  (2.0 * fd_step);
                worst_resid = std::max(worst_resid, eom_residual<double>(g, dg, h));
                worst_minev = std::min(worst_minev,
                                       metric_smallest_eigenvalue<double>(g.g) / g.g.norm());
            }
            const double t_rk4 = 0.5;
            const Matrix g_rk4 = detail::eom_rk4_evolve(build_metric<double>(sys).g, h, t_rk4);
            const Matrix g_cf = evolve_metric<double>(sys, t_rk4).g;
            worst_rk4 = std::max(worst_rk4, (g_rk4 - g_cf).norm() / g_cf.norm());
        }
        add("metric EOM residual (central difference)", worst_resid <= 1e-6, worst_resid, 1e-6);
        add("metric positivity along evolution", worst_minev > 1e-12, worst_minev, 1e-12);
        add("metric EOM vs RK4 integration", worst_rk4 <= 1e-8, worst_rk4, 1e-8);
    }

    // --- det G(t) = 1, toy broken region
    {
        auto sys = biorthogonalize<double>(eig_general<double>(toy_hamiltonian<double>(2.0)));
        double worst = 0.0;
        for (double t : {0.0, 0.3, 1.0, 2.7}) {
            const Matrix g = evolve_metric<double>(sys, t).g;
            // det cancellation grows with the breathing amplitude ||G||^2
            worst = std::max(worst,
                             std::abs(g.determinant() - 1.0) / g.squaredNorm());
        }
        add("toy broken region: det G(t) = 1 (scaled)", worst <= 1e-12, worst, 1e-12);
    }

    // --- G-orthogonality of eigenstates in the biorthogonal gauge
    {
        double worst = 0.0;
        for (int rep = 0; rep < 3; ++rep) {
            const Matrix h = detail::random_diagonalizable(rng, 4);
            auto sys = biorthogonalize<double>(eig_general<double>(h));
            auto g = build_metric<double>(sys);
            for (Eigen::Index i = 0; i < sys.dim(); ++i)
                for (Eigen::Index j = 0; j < sys.dim(); ++j) {
                    const Complex x = metric_inner<double>(g, sys.right(i), sys.right(j));
                    worst = std::max(worst, std::abs(x - (i == j ? 1.0 : 0.0)));
                }
        }
        add("G-orthonormality of right eigenstates", worst <= 1e-10, worst, 1e-10);
    }

    // --- fidelity time invariance
    {
        ToyFamily toy;
        double worst = 0.0;
        for (double r : {0.5, 2.0})
            worst = std::max(worst, fidelity_time_invariance_check(toy, r, 1e-3,
                                                                   {0.0, 0.5, 1.0, 2.0}));
        add("fidelity time invariance (toy)", worst <= 1e-6, worst, 1e-6);
    }

    // --- toy susceptibility oracle
    {
        ToyFamily toy;
        double worst = 0.0;
        for (double r : {0.0, 0.3, -0.3, 0.5, -0.5, 0.7, -0.7, 0.9, -0.9, 1.5, -1.5, 3.0, -3.0}) {
            const double chi = susceptibility_fd(toy, r, 0).re_chi;
            worst = std::max(worst, std::abs((chi - toy_chi_exact({r})) / toy_chi_exact({r})));
        }
        add("toy chi oracle (both PT regions)", worst <= 1e-5, worst, 1e-5);
    }

    // --- real-space vs Bloch spectra
    {
        std::uniform_real_distribution<double> du(0.0, 0.3), dv(0.5, 1.5);
        double worst = 0.0;
        for (int n = 2; n <= 8; ++n) {
            const SshParams p{du(rng), dv(rng), dv(rng), n};
            auto raw = eig_general<double>(ssh_realspace(p));
            std::vector<Complex> bloch;
            for (int m = 0; m < n; ++m) {
                auto b = ssh_bloch(p, 2.0 * std::numbers::pi * m / n);
                bloch.push_back(b.bands.first);
                bloch.push_back(b.bands.second);
            }
            // greedy nearest-value matching: the (Re, Im) sort is not stable
            // against 1e-16 noise in the real parts of imaginary pairs
            std::vector<char> used(bloch.size(), 0);
            for (Eigen::Index i = 0; i < raw.dim(); ++i) {
                double best = std::numeric_limits<double>::infinity();
                std::size_t bj = 0;
                for (std::size_t j = 0; j < bloch.size(); ++j) {
                    if (used[j]) continue;
                    const double d = std::abs(raw.values[i] - bloch[j]);
                    if (d < best) { best = d; bj = j; }
                }
                used[bj] = 1;
                worst = std::max(worst, best);
            }
        }
        add("real-space/Bloch spectral equivalence", worst <= 1e-9, worst, 1e-9);
    }

    // --- per-momentum susceptibility equals the closed-form summand
    {
        std::uniform_real_distribution<double> du(0.0, 0.3), dv(0.5, 1.5), dw(0.3, 1.7),
            dk(0.0, 2.0 * std::numbers::pi);
        double worst = 0.0;
        int accepted = 0;
        while (accepted < 10) {
            const double u = du(rng), v = dv(rng), w = dw(rng), k = dk(rng);
            const double exact = detail::ssh_chi0_summand(u, v, w, k);
            if (std::abs(exact) < 0.05 ||
                std::abs(detail::ssh_denominator_core(u, v, w, k)) < 0.05)
                continue;
            ++accepted;
            SshBlochFamily fam(u, v, k);
            const double chi = susceptibility_fd(fam, w, 0).re_chi;
            worst = std::max(worst, std::abs((chi - exact) / exact));
        }
        add("per-momentum chi equals chi0 summand", worst <= 1e-6, worst, 1e-6);
    }

    // --- Hermitian scaling law
    {
        double worst = 0.0;
        for (int n : {11, 51, 101}) {
            const double chi0 = ssh_chi0_density({0.0, 1.0, 1.0, n});
            worst = std::max(worst, std::abs(chi0 - (n - 1) / 16.0) / ((n - 1) / 16.0));
        }
        add("Hermitian critical scaling chi0 = (N-1)/16", worst <= 1e-12, worst, 1e-12);
    }

    return results;
}

} // namespace ephunt
