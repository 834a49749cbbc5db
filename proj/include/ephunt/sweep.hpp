#pragma once

// Parameter sweeps, susceptibility curves, EP detection via the
// Re chi -> -infinity criterion, and finite-size scaling at the
// Hermitian SSH critical point.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ephunt/fidelity.hpp"
#include "ephunt/models.hpp"

namespace ephunt {

enum class SampleStatus { Ok, NearEp, SkippedAtEp };

inline const char* to_string(SampleStatus s) {
    switch (s) {
        case SampleStatus::Ok: return "ok";
        case SampleStatus::NearEp: return "near-ep";
        case SampleStatus::SkippedAtEp: return "skipped-at-ep";
    }
    return "?";
}

struct SweepSpec {
    std::vector<double> grid; // strictly increasing, >= 2 points
    Eigen::Index band = 0;
    double epsilon = 1e-4;
    bool richardson = true;
    bool symmetric = false;
    int threads = 1;

    void validate() const {
        if (grid.size() < 2) throw InvalidSpec("SweepSpec: grid needs >= 2 points");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1]))
                throw InvalidSpec("SweepSpec: grid must be strictly increasing");
        if (!(epsilon > 0)) throw InvalidSpec("SweepSpec: epsilon must be > 0");
    }

    static std::vector<double> make_grid(double lo, double hi, double step) {
        std::vector<double> g;
        if (!(step > 0) || hi < lo) return g;
        const long n = std::lround((hi - lo) / step);
        for (long i = 0; i <= n; ++i) {
            const double x = lo + i * step;
            if (x <= hi + 0.5 * step) g.push_back(x);
        }
        return g;
    }
};

struct CurveSample {
    double lambda = 0.0;
    Complex f;       // generalized fidelity at (lambda, lambda + eps)
    Complex chi;
    double rigidity = 1.0;           // tracked band, at lambda
    SampleStatus status = SampleStatus::Ok;
    bool f_exceeds_one = false;      // |F| > 1: geometric phase change candidate
};

struct SusceptibilityCurve {
    std::vector<CurveSample> samples;
};

namespace detail {

// Ordered concurrent map over [0, n): results land in index order no
// matter how the chunks are scheduled.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const int nt = std::min<int>(threads, static_cast<int>(n));
    std::vector<std::thread> pool;
    std::atomic<std::size_t> cursor{0};
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace detail

/// Evaluate the susceptibility of one tracked band across the grid.
/// Eigensolves run concurrently; band tracking is a sequential pass over
/// the per-point eigensystems. At-EP failures are recorded per sample,
/// never aborting the sweep.
inline SusceptibilityCurve run_sweep(const HamiltonianFamily& family, const SweepSpec& spec) {
    spec.validate();
    const std::size_t n = spec.grid.size();

    // concurrent eigensolve pass
    std::vector<std::optional<BiorthogonalSystem>> systems(n);
    detail::parallel_for(n, spec.threads, [&](std::size_t i) {
        try {
            systems[i] = biorthogonalize<double>(eig_general<double>(family.matrix(spec.grid[i])));
        } catch (const AtExceptionalPoint&) {
            systems[i] = std::nullopt;
        }
    });

    // sequential tracking pass: carry the band index across grid points
    std::vector<Eigen::Index> band_at(n, spec.band);
    Eigen::Index current = spec.band;
    const BiorthogonalSystem* prev = nullptr;
    for (std::size_t i = 0; i < n; ++i) {
        if (!systems[i]) { band_at[i] = current; continue; }
        if (prev) {
            try {
                auto m = match_states<double>(*prev, *systems[i]);
                current = m.permutation[static_cast<std::size_t>(current)];
            } catch (const AmbiguousMatching&) {
                // continuation across an EP is genuinely ambiguous;
                // restart tracking at the canonical band index
                current = spec.band;
            }
        }
        band_at[i] = current;
        prev = &*systems[i];
    }

    // concurrent susceptibility pass
    SusceptibilityCurve curve;
    curve.samples.resize(n);
    detail::parallel_for(n, spec.threads, [&](std::size_t i) {
        CurveSample s;
        s.lambda = spec.grid[i];
        if (!systems[i]) {
            s.status = SampleStatus::SkippedAtEp;
            s.rigidity = 0.0;
            curve.samples[i] = s;
            return;
        }
        const auto& sys = *systems[i];
        s.rigidity = sys.rigidities[static_cast<std::size_t>(band_at[i])];
        try {
            auto chi = susceptibility_fd(family, s.lambda, band_at[i], spec.epsilon,
                                         spec.richardson, spec.symmetric);
            s.chi = chi.chi;
            s.f = Complex(1, 0) - chi.chi * spec.epsilon * spec.epsilon;
            s.f_exceeds_one = std::abs(s.f) > 1.0;
            s.status = s.rigidity < kRigiditySoftTol ? SampleStatus::NearEp : SampleStatus::Ok;
        } catch (const AtExceptionalPoint&) {
            s.status = SampleStatus::SkippedAtEp;
        } catch (const StepTooLarge&) {
            s.status = SampleStatus::NearEp;
            s.chi = Complex(std::numeric_limits<double>::quiet_NaN(), 0);
        }
        curve.samples[i] = s;
    });
    return curve;
}

struct EpCandidate {
    double lambda_ep = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double min_band_gap = 0.0;
    double divergence_fit_exponent = 0.0; // diagnostic only
    std::string evidence;
};

struct EPReport {
    std::vector<EpCandidate> candidates;
};

namespace detail {

// Bisection on a signed gap branch to |hi - lo| < 1e-10.
inline double bisect_branch(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo <= 0) == (fm <= 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Least-squares slope of log(-Re chi) against -log|lambda - lambda_ep|
// over the approach-side samples.
inline double fit_divergence_exponent(const SusceptibilityCurve& curve, double lambda_ep,
                                      double threshold) {
    std::vector<double> x, y;
    for (const auto& s : curve.samples) {
        if (s.status == SampleStatus::SkippedAtEp || !(s.chi.real() < -threshold)) continue;
        const double d = std::abs(s.lambda - lambda_ep);
        if (d < 1e-12) continue;
        x.push_back(-std::log(d));
        y.push_back(std::log(-s.chi.real()));
    }
    if (x.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double n = static_cast<double>(x.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace detail

/// Locate EPs on a swept curve. Candidate positions come from sign
/// changes of the model's gap branches, refined by bisection to a
/// 1e-10 bracket; each candidate must be corroborated by the curve:
/// Re chi below the (grid-adaptive) divergence threshold and negative at
/// the adjacent grid points. The fitted divergence exponent is reported
/// as a diagnostic, never used for gating.
inline EPReport detect_eps(const SusceptibilityCurve& curve, const HamiltonianFamily& model,
                           double threshold = 1e3) {
    EPReport report;
    if (curve.samples.size() < 2) return report;
    const double lo = curve.samples.front().lambda;
    const double hi = curve.samples.back().lambda;

    // grid-adaptive escalation: relative gating against the typical scale
    std::vector<double> mags;
    for (const auto& s : curve.samples)
        if (s.status != SampleStatus::SkippedAtEp && std::isfinite(s.chi.real()))
            mags.push_back(std::abs(s.chi.real()));
    double median = 0.0;
    if (!mags.empty()) {
        std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
        median = mags[mags.size() / 2];
    }
    const double eff_threshold = std::max(threshold, 50.0 * median);

    const std::size_t n_branch = model.gap_branches(lo).size();
    std::vector<double> roots;
    for (std::size_t b = 0; b < n_branch; ++b) {
        auto branch = [&](double lam) { return model.gap_branches(lam)[b]; };
        for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i) {
            const double a = curve.samples[i].lambda, c = curve.samples[i + 1].lambda;
            const double fa = branch(a), fc = branch(c);
            if ((fa <= 0) != (fc <= 0))
                roots.push_back(detail::bisect_branch(branch, a, c));
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                roots.end());

    for (double root : roots) {
        // corroborate against the curve: nearest samples on each side
        const auto& ss = curve.samples;
        std::size_t right = 0;
        while (right < ss.size() && ss[right].lambda < root) ++right;
        const auto usable = [&](std::size_t j) {
            return ss[j].status != SampleStatus::SkippedAtEp && std::isfinite(ss[j].chi.real());
        };
        // nearest usable sample on each side, walking outward past skips
        const CurveSample* adj[2] = {nullptr, nullptr};
        for (std::size_t j = right; j-- > 0;)
            if (usable(j)) { adj[0] = &ss[j]; break; }
        for (std::size_t j = right; j < ss.size(); ++j)
            if (usable(j)) { adj[1] = &ss[j]; break; }
        bool neg_adjacent = true;
        double worst = 0.0;
        for (const CurveSample* s : adj) {
            if (!s) continue;
            if (!(s->chi.real() < 0)) neg_adjacent = false;
            worst = std::min(worst, s->chi.real());
        }
        if (!neg_adjacent || !(worst < -eff_threshold)) continue;

        EpCandidate cand;
        cand.lambda_ep = root;
        cand.bracket_lo = root - 5e-11;
        cand.bracket_hi = root + 5e-11;
        cand.min_band_gap = model.min_band_gap(root);
        cand.divergence_fit_exponent =
            detail::fit_divergence_exponent(curve, root, eff_threshold);
        cand.evidence = "Re chi < " + std::to_string(-eff_threshold) +
                        " adjacent to the refined gap root (min " +
                        std::to_string(worst) + ")";
        report.candidates.push_back(cand);
    }
    return report;
}

struct ScalingPoint {
    int n = 0;
    double chi0 = 0.0;
};

struct ScalingFit {
    std::vector<ScalingPoint> points;
    double slope = 0.0;      // chi0 ~ slope * (N - 1) + intercept
    double intercept = 0.0;
    double max_residual = 0.0;
    bool fitted = false;
};

/// chi0(N) at the Hermitian critical point u = 0, w = v, with a linear
/// fit in (N - 1). Even N hits the k = pi divergence and is rejected.
inline ScalingFit scaling_run(double v, const std::vector<int>& n_list) {
    ScalingFit fit;
    for (int n : n_list) {
        if (n % 2 == 0)
            throw EvenNRejected("scaling_run: even N = " + std::to_string(n) +
                                " diverges at k = pi");
        fit.points.push_back({n, ssh_chi0_density({0.0, v, v, n})});
    }
    if (fit.points.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& p : fit.points) {
            const double x = p.n - 1;
            sx += x; sy += p.chi0; sxx += x * x; sxy += x * p.chi0;
        }
        const double m = static_cast<double>(fit.points.size());
        fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        fit.intercept = (sy - fit.slope * sx) / m;
        for (const auto& p : fit.points)
            fit.max_residual = std::max(
                fit.max_residual,
                std::abs(p.chi0 - fit.slope * (p.n - 1) - fit.intercept));
        fit.fitted = true;
    }
    return fit;
}

} // namespace ephunt
