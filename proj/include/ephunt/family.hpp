#pragma once

// One-parameter Hamiltonian families H(lambda). The susceptibility
// estimator evaluates the family in long double: the fidelity deviates
// from 1 only at order eps^2, and double rounding in the matrix entries
// would otherwise dominate the finite-difference signal.

#include <functional>
#include <memory>
#include <vector>

#include "ephunt/linalg.hpp"

namespace ephunt {

class HamiltonianFamily {
public:
    virtual ~HamiltonianFamily() = default;

    virtual Eigen::Index dim() const = 0;
    virtual Mat<double> matrix(double lambda) const = 0;
    virtual Mat<long double> matrix_hp(long double lambda) const = 0;

    // Signed band-gap branches: smooth functions of lambda that vanish
    // (with a sign change) exactly where a pair of bands touches. Empty
    // when the model has no analytic branch structure.
    virtual std::vector<double> gap_branches(double /*lambda*/) const { return {}; }

    /// min_{i != j} |E_i - E_j| from a full eigensolve.
    virtual double min_band_gap(double lambda) const {
        auto raw = eig_general<double>(matrix(lambda));
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < raw.dim(); ++i)
            for (Eigen::Index j = i + 1; j < raw.dim(); ++j)
                best = std::min(best, std::abs(raw.values[i] - raw.values[j]));
        return best;
    }
};

/// H(lambda) = H0 + lambda*H1 with double-precision coefficient matrices.
class LinearFamily final : public HamiltonianFamily {
public:
    LinearFamily(Matrix h0, Matrix h1) : h0_(std::move(h0)), h1_(std::move(h1)) {
        if (h0_.rows() != h0_.cols() || h0_.rows() != h1_.rows() || h1_.rows() != h1_.cols())
            throw DimensionMismatch("LinearFamily: square matrices of equal dim required");
    }

    Eigen::Index dim() const override { return h0_.rows(); }

    Mat<double> matrix(double lambda) const override { return h0_ + lambda * h1_; }

    Mat<long double> matrix_hp(long double lambda) const override {
        return h0_.cast<Cplx<long double>>() + lambda * h1_.cast<Cplx<long double>>();
    }

private:
    Matrix h0_, h1_;
};

} // namespace ephunt
