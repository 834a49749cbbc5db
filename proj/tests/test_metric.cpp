#include <catch2/catch_amalgamated.hpp>

#include "ephunt/metric.hpp"
#include "ephunt/models.hpp"

using namespace ephunt;

namespace {

BiorthogonalSystem solve(const Matrix& h) {
    return biorthogonalize<double>(eig_general<double>(h));
}

} // namespace

TEST_CASE("unbroken-region metric matches the closed form") {
    // G = (1/cos a) [[1, -i sin a], [i sin a, 1]], sin a = r
    for (double r : {0.0, 0.3, 0.6, 0.9}) {
        const Matrix g = build_metric<double>(solve(toy_hamiltonian<double>(r))).g;
        const Matrix exact = toy_metric_exact({r}).g;
        REQUIRE((g - exact).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("broken-region breathing metric matches the closed form") {
    for (double r : {1.5, 2.0}) {
        auto sys = solve(toy_hamiltonian<double>(r));
        for (double t : {0.0, 0.3, 1.0}) {
            const Matrix g = evolve_metric<double>(sys, t).g;
            const Matrix exact = toy_metric_exact({r}, t).g;
            REQUIRE((g - exact).cwiseAbs().maxCoeff() / exact.norm() < 1e-13);
        }
    }
}

TEST_CASE("metric is Hermitian positive definite away from EPs") {
    for (double r : {0.0, 0.5, 0.95, 1.5, 3.0}) {
        const Matrix g = build_metric<double>(solve(toy_hamiltonian<double>(r))).g;
        REQUIRE(is_valid_metric<double>(g));
        REQUIRE(metric_smallest_eigenvalue<double>(g) > 0.0);
    }
}

TEST_CASE("is_valid_metric rejects non-Hermitian and indefinite input") {
    Matrix bad(2, 2);
    bad << 1, Complex(0.5, 0.2), Complex(0.1, 0.0), 1; // not Hermitian
    REQUIRE_FALSE(is_valid_metric<double>(bad));
    Matrix indef(2, 2);
    indef << 1, 0, 0, -1;
    REQUIRE_FALSE(is_valid_metric<double>(indef));
}

TEST_CASE("metric evolution satisfies the equation of motion") {
    const Matrix h = toy_hamiltonian<double>(2.0);
    auto sys = solve(h);
    const double dt = 1e-5;
    for (double t : {0.0, 0.4, 1.2}) {
        auto g = evolve_metric<double>(sys, t);
        const Matrix dg = (evolve_metric<double>(sys, t + dt).g -
                           evolve_metric<double>(sys, t - dt).g) /
                          (2.0 * dt);
        REQUIRE(eom_residual<double>(g, dg, h) < 1e-8);
    }
}

TEST_CASE("metric is static in the PT-unbroken region") {
    auto sys = solve(toy_hamiltonian<double>(0.7));
    const Matrix g0 = evolve_metric<double>(sys, 0.0).g;
    const Matrix g1 = evolve_metric<double>(sys, 3.0).g;
    REQUIRE((g1 - g0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("provenance tags") {
    auto sys = solve(toy_hamiltonian<double>(0.7));
    REQUIRE(build_metric<double>(sys).provenance == MetricProvenance::GaugeEq2);
    REQUIRE(evolve_metric<double>(sys, 0.0).provenance == MetricProvenance::GaugeEq2);
    REQUIRE(evolve_metric<double>(sys, 0.5).provenance == MetricProvenance::Evolved);
    REQUIRE(std::string(to_string(MetricProvenance::Evolved)) == "evolved");
}

TEST_CASE("right eigenstates are G-orthonormal") {
    auto sys = solve(toy_hamiltonian<double>(0.8));
    auto g = build_metric<double>(sys);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) {
            const Complex x = metric_inner<double>(g, sys.right(i), sys.right(j));
            REQUIRE(std::abs(x - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
}

TEST_CASE("metric reduces to the identity for Hermitian H") {
    Matrix h(2, 2);
    h << 1, Complex(0, -2), Complex(0, 2), -1;
    const Matrix g = build_metric<double>(solve(h)).g;
    REQUIRE((g - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eom_residual validates shapes") {
    auto sys = solve(toy_hamiltonian<double>(0.5));
    auto g = build_metric<double>(sys);
    const Matrix h3 = Matrix::Identity(3, 3);
    REQUIRE_THROWS_AS(eom_residual<double>(g, Matrix::Zero(3, 3), h3), DimensionMismatch);
    REQUIRE_THROWS_AS(metric_inner<double>(g, Vector::Zero(3), Vector::Zero(2)),
                      DimensionMismatch);
}
