#include <catch2/catch_amalgamated.hpp>

#include "ephunt/fidelity.hpp"
#include "ephunt/models.hpp"

using namespace ephunt;

namespace {

BiorthogonalSystem solve(const Matrix& h) {
    return biorthogonalize<double>(eig_general<double>(h));
}

} // namespace

TEST_CASE("metric and biorthogonal fidelity forms agree") {
    const double r = 0.4, eps = 1e-3;
    auto s1 = solve(toy_hamiltonian<double>(r));
    auto s2 = solve(toy_hamiltonian<double>(r + eps));
    auto g1 = build_metric<double>(s1);
    auto g2 = build_metric<double>(s2);
    for (Eigen::Index band = 0; band < 2; ++band) {
        const Complex fm = fidelity_metric(s1.right(band), g1, s2.right(band), g2).f;
        const Complex fb =
            fidelity_biortho(s1.left(band), s1.right(band), s2.left(band), s2.right(band)).f;
        REQUIRE(std::abs(fm - fb) < 1e-12);
    }
}

TEST_CASE("fidelity of a state with itself is exactly 1") {
    auto s = solve(toy_hamiltonian<double>(0.6));
    auto g = build_metric<double>(s);
    const Complex f = fidelity_metric(s.right(0), g, s.right(0), g).f;
    REQUIRE(std::abs(f - Complex(1, 0)) < 1e-13);
}

TEST_CASE("normalization gates") {
    auto s = solve(toy_hamiltonian<double>(0.6));
    auto g = build_metric<double>(s);
    REQUIRE_THROWS_AS(fidelity_metric(2.0 * s.right(0), g, s.right(1), g), NotNormalized);
    REQUIRE_THROWS_AS(
        fidelity_biortho(s.left(0), 2.0 * s.right(0), s.left(1), s.right(1)),
        NotBiorthonormal);
}

TEST_CASE("one_minus_fidelity is gauge invariant and consistent with F") {
    const double r = 0.3, eps = 1e-2;
    auto s1 = solve(toy_hamiltonian<double>(r));
    auto s2 = solve(toy_hamiltonian<double>(r + eps));
    const Complex f =
        fidelity_biortho(s1.left(0), s1.right(0), s2.left(0), s2.right(0)).f;
    const Complex omf = detail::one_minus_fidelity<double>(s1.left(0), s1.right(0),
                                                           s2.left(0), s2.right(0));
    REQUIRE(std::abs((Complex(1, 0) - f) - omf) < 1e-12);
    // re-gauge the second pair: F must not move
    const Complex c = std::polar(1.0, 1.234);
    const Complex omf2 = detail::one_minus_fidelity<double>(
        s1.left(0), s1.right(0), Vector(c * s2.left(0)), Vector(s2.right(0) / c));
    REQUIRE(std::abs(omf - omf2) < 1e-12);
}

TEST_CASE("finite-difference susceptibility reproduces the toy law") {
    ToyFamily toy;
    for (double r : {0.0, 0.3, -0.5, 0.7, -0.9, 1.5, -3.0}) {
        const auto res = susceptibility_fd(toy, r, 0);
        const double exact = toy_chi_exact({r});
        REQUIRE(std::abs((res.re_chi - exact) / exact) < 1e-5);
        REQUIRE(res.richardson);
        REQUIRE(res.epsilon_used == 1e-4);
    }
}

TEST_CASE("susceptibility is band independent for the toy model") {
    ToyFamily toy;
    const auto a = susceptibility_fd(toy, 0.4, 0);
    const auto b = susceptibility_fd(toy, 0.4, 1);
    REQUIRE(std::abs(a.re_chi - b.re_chi) < 1e-8 * std::abs(a.re_chi));
}

TEST_CASE("Richardson extrapolation improves convergence order") {
    // plain one-sided error drops ~10x per eps decade, extrapolated ~100x
    ToyFamily toy;
    const double r = 0.3, exact = toy_chi_exact({r});
    const auto err = [&](double eps, bool rich) {
        return std::abs(susceptibility_fd(toy, r, 0, eps, rich).re_chi - exact);
    };
    const double plain_ratio = err(1e-2, false) / err(1e-3, false);
    const double rich_ratio = err(1e-2, true) / err(1e-3, true);
    REQUIRE(plain_ratio > 5.0);
    REQUIRE(plain_ratio < 20.0);
    REQUIRE(rich_ratio > 50.0);
    REQUIRE(rich_ratio < 200.0);
}

TEST_CASE("symmetric stencil variant also converges to the law") {
    ToyFamily toy;
    const double exact = toy_chi_exact({0.5});
    const auto res = susceptibility_fd(toy, 0.5, 0, 1e-4, true, /*symmetric=*/true);
    REQUIRE(std::abs((res.re_chi - exact) / exact) < 1e-5);
}

TEST_CASE("step across the EP is rejected") {
    ToyFamily toy;
    REQUIRE_THROWS_AS(susceptibility_fd(toy, 0.99999, 0, 0.5, false), StepTooLarge);
}

TEST_CASE("invalid arguments") {
    ToyFamily toy;
    REQUIRE_THROWS_AS(susceptibility_fd(toy, 0.3, 5), InvalidSpec);
    REQUIRE_THROWS_AS(susceptibility_fd(toy, 0.3, 0, -1e-4), InvalidSpec);
}

TEST_CASE("evaluation at the EP itself raises AtExceptionalPoint") {
    ToyFamily toy;
    REQUIRE_THROWS_AS(susceptibility_fd(toy, 1.0, 0), AtExceptionalPoint);
}

TEST_CASE("fidelity is invariant under time evolution") {
    ToyFamily toy;
    for (double r : {0.5, 2.0}) {
        const double dev = fidelity_time_invariance_check(toy, r, 1e-3, {0.0, 0.5, 1.0, 2.0});
        REQUIRE(dev < 1e-6);
    }
}
