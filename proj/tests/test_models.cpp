#include <catch2/catch_amalgamated.hpp>

#include "ephunt/models.hpp"

using namespace ephunt;

TEST_CASE("toy Hamiltonian layout and exact susceptibility") {
    const Matrix h = toy_hamiltonian<double>(0.7);
    REQUIRE(h(0, 0) == Complex(0, 0.7));
    REQUIRE(h(1, 1) == Complex(0, -0.7));
    REQUIRE(h(0, 1) == Complex(1, 0));
    REQUIRE(toy_chi_exact({0.0}) == -0.25);
    REQUIRE(std::abs(toy_chi_exact({3.0}) - (-1.0 / 256.0)) < 1e-16);
    REQUIRE_THROWS_AS(toy_chi_exact({1.0}), AtExceptionalPoint);
    REQUIRE_THROWS_AS(toy_metric_exact({-1.0}), AtExceptionalPoint);
}

TEST_CASE("toy family gap branch vanishes exactly at the EPs") {
    ToyFamily f;
    REQUIRE(f.gap_branches(1.0)[0] == 0.0);
    REQUIRE(f.gap_branches(0.0)[0] == 1.0);
    REQUIRE(f.min_band_gap(0.0) == 2.0);
}

TEST_CASE("Bloch block and band formula") {
    const SshParams p{0.1, 1.0, 1.2, 8};
    const double k = 0.7;
    auto b = ssh_bloch(p, k);
    REQUIRE(std::abs(b.xi - (p.v + p.w * std::exp(Complex(0, 1) * k))) < 1e-15);
    auto raw = eig_general<double>(b.block);
    REQUIRE(std::abs(raw.values[0] - b.bands.first) < 1e-12);
    REQUIRE(std::abs(raw.values[1] - b.bands.second) < 1e-12);
}

TEST_CASE("real-space chain structure") {
    const SshParams p{0.2, 1.0, 0.8, 4};
    const Matrix h = ssh_realspace(p);
    REQUIRE(h.rows() == 8);
    REQUIRE(h(0, 0) == Complex(0, 0.2));
    REQUIRE(h(1, 1) == Complex(0, -0.2));
    REQUIRE(h(0, 1) == Complex(1.0, 0));  // intra-cell
    REQUIRE(h(1, 2) == Complex(0.8, 0));  // inter-cell
    REQUIRE(h(7, 0) == Complex(0.8, 0));  // periodic wrap
    REQUIRE(h(0, 2) == Complex(0, 0));
}

TEST_CASE("parameter validation") {
    REQUIRE_THROWS_AS(ssh_realspace({-0.1, 1.0, 1.0, 4}), InvalidSpec);
    REQUIRE_THROWS_AS(ssh_realspace({0.1, 1.0, 1.0, 1}), InvalidSpec);
    REQUIRE_THROWS_AS(SshChainFamily(0.1, 1.0, 1), InvalidSpec);
}

TEST_CASE("chi0 density: Hermitian critical values") {
    // (N - 1)/16 at u = 0, v = w = 1, odd N
    REQUIRE(std::abs(ssh_chi0_density({0.0, 1.0, 1.0, 101}) / 6.25 - 1.0) < 1e-10);
    REQUIRE(std::abs(ssh_chi0_density({0.0, 1.0, 1.0, 11}) / 0.625 - 1.0) < 1e-10);
}

TEST_CASE("chi0 density: even N at the critical point is an exact band touching") {
    REQUIRE_THROWS_AS(ssh_chi0_density({0.0, 1.0, 1.0, 10}), AtExceptionalPoint);
}

TEST_CASE("chi0 density: summand consistency") {
    const SshParams p{0.05, 1.0, 1.1, 7};
    double sum = 0.0;
    for (int m = 0; m < p.n_cells; ++m)
        sum += detail::ssh_chi0_summand(p.u, p.v, p.w,
                                        2.0 * std::numbers::pi * m / p.n_cells);
    REQUIRE(std::abs(ssh_chi0_density(p) - sum / p.n_cells) < 1e-14);
}

TEST_CASE("finite-N EP locations from the quadratic roots") {
    auto roots = ssh_ep_locations(0.1, 1.0, 101);
    REQUIRE(roots.size() == 4);
    const double expect[] = {0.904475, 0.959350, 1.031948, 1.094557};
    for (std::size_t i = 0; i < 4; ++i)
        REQUIRE(std::abs(roots[i].w - expect[i]) < 1e-6);
    for (const auto& r : roots) REQUIRE(r.multiplicity == 2);

    auto roots4 = ssh_ep_locations(0.04, 1.0, 101);
    REQUIRE(roots4.size() == 2);
    REQUIRE(std::abs(roots4[0].w - 0.974361) < 1e-6);
    REQUIRE(std::abs(roots4[1].w - 1.024672) < 1e-6);
}

TEST_CASE("EP onset threshold u = v sin(pi/N)") {
    const double threshold = 1.0 * std::sin(std::numbers::pi / 101); // ~0.0310999
    REQUIRE(ssh_ep_locations(threshold * 0.999, 1.0, 101).empty());
    REQUIRE_FALSE(ssh_ep_locations(threshold * 1.001, 1.0, 101).empty());
    REQUIRE(ssh_ep_locations(0.03, 1.0, 101).empty());
    REQUIRE(ssh_ep_locations(0.032, 1.0, 101).size() == 2);
}

TEST_CASE("phase classification") {
    REQUIRE(ssh_phase(0.1, 1.0, 1.2) == SshPhase::PtSymmetricTopological);
    REQUIRE(ssh_phase(0.1, 1.0, 0.8) == SshPhase::PtSymmetricTrivial);
    REQUIRE(ssh_phase(0.1, 1.0, 1.0) == SshPhase::PtBroken);
    REQUIRE(ssh_phase(0.1, 1.0, 1.1) == SshPhase::Boundary);
    REQUIRE(std::string(to_string(SshPhase::PtBroken)) == "pt-broken");
}

TEST_CASE("chain family gap branches vanish exactly at the EP roots") {
    SshChainFamily fam(0.1, 1.0, 101);
    auto roots = ssh_ep_locations(0.1, 1.0, 101);
    for (const auto& r : roots) {
        double best = std::numeric_limits<double>::infinity();
        for (double b : fam.gap_branches(r.w)) best = std::min(best, std::abs(b));
        REQUIRE(best < 1e-12);
    }
}

TEST_CASE("Bloch family matrix matches the standalone constructor") {
    SshBlochFamily fam(0.1, 1.0, 0.7);
    const Matrix a = fam.matrix(1.3);
    const Matrix b = ssh_bloch_matrix<double>(0.1, 1.0, 1.3, 0.7);
    REQUIRE((a - b).cwiseAbs().maxCoeff() == 0.0);
}
