#include "doctest_main.hpp"

#include <random>

#include "latscat/dn_maps.hpp"
#include "latscat/scattering.hpp"

using namespace latscat;

TEST_CASE("hamiltonian blocks, hand-assembled unit cell") {
    RectDomain dom(2, 1);
    Potential V(dom);
    const HamiltonianBlocks h = assemble_hamiltonian(dom, V, 0.0);
    CHECK(h.ii(0, 0) == doctest::Approx(1.0));
    CHECK(h.ib.rows() == 1);
    CHECK(h.ib.cols() == 4);
    for (int b = 0; b < 4; ++b) CHECK(h.ib(0, b) == doctest::Approx(-0.25));
    CHECK((h.bb - 0.25 * Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);
    CHECK((h.bi - h.ib.transpose()).norm() == 0.0);

    // independent edge enumeration oracle on a larger domain
    RectDomain big(2, 3);
    Potential Vb = Potential::random(big, -0.5, 0.5, 3);
    const double lambda = 0.27;
    const HamiltonianBlocks hb = assemble_hamiltonian(big, Vb, lambda);
    for (int i = 0; i < big.num_interior(); ++i) {
        const LatticePoint& n = big.interior()[size_t(i)];
        for (int j = 0; j < big.num_interior(); ++j) {
            const LatticePoint& m = big.interior()[size_t(j)];
            const double expect = i == j ? 1.0 + Vb.at(n) - lambda : (n.adjacent(m) ? -0.25 : 0.0);
            CHECK(hb.ii(i, j) == doctest::Approx(expect));
        }
        for (int b = 0; b < big.num_boundary(); ++b) {
            const LatticePoint& m = big.boundary()[size_t(b)];
            CHECK(hb.ib(i, b) == doctest::Approx(n.adjacent(m) ? -0.25 : 0.0));
        }
    }

    // row sums of [H_ii H_ib] equal V - lambda
    const Eigen::VectorXd rows = hb.ii.rowwise().sum() + hb.ib.rowwise().sum();
    for (int i = 0; i < big.num_interior(); ++i)
        CHECK(rows[i] == doctest::Approx(Vb.at(big.interior()[size_t(i)]) - lambda));
}

TEST_CASE("interior D-N map") {
    RectDomain dom(2, 1);
    Potential V(dom);
    const BoundaryOperator lam = interior_dn(dom, V, 0.0);
    const Eigen::MatrixXcd expect =
        0.25 * Eigen::MatrixXcd::Identity(4, 4) - (1.0 / 16.0) * Eigen::MatrixXcd::Ones(4, 4);
    CHECK((lam.mat - expect).norm() <= 1e-14);
    CHECK(lam.mat.rowwise().sum().norm() <= 1e-15); // constants are harmonic with zero flux

    RectDomain dom3(2, 3);
    Potential V3 = Potential::random(dom3, -0.5, 0.5, 21);
    const BoundaryOperator lam3 = interior_dn(dom3, V3, 0.3);
    CHECK((lam3.mat - lam3.mat.transpose()).norm() <= 1e-12);

    // lambda enters only through V - lambda on the interior diagonal
    Potential shifted = V3;
    for (const auto& n : dom3.interior()) shifted.set(n, V3.at(n) - 0.11);
    const BoundaryOperator lam_shift = interior_dn(dom3, shifted, 0.3 - 0.11);
    CHECK((lam3.mat - lam_shift.mat).norm() <= 1e-14);
}

TEST_CASE("interior D-N equals direct solve, all unit data") {
    for (int d = 2; d <= 3; ++d)
        for (int M = 1; M <= 3; ++M) {
            if (d == 3 && M > 2) continue;
            RectDomain dom(d, M);
            Potential V = Potential::random(dom, -0.5, 0.5, 17);
            const double lambda = 0.3;
            const BoundaryOperator lam = interior_dn(dom, V, lambda);
            double worst = 0.0;
            for (int b = 0; b < dom.num_boundary(); ++b) {
                GridFunction f;
                for (int c = 0; c < dom.num_boundary(); ++c)
                    f.set(dom.boundary()[size_t(c)], c == b ? 1.0 : 0.0);
                const GridFunction u = dirichlet_solve(dom, V, lambda, f);
                const GridFunction dn = normal_derivative(dom, u);
                for (int r = 0; r < dom.num_boundary(); ++r)
                    worst = std::max(worst,
                                     std::abs(dn.at(dom.boundary()[size_t(r)]) - lam.mat(r, b)));
            }
            CHECK(worst <= 1e-10);
        }
}

TEST_CASE("dirichlet solve") {
    RectDomain dom(2, 3);
    Potential zero(dom);

    // constant data, zero potential, lambda = 0: u is the same constant
    GridFunction f;
    for (const auto& b : dom.boundary()) f.set(b, 2.5);
    const GridFunction u = dirichlet_solve(dom, zero, 0.0, f);
    for (const auto& n : dom.interior()) CHECK(std::abs(u.at(n) - 2.5) <= 1e-13);

    // interior equation residual
    Potential V = Potential::random(dom, -0.5, 0.5, 77);
    std::mt19937_64 rng(5);
    GridFunction g;
    for (const auto& b : dom.boundary()) g.set(b, double(rng() >> 11) * 0x1.0p-53 - 0.5);
    const GridFunction w = dirichlet_solve(dom, V, 0.3, g);
    for (const auto& n : dom.interior()) {
        Complex r = (0.5 * 2 + V.at(n) - 0.3) * w.at(n);
        for (const auto& m : neighbors(n)) r -= 0.25 * w.at(m);
        CHECK(std::abs(r) <= 1e-12);
    }

    // Locate a Dirichlet eigenvalue of the free 2x2 interior block by scanning
    // det H_ii over lambda: a sign change brackets it at 1/2.
    RectDomain dom2(2, 2);
    Potential z2(dom2);
    auto det_at = [&](double lambda) {
        return assemble_hamiltonian(dom2, z2, lambda).ii.determinant();
    };
    double lo = 0.45, hi = 0.55;
    REQUIRE(det_at(lo) * det_at(hi) < 0.0);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (det_at(lo) * det_at(mid) <= 0.0 ? hi : lo) = mid;
    }
    CHECK(0.5 * (lo + hi) == doctest::Approx(0.5).epsilon(1e-12));

    GridFunction f2;
    for (const auto& b : dom2.boundary()) f2.set(b, 1.0);
    CHECK_THROWS_AS(dirichlet_solve(dom2, z2, 0.5, f2), exceptional_energy_error);
    CHECK_THROWS_AS(interior_dn(dom2, z2, 0.5), exceptional_energy_error);
}

TEST_CASE("shell degree and shift operators") {
    RectDomain d1(2, 1);
    CHECK(deg_tilde(d1).mat.norm() == 0.0);
    CHECK(shift_op(d1).mat.norm() == 0.0);

    RectDomain d3(2, 3);
    const BoundaryOperator dg = deg_tilde(d3);
    const BoundaryOperator sh = shift_op(d3);
    const int i01 = d3.boundary_index(LatticePoint{0, 1});
    const int i02 = d3.boundary_index(LatticePoint{0, 2});
    CHECK(dg.mat(i01, i01).real() >= 0.25);
    CHECK(sh.mat(i01, i02).real() == doctest::Approx(0.25));
    CHECK((sh.mat - sh.mat.transpose()).norm() == 0.0);
}

TEST_CASE("single layer and boundary operator identities") {
    RectDomain dom(2, 2);
    SpectralParam sp(0.3, 2);
    FreeResolvent r0(sp);
    FreeResolvent r0m(sp.conjugated());
    Potential V = Potential::random(dom, -0.5, 0.5, 42);
    const int nb = dom.num_boundary();
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(nb, nb);

    const BoundaryOperator m = single_layer(dom, V, r0);
    SUBCASE("free kernel") {
        Potential zero(dom);
        const BoundaryOperator m0 = single_layer(dom, zero, r0);
        for (int a = 0; a < nb; ++a)
            for (int b = 0; b < nb; ++b)
                CHECK(std::abs(m0.mat(a, b) -
                               r0(dom.boundary()[size_t(a)] - dom.boundary()[size_t(b)])) <= 1e-13);
    }
    SUBCASE("conjugation and symmetry") {
        const BoundaryOperator mm = single_layer(dom, V, r0m);
        CHECK((mm.mat - m.mat.conjugate()).norm() <= 1e-13);
        CHECK((m.mat - m.mat.transpose()).norm() <= 1e-8);
    }
    SUBCASE("inverse pair and adjoint relation") {
        const BoundaryOperator b = boundary_op(dom, V, r0);
        CHECK((m.mat * b.mat - eye).norm() <= 1e-8);
        const BoundaryOperator bm = boundary_op(dom, V, r0m);
        CHECK((b.mat.adjoint() - bm.mat).norm() <= 1e-8);
    }
    SUBCASE("difference identity against the Schur route") {
        const BoundaryOperator b = boundary_op(dom, V, r0);
        Potential zero(dom);
        const BoundaryOperator b0 = boundary_op(dom, zero, r0);
        const BoundaryOperator lam = interior_dn(dom, V, 0.3);
        const BoundaryOperator lam0 = interior_dn(dom, zero, 0.3);
        CHECK(((b.mat - b0.mat) - (lam.mat - lam0.mat)).norm() <= 1e-7);
    }
}

TEST_CASE("exterior D-N map") {
    RectDomain dom(2, 2);
    SpectralParam sp(0.3, 2);
    FreeResolvent r0(sp);
    FreeResolvent r0m(sp.conjugated());
    const BoundaryOperator ext = exterior_dn(dom, r0);
    const int nb = dom.num_boundary();
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(nb, nb);

    // closure: assembling B from Lambda_V and this Lambda_ext reproduces the
    // single-layer inverse for an arbitrary potential
    Potential V = Potential::random(dom, -0.5, 0.5, 8);
    const BoundaryOperator lam = interior_dn(dom, V, 0.3);
    const BoundaryOperator dg = deg_tilde(dom);
    const BoundaryOperator sh = shift_op(dom);
    const Eigen::MatrixXcd b_assembled = lam.mat - ext.mat - 0.3 * eye + dg.mat - sh.mat;
    const BoundaryOperator b = boundary_op(dom, V, r0);
    CHECK((b_assembled - b.mat).norm() <= 1e-7);

    const BoundaryOperator extm = exterior_dn(dom, r0m);
    CHECK((ext.mat.adjoint() - extm.mat).norm() <= 1e-8);
    CHECK(ext.mat.imag().norm() > 1e-3); // outgoing leakage
}
