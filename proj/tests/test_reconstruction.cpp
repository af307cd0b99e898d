#include "doctest_main.hpp"

#include <random>

#include "latscat/reconstruction.hpp"

using namespace latscat;

TEST_CASE("cauchy march") {
    RectDomain dom(2, 3);
    Potential V = Potential::random(dom, -0.5, 0.5, 9);
    const double lambda = 0.3;

    SUBCASE("reproduces the direct solve from its own Cauchy data") {
        std::mt19937_64 rng(4);
        GridFunction f;
        for (const auto& b : dom.boundary()) f.set(b, double(rng() >> 11) * 0x1.0p-53 - 0.5);
        const GridFunction u = dirichlet_solve(dom, V, lambda, f);
        const GridFunction dn = normal_derivative(dom, u);

        GridFunction f_partial, g;
        for (const auto& b : dom.boundary()) {
            if (b[0] != dom.side() + 1) f_partial.set(b, f.at(b));
            if (b[0] == 0) g.set(b, dn.at(b));
        }
        const GridFunction m = cauchy_march(dom, V, lambda, f_partial, g);
        for (const auto& n : dom.interior()) CHECK(std::abs(m.at(n) - u.at(n)) <= 1e-10);
        for (const auto& b : dom.boundary())
            if (b[0] == dom.side() + 1) CHECK(std::abs(m.at(b) - f.at(b)) <= 1e-10);
    }

    SUBCASE("zero data propagates zero") {
        GridFunction fz, gz;
        for (const auto& b : dom.boundary()) {
            if (b[0] != dom.side() + 1) fz.set(b, 0.0);
            if (b[0] == 0) gz.set(b, 0.0);
        }
        const GridFunction u = cauchy_march(dom, V, lambda, fz, gz);
        for (const auto& [n, v] : u.values()) CHECK(std::abs(v) == 0.0);
    }

    SUBCASE("reproduces a discrete-harmonic coordinate function") {
        Potential zero(dom);
        GridFunction f, g;
        for (const auto& b : dom.boundary()) {
            if (b[0] != dom.side() + 1) f.set(b, double(b[0]));
            if (b[0] == 0) g.set(b, -0.25);
        }
        const GridFunction u = cauchy_march(dom, zero, 0.0, f, g);
        for (const auto& n : dom.interior()) CHECK(std::abs(u.at(n) - double(n[0])) <= 1e-13);
    }
}

TEST_CASE("boundary data synthesis") {
    RectDomain dom(2, 1);
    Potential zero(dom);
    const Eigen::MatrixXd dn = interior_dn(dom, zero, 0.0).mat.real();

    // face-to-face block for the unit cell is the scalar -1/16
    const int top = dom.face_indices(0, true)[0];
    const int bottom = dom.face_indices(0, false)[0];
    CHECK(dn(bottom, top) == doctest::Approx(-1.0 / 16.0));

    Eigen::VectorXd f2 = Eigen::VectorXd::Zero(4);
    f2[bottom] = 1.0;
    const Eigen::VectorXd f = synth_boundary_data(dn, dom, f2, Eigen::VectorXd::Zero(4));
    CHECK((dn * f)[bottom] == doctest::Approx(0.0));
    CHECK(f[top] == doctest::Approx(3.0)); // hand value for the unit cell

    // zero data synthesizes zero
    const Eigen::VectorXd z =
        synth_boundary_data(dn, dom, Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4));
    CHECK(z.norm() == 0.0);

    // the D-N image on the bottom face matches the requested Neumann data
    RectDomain big(2, 3);
    Potential V = Potential::random(big, -0.5, 0.5, 31);
    const Eigen::MatrixXd dnb = interior_dn(big, V, 0.3).mat.real();
    std::mt19937_64 rng(6);
    Eigen::VectorXd f2b = Eigen::VectorXd::Zero(big.num_boundary());
    Eigen::VectorXd gb = Eigen::VectorXd::Zero(big.num_boundary());
    for (int i = 0; i < big.num_boundary(); ++i) f2b[i] = double(rng() >> 11) * 0x1.0p-53;
    for (int i : big.face_indices(0, false)) gb[i] = double(rng() >> 11) * 0x1.0p-53;
    const Eigen::VectorXd fb = synth_boundary_data(dnb, big, f2b, gb);
    const Eigen::VectorXd img = dnb * fb;
    for (int i : big.face_indices(0, false)) CHECK(std::abs(img[i] - gb[i]) <= 1e-10);
    for (int i = 0; i < big.num_boundary(); ++i) {
        bool on_top = false;
        for (int t : big.face_indices(0, true)) on_top = on_top || t == i;
        if (!on_top) CHECK(fb[i] == f2b[i]);
    }
}

TEST_CASE("probe data force the alternating diagonal pattern") {
    // Direct oracle: synthesize the sweep's boundary data, solve the Dirichlet
    // problem with the true potential, and confirm the solution really is the
    // alternating +-1 diagonal with zeros below and off the section.
    RectDomain dom(2, 3);
    const double lambda = 0.3;
    Potential V = Potential::random(dom, -0.5, 0.5, 23);
    const Eigen::MatrixXd dn = interior_dn(dom, V, lambda).mat.real();

    for (int p : {6, 5, 4}) {
        const bool bottom = (p == 4);
        const LatticePoint probe = bottom ? LatticePoint{0, 3} : LatticePoint{p - 4, 4};
        Eigen::VectorXd f2 = Eigen::VectorXd::Zero(dom.num_boundary());
        f2[dom.boundary_index(probe)] = 1.0;
        const Eigen::VectorXd f =
            synth_boundary_data(dn, dom, f2, Eigen::VectorXd::Zero(dom.num_boundary()));

        GridFunction fb;
        for (int b = 0; b < dom.num_boundary(); ++b) fb.set(dom.boundary()[size_t(b)], f[b]);
        const GridFunction u = dirichlet_solve(dom, V, lambda, fb);

        for (const auto& n : dom.interior()) {
            const int lv = n[0] + n[1];
            if (lv < p) {
                CHECK(std::abs(u.at(n)) <= 1e-10);
            } else if (lv == p) {
                const int step = n[0] - (p - 4); // position along the diagonal
                const double expect = bottom ? ((step % 2 == 1) ? 1.0 : -1.0)
                                             : ((step % 2 == 1) ? -1.0 : 1.0);
                CHECK(std::abs(u.at(n) - expect) <= 1e-9);
            }
        }
    }
}

TEST_CASE("single sweep recovers an isolated entry") {
    RectDomain dom(2, 2);
    Potential V(dom);
    V.set(LatticePoint{2, 2}, 0.5);
    const Eigen::MatrixXd dn = interior_dn(dom, V, 0.3).mat.real();

    std::map<LatticePoint, double> known;
    const SweepResult sr = sweep_level(dom, dn, 0.3, 4, {}, known);
    REQUIRE(sr.recovered.size() == 1);
    CHECK(sr.recovered[0].first == LatticePoint{2, 2});
    CHECK(std::abs(sr.recovered[0].second - 0.5) <= 1e-9);
    CHECK(sr.neumann_residual <= 1e-10);
    CHECK(sr.pattern_residual <= 1e-10);
}

TEST_CASE("sweeps of the zero potential return zero") {
    RectDomain dom(2, 3);
    Potential zero(dom);
    const Eigen::MatrixXd dn = interior_dn(dom, zero, 0.3).mat.real();
    std::map<LatticePoint, double> known;
    for (int p = 6; p >= 4; --p) {
        const SweepResult sr = sweep_level(dom, dn, 0.3, p, {}, known);
        for (const auto& [n, v] : sr.recovered) {
            CHECK(std::abs(v) <= 1e-10);
            known[n] = v;
        }
    }
}

TEST_CASE("reflection") {
    RectDomain dom(3, 2);
    Potential V = Potential::random(dom, -0.5, 0.5, 13);
    const Eigen::MatrixXd dn = interior_dn(dom, V, 0.4).mat.real();

    CHECK((reflect_dn(reflect_dn(dn, dom), dom) - dn).norm() == 0.0);

    const Eigen::MatrixXd dn_r = interior_dn(dom, reflect_potential(V), 0.4).mat.real();
    CHECK((reflect_dn(dn, dom) - dn_r).norm() <= 1e-12);

    // a reflection-symmetric potential has a reflection-invariant D-N map
    Potential sym(dom);
    for (const auto& n : dom.interior()) {
        const double v = 0.1 * n[0] * n[1]; // not symmetric yet
        sym.set(n, v);
    }
    Potential symmetrized(dom);
    for (const auto& n : dom.interior())
        symmetrized.set(n, 0.5 * (sym.at(n) + sym.at(reflect_point(dom, n))));
    const Eigen::MatrixXd dns = interior_dn(dom, symmetrized, 0.4).mat.real();
    CHECK((reflect_dn(dns, dom) - dns).norm() <= 1e-12);
}

TEST_CASE("round trip at exact data") {
    SUBCASE("d = 2, M = 2") {
        RectDomain dom(2, 2);
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            const Potential V = Potential::random(dom, -0.5, 0.5, seed);
            const Eigen::MatrixXd dn = interior_dn(dom, V, 0.3).mat.real();
            const ReconstructionReport rep = reconstruct(dn, 0.3, 2, 2);
            for (const auto& n : dom.interior())
                worst = std::max(worst, std::abs(rep.potential.at(n) - V.at(n)));
        }
        CHECK(worst <= 1e-7);
    }
    SUBCASE("d = 2, M = 3") {
        RectDomain dom(2, 3);
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            const Potential V = Potential::random(dom, -0.5, 0.5, seed);
            const Eigen::MatrixXd dn = interior_dn(dom, V, 0.3).mat.real();
            const ReconstructionReport rep = reconstruct(dn, 0.3, 2, 3);
            for (const auto& n : dom.interior())
                worst = std::max(worst, std::abs(rep.potential.at(n) - V.at(n)));
            CHECK(rep.max_neumann_residual <= 1e-10);
            CHECK(rep.max_pattern_residual <= 1e-6);
        }
        CHECK(worst <= 1e-7);
    }
    SUBCASE("d = 3, M = 2") {
        RectDomain dom(3, 2);
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            const Potential V = Potential::random(dom, -0.5, 0.5, seed);
            const Eigen::MatrixXd dn = interior_dn(dom, V, 0.4).mat.real();
            const ReconstructionReport rep = reconstruct(dn, 0.4, 3, 2);
            for (const auto& n : dom.interior())
                worst = std::max(worst, std::abs(rep.potential.at(n) - V.at(n)));
        }
        CHECK(worst <= 1e-6);
    }
    SUBCASE("zero potential") {
        RectDomain dom(2, 3);
        const Eigen::MatrixXd dn = interior_dn(dom, Potential(dom), 0.3).mat.real();
        const ReconstructionReport rep = reconstruct(dn, 0.3, 2, 3);
        for (const auto& n : dom.interior()) CHECK(std::abs(rep.potential.at(n)) <= 1e-9);
    }
    SUBCASE("degenerate M = 1 cell") {
        RectDomain dom(2, 1);
        Potential V(dom);
        V.set(LatticePoint{1, 1}, 0.37);
        const Eigen::MatrixXd dn = interior_dn(dom, V, 0.3).mat.real();
        const ReconstructionReport rep = reconstruct(dn, 0.3, 2, 1);
        CHECK(std::abs(rep.potential.at(LatticePoint{1, 1}) - 0.37) <= 1e-12);
    }
    SUBCASE("larger cubes") {
        for (auto [d, M, lam] : {std::tuple<int, int, double>{2, 5, 0.3}, {3, 3, 0.4}}) {
            RectDomain dom(d, M);
            const Potential V = Potential::random(dom, -0.5, 0.5, 77);
            const Eigen::MatrixXd dn = interior_dn(dom, V, lam).mat.real();
            const ReconstructionReport rep = reconstruct(dn, lam, d, M);
            double worst = 0.0;
            for (const auto& n : dom.interior())
                worst = std::max(worst, std::abs(rep.potential.at(n) - V.at(n)));
            CHECK(worst <= 1e-9);
        }
    }
}

TEST_CASE("input validation") {
    RectDomain dom(2, 2);
    Eigen::MatrixXd wrong = Eigen::MatrixXd::Zero(3, 3);
    CHECK_THROWS_AS(reconstruct(wrong, 0.3, 2, 2), validation_error);
    std::map<LatticePoint, double> known;
    const Eigen::MatrixXd dn = interior_dn(dom, Potential(dom), 0.3).mat.real();
    CHECK_THROWS_AS(sweep_level(dom, dn, 0.3, 7, {}, known), validation_error);
}
