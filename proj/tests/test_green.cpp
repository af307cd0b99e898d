#include "doctest_main.hpp"

#include <cmath>

#include "latscat/green.hpp"
#include "latscat/serialization.hpp"

using namespace latscat;

namespace {

std::vector<LatticePoint> ball_offsets(int d, double radius) {
    std::vector<LatticePoint> out;
    const int r = int(std::ceil(radius));
    std::vector<int> cur(size_t(d), -r);
    while (true) {
        LatticePoint k(cur);
        if (k.norm() <= radius + 1e-9) out.push_back(k);
        int t = 0;
        for (; t < d; ++t) {
            if (++cur[size_t(t)] <= r) break;
            cur[size_t(t)] = -r;
        }
        if (t == d) break;
    }
    return out;
}

} // namespace

TEST_CASE("kernel identity, d = 2 reduction") {
    SpectralParam sp(0.3, 2);
    FreeResolvent r0(sp);
    const GreenTable t = r0.table(ball_offsets(2, 7.0));
    CHECK(r0_defect(t) <= 1e-9);

    // single offsets: (H0 - lambda) r0 = delta entrywise
    auto defect_at = [&](const LatticePoint& k) {
        Complex s = (0.5 * 2 - 0.3) * r0(k);
        for (int j = 0; j < 2; ++j) s -= 0.25 * (r0(k.shifted(j, 1)) + r0(k.shifted(j, -1)));
        if (k.cube_radius() == 0) s -= 1.0;
        return std::abs(s);
    };
    CHECK(defect_at(LatticePoint{0, 0}) <= 1e-9);
    CHECK(defect_at(LatticePoint{3, 2}) <= 1e-9);
}

TEST_CASE("kernel identity, d = 3 extrapolation and minus sign") {
    SpectralParam sp(0.4, 3);
    FreeResolvent r0(sp);
    const GreenTable t = r0.table(ball_offsets(3, 3.0));
    CHECK(r0_defect(t) <= 1e-4);

    FreeResolvent r0m(sp.conjugated());
    const GreenTable tm = r0m.table(ball_offsets(3, 3.0));
    CHECK(r0_defect(tm) <= 1e-4);
    for (const auto& [k, v] : t.values) CHECK(std::abs(std::conj(v) - tm.at(k)) == 0.0);
}

TEST_CASE("evenness and permutation symmetry by construction") {
    SpectralParam sp(0.3, 2);
    FreeResolvent r0(sp);
    CHECK(r0(LatticePoint{3, -2}) == r0(LatticePoint{2, 3}));
    CHECK(r0(LatticePoint{-3, -2}) == r0(LatticePoint{3, 2}));
}

TEST_CASE("cross-method agreement, d = 2") {
    for (double lam : {0.2, 0.3, 0.45}) {
        SpectralParam sp(lam, 2);
        FreeResolvent red(sp, 1e-10, GreenMethod::Reduction1D);
        FreeResolvent eps(sp, 1e-6, GreenMethod::EpsExtrapolation);
        double worst = 0.0;
        for (int a = 0; a <= 10; ++a)
            for (int b = 0; b <= a; ++b) {
                if (a * a + b * b > 100) continue;
                const LatticePoint k{a, b};
                worst = std::max(worst, std::abs(red(k) - eps(k)));
            }
        CHECK(worst <= 1e-5);
    }
}

TEST_CASE("far-field asymptotics") {
    SpectralParam sp(0.3, 2);
    FreeResolvent r0(sp);

    // relative error against the leading term decays like 1/|k|
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int t = 10; t <= 80; t += 5) {
        const LatticePoint k{t, 0};
        const double rel = std::abs(r0(k) - r0_asymptotic(sp, k)) / std::abs(r0_asymptotic(sp, k));
        const double lx = std::log(double(t)), ly = std::log(rel);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.3));

    // phase at omega = e1 uses the stationary point (2 asin sqrt(lambda), 0)
    const LatticePoint k{25, 0};
    const Complex a = r0_asymptotic(sp, k);
    const double xs = 2.0 * std::asin(std::sqrt(0.3));
    const Complex phase = Complex(0, 1) * std::exp(Complex(0.0, 25.0 * xs - 0.25 * 3.14159265358979323846));
    CHECK(std::abs(a / std::abs(a) - phase / std::abs(phase)) <= 1e-9);

    // evenness of the leading term
    CHECK(std::abs(r0_asymptotic(sp, LatticePoint{7, -4}) -
                   r0_asymptotic(sp, LatticePoint{-7, 4})) <= 1e-12);

    // conjugation between boundary values
    SpectralParam spm = sp.conjugated();
    CHECK(std::abs(r0_asymptotic(spm, k) - std::conj(r0_asymptotic(sp, k))) <= 1e-12);
}

TEST_CASE("table serialization and cache preload") {
    SpectralParam sp(0.3, 2);
    FreeResolvent r0(sp);
    const GreenTable t = r0.table(ball_offsets(2, 4.0));

    const json j = green_table_to_json(t);
    const GreenTable t2 = green_table_from_json(j);
    CHECK(t2.values.size() == t.values.size());
    for (const auto& [k, v] : t.values) CHECK(t2.at(k) == v);
    CHECK(r0_defect(t2) <= 1e-9);

    FreeResolvent fresh(sp);
    CHECK(fresh.preload(t2) > 0);
    CHECK(fresh.evaluations() == 0);
    (void)fresh(LatticePoint{2, 1});
    CHECK(fresh.evaluations() == 0); // served from the preloaded cache

    // preload refuses a looser table
    FreeResolvent strict(sp, 1e-12);
    GreenTable loose = t;
    loose.tolerance = 1e-3;
    CHECK(strict.preload(loose) == 0);
}

TEST_CASE("defect rejects tables without neighbors") {
    GreenTable t;
    t.d = 2;
    t.lambda = 0.3;
    t.values[LatticePoint{0, 0}] = 1.0;
    CHECK_THROWS_AS(r0_defect(t), validation_error);
}

TEST_CASE("validation") {
    SpectralParam mid(0.7, 3);
    CHECK_THROWS_AS(FreeResolvent{mid}, validation_error);
    SpectralParam sp(0.3, 3);
    CHECK_THROWS_AS(FreeResolvent(sp, 0.0, GreenMethod::Reduction1D), validation_error);
}
