#include "latscat/torus_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace latscat {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double wrap_angle(double t) {
    double w = std::remainder(t, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

double symbol_h(const Vector& x) {
    double s = 0.0;
    for (int j = 0; j < x.size(); ++j) {
        const double sj = std::sin(0.5 * x[j]);
        s += sj * sj;
    }
    return s;
}

Vector grad_h(const Vector& x) {
    Vector g(x.size());
    for (int j = 0; j < x.size(); ++j) g[j] = 0.5 * std::sin(x[j]);
    return g;
}

SurfacePoint surface_point(const SpectralParam& sp, const Vector& theta) {
    sp.require_low_band("surface_point");
    if (theta.size() != sp.dim())
        throw validation_error("surface_point: direction dimension mismatch");
    const double rl = std::sqrt(sp.lambda());
    SurfacePoint p;
    p.theta = theta;
    p.x.resize(theta.size());
    for (int j = 0; j < theta.size(); ++j) {
        const double y = rl * theta[j];
        if (std::abs(y) > 1.0)
            throw validation_error("surface_point: sqrt(lambda)*theta leaves [-1,1]");
        p.x[j] = 2.0 * std::asin(y);
    }
    return p;
}

double measure_weight(const SpectralParam& sp, const Vector& theta) {
    sp.require_low_band("measure_weight");
    const double lam = sp.lambda();
    double w = 0.5 * std::pow(std::sqrt(lam), sp.dim() - 2);
    for (int j = 0; j < theta.size(); ++j) {
        const double y2 = lam * theta[j] * theta[j];
        w *= 2.0 / std::sqrt(1.0 - y2);
    }
    return w;
}

namespace {

// Graph-chart data at a surface point: chart coordinate c (steepest descent of
// h), slopes f_i = -h_i/h_c for i != c, and the chart Hessian
// F_ij = -(delta_ij cos x_i + cos x_c f_i f_j)/sin x_c.
struct Chart {
    int c = 0;
    Eigen::VectorXd slope;   // size d-1
    Eigen::MatrixXd hess;    // size (d-1)x(d-1)
    double sc = 0.0;         // sin x_c
};

Chart build_chart(const Vector& x) {
    const int d = static_cast<int>(x.size());
    Vector s(d), co(d);
    for (int j = 0; j < d; ++j) {
        s[j] = std::sin(x[j]);
        co[j] = std::cos(x[j]);
    }
    int c = 0;
    for (int j = 1; j < d; ++j)
        if (std::abs(s[j]) > std::abs(s[c])) c = j;
    if (std::abs(s[c]) < 1e-14)
        throw numerical_error("curvature: grad h vanishes (threshold energy surface point)");

    Chart ch;
    ch.c = c;
    ch.sc = s[c];
    ch.slope.resize(d - 1);
    std::vector<int> idx;
    for (int j = 0; j < d; ++j)
        if (j != c) idx.push_back(j);
    for (int i = 0; i < d - 1; ++i) ch.slope[i] = -s[idx[static_cast<std::size_t>(i)]] / s[c];
    ch.hess.resize(d - 1, d - 1);
    for (int i = 0; i < d - 1; ++i)
        for (int j = 0; j < d - 1; ++j) {
            double v = co[c] * ch.slope[i] * ch.slope[j];
            if (i == j) v += co[idx[static_cast<std::size_t>(i)]];
            ch.hess(i, j) = -v / s[c];
        }
    return ch;
}

} // namespace

double gaussian_curvature(const SpectralParam& sp, const Vector& x) {
    const int d = sp.dim();
    if (x.size() != d) throw validation_error("gaussian_curvature: dimension mismatch");
    if (grad_h(x).norm() < 1e-14)
        throw numerical_error("gaussian_curvature: grad h vanishes at x");

    if (d == 2) {
        const double s1 = std::sin(x[0]), s2 = std::sin(x[1]);
        const double c1 = std::cos(x[0]), c2 = std::cos(x[1]);
        const double g2 = s1 * s1 + s2 * s2;
        return std::abs(c2 * s1 * s1 + c1 * s2 * s2) / std::pow(g2, 1.5);
    }

    const Chart ch = build_chart(x);
    const double g2 = 1.0 + ch.slope.squaredNorm();
    const double det = (-ch.hess).determinant();
    return std::abs(det) / std::pow(g2, 0.5 * (d + 1));
}

Vector principal_curvatures(const SpectralParam& sp, const Vector& x) {
    if (x.size() != sp.dim()) throw validation_error("principal_curvatures: dimension mismatch");
    const Chart ch = build_chart(x);
    const int m = static_cast<int>(ch.slope.size());
    const double g2 = 1.0 + ch.slope.squaredNorm();
    const double sgn = ch.sc > 0.0 ? 1.0 : -1.0;

    Eigen::MatrixXd A = (-sgn / std::sqrt(g2)) * ch.hess;
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(m, m) + ch.slope * ch.slope.transpose();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
    if (es.info() != Eigen::Success)
        throw numerical_error("principal_curvatures: eigen solve failed");
    return es.eigenvalues();
}

std::vector<Vector> sample_surface(const SpectralParam& sp, int count, std::uint64_t seed) {
    const int d = sp.dim();
    const double lam = sp.lambda();
    std::mt19937_64 rng(seed);
    auto next_unit = [&]() {
        Vector u(d);
        double n = 0.0;
        do {
            // Box-Muller from the raw generator keeps the stream platform-independent.
            for (int j = 0; j < d; ++j) {
                const double u1 = (double(rng() >> 11) + 0.5) * 0x1.0p-53;
                const double u2 = (double(rng() >> 11) + 0.5) * 0x1.0p-53;
                u[j] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
            }
            n = u.norm();
        } while (!(n > 1e-8));
        return Vector(u / n);
    };

    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(count));

    const EnergyBand band = sp.band();
    if (band != EnergyBand::Middle) {
        const double mu = band == EnergyBand::Low ? lam : double(d) - lam;
        const double rl = std::sqrt(mu);
        while (static_cast<int>(out.size()) < count) {
            const Vector th = next_unit();
            Vector x(d);
            for (int j = 0; j < d; ++j) x[j] = 2.0 * std::asin(rl * th[j]);
            if (band == EnergyBand::High)
                for (int j = 0; j < d; ++j) x[j] = wrap_angle(x[j] + kPi);
            out.push_back(x);
        }
        return out;
    }

    // Middle band: h is monotone along rays from the origin up to the cube
    // boundary, so the first crossing (when it exists) is found by bisection.
    int guard = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++guard > 100 * count)
            throw numerical_error("sample_surface: ray casting failed to find the surface");
        const Vector u = next_unit();
        double smax = kPi / u.cwiseAbs().maxCoeff();
        Vector xe = smax * u;
        if (symbol_h(xe) < lam) continue;
        double lo = 0.0, hi = smax;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (symbol_h(mid * u) < lam ? lo : hi) = mid;
        }
        out.push_back(0.5 * (lo + hi) * u);
    }
    return out;
}

ConvexityReport convexity_check(const SpectralParam& sp, int samples, std::uint64_t seed) {
    ConvexityReport rep;
    rep.samples = samples;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const Vector& x : sample_surface(sp, samples, seed)) {
        const Vector k = principal_curvatures(sp, x);
        const double kmin = k.minCoeff(), kmax = k.maxCoeff();
        if (first) {
            lo = kmin;
            hi = kmax;
            first = false;
        } else {
            lo = std::min(lo, kmin);
            hi = std::max(hi, kmax);
        }
    }
    rep.convex = (lo > 0.0 && hi > 0.0) || (lo < 0.0 && hi < 0.0);
    const double orient = hi < 0.0 ? -1.0 : 1.0;  // report the common sign as +
    rep.min_principal = orient > 0 ? orient * lo : -hi;
    rep.max_principal = orient > 0 ? orient * hi : -lo;
    return rep;
}

namespace {

// d >= 3 low band: invert the normal map radially.  theta_j(rho) solves
// theta sqrt(1 - lambda theta^2) = rho omega_j on the monotone branch; the
// scale rho is pinned by |theta| = 1 (bisection, the sum is increasing).
SurfacePoint stationary_point_radial(const SpectralParam& sp, const Vector& omega) {
    const int d = sp.dim();
    const double lam = sp.lambda();
    const double wmax = omega.cwiseAbs().maxCoeff();
    const double rho_cap = std::sqrt(1.0 - lam) / wmax;

    auto theta_sq = [&](double rho, int j) {
        const double t = 4.0 * lam * rho * rho * omega[j] * omega[j];
        return (1.0 - std::sqrt(std::max(0.0, 1.0 - t))) / (2.0 * lam);
    };
    auto excess = [&](double rho) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += theta_sq(rho, j);
        return s - 1.0;
    };

    double lo = 0.0, hi = rho_cap;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    const double rho = 0.5 * (lo + hi);
    if (std::abs(excess(rho)) > 1e-9)
        throw numerical_error("stationary_point: radial bisection did not converge");

    Vector theta(d);
    for (int j = 0; j < d; ++j)
        theta[j] = (omega[j] >= 0.0 ? 1.0 : -1.0) * std::sqrt(theta_sq(rho, j));
    theta /= theta.norm();
    return surface_point(sp, theta);
}

// d = 2: the Gauss map t -> angle of grad h(x(t)) is a monotone circle
// homeomorphism fixing every multiple of pi/4 (the dihedral symmetry of h),
// so the octant of the target direction brackets the root for bisection.
SurfacePoint stationary_point_curve(const SpectralParam& sp, const Vector& omega) {
    const double lam = sp.lambda();
    const double rl = std::sqrt(lam);
    const double beta = std::atan2(omega[1], omega[0]);

    auto gauss_gap = [&](double t) {
        const double x1 = 2.0 * std::asin(rl * std::cos(t));
        const double x2 = 2.0 * std::asin(rl * std::sin(t));
        return wrap_angle(std::atan2(std::sin(x2), std::sin(x1)) - beta);
    };

    const double oct = kPi / 4.0;
    int cell = static_cast<int>(std::floor(beta / oct));
    cell = std::max(-4, std::min(3, cell));
    double t_lo = oct * double(cell);
    double t_hi = t_lo + oct;

    double glo = gauss_gap(t_lo);
    double ghi = gauss_gap(t_hi);
    double t;
    if (std::abs(glo) < 1e-15) {
        t = t_lo;
    } else if (std::abs(ghi) < 1e-15) {
        t = t_hi;
    } else {
        if (glo > 0.0 || ghi < 0.0)
            throw numerical_error("stationary_point: Gauss-map octant bracket failed");
        for (int it = 0; it < 90 && t_hi - t_lo > 1e-16; ++it) {
            const double mid = 0.5 * (t_lo + t_hi);
            const double gm = gauss_gap(mid);
            if (gm < 0.0)
                t_lo = mid;
            else
                t_hi = mid;
        }
        t = 0.5 * (t_lo + t_hi);
    }
    Vector theta(2);
    theta[0] = std::cos(t);
    theta[1] = std::sin(t);
    return surface_point(sp, theta);
}

} // namespace

SurfacePoint stationary_point(const SpectralParam& sp, const Vector& omega) {
    sp.require_convex_band("stationary_point");
    if (omega.size() != sp.dim())
        throw validation_error("stationary_point: direction dimension mismatch");
    const double on = omega.norm();
    if (on < 1e-14) throw validation_error("stationary_point: zero direction");
    const Vector w = omega / on;

    if (sp.band() == EnergyBand::High) {
        // {h = lambda} is the reflection of {h = d - lambda} through (pi,..,pi),
        // with the outward normal preserved.
        const SpectralParam low(double(sp.dim()) - sp.lambda(), sp.dim(), sp.sign());
        SurfacePoint q = stationary_point(low, w);
        SurfacePoint p;
        p.x.resize(sp.dim());
        p.theta.resize(sp.dim());
        const double rl = std::sqrt(sp.lambda());
        for (int j = 0; j < sp.dim(); ++j) {
            p.x[j] = wrap_angle(q.x[j] + kPi);
            p.theta[j] = std::sin(0.5 * p.x[j]) / rl;
        }
        return p;
    }

    SurfacePoint p = sp.dim() == 2 ? stationary_point_curve(sp, w)
                                   : stationary_point_radial(sp, w);
    const Vector g = grad_h(p.x);
    if ((g / g.norm() - w).norm() > 1e-9)
        throw numerical_error("stationary_point: normal alignment failed");
    return p;
}

double amplitude_coeff(const SpectralParam& sp, const Vector& omega) {
    const SurfacePoint p = stationary_point(sp, omega);
    const double K = gaussian_curvature(sp, p.x);
    return 1.0 / (std::sqrt(K) * grad_h(p.x).norm());
}

std::pair<Complex, Complex> radiation_coeff(const SpectralParam& sp, const LatticePoint& k) {
    if (k.dim() != sp.dim()) throw validation_error("radiation_coeff: dimension mismatch");
    if (k.cube_radius() == 0) throw validation_error("radiation_coeff: zero direction");

    Vector omega(k.dim());
    for (int j = 0; j < k.dim(); ++j) omega[j] = double(k[j]);
    const SurfacePoint p = stationary_point(sp, omega / omega.norm());

    const Complex i(0.0, 1.0);
    Complex ap = 0.0, am = 0.0;
    for (const auto& m : radial_shell_neighbors(k)) {
        double phase = 0.0;
        for (int j = 0; j < k.dim(); ++j) phase += double(m[j] - k[j]) * p.x[j];
        ap += std::exp(i * phase) - 1.0;
        am += std::exp(-i * phase) - 1.0;
    }
    return {0.25 * ap, 0.25 * am};
}

} // namespace latscat
