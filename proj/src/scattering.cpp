#include "latscat/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "latscat/torus_geometry.hpp"

namespace latscat {

namespace {
constexpr double kPi = 3.14159265358979323846;
const Complex kI(0.0, 1.0);

double svd_condition(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[s.size() - 1] <= 0.0) return std::numeric_limits<double>::infinity();
    return s[0] / s[s.size() - 1];
}

// Far-field pattern of an already scattered source at one unit direction.
Complex far_field_of_source(const SpectralParam& sp, const GridFunction& source,
                            const Vector& omega) {
    const SurfacePoint p = stationary_point(sp, omega);
    Complex s = 0.0;
    for (const auto& [n, v] : source.values()) s += std::conj(plane_wave(sp.dim(), n, p.x)) * v;
    return s;
}

} // namespace

Potential Potential::random(const RectDomain& domain, double lo, double hi, std::uint64_t seed) {
    Potential V(domain);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < domain.num_interior(); ++i) {
        const double u = double(rng() >> 11) * 0x1.0p-53;
        V.values_[static_cast<std::size_t>(i)] = lo + (hi - lo) * u;
    }
    return V;
}

std::vector<std::pair<LatticePoint, double>> Potential::support() const {
    std::vector<std::pair<LatticePoint, double>> out;
    for (int i = 0; i < domain_.num_interior(); ++i) {
        const double v = values_[static_cast<std::size_t>(i)];
        if (v != 0.0) out.emplace_back(domain_.interior()[static_cast<std::size_t>(i)], v);
    }
    return out;
}

double Potential::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

Complex incident_wave(const SpectralParam& sp, const LatticePoint& n, const Vector& theta) {
    const SurfacePoint p = surface_point(sp, theta);
    return measure_weight(sp, theta) * plane_wave(sp.dim(), n, p.x);
}

Complex plane_wave(int d, const LatticePoint& n, const Vector& x) {
    double phase = 0.0;
    for (int j = 0; j < d; ++j) phase += double(n[j]) * x[j];
    return std::pow(2.0 * kPi, -0.5 * d) * std::exp(kI * phase);
}

LippmannSchwinger::LippmannSchwinger(const Potential& V, const FreeResolvent& r0) : r0_(r0) {
    if (V.domain().dim() != r0.spectral().dim())
        throw validation_error("LippmannSchwinger: dimension mismatch");
    const auto supp = V.support();
    supp_.reserve(supp.size());
    vvals_.resize(static_cast<Eigen::Index>(supp.size()));
    for (std::size_t i = 0; i < supp.size(); ++i) {
        supp_.push_back(supp[i].first);
        vvals_[static_cast<Eigen::Index>(i)] = supp[i].second;
    }
    const int m = static_cast<int>(supp_.size());
    if (m == 0) return;

    g_supp_.resize(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            g_supp_(a, b) = r0_(supp_[static_cast<std::size_t>(a)] - supp_[static_cast<std::size_t>(b)]);

    Eigen::MatrixXcd sys = Eigen::MatrixXcd::Identity(m, m) + g_supp_ * vvals_.asDiagonal();
    cond_ = svd_condition(sys);
    if (!(cond_ < 1e12))
        throw exceptional_energy_error(
            "LippmannSchwinger: (I + R0 V) numerically singular, cond=" + std::to_string(cond_));
    lu_.compute(sys);
}

GridFunction LippmannSchwinger::apply(const GridFunction& f,
                                      const std::vector<LatticePoint>& window) const {
    const int m = static_cast<int>(supp_.size());
    auto r0f = [&](const LatticePoint& n) {
        Complex s = 0.0;
        for (const auto& [p, v] : f.values()) s += r0_(n - p) * v;
        return s;
    };

    GridFunction out;
    if (m == 0) {
        for (const auto& n : window) out.set(n, r0f(n));
        return out;
    }

    Eigen::VectorXcd rhs(m);
    for (int a = 0; a < m; ++a) rhs[a] = r0f(supp_[static_cast<std::size_t>(a)]);
    const Eigen::VectorXcd w = lu_.solve(rhs);

    for (const auto& n : window) {
        Complex s = r0f(n);
        for (int b = 0; b < m; ++b)
            s -= r0_(n - supp_[static_cast<std::size_t>(b)]) * vvals_[b] * w[b];
        out.set(n, s);
    }
    return out;
}

GridFunction LippmannSchwinger::scattered_source(const GridFunction& f) const {
    // (1 - V R) f: equals f away from supp V, f - V (R f) on supp V.
    GridFunction out;
    for (const auto& [n, v] : f.values()) out.set(n, v);
    if (supp_.empty()) return out;
    const GridFunction rf = apply(f, supp_);
    for (std::size_t i = 0; i < supp_.size(); ++i) {
        const LatticePoint& s = supp_[i];
        out.set(s, out.at_or_zero(s) - vvals_[static_cast<Eigen::Index>(i)] * rf.at(s));
    }
    return out;
}

GridFunction resolvent_apply(const Potential& V, const FreeResolvent& r0, const GridFunction& f,
                             const std::vector<LatticePoint>& window, double* condition) {
    LippmannSchwinger ls(V, r0);
    if (condition) *condition = ls.condition();
    return ls.apply(f, window);
}

OperatorMatrix amplitude(const Potential& V, const FreeResolvent& r0, const AngularGrid& grid) {
    const SpectralParam& sp = r0.spectral();
    if (std::abs(grid.spectral().lambda() - sp.lambda()) > 0.0)
        throw validation_error("amplitude: grid and resolvent were built at different energies");
    const int d = sp.dim();
    const int N = grid.size();

    LippmannSchwinger ls(V, r0);
    const auto& supp = ls.support();
    const int m = static_cast<int>(supp.size());
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
    if (m > 0) {
        Eigen::MatrixXcd E(m, N);
        for (int a = 0; a < m; ++a)
            for (int j = 0; j < N; ++j)
                E(a, j) = plane_wave(d, supp[static_cast<std::size_t>(a)], grid.node(j).x);

        // w_j = (I + R0 V)^{-1} R0 V pw_j on supp V; columns share the factorization.
        const Eigen::VectorXd& v = ls.support_values();
        const Eigen::MatrixXcd Y =
            ls.solve_on_support(ls.kernel_on_support() * v.asDiagonal() * E);
        A = E.adjoint() * (v.asDiagonal() * (E - Y));
    }
    return OperatorMatrix(std::move(A), IndexKind::Angular, IndexKind::Angular, sp.lambda(),
                          sp.sign());
}

OperatorMatrix born_amplitude(const Potential& V, const AngularGrid& grid) {
    const SpectralParam& sp = grid.spectral();
    const int d = sp.dim();
    const int N = grid.size();
    const auto supp = V.support();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            Complex s = 0.0;
            for (const auto& [n, v] : supp)
                s += std::conj(plane_wave(d, n, grid.node(i).x)) * v * plane_wave(d, n, grid.node(j).x);
            A(i, j) = s;
        }
    return OperatorMatrix(std::move(A), IndexKind::Angular, IndexKind::Angular, sp.lambda(),
                          sp.sign());
}

OperatorMatrix s_matrix(const OperatorMatrix& A, const AngularGrid& grid) {
    if (A.rows != IndexKind::Angular || A.cols != IndexKind::Angular)
        throw std::logic_error("s_matrix: amplitude must be angular x angular");
    const Eigen::Index N = A.mat.rows();
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Identity(N, N) -
                         2.0 * kPi * kI * A.mat * grid.mu().asDiagonal();
    return OperatorMatrix(std::move(S), IndexKind::Angular, IndexKind::Angular, A.lambda, A.sign);
}

double unitarity_defect(const OperatorMatrix& S, const AngularGrid& grid) {
    const Eigen::MatrixXd W = Eigen::MatrixXd(grid.mu().asDiagonal());
    const Eigen::MatrixXcd lhs = S.mat.adjoint() * W * S.mat;
    return (lhs - W).norm() / W.norm();
}

Complex far_field_transform(const Potential& V, const FreeResolvent& r0, const GridFunction& f,
                            const Vector& omega) {
    LippmannSchwinger ls(V, r0);
    return far_field_of_source(r0.spectral(), ls.scattered_source(f), omega);
}

Eigen::VectorXcd generalized_fourier(const Potential& V, const FreeResolvent& r0,
                                     const GridFunction& f, const AngularGrid& grid) {
    const SpectralParam& sp = r0.spectral();
    LippmannSchwinger ls(V, r0);
    const GridFunction g = ls.scattered_source(f);
    Eigen::VectorXcd out(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        Complex s = 0.0;
        for (const auto& [n, v] : g.values())
            s += std::conj(plane_wave(sp.dim(), n, grid.node(j).x)) * v;
        out[j] = s;
    }
    return out;
}

std::vector<double> far_field_defect(const Potential& V, const FreeResolvent& r0,
                                     const GridFunction& f, const std::vector<int>& radii,
                                     int directions) {
    const SpectralParam& sp = r0.spectral();
    const int d = sp.dim();
    const double sgn = sp.sign() == LimitSign::Plus ? 1.0 : -1.0;

    // Sampled lattice points per radius.
    std::vector<std::vector<LatticePoint>> samples;
    std::set<LatticePoint> all;
    for (int R : radii) {
        std::vector<LatticePoint> pts;
        for (int i = 0; i < directions; ++i) {
            LatticePoint k(std::vector<int>(static_cast<std::size_t>(d), 0));
            if (d == 2) {
                const double a = 2.0 * kPi * double(i) / directions;
                k[0] = int(std::lround(R * std::cos(a)));
                k[1] = int(std::lround(R * std::sin(a)));
            } else {
                // Fibonacci-style covering of the sphere.
                const double z = -1.0 + 2.0 * (double(i) + 0.5) / directions;
                const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double a = kPi * (1.0 + std::sqrt(5.0)) * double(i);
                k[0] = int(std::lround(R * rxy * std::cos(a)));
                k[1] = int(std::lround(R * rxy * std::sin(a)));
                k[2] = int(std::lround(R * z));
            }
            if (k.cube_radius() == 0) continue;
            if (all.insert(k).second) pts.push_back(k);
        }
        samples.push_back(std::move(pts));
    }

    std::vector<LatticePoint> window(all.begin(), all.end());
    LippmannSchwinger ls(V, r0);
    const GridFunction u = ls.apply(f, window);
    const GridFunction g = ls.scattered_source(f);

    std::vector<double> out;
    for (std::size_t ri = 0; ri < samples.size(); ++ri) {
        double worst = 0.0;
        for (const auto& k : samples[ri]) {
            Vector omega(d);
            for (int j = 0; j < d; ++j) omega[j] = double(k[j]);
            const double kn = omega.norm();
            omega /= kn;

            const SurfacePoint p = stationary_point(sp, omega);
            double phase = 0.0;
            for (int j = 0; j < d; ++j) phase += double(k[j]) * p.x[j];
            const Complex gff = far_field_of_source(sp, g, Vector(sgn * omega));

            const Complex lead = std::exp(sgn * (3.0 - d) * kPi / 4.0 * kI) *
                                 std::sqrt(2.0 * kPi) * std::pow(kn, -0.5 * (d - 1)) *
                                 std::exp(kI * (sgn * phase)) * amplitude_coeff(sp, omega) * gff;
            const double err = std::abs(u.at(k) - lead) * std::pow(kn, 0.5 * (d - 1));
            worst = std::max(worst, err);
        }
        out.push_back(worst);
    }
    return out;
}

std::vector<double> radiation_defect(const GridFunction& u, const SpectralParam& sp,
                                     const std::vector<int>& radii) {
    const int d = sp.dim();
    const int rmax = *std::max_element(radii.begin(), radii.end());

    // Per-shell accumulated contributions, then Cesaro sums per requested R.
    std::vector<double> shell(static_cast<std::size_t>(rmax) + 1, 0.0);
    for (const auto& [n, un] : u.values()) {
        const int r = n.cube_radius();
        if (r == 0 || r > rmax || n.dim() != d) continue;
        const auto [ap, am] = radiation_coeff(sp, n);
        const Complex a = sp.sign() == LimitSign::Plus ? ap : am;
        const Complex res = radial_derivative(u, n) - a * un;
        shell[static_cast<std::size_t>(r)] += std::norm(res);
    }
    std::vector<double> out;
    for (int R : radii) {
        double s = 0.0;
        for (int r = 1; r <= R; ++r) s += shell[static_cast<std::size_t>(r)];
        out.push_back(s / double(R));
    }
    return out;
}

} // namespace latscat
