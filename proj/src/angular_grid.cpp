#include "latscat/angular_grid.hpp"

#include <cmath>

namespace latscat {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Gauss-Legendre on [-1,1] by Newton on the recurrence (small orders only).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(static_cast<std::size_t>(n));
    w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double p1 = 0.0, dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        x[static_cast<std::size_t>(i)] = t;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

} // namespace

AngularGrid::AngularGrid(const SpectralParam& sp, int n_nodes) : sp_(sp) {
    sp_.require_low_band("AngularGrid");
    const int d = sp_.dim();
    if (n_nodes < 2) throw validation_error("AngularGrid: need at least 2 nodes");

    if (d == 2) {
        nodes_.reserve(static_cast<std::size_t>(n_nodes));
        for (int j = 0; j < n_nodes; ++j) {
            const double t = 2.0 * kPi * double(j) / double(n_nodes);
            AngularNode nd;
            nd.theta = Vector(2);
            nd.theta << std::cos(t), std::sin(t);
            nd.weight = 2.0 * kPi / double(n_nodes);
            nodes_.push_back(std::move(nd));
        }
    } else if (d == 3) {
        const int n_polar = std::max(2, int(std::floor(std::sqrt(double(n_nodes) / 2.0))));
        const int n_azim = 2 * n_polar;
        std::vector<double> z, wz;
        gauss_legendre(n_polar, z, wz);
        nodes_.reserve(static_cast<std::size_t>(n_polar * n_azim));
        for (int i = 0; i < n_polar; ++i) {
            const double c = z[static_cast<std::size_t>(i)];
            const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (int j = 0; j < n_azim; ++j) {
                const double psi = 2.0 * kPi * (double(j) + 0.5) / double(n_azim);
                AngularNode nd;
                nd.theta = Vector(3);
                nd.theta << s * std::cos(psi), s * std::sin(psi), c;
                nd.weight = wz[static_cast<std::size_t>(i)] * 2.0 * kPi / double(n_azim);
                nodes_.push_back(std::move(nd));
            }
        }
    } else {
        throw validation_error("AngularGrid: quadrature grids are provided for d = 2, 3");
    }

    mu_.resize(static_cast<Eigen::Index>(nodes_.size()));
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        AngularNode& nd = nodes_[j];
        const SurfacePoint p = surface_point(sp_, nd.theta);
        nd.x = p.x;
        Vector g = grad_h(p.x);
        nd.omega = g / g.norm();
        nd.mu = nd.weight * measure_weight(sp_, nd.theta);
        mu_[static_cast<Eigen::Index>(j)] = nd.mu;
    }
}

double AngularGrid::weight_sum() const {
    double s = 0.0;
    for (const auto& nd : nodes_) s += nd.weight;
    return s;
}

} // namespace latscat
