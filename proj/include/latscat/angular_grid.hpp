#pragma once

#include <Eigen/Dense>
#include <vector>

#include "latscat/spectral.hpp"
#include "latscat/torus_geometry.hpp"

namespace latscat {

/// One quadrature node of the discretized energy surface.  theta parametrizes
/// the surface point x = x(sqrt(lambda) theta); omega is the outward unit
/// normal there, so evaluating a normal-parametrized far-field operator at
/// omega is the same as evaluating the theta-parametrized one at this node.
struct AngularNode {
    Vector theta;
    Vector x;
    Vector omega;
    double weight = 0.0; // quadrature weight for d theta
    double mu = 0.0;     // weight x surface density: discretizes L^2(M_lambda)
};

/// Quadrature grid on S^{d-1} carrying the spectral-measure weights.
/// d = 2: uniform angles with trapezoid weights (spectrally accurate);
/// d = 3: product Gauss-Legendre (polar cosine) x uniform (azimuth).
class AngularGrid {
public:
    AngularGrid(const SpectralParam& sp, int n_nodes);

    const SpectralParam& spectral() const { return sp_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<AngularNode>& nodes() const { return nodes_; }
    const AngularNode& node(int j) const { return nodes_[static_cast<std::size_t>(j)]; }

    /// Diagonal of the discrete L^2(M_lambda) inner product.
    const Eigen::VectorXd& mu() const { return mu_; }
    double weight_sum() const; // should match |S^{d-1}|

private:
    SpectralParam sp_;
    std::vector<AngularNode> nodes_;
    Eigen::VectorXd mu_;
};

} // namespace latscat
