#include "latscat/equivalence.hpp"

#include <cmath>

namespace latscat {

namespace {

// Rows sample the far-field phase at the grid nodes, columns run over the
// boundary shell: G0[i,m] = (2pi)^(-d/2) exp(-i C_m . x_i).
Eigen::MatrixXcd far_field_rows(const RectDomain& domain, const AngularGrid& grid) {
    const int d = domain.dim();
    const int N = grid.size();
    const int nb = domain.num_boundary();
    Eigen::MatrixXcd G(N, nb);
    for (int i = 0; i < N; ++i)
        for (int m = 0; m < nb; ++m)
            G(i, m) = std::conj(plane_wave(d, domain.boundary()[static_cast<std::size_t>(m)],
                                           grid.node(i).x));
    return G;
}

} // namespace

OperatorMatrix gamma_matrix(const RectDomain& domain, const FreeResolvent& r0,
                            const AngularGrid& grid) {
    const Potential zero(domain);
    const BoundaryOperator b0 = boundary_op(domain, zero, r0);
    Eigen::MatrixXcd g = far_field_rows(domain, grid) * b0.mat;
    return OperatorMatrix(std::move(g), IndexKind::Angular, IndexKind::Boundary,
                          r0.spectral().lambda(), r0.spectral().sign());
}

OperatorMatrix exterior_amplitude(const RectDomain& domain, const FreeResolvent& r0_plus,
                                  const AngularGrid& grid) {
    if (r0_plus.spectral().sign() != LimitSign::Plus)
        throw validation_error("exterior_amplitude: needs the + boundary value");
    const Potential zero(domain);
    const BoundaryOperator b0 = boundary_op(domain, zero, r0_plus);
    const Eigen::MatrixXcd G = far_field_rows(domain, grid);
    Eigen::MatrixXcd a = G * b0.mat * G.adjoint();
    return OperatorMatrix(std::move(a), IndexKind::Angular, IndexKind::Angular,
                          r0_plus.spectral().lambda(), LimitSign::Plus);
}

double factorization_defect(const RectDomain& domain, const Potential& V,
                            const FreeResolvent& r0_plus, const AngularGrid& grid) {
    const FreeResolvent r0_minus(r0_plus.spectral().conjugated(), r0_plus.tolerance(),
                                 r0_plus.method());

    const OperatorMatrix a_ext = exterior_amplitude(domain, r0_plus, grid);
    const OperatorMatrix a = amplitude(V, r0_plus, grid);
    const OperatorMatrix gp = gamma_matrix(domain, r0_plus, grid);
    const OperatorMatrix gm = gamma_matrix(domain, r0_minus, grid);
    const BoundaryOperator m_plus = single_layer(domain, V, r0_plus);

    const Eigen::MatrixXcd lhs = a_ext.mat - a.mat;
    const Eigen::MatrixXcd rhs = gp.mat * m_plus.mat * gm.mat.adjoint();
    return (lhs - rhs).norm() / lhs.norm();
}

DnRecovery smatrix_to_dn(const OperatorMatrix& amplitude_matrix, const RectDomain& domain,
                         const AngularGrid& grid, const FreeResolvent& r0_plus) {
    if (amplitude_matrix.rows != IndexKind::Angular || amplitude_matrix.cols != IndexKind::Angular)
        throw validation_error("smatrix_to_dn: amplitude must be angular x angular");
    if (amplitude_matrix.mat.rows() != grid.size())
        throw validation_error("smatrix_to_dn: amplitude size does not match the grid");
    const int nb = domain.num_boundary();
    if (grid.size() < nb)
        throw validation_error("smatrix_to_dn: need at least #boundary angular nodes");

    const FreeResolvent r0_minus(r0_plus.spectral().conjugated(), r0_plus.tolerance(),
                                 r0_plus.method());
    const double lambda = r0_plus.spectral().lambda();

    const OperatorMatrix a_ext = exterior_amplitude(domain, r0_plus, grid);
    const OperatorMatrix gp = gamma_matrix(domain, r0_plus, grid);
    const OperatorMatrix gm = gamma_matrix(domain, r0_minus, grid);
    const Eigen::MatrixXcd D = a_ext.mat - amplitude_matrix.mat;
    const Eigen::MatrixXd W = Eigen::MatrixXd(grid.mu().asDiagonal());

    DnRecovery rec;
    {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gp.mat);
        const auto& s = svd.singularValues();
        rec.gamma_rank_ratio = s[s.size() - 1] / s[0];
        if (!(rec.gamma_rank_ratio > 1e-12))
            throw numerical_error("smatrix_to_dn: near-to-far map numerically rank deficient");
    }

    const Eigen::MatrixXcd gram_p = gp.mat.adjoint() * W * gp.mat;
    const Eigen::MatrixXcd gram_m = gm.mat.adjoint() * W * gm.mat;
    {
        Eigen::JacobiSVD<Eigen::MatrixXcd> sp(gram_p), sm(gram_m);
        const double cp = sp.singularValues()[0] / sp.singularValues()[nb - 1];
        const double cm = sm.singularValues()[0] / sm.singularValues()[nb - 1];
        rec.gram_condition = std::max(cp, cm);
        if (!(rec.gram_condition < 1e14))
            throw numerical_error("smatrix_to_dn: Gram normal equations too ill-conditioned");
    }

    // Weighted least squares for the factorization's middle factor.
    const Eigen::MatrixXcd m_plus =
        gram_p.ldlt().solve(gp.mat.adjoint() * W * D * W * gm.mat) *
        gram_m.inverse();

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m_plus);
    {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (Eigen::Index i = 0; i < m_plus.rows(); ++i) {
            const double p = std::abs(lu.matrixLU()(i, i));
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        if (!(lo > 1e-13 * hi))
            throw exceptional_energy_error("smatrix_to_dn: recovered single-layer operator singular");
    }
    const Eigen::MatrixXcd b_plus = lu.inverse();

    const Potential zero(domain);
    const BoundaryOperator lam_ext = exterior_dn(domain, r0_plus);
    const BoundaryOperator dg = deg_tilde(domain);
    const BoundaryOperator sh = shift_op(domain);

    BoundaryOperator lam;
    lam.mat = b_plus + lam_ext.mat + lambda * Eigen::MatrixXcd::Identity(nb, nb) - dg.mat + sh.mat;
    lam.kind = BoundaryOpKind::InteriorDN;
    lam.lambda = lambda;
    lam.vertices = domain.boundary();

    rec.symmetry_defect = (lam.mat - lam.mat.transpose()).norm() / lam.mat.norm();
    rec.imag_fraction = lam.mat.imag().norm() / lam.mat.norm();

    rec.m_plus.mat = m_plus;
    rec.m_plus.kind = BoundaryOpKind::SingleLayer;
    rec.m_plus.lambda = lambda;
    rec.m_plus.vertices = domain.boundary();
    rec.lambda_v = std::move(lam);
    return rec;
}

} // namespace latscat
