#include "latscat/dn_maps.hpp"

#include <cmath>

#include "latscat/scattering.hpp"

namespace latscat {

namespace {

// Pivot-ratio singularity proxy for an LU factorization.
template <typename Lu>
bool lu_near_singular(const Lu& lu, double tol = 1e-13) {
    const auto& u = lu.matrixLU();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        const double p = std::abs(u(i, i));
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    return !(lo > tol * hi);
}

} // namespace

HamiltonianBlocks assemble_hamiltonian(const RectDomain& domain, const Potential& V,
                                       double lambda) {
    const int d = domain.dim();
    const int ni = domain.num_interior();
    const int nb = domain.num_boundary();

    HamiltonianBlocks h;
    h.ii = Eigen::MatrixXd::Zero(ni, ni);
    h.ib = Eigen::MatrixXd::Zero(ni, nb);
    h.bi = Eigen::MatrixXd::Zero(nb, ni);
    h.bb = Eigen::MatrixXd::Zero(nb, nb);

    for (int i = 0; i < ni; ++i) {
        const LatticePoint& n = domain.interior()[static_cast<std::size_t>(i)];
        h.ii(i, i) = 0.5 * d + V.at(n) - lambda;
        for (const auto& m : neighbors(n)) {
            if (domain.is_interior(m))
                h.ii(i, domain.interior_index(m)) = -0.25;
            else
                h.ib(i, domain.boundary_index(m)) = -0.25;
        }
    }
    h.bi = h.ib.transpose();
    h.bb = 0.25 * Eigen::MatrixXd::Identity(nb, nb);
    return h;
}

GridFunction dirichlet_solve(const RectDomain& domain, const Potential& V, double lambda,
                             const GridFunction& f) {
    const HamiltonianBlocks h = assemble_hamiltonian(domain, V, lambda);
    const int nb = domain.num_boundary();

    Eigen::VectorXd fb(nb);
    Eigen::VectorXd fb_im(nb);
    bool complex_data = false;
    for (int b = 0; b < nb; ++b) {
        const Complex v = f.at(domain.boundary()[static_cast<std::size_t>(b)]);
        fb[b] = v.real();
        fb_im[b] = v.imag();
        if (v.imag() != 0.0) complex_data = true;
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(h.ii);
    if (lu_near_singular(lu))
        throw exceptional_energy_error(
            "dirichlet_solve: lambda is (numerically) a Dirichlet eigenvalue of the interior problem");
    const Eigen::VectorXd u_re = lu.solve(-h.ib * fb);
    const Eigen::VectorXd u_im = complex_data ? Eigen::VectorXd(lu.solve(-h.ib * fb_im))
                                              : Eigen::VectorXd(Eigen::VectorXd::Zero(domain.num_interior()));

    GridFunction u;
    for (int i = 0; i < domain.num_interior(); ++i)
        u.set(domain.interior()[static_cast<std::size_t>(i)], Complex(u_re[i], u_im[i]));
    for (int b = 0; b < nb; ++b)
        u.set(domain.boundary()[static_cast<std::size_t>(b)], Complex(fb[b], fb_im[b]));
    return u;
}

BoundaryOperator interior_dn(const RectDomain& domain, const Potential& V, double lambda) {
    const HamiltonianBlocks h = assemble_hamiltonian(domain, V, lambda);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(h.ii);
    if (lu_near_singular(lu))
        throw exceptional_energy_error(
            "interior_dn: lambda is (numerically) a Dirichlet eigenvalue of the interior problem");

    BoundaryOperator op;
    op.mat = (h.bb - h.bi * lu.solve(h.ib)).cast<Complex>();
    op.kind = BoundaryOpKind::InteriorDN;
    op.lambda = lambda;
    op.vertices = domain.boundary();
    return op;
}

BoundaryOperator deg_tilde(const RectDomain& domain) {
    const int nb = domain.num_boundary();
    BoundaryOperator op;
    op.mat = Eigen::MatrixXcd::Zero(nb, nb);
    for (int b = 0; b < nb; ++b) {
        const LatticePoint& n = domain.boundary()[static_cast<std::size_t>(b)];
        int count = 0;
        for (const auto& m : neighbors(n))
            if (domain.is_boundary(m)) ++count;
        op.mat(b, b) = 0.25 * double(count);
    }
    op.kind = BoundaryOpKind::DegTilde;
    op.vertices = domain.boundary();
    return op;
}

BoundaryOperator shift_op(const RectDomain& domain) {
    const int nb = domain.num_boundary();
    BoundaryOperator op;
    op.mat = Eigen::MatrixXcd::Zero(nb, nb);
    for (int b = 0; b < nb; ++b) {
        const LatticePoint& n = domain.boundary()[static_cast<std::size_t>(b)];
        for (const auto& m : neighbors(n))
            if (domain.is_boundary(m)) op.mat(b, domain.boundary_index(m)) = 0.25;
    }
    op.kind = BoundaryOpKind::Shift;
    op.vertices = domain.boundary();
    return op;
}

BoundaryOperator single_layer(const RectDomain& domain, const Potential& V,
                              const FreeResolvent& r0) {
    const int nb = domain.num_boundary();
    const std::vector<LatticePoint>& C = domain.boundary();

    LippmannSchwinger ls(V, r0);
    BoundaryOperator op;
    op.mat.resize(nb, nb);
    for (int col = 0; col < nb; ++col) {
        const GridFunction column =
            ls.apply(GridFunction::delta(C[static_cast<std::size_t>(col)]), C);
        for (int row = 0; row < nb; ++row)
            op.mat(row, col) = column.at(C[static_cast<std::size_t>(row)]);
    }
    op.kind = BoundaryOpKind::SingleLayer;
    op.lambda = r0.spectral().lambda();
    op.sign = r0.spectral().sign();
    op.vertices = C;
    return op;
}

BoundaryOperator boundary_op(const RectDomain& domain, const Potential& V,
                             const FreeResolvent& r0) {
    BoundaryOperator m = single_layer(domain, V, r0);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m.mat);
    if (lu_near_singular(lu))
        throw exceptional_energy_error("boundary_op: single-layer operator numerically singular");
    m.mat = lu.inverse();
    m.kind = BoundaryOpKind::BOperator;
    return m;
}

BoundaryOperator exterior_dn(const RectDomain& domain, const FreeResolvent& r0) {
    const double lambda = r0.spectral().lambda();
    const int nb = domain.num_boundary();

    const Potential zero(domain);
    const BoundaryOperator lam0 = interior_dn(domain, zero, lambda);
    const BoundaryOperator b0 = boundary_op(domain, zero, r0);
    const BoundaryOperator dg = deg_tilde(domain);
    const BoundaryOperator sh = shift_op(domain);

    BoundaryOperator op;
    op.mat = lam0.mat - lambda * Eigen::MatrixXcd::Identity(nb, nb) + dg.mat - sh.mat - b0.mat;
    op.kind = BoundaryOpKind::ExteriorDN;
    op.lambda = lambda;
    op.sign = r0.spectral().sign();
    op.vertices = domain.boundary();
    return op;
}

} // namespace latscat
