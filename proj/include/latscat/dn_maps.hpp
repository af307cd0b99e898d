#pragma once

#include <Eigen/Dense>
#include <vector>

#include "latscat/green.hpp"
#include "latscat/lattice.hpp"
#include "latscat/potential.hpp"
#include "latscat/spectral.hpp"

namespace latscat {

enum class BoundaryOpKind { InteriorDN, ExteriorDN, BOperator, SingleLayer, DegTilde, Shift };

/// Operator on l^2 of the boundary shell, rows/columns in the domain's
/// boundary-vertex order (which is embedded for serialization).
struct BoundaryOperator {
    Eigen::MatrixXcd mat;
    BoundaryOpKind kind = BoundaryOpKind::InteriorDN;
    double lambda = 0.0;
    LimitSign sign = LimitSign::Plus;
    std::vector<LatticePoint> vertices;
};

/// Blocks of the graph Hamiltonian H = (1/4)(D - A) + V - lambda (the energy
/// is absorbed into the interior diagonal only): interior diagonal
/// d/2 + V - lambda, edges -1/4 wherever one endpoint is interior, boundary
/// diagonal 1/4.  Boundary-boundary adjacency carries no edge.
struct HamiltonianBlocks {
    Eigen::MatrixXd ii; // interior x interior
    Eigen::MatrixXd ib; // interior x boundary
    Eigen::MatrixXd bi; // boundary x interior
    Eigen::MatrixXd bb; // boundary x boundary
};

HamiltonianBlocks assemble_hamiltonian(const RectDomain& domain, const Potential& V,
                                       double lambda);

/// Dirichlet problem (-Lap + V - lambda) u = 0 inside, u = f on the boundary.
/// Throws exceptional_energy_error when lambda is a Dirichlet eigenvalue.
GridFunction dirichlet_solve(const RectDomain& domain, const Potential& V, double lambda,
                             const GridFunction& f);

/// Interior Dirichlet-to-Neumann map as the Schur complement
/// H_bb - H_bi H_ii^{-1} H_ib.  Real symmetric.
BoundaryOperator interior_dn(const RectDomain& domain, const Potential& V, double lambda);

/// Diagonal operator (1/4) #{neighbors within the boundary shell}.
BoundaryOperator deg_tilde(const RectDomain& domain);

/// (1/4) x adjacency matrix of the boundary shell.
BoundaryOperator shift_op(const RectDomain& domain);

/// Single-layer operator M[m,n] = (R(lambda +- i0) delta_n)(m) on the shell.
BoundaryOperator single_layer(const RectDomain& domain, const Potential& V,
                              const FreeResolvent& r0);

/// B = M^{-1}; equals Lambda_V - Lambda_ext - lambda + deg_tilde - S_shell.
BoundaryOperator boundary_op(const RectDomain& domain, const Potential& V,
                             const FreeResolvent& r0);

/// Exterior D-N map, potential-independent; assembled algebraically from the
/// free quantities: Lambda_ext = Lambda_0 - lambda + deg_tilde - S_shell - B_0.
BoundaryOperator exterior_dn(const RectDomain& domain, const FreeResolvent& r0);

} // namespace latscat
