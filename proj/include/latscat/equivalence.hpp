#pragma once

#include <Eigen/Dense>

#include "latscat/angular_grid.hpp"
#include "latscat/dn_maps.hpp"
#include "latscat/operator_matrix.hpp"
#include "latscat/potential.hpp"
#include "latscat/scattering.hpp"

namespace latscat {

/// Near-to-far map Gamma^(+-) = G0 . chi_shell . B0^(+-) (angular x boundary).
/// Potential-independent; assembled from free quantities.
OperatorMatrix gamma_matrix(const RectDomain& domain, const FreeResolvent& r0,
                            const AngularGrid& grid);

/// Obstacle scattering amplitude of the boundary shell (angular x angular
/// mu-kernel): A_ext = G0 . B0^(+) . G0^* .
OperatorMatrix exterior_amplitude(const RectDomain& domain, const FreeResolvent& r0_plus,
                                  const AngularGrid& grid);

/// || A_ext - A - Gamma^+ M^+ (Gamma^-)^H ||_F / || A_ext - A ||_F with every
/// factor computed independently.
double factorization_defect(const RectDomain& domain, const Potential& V,
                            const FreeResolvent& r0_plus, const AngularGrid& grid);

struct DnRecovery {
    BoundaryOperator lambda_v;     ///< recovered interior D-N map
    BoundaryOperator m_plus;       ///< recovered single-layer operator
    double gamma_rank_ratio = 0.0; ///< sigma_min/sigma_max of Gamma^+
    double gram_condition = 0.0;   ///< worst of the two Gram conditions
    double symmetry_defect = 0.0;  ///< ||L - L^T|| / ||L||
    double imag_fraction = 0.0;    ///< ||Im L|| / ||L||
};

/// Inverts the factorization: recovers M^+ from the amplitude by weighted
/// least squares against the potential-independent Gamma factors, then
/// Lambda_V = (M^+)^{-1} + Lambda_ext^+ + lambda - deg_tilde + S_shell.
DnRecovery smatrix_to_dn(const OperatorMatrix& amplitude_matrix, const RectDomain& domain,
                         const AngularGrid& grid, const FreeResolvent& r0_plus);

} // namespace latscat
