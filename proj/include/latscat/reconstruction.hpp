#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "latscat/dn_maps.hpp"
#include "latscat/lattice.hpp"
#include "latscat/potential.hpp"

namespace latscat {

/// March of the Cauchy problem: Dirichlet data everywhere except the n1 = M+1
/// face, Neumann data on the n1 = 0 face; planes n1 = 1, ..., M+1 follow by
/// forward substitution.  Needs the full potential (verifier, not inversion).
/// Returns values on the interior and on the n1 = M+1 face.
GridFunction cauchy_march(const RectDomain& domain, const Potential& V, double lambda,
                          const GridFunction& dirichlet_partial, const GridFunction& neumann_bottom);

/// Completes partial Dirichlet data f2 (given off the n1 = M+1 face) to full
/// boundary data whose D-N image on the n1 = 0 face equals g, by solving with
/// the nonsingular face-to-face block of the D-N matrix.  f2 entries on the
/// n1 = M+1 face are ignored; both vectors are indexed by the domain's
/// boundary order (g entries off the n1 = 0 face are ignored).
Eigen::VectorXd synth_boundary_data(const Eigen::MatrixXd& dn, const RectDomain& domain,
                                    const Eigen::VectorXd& f2, const Eigen::VectorXd& g);

struct SweepResult {
    /// Recovered potential values on the level-p diagonal of the section.
    std::vector<std::pair<LatticePoint, double>> recovered;
    double neumann_residual = 0.0;   ///< |dn * f| on the n1 = 0 face after synthesis
    double pattern_residual = 0.0;   ///< worst residual of the zero-pattern equations
    double subsystem_pivot_ratio = 1.0; ///< min/max |pivot| of the upper-region solve
};

/// One anti-diagonal sweep: synthesizes the probe boundary data for level p
/// and middle index r', solves the upper region, and reads the potential off
/// the alternating +-1 diagonal.  known must cover every interior vertex with
/// n1 + nd > p.
SweepResult sweep_level(const RectDomain& domain, const Eigen::MatrixXd& dn, double lambda,
                        int p, const std::vector<int>& rprime,
                        const std::map<LatticePoint, double>& known);

/// Point reflection n -> (M+1) - n of all coordinates.
LatticePoint reflect_point(const RectDomain& domain, const LatticePoint& n);
Potential reflect_potential(const Potential& V);
/// Conjugates the D-N matrix by the boundary permutation of the reflection;
/// the result is the D-N map of the reflected potential.
Eigen::MatrixXd reflect_dn(const Eigen::MatrixXd& dn, const RectDomain& domain);
BoundaryOperator reflect_problem(const BoundaryOperator& op, const RectDomain& domain);

struct ReconstructionReport {
    Potential potential;
    double max_neumann_residual = 0.0;
    double max_pattern_residual = 0.0;
    int sweeps = 0;
};

/// Full layer stripping: sweeps levels 2M down to M+1, then the reflected
/// problem for the remaining lower levels.  dn must be the interior D-N
/// matrix of some potential on the (d, M) cube at energy lambda.
ReconstructionReport reconstruct(const Eigen::MatrixXd& dn, double lambda, int d, int M);

} // namespace latscat
