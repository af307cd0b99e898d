#pragma once

#include <Eigen/Dense>
#include <vector>

#include "latscat/angular_grid.hpp"
#include "latscat/green.hpp"
#include "latscat/lattice.hpp"
#include "latscat/operator_matrix.hpp"
#include "latscat/potential.hpp"

namespace latscat {

/// Generalized plane wave psi0(n, lambda, theta) =
/// (2pi)^(-d/2) (sqrt(lambda))^(d-2)/2 * exp(i n.x(sqrt(lambda) theta)) * J(sqrt(lambda) theta).
Complex incident_wave(const SpectralParam& sp, const LatticePoint& n, const Vector& theta);

/// Bare phase factor (2pi)^(-d/2) exp(i n.x); the surface density that
/// completes psi0 lives in the angular-node weights mu instead.
Complex plane_wave(int d, const LatticePoint& n, const Vector& x);

/// Lippmann-Schwinger solver: factorizes (I + R0 V) on supp V once and
/// applies the full resolvent R(lambda +- i0) to compactly supported data.
class LippmannSchwinger {
public:
    LippmannSchwinger(const Potential& V, const FreeResolvent& r0);

    const std::vector<LatticePoint>& support() const { return supp_; }
    const Eigen::VectorXd& support_values() const { return vvals_; }
    const FreeResolvent& green() const { return r0_; }

    /// Condition number of (I + R0 V); > 1e12 marks the energy numerically
    /// exceptional and construction throws.
    double condition() const { return cond_; }

    /// (R(lambda +- i0) f)(n) for n in window.
    GridFunction apply(const GridFunction& f, const std::vector<LatticePoint>& window) const;

    /// (1 - V R(lambda +- i0)) f restricted to supp f + supp V.
    GridFunction scattered_source(const GridFunction& f) const;

    /// r0 sampled on support differences (empty when V = 0).
    const Eigen::MatrixXcd& kernel_on_support() const { return g_supp_; }
    /// Columnwise solve of (I + R0 V) w = rhs on the support.
    Eigen::MatrixXcd solve_on_support(const Eigen::MatrixXcd& rhs) const { return lu_.solve(rhs); }

private:
    const FreeResolvent& r0_;
    std::vector<LatticePoint> supp_;
    Eigen::VectorXd vvals_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    Eigen::MatrixXcd g_supp_; // r0 on support differences
    double cond_ = 1.0;
};

/// Convenience wrapper around LippmannSchwinger::apply.
GridFunction resolvent_apply(const Potential& V, const FreeResolvent& r0, const GridFunction& f,
                             const std::vector<LatticePoint>& window,
                             double* condition = nullptr);

/// Scattering amplitude as an angular x angular mu-kernel:
/// A[i,j] = sum_n conj(pw_i(n)) [(1 - V Rsolve) V pw_j](n).
OperatorMatrix amplitude(const Potential& V, const FreeResolvent& r0, const AngularGrid& grid);

/// First Born approximation kernel; same index convention.
OperatorMatrix born_amplitude(const Potential& V, const AngularGrid& grid);

/// S = I - 2 pi i A diag(mu), a map on the weighted discrete L^2(M_lambda).
OperatorMatrix s_matrix(const OperatorMatrix& A, const AngularGrid& grid);

/// || S^* W S - W ||_F / || W ||_F with W = diag(mu).
double unitarity_defect(const OperatorMatrix& S, const AngularGrid& grid);

/// (G^(+-) f)(omega): far-field transform of (1 - V R) f evaluated at an
/// arbitrary unit direction via its stationary point.
Complex far_field_transform(const Potential& V, const FreeResolvent& r0, const GridFunction& f,
                            const Vector& omega);

/// (G^(+-) f) sampled at the nodes of the grid.
Eigen::VectorXcd generalized_fourier(const Potential& V, const FreeResolvent& r0,
                                     const GridFunction& f, const AngularGrid& grid);

/// For each radius R: max over sampled lattice directions |k| ~ R of
/// |(R f)(k) - leading far-field term| * |k|^((d-1)/2).  Decays like 1/|k|.
std::vector<double> far_field_defect(const Potential& V, const FreeResolvent& r0,
                                     const GridFunction& f, const std::vector<int>& radii,
                                     int directions = 16);

/// Cesaro radiation-condition defect (1/R) sum_{n in cube(R), n != 0}
/// |(d_rad u)(n) - A_sign(lambda, omega_n) u(n)|^2 for each requested R.
/// u must be defined on the cube of radius max(R)+1.
std::vector<double> radiation_defect(const GridFunction& u, const SpectralParam& sp,
                                     const std::vector<int>& radii);

} // namespace latscat
