#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "latscat/lattice.hpp"
#include "latscat/spectral.hpp"

namespace latscat {

using Vector = Eigen::VectorXd;

/// Multiplier symbol of the free Hamiltonian on the torus:
/// h(x) = (d - sum cos x_j)/2 = sum sin^2(x_j/2), with range [0, d].
double symbol_h(const Vector& x);

/// grad h = (sin x_1, ..., sin x_d)/2.
Vector grad_h(const Vector& x);

/// A point of the energy surface {h = lambda} together with the direction
/// parameter theta_j = sin(x_j/2)/sqrt(lambda) on the unit sphere.
struct SurfacePoint {
    Vector x;
    Vector theta;
};

/// Low-band parametrization x_j = 2 asin(sqrt(lambda) theta_j) of the energy
/// surface by unit vectors theta.
SurfacePoint surface_point(const SpectralParam& sp, const Vector& theta);

/// Density of the spectral surface measure with respect to dtheta:
/// (sqrt(lambda))^(d-2)/2 * prod_j 2/sqrt(1 - lambda theta_j^2).  Low band.
double measure_weight(const SpectralParam& sp, const Vector& theta);

/// |Gaussian curvature| of {h = lambda} at x.  d = 2 uses the implicit-curve
/// quotient, d >= 3 the graph chart in the steepest coordinate.
/// Throws numerical_error at critical points of h.
double gaussian_curvature(const SpectralParam& sp, const Vector& x);

/// Principal curvatures at x (ascending), oriented so that the surface of a
/// small low-band sphere has positive values.
Vector principal_curvatures(const SpectralParam& sp, const Vector& x);

/// Deterministically seeded sample of the energy surface, valid in every band:
/// low/high bands via the sphere parametrization (reflected through (pi,..,pi)
/// for the high band), otherwise by first-crossing ray casting from the origin.
std::vector<Vector> sample_surface(const SpectralParam& sp, int count, std::uint64_t seed);

struct ConvexityReport {
    bool convex = false;         // all principal curvatures share one strict sign
    double min_principal = 0.0;  // after orienting the common sign to +
    double max_principal = 0.0;
    int samples = 0;
};

/// Samples the surface and checks sign-definiteness of the principal
/// curvatures.  Accepts any lambda in (0,d) \ Z so that the failure of
/// convexity outside the admissible band is observable.
ConvexityReport convexity_check(const SpectralParam& sp, int samples, std::uint64_t seed = 1);

/// The unique surface point whose outward unit normal is omega (strictly
/// convex band).  Solved by bisection: on the d = 2 curve via the angle of the
/// Gauss map, for d >= 3 via the monotone radial inversion of the normal map;
/// high band reduced to the low band by reflection through (pi, ..., pi).
SurfacePoint stationary_point(const SpectralParam& sp, const Vector& omega);

/// K(x_inf)^(-1/2) / |grad h(x_inf)|: the stationary-phase amplitude entering
/// the far-field expansion.  Invariant under omega -> -omega.
double amplitude_coeff(const SpectralParam& sp, const Vector& omega);

/// Radiation-condition coefficients A_+ and A_- for the rational direction
/// k/|k|: (1/4) sum over cube-shell neighbors m of k of
/// (exp(+-i (m-k).x_inf) - 1).  Depends only on the face pattern of k.
std::pair<Complex, Complex> radiation_coeff(const SpectralParam& sp, const LatticePoint& k);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double t);

} // namespace latscat
