#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "latscat/lattice.hpp"
#include "latscat/spectral.hpp"

namespace latscat {

enum class GreenMethod { Auto, Reduction1D, EpsExtrapolation };

std::string to_string(GreenMethod m);
GreenMethod green_method_from_string(const std::string& s);

/// Tabulated values of the free resolvent kernel r0(k, lambda +- i0).
struct GreenTable {
    int d = 0;
    double lambda = 0.0;
    LimitSign sign = LimitSign::Plus;
    std::string method;
    double tolerance = 0.0;
    double accuracy = 0.0; // worst per-value error estimate
    std::map<LatticePoint, Complex> values;

    Complex at(const LatticePoint& k) const;
};

/// max over offsets k (whose 2d unit neighbors are all tabulated) of
/// |(d/2 - lambda) r0(k) - (1/4) sum r0(k +- e_j) - delta_{k,0}|.
/// The exact kernel satisfies the identity exactly; this is the hard gate on
/// every table before downstream use.
double r0_defect(const GreenTable& table);

/// Leading far-field term of r0(k, lambda +- i0):
///   +- i (2 pi |k|)^(-(d-1)/2) exp(+-i(k.x_inf - (d-1)pi/4)) K^(-1/2)/|grad h|.
Complex r0_asymptotic(const SpectralParam& sp, const LatticePoint& k);

/// Evaluator for r0(k, lambda +- i0) with internal caching.
///
/// d = 2 default: the inner torus integral is summed in closed form (the
/// sub-unit root of the cosine kernel), leaving one integral with square-root
/// turning points that are removed by substitution; Gauss-Legendre panels then
/// converge spectrally on the limiting integrand.
///
/// Generic d: the same closed form removes one variable; the remaining
/// (d-1)-fold integral is evaluated at lambda + i*eps by the tensor trapezoid
/// rule (periodic, spectrally accurate) for a decreasing sequence of eps and
/// Richardson-extrapolated to eps -> 0.
///
/// The minus boundary value is never computed separately: it is the complex
/// conjugate of the plus value.
class FreeResolvent {
public:
    FreeResolvent(const SpectralParam& sp, double tolerance = 0.0,
                  GreenMethod method = GreenMethod::Auto);

    Complex operator()(const LatticePoint& k) const;

    const SpectralParam& spectral() const { return sp_; }
    double tolerance() const { return tol_; }
    GreenMethod method() const { return method_; }

    /// Builds a table for the given offsets (plus nothing else).
    GreenTable table(const std::vector<LatticePoint>& offsets) const;

    /// Seeds the cache from a table computed at the same (d, lambda) with a
    /// tolerance at least as tight; returns the number of entries adopted.
    std::size_t preload(const GreenTable& t);

    /// Everything currently cached, as a table keyed by canonical offsets.
    GreenTable snapshot() const;

    /// Number of kernel evaluations performed so far (diagnostics).
    std::size_t evaluations() const { return evals_; }

private:
    Complex eval_canonical(const LatticePoint& k) const;
    Complex eval_reduction(const LatticePoint& k) const;
    Complex eval_extrapolation(const LatticePoint& k) const;

    SpectralParam sp_;
    double tol_;
    GreenMethod method_;
    mutable std::map<std::vector<int>, Complex> cache_; // canonical offset -> plus value
    mutable std::size_t evals_ = 0;
};

} // namespace latscat
