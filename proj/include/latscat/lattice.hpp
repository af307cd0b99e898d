#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "latscat/errors.hpp"

namespace latscat {

using Complex = std::complex<double>;

/// A point of the integer lattice Z^d, d >= 2.
struct LatticePoint {
    std::vector<int> coords;

    LatticePoint() = default;
    explicit LatticePoint(std::vector<int> c) : coords(std::move(c)) {}
    LatticePoint(std::initializer_list<int> c) : coords(c) {}

    int dim() const { return static_cast<int>(coords.size()); }
    int operator[](int j) const { return coords[static_cast<std::size_t>(j)]; }
    int& operator[](int j) { return coords[static_cast<std::size_t>(j)]; }

    bool operator==(const LatticePoint& o) const { return coords == o.coords; }
    bool operator!=(const LatticePoint& o) const { return coords != o.coords; }
    /// Lexicographic order; used everywhere a reproducible vertex ordering is needed.
    bool operator<(const LatticePoint& o) const { return coords < o.coords; }

    LatticePoint shifted(int j, int delta) const {
        LatticePoint p = *this;
        p[j] += delta;
        return p;
    }
    LatticePoint operator-(const LatticePoint& o) const {
        LatticePoint p = *this;
        for (int j = 0; j < dim(); ++j) p[j] -= o[j];
        return p;
    }

    /// max_j |n_j|: the side of the smallest centered cube containing the point.
    int cube_radius() const;
    /// Euclidean norm.
    double norm() const;
    /// true iff the points differ by one unit step in one coordinate.
    bool adjacent(const LatticePoint& o) const;

    std::string to_string() const;
};

/// Unit basis vector e_j in dimension d.
LatticePoint unit_vector(int d, int j);

/// All 2d nearest neighbors of n.
std::vector<LatticePoint> neighbors(const LatticePoint& n);

/// Rectangular domain: interior {1 <= n_j <= M}, boundary = union of the 2d
/// open faces {n_j in {0, M+1}, 1 <= n_i <= M (i != j)}.  Corner points (two
/// or more coordinates outside [1,M]) belong to neither set.  Interior
/// vertices are indexed first, then boundary vertices, each block in
/// lexicographic order.
class RectDomain {
public:
    RectDomain(int d, int M);

    int dim() const { return d_; }
    int side() const { return M_; }

    const std::vector<LatticePoint>& interior() const { return interior_; }
    const std::vector<LatticePoint>& boundary() const { return boundary_; }
    int num_interior() const { return static_cast<int>(interior_.size()); }
    int num_boundary() const { return static_cast<int>(boundary_.size()); }

    bool is_interior(const LatticePoint& n) const;
    bool is_boundary(const LatticePoint& n) const;
    bool contains(const LatticePoint& n) const { return is_interior(n) || is_boundary(n); }

    /// Index of n within the interior block (0-based).  Throws if absent.
    int interior_index(const LatticePoint& n) const;
    /// Index of n within the boundary block (0-based).  Throws if absent.
    int boundary_index(const LatticePoint& n) const;

    /// Boundary face {n_j = M+1} (positive) or {n_j = 0} (negative).
    std::vector<LatticePoint> face(int j, bool positive) const;
    /// Boundary-block indices of the face, in lexicographic order of the vertices.
    std::vector<int> face_indices(int j, bool positive) const;

    /// The unique interior neighbor of a boundary vertex.
    LatticePoint interior_neighbor(const LatticePoint& b) const;

private:
    int d_;
    int M_;
    std::vector<LatticePoint> interior_;
    std::vector<LatticePoint> boundary_;
    std::map<LatticePoint, int> interior_index_;
    std::map<LatticePoint, int> boundary_index_;
};

/// Finitely supported complex grid function.  Lookup outside the stored
/// support is an error unless the caller explicitly asks for zero-extension.
class GridFunction {
public:
    GridFunction() = default;

    void set(const LatticePoint& n, Complex v) { values_[n] = v; }
    bool defined_at(const LatticePoint& n) const { return values_.count(n) != 0; }

    /// Value at n; throws if n is outside the support set.
    Complex at(const LatticePoint& n) const;
    /// Value at n, zero if absent.  Use only where the operation's contract
    /// documents zero-extension.
    Complex at_or_zero(const LatticePoint& n) const;

    const std::map<LatticePoint, Complex>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    static GridFunction delta(const LatticePoint& n) {
        GridFunction f;
        f.set(n, 1.0);
        return f;
    }

private:
    std::map<LatticePoint, Complex> values_;
};

/// Graph degree used by the interior Hamiltonian: all lattice neighbors inside
/// the domain for an interior vertex (2d), interior neighbors only for a
/// boundary vertex (exactly 1).  Boundary-boundary edges do not count.
int degree(const RectDomain& domain, const LatticePoint& n);

/// (1/4) sum_{m ~ n} (u(m) - u(n)).  Requires u at n and at all 2d neighbors.
Complex discrete_laplacian(const GridFunction& u, const LatticePoint& n);

/// Normal derivative on the boundary: (1/4) sum over interior neighbors m of
/// (u(n) - u(m)).  For a rectangular domain there is exactly one such m.
GridFunction normal_derivative(const RectDomain& domain, const GridFunction& u);

/// |sum_int (Lap u * v - u * Lap v) - sum_bdy (dnu u * v - u * dnu v)|.
/// Zero in exact arithmetic for every pair defined on interior + boundary.
double greens_identity_defect(const RectDomain& domain, const GridFunction& u,
                              const GridFunction& v);

/// Neighbors of k lying on the boundary shell of the centered cube of radius
/// R(k) = max_j |k_j|: the points k + sgn(k_j) e_j over coordinates attaining
/// the max (both signs when k = 0).
std::vector<LatticePoint> radial_shell_neighbors(const LatticePoint& k);

/// (1/4) sum over shell neighbors m of (u(m) - u(k)).
Complex radial_derivative(const GridFunction& u, const LatticePoint& k);

/// Membership test for the cone with vertex n opening in the -e_1 direction:
/// sum_{k != 1} |m_k - n_k| <= -(m_1 - n_1).
bool cone_contains(const LatticePoint& vertex, const LatticePoint& m);

/// All domain vertices inside the cone with the given vertex.
std::vector<LatticePoint> cone(const RectDomain& domain, const LatticePoint& vertex);

/// max over integer 1 < R <= R_max of (1/R) sum_{|n| < R} |u(n)|^2, the
/// discrete analogue of the B*-norm used as a radiation diagnostic.
/// u is zero-extended outside its support.
double bstar_norm(const GridFunction& u, int R_max);

} // namespace latscat
