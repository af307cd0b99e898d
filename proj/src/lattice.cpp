#include "latscat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace latscat {

int LatticePoint::cube_radius() const {
    int r = 0;
    for (int c : coords) r = std::max(r, std::abs(c));
    return r;
}

double LatticePoint::norm() const {
    double s = 0.0;
    for (int c : coords) s += double(c) * double(c);
    return std::sqrt(s);
}

bool LatticePoint::adjacent(const LatticePoint& o) const {
    int total = 0;
    for (int j = 0; j < dim(); ++j) {
        int dj = std::abs(coords[static_cast<std::size_t>(j)] - o[j]);
        if (dj > 1) return false;
        total += dj;
    }
    return total == 1;
}

std::string LatticePoint::to_string() const {
    std::ostringstream os;
    os << '(';
    for (int j = 0; j < dim(); ++j) {
        if (j) os << ',';
        os << coords[static_cast<std::size_t>(j)];
    }
    os << ')';
    return os.str();
}

LatticePoint unit_vector(int d, int j) {
    LatticePoint e(std::vector<int>(static_cast<std::size_t>(d), 0));
    e[j] = 1;
    return e;
}

std::vector<LatticePoint> neighbors(const LatticePoint& n) {
    std::vector<LatticePoint> out;
    out.reserve(static_cast<std::size_t>(2 * n.dim()));
    for (int j = 0; j < n.dim(); ++j) {
        out.push_back(n.shifted(j, +1));
        out.push_back(n.shifted(j, -1));
    }
    return out;
}

namespace {

void enumerate_box(int d, int lo, int hi, std::vector<LatticePoint>& out) {
    LatticePoint p(std::vector<int>(static_cast<std::size_t>(d), lo));
    while (true) {
        out.push_back(p);
        int j = d - 1;
        while (j >= 0 && p[j] == hi) {
            p[j] = lo;
            --j;
        }
        if (j < 0) break;
        ++p[j];
    }
}

} // namespace

RectDomain::RectDomain(int d, int M) : d_(d), M_(M) {
    if (d < 2) throw validation_error("RectDomain: dimension must be >= 2");
    if (M < 1) throw validation_error("RectDomain: side length must be >= 1");

    enumerate_box(d, 1, M, interior_);
    std::sort(interior_.begin(), interior_.end());
    for (int i = 0; i < num_interior(); ++i)
        interior_index_[interior_[static_cast<std::size_t>(i)]] = i;

    for (int j = 0; j < d; ++j) {
        for (int side = 0; side < 2; ++side) {
            std::vector<LatticePoint> slab;
            enumerate_box(d - 1, 1, M, slab);
            for (auto& q : slab) {
                LatticePoint p(std::vector<int>(static_cast<std::size_t>(d), 0));
                int t = 0;
                for (int i = 0; i < d; ++i) {
                    if (i == j)
                        p[i] = side ? M + 1 : 0;
                    else
                        p[i] = q[t++];
                }
                boundary_.push_back(p);
            }
        }
    }
    std::sort(boundary_.begin(), boundary_.end());
    for (int i = 0; i < num_boundary(); ++i)
        boundary_index_[boundary_[static_cast<std::size_t>(i)]] = i;
}

bool RectDomain::is_interior(const LatticePoint& n) const {
    if (n.dim() != d_) return false;
    for (int j = 0; j < d_; ++j)
        if (n[j] < 1 || n[j] > M_) return false;
    return true;
}

bool RectDomain::is_boundary(const LatticePoint& n) const {
    if (n.dim() != d_) return false;
    return boundary_index_.count(n) != 0;
}

int RectDomain::interior_index(const LatticePoint& n) const {
    auto it = interior_index_.find(n);
    if (it == interior_index_.end())
        throw validation_error("RectDomain: " + n.to_string() + " is not an interior vertex");
    return it->second;
}

int RectDomain::boundary_index(const LatticePoint& n) const {
    auto it = boundary_index_.find(n);
    if (it == boundary_index_.end())
        throw validation_error("RectDomain: " + n.to_string() + " is not a boundary vertex");
    return it->second;
}

std::vector<LatticePoint> RectDomain::face(int j, bool positive) const {
    std::vector<LatticePoint> out;
    const int val = positive ? M_ + 1 : 0;
    for (const auto& b : boundary_)
        if (b[j] == val) out.push_back(b);
    return out;
}

std::vector<int> RectDomain::face_indices(int j, bool positive) const {
    std::vector<int> out;
    for (const auto& b : face(j, positive)) out.push_back(boundary_index(b));
    return out;
}

LatticePoint RectDomain::interior_neighbor(const LatticePoint& b) const {
    boundary_index(b); // validates
    for (int j = 0; j < d_; ++j) {
        if (b[j] == 0) return b.shifted(j, +1);
        if (b[j] == M_ + 1) return b.shifted(j, -1);
    }
    throw std::logic_error("RectDomain: boundary vertex without interior neighbor");
}

Complex GridFunction::at(const LatticePoint& n) const {
    auto it = values_.find(n);
    if (it == values_.end())
        throw validation_error("GridFunction: no value at " + n.to_string());
    return it->second;
}

Complex GridFunction::at_or_zero(const LatticePoint& n) const {
    auto it = values_.find(n);
    return it == values_.end() ? Complex(0.0) : it->second;
}

int degree(const RectDomain& domain, const LatticePoint& n) {
    if (domain.is_interior(n)) {
        int c = 0;
        for (const auto& m : neighbors(n))
            if (domain.contains(m)) ++c;
        return c;
    }
    if (domain.is_boundary(n)) {
        int c = 0;
        for (const auto& m : neighbors(n))
            if (domain.is_interior(m)) ++c;
        return c;
    }
    throw validation_error("degree: " + n.to_string() + " is not in the domain");
}

Complex discrete_laplacian(const GridFunction& u, const LatticePoint& n) {
    Complex s = 0.0;
    const Complex un = u.at(n);
    for (const auto& m : neighbors(n)) s += u.at(m) - un;
    return 0.25 * s;
}

GridFunction normal_derivative(const RectDomain& domain, const GridFunction& u) {
    GridFunction out;
    for (const auto& b : domain.boundary()) {
        Complex s = 0.0;
        for (const auto& m : neighbors(b))
            if (domain.is_interior(m)) s += u.at(b) - u.at(m);
        out.set(b, 0.25 * s);
    }
    return out;
}

double greens_identity_defect(const RectDomain& domain, const GridFunction& u,
                              const GridFunction& v) {
    Complex interior_sum = 0.0;
    for (const auto& n : domain.interior())
        interior_sum += discrete_laplacian(u, n) * v.at(n) - u.at(n) * discrete_laplacian(v, n);

    const GridFunction du = normal_derivative(domain, u);
    const GridFunction dv = normal_derivative(domain, v);
    Complex boundary_sum = 0.0;
    for (const auto& b : domain.boundary())
        boundary_sum += du.at(b) * v.at(b) - u.at(b) * dv.at(b);

    return std::abs(interior_sum - boundary_sum);
}

std::vector<LatticePoint> radial_shell_neighbors(const LatticePoint& k) {
    const int R = k.cube_radius();
    std::vector<LatticePoint> out;
    for (int j = 0; j < k.dim(); ++j) {
        if (std::abs(k[j]) == R) {
            if (k[j] >= 0) out.push_back(k.shifted(j, +1));
            if (k[j] <= 0) out.push_back(k.shifted(j, -1));
        }
    }
    return out;
}

Complex radial_derivative(const GridFunction& u, const LatticePoint& k) {
    Complex s = 0.0;
    const Complex uk = u.at(k);
    for (const auto& m : radial_shell_neighbors(k)) s += u.at(m) - uk;
    return 0.25 * s;
}

bool cone_contains(const LatticePoint& vertex, const LatticePoint& m) {
    int off_axis = 0;
    for (int j = 1; j < vertex.dim(); ++j) off_axis += std::abs(m[j] - vertex[j]);
    return off_axis <= -(m[0] - vertex[0]);
}

std::vector<LatticePoint> cone(const RectDomain& domain, const LatticePoint& vertex) {
    if (!domain.contains(vertex))
        throw validation_error("cone: vertex " + vertex.to_string() + " is not in the domain");
    std::vector<LatticePoint> out;
    for (const auto& n : domain.interior())
        if (cone_contains(vertex, n)) out.push_back(n);
    for (const auto& n : domain.boundary())
        if (cone_contains(vertex, n)) out.push_back(n);
    std::sort(out.begin(), out.end());
    return out;
}

double bstar_norm(const GridFunction& u, int R_max) {
    double best = 0.0;
    for (int R = 2; R <= R_max; ++R) {
        double s = 0.0;
        for (const auto& [n, v] : u.values())
            if (n.norm() < double(R)) s += std::norm(v);
        best = std::max(best, s / double(R));
    }
    return best;
}

} // namespace latscat
