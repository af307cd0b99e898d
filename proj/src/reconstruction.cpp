#include "latscat/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latscat {

namespace {

int level_of(const LatticePoint& n) { return n[0] + n[n.dim() - 1]; }

// Middle multi-indices r' in [1,M]^(d-2); a single empty index for d = 2.
std::vector<std::vector<int>> middle_indices(int d, int M) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(d - 2), 1);
    while (true) {
        out.push_back(cur);
        int t = 0;
        for (; t < d - 2; ++t) {
            if (++cur[static_cast<std::size_t>(t)] <= M) break;
            cur[static_cast<std::size_t>(t)] = 1;
        }
        if (t == d - 2) break;
    }
    return out;
}

LatticePoint make_point(int d, int n1, const std::vector<int>& rprime, int nd) {
    LatticePoint p(std::vector<int>(static_cast<std::size_t>(d), 0));
    p[0] = n1;
    for (int j = 0; j < d - 2; ++j) p[j + 1] = rprime[static_cast<std::size_t>(j)];
    p[d - 1] = nd;
    return p;
}

} // namespace

GridFunction cauchy_march(const RectDomain& domain, const Potential& V, double lambda,
                          const GridFunction& dirichlet_partial,
                          const GridFunction& neumann_bottom) {
    const int d = domain.dim();
    const int M = domain.side();

    // w runs over the cross section [1,M]^(d-1); boundary values come from the
    // given Dirichlet data.
    std::vector<std::vector<int>> sections;
    {
        std::vector<int> cur(static_cast<std::size_t>(d - 1), 1);
        while (true) {
            sections.push_back(cur);
            int t = 0;
            for (; t < d - 1; ++t) {
                if (++cur[static_cast<std::size_t>(t)] <= M) break;
                cur[static_cast<std::size_t>(t)] = 1;
            }
            if (t == d - 1) break;
        }
    }

    auto point_at = [&](int n1, const std::vector<int>& w) {
        LatticePoint p(std::vector<int>(static_cast<std::size_t>(d), 0));
        p[0] = n1;
        for (int j = 1; j < d; ++j) p[j] = w[static_cast<std::size_t>(j - 1)];
        return p;
    };

    GridFunction u;
    auto value_at = [&](const LatticePoint& p) -> Complex {
        if (u.defined_at(p)) return u.at(p);
        return dirichlet_partial.at(p); // boundary off the n1 = M+1 face
    };

    // First plane from the Neumann data: dnu = (1/4)(f - u(1,.)) on n1 = 0.
    for (const auto& w : sections) {
        const LatticePoint b0 = point_at(0, w);
        u.set(point_at(1, w), dirichlet_partial.at(b0) - 4.0 * neumann_bottom.at(b0));
    }

    // Forward substitution of the interior equation plane by plane.
    for (int n1 = 1; n1 <= M; ++n1) {
        for (const auto& w : sections) {
            const LatticePoint p = point_at(n1, w);
            Complex side = 0.0;
            for (int j = 1; j < d; ++j) {
                side += value_at(p.shifted(j, +1));
                side += value_at(p.shifted(j, -1));
            }
            const Complex below = n1 == 1 ? dirichlet_partial.at(point_at(0, w))
                                          : u.at(point_at(n1 - 1, w));
            const Complex next = 4.0 * (0.5 * d + V.at(p) - lambda) * u.at(p) - below - side;
            u.set(point_at(n1 + 1, w), next);
        }
    }
    return u;
}

Eigen::VectorXd synth_boundary_data(const Eigen::MatrixXd& dn, const RectDomain& domain,
                                    const Eigen::VectorXd& f2, const Eigen::VectorXd& g) {
    const int nb = domain.num_boundary();
    if (dn.rows() != nb || dn.cols() != nb || f2.size() != nb || g.size() != nb)
        throw validation_error("synth_boundary_data: size mismatch with the boundary");

    const std::vector<int> top = domain.face_indices(0, true);   // n1 = M+1
    const std::vector<int> bottom = domain.face_indices(0, false); // n1 = 0
    const int m = static_cast<int>(top.size());

    std::vector<int> rest;
    {
        std::vector<char> is_top(static_cast<std::size_t>(nb), 0);
        for (int i : top) is_top[static_cast<std::size_t>(i)] = 1;
        for (int i = 0; i < nb; ++i)
            if (!is_top[static_cast<std::size_t>(i)]) rest.push_back(i);
    }

    Eigen::MatrixXd a(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) a(r, c) = dn(bottom[static_cast<std::size_t>(r)],
                                                 top[static_cast<std::size_t>(c)]);
    Eigen::VectorXd rhs(m);
    for (int r = 0; r < m; ++r) {
        double s = g[bottom[static_cast<std::size_t>(r)]];
        for (int c : rest) s -= dn(bottom[static_cast<std::size_t>(r)], c) * f2[c];
        rhs[r] = s;
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int i = 0; i < m; ++i) {
            const double p = std::abs(lu.matrixLU()(i, i));
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        if (!(lo > 1e-13 * hi))
            throw exceptional_energy_error(
                "synth_boundary_data: face-to-face D-N block singular "
                "(lambda in the interior Dirichlet spectrum suspected)");
    }
    const Eigen::VectorXd f1 = lu.solve(rhs);

    Eigen::VectorXd f = f2;
    for (int c = 0; c < m; ++c) f[top[static_cast<std::size_t>(c)]] = f1[c];
    return f;
}

namespace {

std::string sweep_tag(int p, const std::vector<int>& rprime) {
    std::string s = "level " + std::to_string(p) + ", section (";
    for (std::size_t i = 0; i < rprime.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(rprime[i]);
    }
    return s + ")";
}

} // namespace

SweepResult sweep_level(const RectDomain& domain, const Eigen::MatrixXd& dn, double lambda,
                        int p, const std::vector<int>& rprime,
                        const std::map<LatticePoint, double>& known) {
    const int d = domain.dim();
    const int M = domain.side();
    const int nb = domain.num_boundary();
    if (p < M + 1 || p > 2 * M) throw validation_error("sweep_level: level out of range");
    if (static_cast<int>(rprime.size()) != d - 2)
        throw validation_error("sweep_level: middle index size mismatch");

    // Probe datum: a single unit on the nd = M+1 face (level p), except at the
    // bottom level where it sits on the n1 = 0 face (level p - 1).
    const bool bottom_level = (p == M + 1);
    const LatticePoint probe =
        bottom_level ? make_point(d, 0, rprime, M) : make_point(d, p - M - 1, rprime, M + 1);

    Eigen::VectorXd f2 = Eigen::VectorXd::Zero(nb);
    f2[domain.boundary_index(probe)] = 1.0;
    Eigen::VectorXd f;
    try {
        f = synth_boundary_data(dn, domain, f2, Eigen::VectorXd::Zero(nb));
    } catch (const exceptional_energy_error& e) {
        throw exceptional_energy_error("sweep at " + sweep_tag(p, rprime) + ": " + e.what());
    }

    SweepResult out;
    {
        const Eigen::VectorXd img = dn * f;
        double worst = 0.0;
        for (int i : domain.face_indices(0, false)) worst = std::max(worst, std::abs(img[i]));
        out.neumann_residual = worst;
        if (!(worst <= 1e-10 * std::max(1.0, f.cwiseAbs().maxCoeff())))
            throw numerical_error("sweep at " + sweep_tag(p, rprime) +
                                  ": synthesized data violates the zero-flux condition (residual " +
                                  std::to_string(worst) + ")");
    }

    // Alternating diagonal of the solution forced by the probe.
    const int imax = bottom_level ? M : 2 * M + 1 - p;
    std::map<LatticePoint, double> level_values; // on the plane n1 + nd = p
    std::vector<LatticePoint> diag_points;
    for (int i = 1; i <= imax; ++i) {
        const LatticePoint q = make_point(d, p - M - 1 + i, rprime, M + 1 - i);
        const double v = bottom_level ? ((i % 2 == 1) ? 1.0 : -1.0)
                                      : ((i % 2 == 1) ? -1.0 : 1.0);
        level_values[q] = v;
        diag_points.push_back(q);
    }

    // Upper region: unknowns u at interior vertices with n1 + nd >= p + 1.
    std::vector<LatticePoint> region;
    std::map<LatticePoint, int> region_index;
    for (const auto& n : domain.interior())
        if (level_of(n) >= p + 1) {
            region_index[n] = static_cast<int>(region.size());
            region.push_back(n);
        }

    auto known_value = [&](const LatticePoint& m, const Eigen::VectorXd* solved) -> double {
        if (domain.is_boundary(m)) return f[domain.boundary_index(m)];
        const int lv = level_of(m);
        if (lv >= p + 1) {
            if (!solved) throw std::logic_error("sweep_level: upper value requested before solve");
            return (*solved)[region_index.at(m)];
        }
        if (lv == p) {
            auto it = level_values.find(m);
            return it == level_values.end() ? 0.0 : it->second;
        }
        return 0.0;
    };

    const int nr = static_cast<int>(region.size());
    Eigen::VectorXd u_region;
    if (nr > 0) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nr, nr);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(nr);
        for (int r = 0; r < nr; ++r) {
            const LatticePoint& n = region[static_cast<std::size_t>(r)];
            auto it = known.find(n);
            if (it == known.end())
                throw std::logic_error("sweep_level: potential not yet known at " + n.to_string());
            A(r, r) = 0.5 * d + it->second - lambda;
            for (const auto& m : neighbors(n)) {
                if (domain.is_interior(m) && level_of(m) >= p + 1)
                    A(r, region_index.at(m)) = -0.25;
                else
                    b[r] += 0.25 * known_value(m, nullptr);
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int i = 0; i < nr; ++i) {
            const double piv = std::abs(lu.matrixLU()(i, i));
            lo = std::min(lo, piv);
            hi = std::max(hi, piv);
        }
        out.subsystem_pivot_ratio = hi > 0.0 ? lo / hi : 0.0;
        if (!(lo > 1e-13 * hi))
            throw exceptional_energy_error(
                "sweep at " + sweep_tag(p, rprime) +
                ": upper-region system singular (sub-domain Dirichlet eigenvalue)");
        u_region = lu.solve(b);
    }

    // Read the potential off the diagonal: V = lambda - d/2 + (1/4) sum u(m) / u(n).
    for (const auto& q : diag_points) {
        double s = 0.0;
        for (const auto& m : neighbors(q)) s += known_value(m, &u_region);
        const double uq = level_values.at(q);
        out.recovered.emplace_back(q, lambda - 0.5 * d + 0.25 * s / uq);
    }

    // Consistency of the imposed pattern: the equation at every interior
    // vertex at or below level p (off the loaded diagonal) has u = 0 there,
    // so its residual (1/4)|sum of neighbor values| must vanish.  A violation
    // means the given matrix is not the D-N map of any potential.
    double worst = 0.0;
    for (const auto& n : domain.interior()) {
        const int lv = level_of(n);
        if (lv > p) continue;
        if (lv == p && level_values.count(n)) continue;
        double s = 0.0;
        for (const auto& m : neighbors(n)) s += known_value(m, &u_region);
        worst = std::max(worst, 0.25 * std::abs(s));
    }
    out.pattern_residual = worst;
    if (!(worst <= 1e-6))
        throw numerical_error("sweep at " + sweep_tag(p, rprime) +
                              ": solution pattern inconsistent (residual " +
                              std::to_string(worst) + ")");
    return out;
}

LatticePoint reflect_point(const RectDomain& domain, const LatticePoint& n) {
    LatticePoint q = n;
    for (int j = 0; j < domain.dim(); ++j) q[j] = domain.side() + 1 - n[j];
    return q;
}

Potential reflect_potential(const Potential& V) {
    Potential out(V.domain());
    for (const auto& n : V.domain().interior())
        out.set(reflect_point(V.domain(), n), V.at(n));
    return out;
}

Eigen::MatrixXd reflect_dn(const Eigen::MatrixXd& dn, const RectDomain& domain) {
    const int nb = domain.num_boundary();
    std::vector<int> perm(static_cast<std::size_t>(nb));
    for (int i = 0; i < nb; ++i)
        perm[static_cast<std::size_t>(i)] =
            domain.boundary_index(reflect_point(domain, domain.boundary()[static_cast<std::size_t>(i)]));
    Eigen::MatrixXd out(nb, nb);
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
            out(i, j) = dn(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    return out;
}

BoundaryOperator reflect_problem(const BoundaryOperator& op, const RectDomain& domain) {
    BoundaryOperator out = op;
    const int nb = domain.num_boundary();
    if (op.mat.rows() != nb) throw validation_error("reflect_problem: size mismatch");
    std::vector<int> perm(static_cast<std::size_t>(nb));
    for (int i = 0; i < nb; ++i)
        perm[static_cast<std::size_t>(i)] =
            domain.boundary_index(reflect_point(domain, domain.boundary()[static_cast<std::size_t>(i)]));
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
            out.mat(i, j) = op.mat(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    return out;
}

ReconstructionReport reconstruct(const Eigen::MatrixXd& dn, double lambda, int d, int M) {
    const RectDomain domain(d, M);
    if (dn.rows() != domain.num_boundary() || dn.cols() != domain.num_boundary())
        throw validation_error("reconstruct: D-N matrix size does not match the cube boundary");

    const auto middles = middle_indices(d, M);

    auto run_half = [&](const Eigen::MatrixXd& dn_half, int p_lowest,
                        std::map<LatticePoint, double>& known, ReconstructionReport& rep) {
        for (int p = 2 * M; p >= p_lowest; --p) {
            for (const auto& rp : middles) {
                const SweepResult res = sweep_level(domain, dn_half, lambda, p, rp, known);
                rep.max_neumann_residual = std::max(rep.max_neumann_residual, res.neumann_residual);
                rep.max_pattern_residual = std::max(rep.max_pattern_residual, res.pattern_residual);
                ++rep.sweeps;
                for (const auto& [q, v] : res.recovered) known[q] = v;
            }
        }
    };

    ReconstructionReport rep{Potential(domain), 0.0, 0.0, 0};

    std::map<LatticePoint, double> upper;
    run_half(dn, M + 1, upper, rep);

    std::map<LatticePoint, double> lower_reflected;
    if (M >= 2) {
        const Eigen::MatrixXd dn_r = reflect_dn(dn, domain);
        run_half(dn_r, M + 2, lower_reflected, rep);
    }

    for (const auto& [n, v] : upper) rep.potential.set(n, v);
    for (const auto& [m, v] : lower_reflected) rep.potential.set(reflect_point(domain, m), v);
    return rep;
}

} // namespace latscat
