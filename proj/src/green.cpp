#include "latscat/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "latscat/torus_geometry.hpp"

namespace latscat {

namespace {

constexpr double kPi = 3.14159265358979323846;
const Complex kI(0.0, 1.0);

// Gauss-Legendre nodes/weights on [-1,1], computed once per order by Newton
// iteration on the recurrence.
struct GaussRule {
    std::vector<double> x, w;
};

const GaussRule& gauss_rule(int n) {
    // Shared across evaluator instances (and threads).
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule r;
    r.x.resize(static_cast<std::size_t>(n));
    r.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.x[static_cast<std::size_t>(i)] = x;
        r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

// Limiting inner integral (1/2pi) int e^{i k t} / (a - cos(t)/2) dt at
// z = lambda + i0, parametrized by tt = sin^2(x/2) of the outer variable:
// a = tt - lambda + 1/2.  Below the turning point the sub-unit root sits on
// the upper unit circle; above it the root is real in (0,1).
Complex inner_limit(double tt, double lambda, int kabs) {
    const double ar = tt - lambda + 0.5;
    if (tt > lambda) {
        const double s = std::sqrt((tt - lambda) * (tt - lambda + 1.0));
        const double w = 2.0 * (ar - s);
        return std::pow(w, kabs) / s;
    }
    const double q = std::sqrt((lambda - tt) * (1.0 + tt - lambda));
    const double phi = std::atan2(q, ar);
    return std::exp(kI * (double(kabs) * phi)) * (kI / q);
}

// Inner integral for complex a (Im a != 0): both roots of w^2 - 4 a w + 1
// are off the unit circle; take the sub-unit one.
Complex inner_eps(Complex a, int kabs) {
    const Complex s = std::sqrt(4.0 * a * a - 1.0);
    Complex w = 2.0 * a - s;
    if (std::abs(w) > 1.0) w = 2.0 * a + s;
    return 4.0 * std::pow(w, kabs + 1) / (1.0 - w * w);
}

std::vector<int> canonical_offset(const LatticePoint& k) {
    std::vector<int> c(k.coords.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = std::abs(k.coords[j]);
    std::sort(c.begin(), c.end()); // ascending; the analytic sum gets the largest
    return c;
}

} // namespace

std::string to_string(GreenMethod m) {
    switch (m) {
        case GreenMethod::Auto: return "auto";
        case GreenMethod::Reduction1D: return "reduction";
        case GreenMethod::EpsExtrapolation: return "eps-extrapolation";
    }
    return "auto";
}

GreenMethod green_method_from_string(const std::string& s) {
    if (s == "auto") return GreenMethod::Auto;
    if (s == "reduction") return GreenMethod::Reduction1D;
    if (s == "eps-extrapolation") return GreenMethod::EpsExtrapolation;
    throw validation_error("unknown green method '" + s + "'");
}

Complex GreenTable::at(const LatticePoint& k) const {
    auto it = values.find(k);
    if (it == values.end())
        throw validation_error("GreenTable: offset " + k.to_string() + " not tabulated");
    return it->second;
}

double r0_defect(const GreenTable& table) {
    const int d = table.d;
    double worst = -1.0;
    for (const auto& [k, v] : table.values) {
        Complex s = 0.0;
        bool complete = true;
        for (int j = 0; j < d && complete; ++j) {
            for (int dir : {+1, -1}) {
                auto it = table.values.find(k.shifted(j, dir));
                if (it == table.values.end()) {
                    complete = false;
                    break;
                }
                s += it->second;
            }
        }
        if (!complete) continue;
        Complex defect = (0.5 * d - table.lambda) * v - 0.25 * s;
        if (k.cube_radius() == 0) defect -= 1.0;
        worst = std::max(worst, std::abs(defect));
    }
    if (worst < 0.0)
        throw validation_error("r0_defect: no tabulated offset has all unit-shift neighbors");
    return worst;
}

Complex r0_asymptotic(const SpectralParam& sp, const LatticePoint& k) {
    if (k.cube_radius() == 0) throw validation_error("r0_asymptotic: k must be nonzero");
    const int d = sp.dim();
    Vector omega(d);
    for (int j = 0; j < d; ++j) omega[j] = double(k[j]);
    const double kn = omega.norm();
    omega /= kn;

    const SurfacePoint p = stationary_point(sp, omega);
    const double a = 1.0 / (std::sqrt(gaussian_curvature(sp, p.x)) * grad_h(p.x).norm());
    double phase = 0.0;
    for (int j = 0; j < d; ++j) phase += double(k[j]) * p.x[j];
    const double sgn = sp.sign() == LimitSign::Plus ? 1.0 : -1.0;
    const Complex osc = std::exp(kI * (sgn * (phase - (d - 1) * kPi / 4.0)));
    return sgn * kI * std::pow(2.0 * kPi * kn, -0.5 * (d - 1)) * osc * a;
}

FreeResolvent::FreeResolvent(const SpectralParam& sp, double tolerance, GreenMethod method)
    : sp_(sp), tol_(tolerance), method_(method) {
    sp_.require_low_band("FreeResolvent");
    if (method_ == GreenMethod::Auto)
        method_ = sp_.dim() == 2 ? GreenMethod::Reduction1D : GreenMethod::EpsExtrapolation;
    if (method_ == GreenMethod::Reduction1D && sp_.dim() != 2)
        throw validation_error("FreeResolvent: the 1-D reduction is implemented for d = 2 only");
    if (tol_ <= 0.0) tol_ = method_ == GreenMethod::Reduction1D ? 1e-10 : 1e-5;
}

Complex FreeResolvent::operator()(const LatticePoint& k) const {
    if (k.dim() != sp_.dim()) throw validation_error("FreeResolvent: offset dimension mismatch");
    const std::vector<int> key = canonical_offset(k);
    auto it = cache_.find(key);
    Complex plus;
    if (it != cache_.end()) {
        plus = it->second;
    } else {
        plus = eval_canonical(LatticePoint(key));
        cache_.emplace(key, plus);
        ++evals_;
    }
    return sp_.sign() == LimitSign::Plus ? plus : std::conj(plus);
}

Complex FreeResolvent::eval_canonical(const LatticePoint& k) const {
    return method_ == GreenMethod::Reduction1D ? eval_reduction(k) : eval_extrapolation(k);
}

// d = 2.  r0 = (1/pi) int_0^pi cos(k1 x) * inner(sin^2(x/2), |k2|) dx, split
// at the turning point x* = 2 asin(sqrt(lambda)); the substitution x = x* -+ v^2
// absorbs the 1/sqrt singularity and leaves an analytic integrand on each side.
// The canonical offset is ascending, so k2 (the analytic index) is the larger.
Complex FreeResolvent::eval_reduction(const LatticePoint& k) const {
    const double lambda = sp_.lambda();
    const int k1 = k[0];
    const int k2 = k[1];
    const double xs = 2.0 * std::asin(std::sqrt(lambda));

    // Node budget graded with the requested tolerance so that loosening the
    // tolerance genuinely loosens the values (refinement studies depend on it).
    const double digits = std::min(12.0, std::max(1.0, -std::log10(tol_)));
    const int order = std::min(16, 3 + int(std::ceil(1.2 * digits)));
    const double density = std::max(0.04, 0.045 * digits);

    auto integrand = [&](double x) {
        const double st = std::sin(0.5 * x);
        return std::cos(double(k1) * x) * inner_limit(st * st, lambda, k2);
    };

    const double freq = double(std::abs(k1) + std::abs(k2));
    Complex total = 0.0;
    for (int side = 0; side < 2; ++side) {
        const double span = side == 0 ? xs : kPi - xs;
        if (span <= 0.0) continue;
        const double vmax = std::sqrt(span);
        const int panels = std::max(3, int(std::ceil(density * (freq * span / 2.0 + 4.0))));
        const GaussRule& gr = gauss_rule(order);
        Complex piece = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double v0 = vmax * double(p) / panels;
            const double v1 = vmax * double(p + 1) / panels;
            const double hm = 0.5 * (v1 - v0), hc = 0.5 * (v1 + v0);
            Complex acc = 0.0;
            for (int i = 0; i < order; ++i) {
                const double v = hc + hm * gr.x[static_cast<std::size_t>(i)];
                const double x = side == 0 ? xs - v * v : xs + v * v;
                acc += gr.w[static_cast<std::size_t>(i)] * (2.0 * v) * integrand(x);
            }
            piece += hm * acc;
        }
        total += piece;
    }
    return total / kPi;
}

// Generic d.  After the analytic inner sum over the last coordinate,
//   A(x') = d/2 - lambda - i eps - (1/2) sum_{j<d} cos x_j,
// the remaining (d-1)-fold integral is a smooth periodic function for every
// eps > 0; trapezoid sums are spectrally accurate once the mesh resolves the
// eps-thin analyticity strip.  Richardson extrapolation in eps recovers the
// boundary value (r0(lambda + i eps) is analytic in eps at 0 away from the
// thresholds, so the tableau converges geometrically).
Complex FreeResolvent::eval_extrapolation(const LatticePoint& k) const {
    const int d = sp_.dim();
    const double lambda = sp_.lambda();
    const int kd = k[d - 1]; // largest component: analytic index
    int kout_max = 0;
    for (int j = 0; j + 1 < d; ++j) kout_max = std::max(kout_max, std::abs(k[j]));

    // Levels shrink by 1/sqrt(2): for a fixed smallest eps this packs nearly
    // twice the interpolation nodes of a halving ladder, which is what
    // controls the Richardson error through the product of the node values.
    const double eps0 = 0.1;
    const int max_levels = 11;
    std::vector<double> eps_nodes;
    std::vector<Complex> tableau;

    Complex extrap = 0.0;
    double step_err = std::numeric_limits<double>::infinity();

    for (int m = 0; m < max_levels; ++m) {
        const double eps = eps0 * std::pow(0.5, 0.5 * m);
        int N = std::max(128, int(std::ceil(14.0 / eps)) + 2 * kout_max);
        N += (8 - N % 8) % 8;

        std::vector<double> cos_table(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i)
            cos_table[static_cast<std::size_t>(i)] = std::cos(2.0 * kPi * double(i) / N);
        auto cos_k = [&](int kk, int i) {
            return cos_table[static_cast<std::size_t>(int((std::int64_t(std::abs(kk)) * i) % N))];
        };

        // Tensor trapezoid over the first d-1 coordinates; the innermost axis
        // is x_{d-1}, the rest are walked by an odometer.
        Complex sum = 0.0;
        const int outer_dims = d - 2;
        std::vector<int> oidx(static_cast<std::size_t>(std::max(outer_dims, 0)), 0);
        while (true) {
            double base = 0.5 * d - lambda;
            double phase_prod = 1.0;
            for (int t = 0; t < outer_dims; ++t) {
                const int i = oidx[static_cast<std::size_t>(t)];
                base -= 0.5 * cos_table[static_cast<std::size_t>(i)];
                phase_prod *= cos_k(k[t], i);
            }
            for (int i = 0; i < N; ++i) {
                const Complex a(base - 0.5 * cos_table[static_cast<std::size_t>(i)], -eps);
                sum += phase_prod * cos_k(k[d - 2], i) * inner_eps(a, std::abs(kd));
            }
            int t = 0;
            for (; t < outer_dims; ++t) {
                if (++oidx[static_cast<std::size_t>(t)] < N) break;
                oidx[static_cast<std::size_t>(t)] = 0;
            }
            if (t == outer_dims) break;
        }
        for (int t = 0; t < d - 1; ++t) sum /= double(N);

        // Neville tableau evaluated at eps = 0.
        eps_nodes.push_back(eps);
        tableau.push_back(sum);
        std::vector<Complex> t = tableau;
        for (int lev = 1; lev <= m; ++lev)
            for (int j = m; j >= lev; --j) {
                const double xj = eps_nodes[static_cast<std::size_t>(j)];
                const double xi = eps_nodes[static_cast<std::size_t>(j - lev)];
                t[static_cast<std::size_t>(j)] =
                    (xj * t[static_cast<std::size_t>(j - 1)] - xi * t[static_cast<std::size_t>(j)]) /
                    (xj - xi);
            }
        const Complex extrap_prev = extrap;
        extrap = t[static_cast<std::size_t>(m)];
        if (m >= 2) {
            step_err = std::abs(extrap - extrap_prev);
            if (step_err < tol_) return extrap;
        }
    }
    std::ostringstream os;
    os << "FreeResolvent: eps-extrapolation did not reach tol=" << tol_ << " at offset "
       << k.to_string() << " (last step " << step_err << ")";
    throw numerical_error(os.str());
}

GreenTable FreeResolvent::table(const std::vector<LatticePoint>& offsets) const {
    GreenTable t;
    t.d = sp_.dim();
    t.lambda = sp_.lambda();
    t.sign = sp_.sign();
    t.method = to_string(method_);
    t.tolerance = tol_;
    t.accuracy = tol_;
    for (const auto& k : offsets) t.values[k] = (*this)(k);
    return t;
}

std::size_t FreeResolvent::preload(const GreenTable& t) {
    if (t.d != sp_.dim() || t.lambda != sp_.lambda()) return 0;
    if (t.tolerance > tol_) return 0;
    std::size_t taken = 0;
    for (const auto& [k, v] : t.values) {
        const std::vector<int> key = canonical_offset(k);
        const Complex plus = t.sign == LimitSign::Plus ? v : std::conj(v);
        if (cache_.emplace(key, plus).second) ++taken;
    }
    return taken;
}

GreenTable FreeResolvent::snapshot() const {
    GreenTable t;
    t.d = sp_.dim();
    t.lambda = sp_.lambda();
    t.sign = sp_.sign();
    t.method = to_string(method_);
    t.tolerance = tol_;
    t.accuracy = tol_;
    for (const auto& [key, plus] : cache_) {
        const Complex v = sp_.sign() == LimitSign::Plus ? plus : std::conj(plus);
        t.values[LatticePoint(key)] = v;
    }
    return t;
}

} // namespace latscat
