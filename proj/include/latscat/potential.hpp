#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "latscat/lattice.hpp"

namespace latscat {

/// Real-valued potential supported on the interior of a rectangular domain.
class Potential {
public:
    explicit Potential(RectDomain domain)
        : domain_(std::move(domain)),
          values_(static_cast<std::size_t>(domain_.num_interior()), 0.0) {}

    /// Uniform i.i.d. entries in [lo, hi], deterministic across platforms for
    /// a given seed (raw 53-bit mantissa mapping, interior vertices in order).
    static Potential random(const RectDomain& domain, double lo, double hi,
                            std::uint64_t seed);

    const RectDomain& domain() const { return domain_; }

    double at(const LatticePoint& n) const {
        return values_[static_cast<std::size_t>(domain_.interior_index(n))];
    }
    void set(const LatticePoint& n, double v) {
        values_[static_cast<std::size_t>(domain_.interior_index(n))] = v;
    }
    const std::vector<double>& values() const { return values_; }

    /// Nonzero entries in interior (lexicographic) order.
    std::vector<std::pair<LatticePoint, double>> support() const;

    double max_abs() const;

private:
    RectDomain domain_;
    std::vector<double> values_;
};

} // namespace latscat
