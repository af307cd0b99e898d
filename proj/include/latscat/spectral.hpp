#pragma once

#include <cmath>
#include <string>

#include "latscat/errors.hpp"

namespace latscat {

enum class LimitSign { Plus, Minus };

inline const char* to_string(LimitSign s) { return s == LimitSign::Plus ? "+" : "-"; }

enum class EnergyBand { Low, Middle, High };

/// Energy lambda in (0,d) \ Z together with the side from which the resolvent
/// boundary value is taken.  The strictly convex band is
///   (0,1) u (1,2)            for d = 2,
///   (0,1/2) u (d-1/2, d)     for d >= 3;
/// the scattering pipeline additionally restricts to the low part.
class SpectralParam {
public:
    SpectralParam(double lambda, int d, LimitSign sign = LimitSign::Plus)
        : lambda_(lambda), d_(d), sign_(sign) {
        if (d < 2) throw validation_error("SpectralParam: dimension must be >= 2");
        if (!(lambda > 0.0 && lambda < double(d)))
            throw validation_error("SpectralParam: lambda must lie in (0, d)");
        if (std::abs(lambda - std::round(lambda)) < 1e-12)
            throw validation_error("SpectralParam: threshold energy (lambda is an integer)");
    }

    double lambda() const { return lambda_; }
    int dim() const { return d_; }
    LimitSign sign() const { return sign_; }
    SpectralParam with_sign(LimitSign s) const { return SpectralParam(lambda_, d_, s); }
    SpectralParam conjugated() const {
        return with_sign(sign_ == LimitSign::Plus ? LimitSign::Minus : LimitSign::Plus);
    }

    double low_band_upper() const { return d_ == 2 ? 1.0 : 0.5; }

    EnergyBand band() const {
        if (lambda_ < low_band_upper()) return EnergyBand::Low;
        if (lambda_ > double(d_) - low_band_upper()) return EnergyBand::High;
        return EnergyBand::Middle;
    }

    /// True on the band where the energy surface is strictly convex.
    bool in_convex_band() const {
        if (d_ == 2) return true; // (0,1) u (1,2) exhausts (0,2) \ {1}
        return band() != EnergyBand::Middle;
    }

    bool in_low_band() const { return band() == EnergyBand::Low; }

    void require_low_band(const std::string& who) const {
        if (!in_low_band())
            throw validation_error(who + ": lambda=" + std::to_string(lambda_) +
                                   " is outside the low band (0," +
                                   std::to_string(low_band_upper()) + ") for d=" +
                                   std::to_string(d_));
    }

    void require_convex_band(const std::string& who) const {
        if (!in_convex_band())
            throw validation_error(who + ": lambda=" + std::to_string(lambda_) +
                                   " is outside the strictly convex band for d=" +
                                   std::to_string(d_));
    }

private:
    double lambda_;
    int d_;
    LimitSign sign_;
};

} // namespace latscat
