#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "cascade/errors.hpp"

namespace cascade {

using Complex = std::complex<double>;

/// Level ordering used everywhere: [2X, X1, X2, u, g].
enum class Level : std::size_t { Biexciton = 0, X1 = 1, X2 = 2, Aux = 3, Ground = 4 };

inline constexpr std::size_t kLevels = 5;
inline constexpr std::array<Level, kLevels> kLevelOrder{
    Level::Biexciton, Level::X1, Level::X2, Level::Aux, Level::Ground};

constexpr std::size_t index(Level l) noexcept { return static_cast<std::size_t>(l); }

inline const char* level_name(Level l) {
    switch (l) {
    case Level::Biexciton: return "2X";
    case Level::X1: return "X1";
    case Level::X2: return "X2";
    case Level::Aux: return "u";
    case Level::Ground: return "g";
    }
    return "?";
}

inline constexpr double kDefaultGammaU = 0.01;

/// Rates and frequencies of the driven cascade, dimensionless in units of the
/// total biexciton decay rate gamma = gamma1 + gamma2.
///
/// gamma12 is the X2 -> X1 incoherent transfer rate and gamma21 the X1 -> X2
/// rate; X1 sits at +delta_fs above X2. The drive couples X2 and u with real
/// Rabi frequency `rabi` and detuning `detuning` = omega_{X2u} - nu_L.
struct CascadeParams {
    double gamma1 = 0.5;
    double gamma2 = 0.5;
    double gamma3 = 1.0;
    double gamma4 = 1.0;
    double gamma_u = kDefaultGammaU;
    double gamma12 = 0.0;
    double gamma21 = 0.0;
    double delta_fs = 0.0;
    double rabi = 0.0;
    double detuning = 0.0;

    /// Total 2X decay rate.
    [[nodiscard]] double gamma() const noexcept { return gamma1 + gamma2; }

    /// Common dephasing rate, defined only when gamma12 == gamma21.
    [[nodiscard]] std::optional<double> gamma_d() const noexcept {
        if (gamma12 != gamma21) return std::nullopt;
        return gamma12;
    }

    [[nodiscard]] bool symmetric() const noexcept {
        return gamma12 == gamma21 && gamma3 == gamma4;
    }

    /// Gamma = gamma + gamma_d + gamma_u / 3 of the simplified kernel.
    [[nodiscard]] std::optional<double> big_gamma() const noexcept {
        if (!symmetric()) return std::nullopt;
        return gamma() + gamma12 + gamma_u / 3.0;
    }

    /// Gamma_1 = gamma + gamma_d + gamma_u.
    [[nodiscard]] std::optional<double> big_gamma1() const noexcept {
        if (!symmetric()) return std::nullopt;
        return gamma() + gamma12 + gamma_u;
    }

    /// Sets gamma12 = gamma21 = value.
    [[nodiscard]] CascadeParams with_gamma_d(double value) const {
        CascadeParams p = *this;
        p.gamma12 = value;
        p.gamma21 = value;
        return p;
    }

    /// Throws DomainError if any rate is negative or any field is non-finite.
    void validate() const {
        const std::array<std::pair<const char*, double>, 10> fields{{
            {"gamma1", gamma1}, {"gamma2", gamma2}, {"gamma3", gamma3},
            {"gamma4", gamma4}, {"gamma_u", gamma_u}, {"gamma12", gamma12},
            {"gamma21", gamma21}, {"delta_fs", delta_fs}, {"rabi", rabi},
            {"detuning", detuning},
        }};
        for (const auto& [name, value] : fields) {
            if (!std::isfinite(value))
                throw DomainError(std::string("non-finite parameter ") + name);
        }
        for (std::size_t i = 0; i < 7; ++i) {
            if (fields[i].second < 0.0)
                throw DomainError(std::string("negative rate ") + fields[i].first);
        }
        if (rabi < 0.0) throw DomainError("negative Rabi frequency");
    }

    friend bool operator==(const CascadeParams&, const CascadeParams&) = default;
};

/// Analyzer orientation of one detector.
struct DetectorSetting {
    double theta = 0.0;
    double phi = 0.0;

    friend bool operator==(const DetectorSetting&, const DetectorSetting&) = default;
};

inline DetectorSetting linear(double theta) { return DetectorSetting{theta, 0.0}; }

/// Drive amplitude sqrt(delta_fs^2 + delta_fs * detuning) that Stark-shifts the
/// upper dressed state onto X1.
inline double omega_star(double delta_fs, double detuning) {
    if (!(delta_fs >= 0.0)) throw DomainError("omega_star: delta_fs must be >= 0");
    const double radicand = delta_fs * delta_fs + delta_fs * detuning;
    if (radicand < 0.0)
        throw DomainError("omega_star: delta_fs^2 + delta_fs*detuning < 0");
    return std::sqrt(radicand);
}

/// Generalized Rabi sidebands.
struct RabiSidebands {
    double upper; ///< sqrt(detuning^2 + 4 rabi^2)/2 + detuning/2
    double lower; ///< sqrt(detuning^2 + 4 rabi^2)/2 - detuning/2
};

inline RabiSidebands omega_pm(double rabi, double detuning) {
    if (rabi < 0.0) throw DomainError("omega_pm: rabi must be >= 0");
    const double root = std::hypot(detuning, 2.0 * rabi);
    const double half = 0.5 * root;
    // Compute the smaller root via the product identity to avoid cancellation.
    if (detuning >= 0.0) {
        const double upper = half + 0.5 * detuning;
        const double lower = upper > 0.0 ? rabi * rabi / upper : 0.0;
        return {upper, lower};
    }
    const double lower = half - 0.5 * detuning;
    const double upper = lower > 0.0 ? rabi * rabi / lower : 0.0;
    return {upper, lower};
}

using Matrix2c = Eigen::Matrix2cd;

/// Maps (eps_H, eps_V) to the rotated pair (eps1, eps2) of analyzer axes.
inline Matrix2c polarization_rotation(double theta, double phi) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex e = std::polar(1.0, phi);
    Matrix2c m;
    m << c, std::conj(e) * s,
        -e * s, c;
    return m;
}

} // namespace cascade
