#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "cascade/correlate.hpp"
#include "cascade/model.hpp"

namespace cascade {

/// Which correlation route feeds the time averages.
enum class Route { Analytic, Numeric };

inline double averaged_coincidence(const CascadeParams& p, const DetectorSetting& d1, const DetectorSetting& d2,
                                   Route route = Route::Analytic) {
    return route == Route::Analytic ? g2_avg_analytic(p, d1, d2) : g2_avg_numeric(p, d1, d2);
}

struct CorrelationDegree {
    double value;
    double basis_angle;
};

/// Time-averaged degree of polarization correlation in the linear basis at
/// angle theta: (co - cross) / (co + cross) with co = (theta, theta) and
/// cross = (theta, theta + pi/2).
inline CorrelationDegree degree_of_correlation(const CascadeParams& p, double theta,
                                               Route route = Route::Analytic) {
    const double co = averaged_coincidence(p, linear(theta), linear(theta), route);
    const double cross = averaged_coincidence(p, linear(theta), linear(theta + std::numbers::pi / 2), route);
    return {(co - cross) / (co + cross), theta};
}

/// Instantaneous degree of correlation at delay tau (diagnostic only).
inline CorrelationDegree degree_of_correlation_at(const CascadeParams& p, double theta, double tau) {
    const CorrelationKernel k(p);
    const KernelValues v = k.at(tau);
    const double co = combine_kernels(v, linear(theta), linear(theta));
    const double cross = combine_kernels(v, linear(theta), linear(theta + std::numbers::pi / 2));
    return {(co - cross) / (co + cross), theta};
}

inline std::vector<CorrelationDegree> degree_curve(const CascadeParams& p, std::span<const double> thetas,
                                                   Route route = Route::Analytic) {
    std::vector<CorrelationDegree> out;
    out.reserve(thetas.size());
    for (const double t : thetas) out.push_back(degree_of_correlation(p, t, route));
    return out;
}

/// CHSH correlation coefficient E(alpha, beta) = p+ - p- from the four
/// averaged coincidences of the two-channel analyzers.
inline double chsh_coefficient(const CascadeParams& p, double alpha, double beta, Route route = Route::Analytic) {
    constexpr double perp = std::numbers::pi / 2;
    const double pp = averaged_coincidence(p, linear(alpha), linear(beta), route);
    const double qq = averaged_coincidence(p, linear(alpha + perp), linear(beta + perp), route);
    const double pq = averaged_coincidence(p, linear(alpha), linear(beta + perp), route);
    const double qp = averaged_coincidence(p, linear(alpha + perp), linear(beta), route);
    return (pp + qq - pq - qp) / (pp + qq + pq + qp);
}

struct ChshSettings {
    double a1, a2, b1, b2;
};

/// Angles that maximize S for the ideal cascade.
inline constexpr ChshSettings kStandardChsh{0.0, std::numbers::pi / 4, std::numbers::pi / 8,
                                            3 * std::numbers::pi / 8};

inline constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

struct BellResult {
    double s;
    bool violated;
    ChshSettings settings;
};

inline BellResult bell_s_chsh(const CascadeParams& p, double a1, double a2, double b1, double b2,
                              Route route = Route::Analytic) {
    const double s = chsh_coefficient(p, a1, b1, route) - chsh_coefficient(p, a1, b2, route)
                     + chsh_coefficient(p, a2, b1, route) + chsh_coefficient(p, a2, b2, route);
    return {s, s > 2.0, {a1, a2, b1, b2}};
}

inline BellResult bell_s_chsh(const CascadeParams& p, const ChshSettings& a = kStandardChsh,
                              Route route = Route::Analytic) {
    return bell_s_chsh(p, a.a1, a.a2, a.b1, a.b2, route);
}

/// S = sqrt(2) (C_H + C_D) from the rectilinear and diagonal degrees.
inline BellResult bell_s_shortcut(const CascadeParams& p, Route route = Route::Analytic) {
    const double ch = degree_of_correlation(p, 0.0, route).value;
    const double cd = degree_of_correlation(p, std::numbers::pi / 4, route).value;
    const double s = std::numbers::sqrt2 * (ch + cd);
    return {s, s > 2.0, kStandardChsh};
}

} // namespace cascade
