#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cascade/errors.hpp"

namespace cascade {

/// Integral of f over [a, b], split into unit-or-shorter panels each handled by
/// adaptive 61-point Gauss-Kronrod. Splitting keeps strongly oscillatory
/// integrands from fooling the first-level error estimate.
template <typename F>
double integrate_panels(F&& f, double a, double b, double panel_width, double rtol = 1e-12) {
    if (!(b >= a)) throw DomainError("integrate_panels: b < a");
    if (!(panel_width > 0.0)) throw DomainError("integrate_panels: panel width must be > 0");
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const auto panels = static_cast<std::size_t>(std::ceil((b - a) / panel_width));
    double total = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double lo = a + static_cast<double>(k) * panel_width;
        const double hi = std::min(b, lo + panel_width);
        double err = 0.0;
        total += GK::integrate(f, lo, hi, 12, rtol, &err);
    }
    if (!std::isfinite(total)) throw NumericError("integrate_panels: non-finite integral");
    return total;
}

/// Node/weight table for 61-point Gauss-Kronrod on [-1, 1] with its embedded
/// 30-point Gauss rule (Gauss nodes are the odd-indexed Kronrod abscissae).
struct KronrodTable {
    static constexpr std::size_t kNodes = 61;
    double node[kNodes];
    double kronrod_weight[kNodes];
    double gauss_weight[kNodes];

    KronrodTable() {
        using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
        using G = boost::math::quadrature::gauss<double, 30>;
        const auto& xk = GK::abscissa();
        const auto& wk = GK::weights();
        const auto& wg = G::weights();
        // xk[0] = 0, xk[1..30] > 0; mirror to negative side.
        std::size_t n = 0;
        node[n] = 0.0;
        kronrod_weight[n] = wk[0];
        gauss_weight[n] = 0.0;
        ++n;
        for (std::size_t i = 1; i < xk.size(); ++i) {
            const double wgi = (i % 2 == 1) ? wg[(i - 1) / 2] : 0.0;
            for (const double s : {-1.0, 1.0}) {
                node[n] = s * xk[i];
                kronrod_weight[n] = wk[i];
                gauss_weight[n] = wgi;
                ++n;
            }
        }
    }

    static const KronrodTable& get() {
        static const KronrodTable table;
        return table;
    }
};

} // namespace cascade
