#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include <Eigen/Dense>

#include "cascade/errors.hpp"

namespace cascade {

struct IntegratorTolerances {
    double rtol = 1e-10;
    double atol = 1e-12;
    std::size_t max_steps = 50'000'000;
};

/// Adaptive Dormand-Prince 5(4) integration of dy/dt = rhs(y) from 0 to t_end.
///
/// `rhs` is any callable mapping a state vector to its derivative. The step
/// controller uses the mixed error norm max_i |e_i| / (atol + rtol max(|y_i|, |y'_i|)).
template <typename Vector, typename Rhs>
Vector integrate_dopri5(Rhs&& rhs, Vector y, double t_end, const IntegratorTolerances& tol = {}) {
    if (t_end < 0.0) throw DomainError("integrate_dopri5: negative time span");
    if (t_end == 0.0) return y;

    // Butcher tableau (Dormand & Prince 1980). The system is autonomous, so the
    // node offsets c_i are not needed.
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    // Initial step from the derivative scale (Hairer, Norsett & Wanner II.4).
    Vector k1 = rhs(y);
    const double y_scale = std::max(y.template lpNorm<Eigen::Infinity>(), tol.atol / tol.rtol);
    const double d_scale = k1.template lpNorm<Eigen::Infinity>();
    double h = d_scale > 0.0 ? 0.01 * y_scale / d_scale : t_end;
    h = std::min(h, t_end);

    double t = 0.0;
    std::size_t steps = 0;
    double err_prev = 1e-4;
    bool rejected_last = false;
    while (t < t_end) {
        if (++steps > tol.max_steps) throw NumericError("integrate_dopri5: step budget exhausted");
        if (t + h > t_end) h = t_end - t;
        if (h <= std::numeric_limits<double>::epsilon() * std::max(1.0, t))
            throw NumericError("integrate_dopri5: step size underflow");

        const Vector k2 = rhs(Vector(y + h * (a21 * k1)));
        const Vector k3 = rhs(Vector(y + h * (a31 * k1 + a32 * k2)));
        const Vector k4 = rhs(Vector(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const Vector k5 = rhs(Vector(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const Vector k6 =
            rhs(Vector(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        Vector y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vector k7 = rhs(y_new);
        const Vector err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sc = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(err_vec[i]) / sc);
        }
        if (!std::isfinite(err) || !y_new.allFinite())
            throw NumericError("integrate_dopri5: non-finite state");

        if (err <= 1.0) {
            t += h;
            y = std::move(y_new);
            k1 = k7; // first-same-as-last
            // PI controller.
            double factor = err == 0.0 ? 5.0
                                       : 0.9 * std::pow(err, -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
            factor = std::clamp(factor, 0.2, rejected_last ? 1.0 : 5.0);
            h *= factor;
            err_prev = std::max(err, 1e-4);
            rejected_last = false;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            rejected_last = true;
        }
    }
    return y;
}

} // namespace cascade
