#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cascade/errors.hpp"
#include "cascade/liouvillian.hpp"
#include "cascade/model.hpp"
#include "cascade/quadrature.hpp"

namespace cascade {

// ---------------------------------------------------------------------------
// Jump operators

enum class PhotonStage { FirstPhoton, SecondPhoton };

/// Polarization-projected dipole lowering operator seen by one detector.
///
/// FirstPhoton  = cos(theta)|X1><2X| + e^{-i phi} sin(theta)|X2><2X|
/// SecondPhoton = cos(theta)|g><X1|  + e^{-i phi} sin(theta)|g><X2|
///
/// The e^{-i phi} placement makes the regression route produce the
/// e^{i(phi1+phi2)} w(tau) + c.c. phase structure of the closed-form kernel.
struct JumpOperator {
    Operator op;
    PhotonStage stage;

    static JumpOperator first_photon(const DetectorSetting& d) {
        Operator op = std::cos(d.theta) * ket_bra(Level::X1, Level::Biexciton)
                      + std::polar(1.0, -d.phi) * std::sin(d.theta) * ket_bra(Level::X2, Level::Biexciton);
        return {op, PhotonStage::FirstPhoton};
    }

    static JumpOperator second_photon(const DetectorSetting& d) {
        Operator op = std::cos(d.theta) * ket_bra(Level::Ground, Level::X1)
                      + std::polar(1.0, -d.phi) * std::sin(d.theta) * ket_bra(Level::Ground, Level::X2);
        return {op, PhotonStage::SecondPhoton};
    }
};

// ---------------------------------------------------------------------------
// Closed-form kernel

namespace detail {

/// Principal square root with the tie rule Re = 0 => Im >= 0.
inline Complex principal_sqrt(Complex z) {
    Complex r = std::sqrt(z);
    if (r.real() == 0.0 && r.imag() < 0.0) r = -r;
    return r;
}

/// sinh(x)/x with a series below |x| < 1e-4.
inline Complex sinhc(Complex x) {
    if (std::abs(x) < 1e-4) {
        const Complex x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

/// sin(x)/x with a series below |x| < 1e-4.
inline Complex sinc(Complex x) {
    if (std::abs(x) < 1e-4) {
        const Complex x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

} // namespace detail

/// Population kernels f1, f2, g1, g2 (or their time integrals F1..G2) and the
/// cross-coherence kernel w (or W).
struct KernelValues {
    double f1, f2, g1, g2;
    Complex w;
};

/// Rate combinations of the closed-form two-time correlation.
///
/// The X1/X2 population block has eigenvalues b0 +- eta/2 with
/// eta = sqrt(4 gamma21 gamma12 + (gamma3 - gamma4 + gamma21 - gamma12 - gamma_u)^2);
/// the (rho_X1X2, rho_X1u) coherence block has eigenvalues a0 - i delta_fs +- i mu/4.
class CorrelationKernel {
public:
    explicit CorrelationKernel(const CascadeParams& p) : p_(p) {
        p.validate();
        imbalance_ = p.gamma3 - p.gamma4 + p.gamma21 - p.gamma12 - p.gamma_u;
        b0_ = -0.5 * (p.gamma3 + p.gamma4 + p.gamma21 + p.gamma12 + p.gamma_u);
        eta_ = detail::principal_sqrt(4.0 * p.gamma21 * p.gamma12 + imbalance_ * imbalance_);
        a0_ = Complex(-0.25 * (2.0 * p.gamma3 + 2.0 * p.gamma21 + p.gamma4 + p.gamma12 + p.gamma_u),
                      -0.5 * p.detuning);
        drive_damping_ = Complex(p.gamma4 + p.gamma12 + p.gamma_u, -2.0 * p.detuning);
        mu_ = detail::principal_sqrt(16.0 * p.rabi * p.rabi - drive_damping_ * drive_damping_);
    }

    [[nodiscard]] const CascadeParams& params() const noexcept { return p_; }
    [[nodiscard]] Complex a0() const noexcept { return a0_; }
    [[nodiscard]] Complex b0() const noexcept { return b0_; }
    [[nodiscard]] Complex eta() const noexcept { return eta_; }
    [[nodiscard]] Complex mu() const noexcept { return mu_; }
    [[nodiscard]] Complex zeta() const noexcept { return mu_ / 4.0; }

    /// zeta written through Gamma_1 = gamma + gamma_d + gamma_u; equals mu/4
    /// when gamma4 = gamma and gamma12 = gamma21.
    [[nodiscard]] std::optional<Complex> zeta_from_big_gamma1() const {
        const auto g1 = p_.big_gamma1();
        if (!g1) return std::nullopt;
        const Complex inner(*g1 / 4.0, -0.5 * p_.detuning);
        return detail::principal_sqrt(p_.rabi * p_.rabi - inner * inner);
    }

    /// The four exponents of the kernel: b0 +- eta/2 and a0 - i delta_fs +- i mu/4.
    [[nodiscard]] std::array<Complex, 4> exponents() const {
        const Complex i(0.0, 1.0);
        const Complex coh = a0_ - i * p_.delta_fs;
        return {b0_ + eta_ / 2.0, b0_ - eta_ / 2.0, coh + i * mu_ / 4.0, coh - i * mu_ / 4.0};
    }

    /// Smallest decay rate among the kernel exponents (may be <= 0).
    [[nodiscard]] double slowest_decay() const {
        double slowest = std::numeric_limits<double>::infinity();
        for (const Complex& e : exponents()) slowest = std::min(slowest, -e.real());
        return slowest;
    }

    [[nodiscard]] bool integrable() const { return slowest_decay() > 1e-12; }

    [[nodiscard]] KernelValues at(double tau) const {
        const Complex i(0.0, 1.0);
        const Complex env = std::exp(b0_ * tau);
        const Complex x = eta_ * tau / 2.0;
        const Complex ch = std::cosh(x);
        const Complex sh_over_eta = 0.5 * tau * detail::sinhc(x); // sinh(eta tau/2)/eta
        const double f1 = (env * (ch - imbalance_ * sh_over_eta)).real();
        const double g1 = (env * (ch + imbalance_ * sh_over_eta)).real();
        const double f2 = (2.0 * p_.gamma12 * env * sh_over_eta).real();
        const double g2 = (2.0 * p_.gamma21 * env * sh_over_eta).real();
        const Complex y = mu_ * tau / 4.0;
        const Complex sin_over_mu = 0.25 * tau * detail::sinc(y); // sin(mu tau/4)/mu
        const Complex w = std::exp((a0_ - i * p_.delta_fs) * tau)
                          * (std::cos(y) - drive_damping_ * sin_over_mu);
        return {f1, f2, g1, g2, w};
    }

    /// Integrals over [0, inf) of the kernels; throws DivergentIntegralError
    /// when a kernel exponent has nonnegative real part.
    [[nodiscard]] KernelValues integrated() const {
        if (!integrable())
            throw DivergentIntegralError("time-averaged correlation diverges: no decay in a kernel mode");
        const Complex i(0.0, 1.0);
        const double det = (b0_ * b0_ - eta_ * eta_ / 4.0).real();
        const double F1 = (p_.gamma4 + p_.gamma12 + p_.gamma_u) / det;
        const double F2 = p_.gamma12 / det;
        const double G1 = (p_.gamma3 + p_.gamma21) / det;
        const double G2 = p_.gamma21 / det;
        const Complex shifted = a0_ - i * p_.delta_fs;
        const Complex W = (i * (p_.delta_fs + p_.detuning) + 0.5 * (p_.gamma3 + p_.gamma21))
                          / (shifted * shifted + mu_ * mu_ / 16.0);
        return {F1, F2, G1, G2, W};
    }

private:
    CascadeParams p_;
    double imbalance_ = 0.0;
    Complex b0_, eta_, a0_, drive_damping_, mu_;
};

/// Angle-weighted combination of the kernels: the braces of the two-time
/// correlation with the dimensional prefactor set to one.
inline double combine_kernels(const KernelValues& k, const DetectorSetting& d1, const DetectorSetting& d2) {
    const double c1 = std::cos(2.0 * d1.theta);
    const double c2 = std::cos(2.0 * d2.theta);
    const double s1 = std::sin(2.0 * d1.theta);
    const double s2 = std::sin(2.0 * d2.theta);
    const Complex phase = std::polar(1.0, d1.phi + d2.phi);
    return k.f1 + k.f2 + k.g1 + k.g2 + (c1 + c2) * (k.f1 - k.g1) + (c1 - c2) * (k.g2 - k.f2)
           + c1 * c2 * (k.f1 + k.g1 - k.f2 - k.g2) + s1 * s2 * 2.0 * (phase * k.w).real();
}

// ---------------------------------------------------------------------------
// Correlation curves

struct CorrelationCurve {
    std::vector<double> tau_grid;
    std::vector<double> values;
};

/// Uniform grid of `steps` points on [0, tau_max].
inline std::vector<double> uniform_grid(double tau_max, std::size_t steps) {
    if (steps < 2) throw DomainError("uniform_grid: need at least two points");
    std::vector<double> g(steps);
    for (std::size_t k = 0; k < steps; ++k)
        g[k] = tau_max * static_cast<double>(k) / static_cast<double>(steps - 1);
    return g;
}

/// Normalized two-time correlation from the closed-form kernel.
inline double g2_analytic(const CascadeParams& p, const DetectorSetting& d1, const DetectorSetting& d2,
                          double tau) {
    if (tau < 0.0) throw DomainError("g2_analytic: negative tau");
    return combine_kernels(CorrelationKernel(p).at(tau), d1, d2);
}

inline CorrelationCurve g2_analytic_curve(const CascadeParams& p, const DetectorSetting& d1,
                                          const DetectorSetting& d2, std::span<const double> taus) {
    const CorrelationKernel k(p);
    CorrelationCurve c{{taus.begin(), taus.end()}, {}};
    c.values.reserve(taus.size());
    for (const double t : taus) {
        if (t < 0.0) throw DomainError("g2_analytic_curve: negative tau");
        c.values.push_back(combine_kernels(k.at(t), d1, d2));
    }
    return c;
}

namespace detail {

/// Conditional state A |2X><2X| A^dag after the first detection.
inline Operator post_first_detection(const DetectorSetting& d1) {
    const Operator a = JumpOperator::first_photon(d1).op;
    return a * ket_bra(Level::Biexciton, Level::Biexciton) * a.adjoint();
}

/// Row vector r with 4 Re(r . vec(X)) = 4 Re Tr[B^dag B X].
inline Eigen::Matrix<Complex, 1, kSuperDim> second_detection_row(const DetectorSetting& d2) {
    const Operator b = JumpOperator::second_photon(d2).op;
    const Operator bb = b.adjoint() * b;
    // Tr[A X] = sum_ij A_ji X_ij = vec(A^T) . vec(X)
    return vectorize(Operator(bb.transpose())).transpose();
}

} // namespace detail

/// Normalized two-time correlation by quantum regression:
/// 4 Tr[B^dag B e^{M tau}(A |2X><2X| A^dag)].
inline double g2_numeric(const CascadeParams& p, const DetectorSetting& d1, const DetectorSetting& d2,
                         double tau, const EvolveOptions& opt = {}) {
    if (tau < 0.0) throw DomainError("g2_numeric: negative tau");
    const Liouvillian gen = build_generator(p);
    const SuperVector x = evolve(gen, vectorize(detail::post_first_detection(d1)), tau, opt);
    return 4.0 * (detail::second_detection_row(d2) * x)(0).real();
}

inline CorrelationCurve g2_numeric_curve(const Liouvillian& gen, const DetectorSetting& d1,
                                         const DetectorSetting& d2, std::span<const double> taus,
                                         const EvolveOptions& opt = {}) {
    const auto row = detail::second_detection_row(d2);
    const auto states = evolve_grid(gen, detail::post_first_detection(d1), taus, opt);
    CorrelationCurve c{{taus.begin(), taus.end()}, {}};
    c.values.reserve(states.size());
    for (const Operator& x : states) c.values.push_back(4.0 * (row * vectorize(x))(0).real());
    return c;
}

inline CorrelationCurve g2_numeric_curve(const CascadeParams& p, const DetectorSetting& d1,
                                         const DetectorSetting& d2, std::span<const double> taus,
                                         const EvolveOptions& opt = {}) {
    return g2_numeric_curve(build_generator(p), d1, d2, taus, opt);
}

// ---------------------------------------------------------------------------
// Time averages

/// Closed-form integral over tau in [0, inf) of g2_analytic.
inline double g2_avg_analytic(const CascadeParams& p, const DetectorSetting& d1, const DetectorSetting& d2) {
    return combine_kernels(CorrelationKernel(p).integrated(), d1, d2);
}

inline constexpr double kTailFraction = 1e-12;
inline constexpr double kMaxAverageWindow = 1e4;

/// Truncation time where the slowest kernel mode has fallen to 1e-12.
inline double analytic_average_window(const CorrelationKernel& k) {
    if (!k.integrable()) throw DivergentIntegralError("no decaying kernel mode");
    return std::min(-std::log(kTailFraction) / k.slowest_decay(), kMaxAverageWindow);
}

struct AverageOptions {
    double rtol = 1e-9;
    double atol = 1e-14;
    std::size_t max_panels = 4'000'000;
};

/// Integral over tau of g2_numeric by uniform-panel 61-point Gauss-Kronrod.
///
/// Propagators for the node offsets inside one panel are computed once; the
/// panel width is halved until the Kronrod-Gauss difference summed over all
/// panels meets the tolerance. The window ends where the slowest decaying
/// generator mode has fallen to 1e-12.
inline double g2_avg_numeric(const CascadeParams& p, const DetectorSetting& d1, const DetectorSetting& d2,
                             const AverageOptions& opt = {}) {
    const Liouvillian gen = build_generator(p);
    const double slowest = gen.slowest_decay();
    if (slowest <= 0.0) throw DivergentIntegralError("g2_avg_numeric: generator has no decaying mode");
    const double window = std::min(-std::log(kTailFraction) / slowest, kMaxAverageWindow);

    double spectral_radius = 0.0;
    for (const Complex& l : gen.eigenvalues()) spectral_radius = std::max(spectral_radius, std::abs(l));

    const auto row = detail::second_detection_row(d2);
    const SuperVector start = vectorize(detail::post_first_detection(d1));
    const KronrodTable& table = KronrodTable::get();

    // Modes that do not decay must not reach the detected channel.
    for (const double t : {1.0, 1.31, 1.73}) {
        if (std::abs((row * gen.propagator(t * window) * start)(0)) > 1e-9)
            throw DivergentIntegralError("g2_avg_numeric: correlation does not decay");
    }

    double width = std::min(window, spectral_radius > 0.0 ? 8.0 / spectral_radius : window);
    for (;;) {
        const auto panels = static_cast<std::size_t>(std::ceil(window / width));
        if (panels > opt.max_panels) throw NumericError("g2_avg_numeric: quadrature did not converge");
        width = window / static_cast<double>(panels);

        std::array<Eigen::Matrix<Complex, 1, kSuperDim>, KronrodTable::kNodes> node_rows;
        for (std::size_t n = 0; n < KronrodTable::kNodes; ++n)
            node_rows[n] = row * gen.propagator(0.5 * width * (1.0 + table.node[n]));
        const SuperMatrix step = gen.propagator(width);

        SuperVector state = start;
        double kronrod = 0.0;
        double gauss = 0.0;
        for (std::size_t k = 0; k < panels; ++k) {
            double pk = 0.0;
            double pg = 0.0;
            for (std::size_t n = 0; n < KronrodTable::kNodes; ++n) {
                const double v = 4.0 * (node_rows[n] * state)(0).real();
                pk += table.kronrod_weight[n] * v;
                pg += table.gauss_weight[n] * v;
            }
            kronrod += 0.5 * width * pk;
            gauss += 0.5 * width * pg;
            state = step * state;
        }
        if (!std::isfinite(kronrod)) throw NumericError("g2_avg_numeric: non-finite integral");
        if (std::abs(kronrod - gauss) <= opt.rtol * std::abs(kronrod) + opt.atol) return kronrod;
        width *= 0.5;
    }
}

// ---------------------------------------------------------------------------
// Limiting regimes

enum class SpecialCase { I, II, III, IV };

struct SpecialCaseValue {
    double value;
    std::optional<std::string> warning;
};

namespace detail {

inline constexpr double kMuchGreater = 10.0;
inline constexpr double kNegligibleGammaU = 0.1;

inline double largest_rate(const CascadeParams& p) {
    return std::max({p.gamma1, p.gamma2, p.gamma3, p.gamma4, p.gamma_u, p.gamma12, p.gamma21, p.gamma()});
}

inline std::optional<std::string> regime_violation(SpecialCase c, const CascadeParams& p) {
    std::string msg;
    auto note = [&msg](const char* s) {
        if (!msg.empty()) msg += "; ";
        msg += s;
    };
    const double g = p.gamma();
    const double big = kMuchGreater * largest_rate(p);
    const auto gd = p.gamma_d();
    if (!p.symmetric()) note("rates are not symmetric (gamma3 != gamma4 or gamma12 != gamma21)");
    if (p.gamma_u > kNegligibleGammaU * g) note("gamma_u is not negligible against gamma");
    switch (c) {
    case SpecialCase::I:
        if (p.rabi != 0.0) note("Case I requires rabi = 0");
        if (p.detuning != 0.0) note("Case I requires detuning = 0");
        if (!gd || *gd != 0.0) note("Case I requires gamma_d = 0");
        break;
    case SpecialCase::II:
        if (p.detuning != 0.0) note("Case II requires detuning = 0");
        if (!gd || *gd != 0.0) note("Case II requires gamma_d = 0");
        if (p.rabi < big) note("Case II requires rabi >> all decay rates");
        break;
    case SpecialCase::III:
        if (p.detuning < p.rabi) note("Case III requires detuning >= rabi");
        if (p.rabi < big) note("Case III requires rabi >> all decay rates");
        if (!gd || *gd != 0.0) note("Case III requires gamma_d = 0");
        break;
    case SpecialCase::IV:
        if (p.rabi < big || p.detuning < big) note("Case IV requires rabi, detuning >> all decay rates");
        break;
    }
    if (msg.empty()) return std::nullopt;
    return msg;
}

} // namespace detail

/// Limiting closed forms of the two-time correlation, returned in the
/// normalization where the ideal co-polarized value at tau = 0 is 2 (half of
/// g2_analytic). They are regime approximations; a warning is attached when the
/// parameters lie outside the regime.
inline SpecialCaseValue special_case(SpecialCase c, const CascadeParams& p, const DetectorSetting& d1,
                                     const DetectorSetting& d2, double tau) {
    p.validate();
    if (tau < 0.0) throw DomainError("special_case: negative tau");
    const double g = p.gamma();
    const double cc = std::cos(2.0 * d1.theta) * std::cos(2.0 * d2.theta);
    const double ss = std::sin(2.0 * d1.theta) * std::sin(2.0 * d2.theta);
    const double dfs = p.delta_fs;
    const double gd = 0.5 * (p.gamma12 + p.gamma21);
    double value = 0.0;
    switch (c) {
    case SpecialCase::I:
        value = std::exp(-g * tau) * (1.0 + cc + ss * std::cos(dfs * tau));
        break;
    case SpecialCase::II:
        value = std::exp(-g * tau)
                * (1.0 + cc
                   + ss * std::exp(g * tau / 4.0)
                         * (std::cos((dfs + p.rabi) * tau) + std::cos((dfs - p.rabi) * tau)));
        break;
    case SpecialCase::III: {
        const auto [up, low] = omega_pm(p.rabi, p.detuning);
        value = std::exp(-g * tau)
                * (1.0 + cc
                   + ss * std::exp(g * tau / 4.0) * (std::cos((dfs + up) * tau) + std::cos((dfs - low) * tau)));
        break;
    }
    case SpecialCase::IV: {
        const auto [up, low] = omega_pm(p.rabi, p.detuning);
        value = std::exp(-g * tau)
                * (1.0 + cc * std::exp(-2.0 * gd * tau)
                   + ss * std::exp((g - 3.0 * gd) * tau / 4.0)
                         * (std::cos((dfs + up) * tau) + std::cos((dfs - low) * tau)));
        break;
    }
    }
    return {value, detail::regime_violation(c, p)};
}

} // namespace cascade
