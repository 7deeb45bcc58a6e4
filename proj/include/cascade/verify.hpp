#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "cascade/correlate.hpp"
#include "cascade/liouvillian.hpp"
#include "cascade/model.hpp"
#include "cascade/observables.hpp"
#include "cascade/sweep.hpp"

namespace cascade {

struct VerifyOptions {
    double tol = 1e-6;             ///< oracle-equivalence tolerance
    GeneratorOptions generator{};  ///< mutation hooks
    EvolveOptions evolve{EvolveMethod::Integrator, {}};
    std::uint64_t seed = 20100318;
};

struct CheckResult {
    std::string name;
    bool passed;
    bool gating;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    [[nodiscard]] bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || !c.gating; });
    }

    void write(std::ostream& out) const {
        for (const auto& c : checks) {
            out << (c.gating ? (c.passed ? "PASS " : "FAIL ") : "INFO ") << c.name << ": " << c.detail << '\n';
        }
        out << (ok() ? "verify: all checks passed\n" : "verify: FAILED\n");
    }
};

namespace detail {

inline std::string sci(double v) { return format_number(v); }

/// Random symmetric-rate parameters in units of gamma.
inline CascadeParams random_params(std::mt19937_64& rng, bool driven, bool symmetric) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    CascadeParams p;
    p.delta_fs = 10.0 * u01(rng);
    p.gamma_u = u01(rng) < 0.5 ? 0.0 : 0.01;
    const double gd = 2.0 * u01(rng);
    p = p.with_gamma_d(gd);
    if (!symmetric) {
        p.gamma3 = 0.5 + u01(rng);
        p.gamma4 = 0.5 + u01(rng);
        p.gamma12 = 2.0 * u01(rng);
        p.gamma21 = 2.0 * u01(rng);
        p.gamma_u = 0.05 * u01(rng);
    }
    if (driven) {
        p.rabi = 35.0 * u01(rng);
        p.detuning = 100.0 * u01(rng);
    }
    return p;
}

inline DetectorSetting random_detector(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(0.0, std::numbers::pi);
    return {ang(rng), 2.0 * ang(rng)};
}

inline double relative_gap(double numeric, double analytic) {
    return std::abs(numeric - analytic) / std::max(1.0, std::abs(analytic));
}

} // namespace detail

/// Self-consistency suite: both correlation routes, generator hygiene and the
/// angle structure of the observables.
inline VerifyReport run_verify(const VerifyOptions& opt = {}) {
    VerifyReport report;
    std::mt19937_64 rng(opt.seed);
    const auto taus = uniform_grid(10.0, 41);
    constexpr double q = std::numbers::pi / 4;

    // Undriven: the closed-form kernel is exact for any rates, angles, phases.
    {
        double worst = 0.0;
        for (int n = 0; n < 16; ++n) {
            const CascadeParams p = detail::random_params(rng, false, n % 2 == 1);
            const Liouvillian gen = build_generator(p, opt.generator);
            const DetectorSetting d1 = detail::random_detector(rng), d2 = detail::random_detector(rng);
            const auto num = g2_numeric_curve(gen, d1, d2, taus, opt.evolve);
            const auto ana = g2_analytic_curve(p, d1, d2, taus);
            for (std::size_t k = 0; k < taus.size(); ++k)
                worst = std::max(worst, detail::relative_gap(num.values[k], ana.values[k]));
        }
        report.checks.push_back({"oracle_equivalence_undriven", worst < opt.tol, true,
                                 "max relative gap " + detail::sci(worst) + " (tol " + detail::sci(opt.tol) + ")"});
    }

    // Driven: the cross-coherence channel G(pi/4, pi/4) - G(pi/4, 3pi/4) is exact.
    // The population channel is approximate under drive and reported only.
    {
        double worst = 0.0;
        double population_gap = 0.0;
        const auto short_taus = uniform_grid(5.0, 21);
        for (int n = 0; n < 8; ++n) {
            const CascadeParams p = detail::random_params(rng, true, true);
            const Liouvillian gen = build_generator(p, opt.generator);
            std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
            const double phi1 = ph(rng), phi2 = ph(rng);
            const DetectorSetting a{q, phi1}, b{q, phi2}, b_perp{3 * q, phi2};
            const auto n_co = g2_numeric_curve(gen, a, b, short_taus, opt.evolve);
            const auto n_cr = g2_numeric_curve(gen, a, b_perp, short_taus, opt.evolve);
            const auto a_co = g2_analytic_curve(p, a, b, short_taus);
            const auto a_cr = g2_analytic_curve(p, a, b_perp, short_taus);
            for (std::size_t k = 0; k < short_taus.size(); ++k) {
                worst = std::max(worst, detail::relative_gap(n_co.values[k] - n_cr.values[k],
                                                             a_co.values[k] - a_cr.values[k]));
                population_gap = std::max(population_gap, detail::relative_gap(n_co.values[k], a_co.values[k]));
            }
        }
        report.checks.push_back({"oracle_equivalence_coherence_channel", worst < opt.tol, true,
                                 "max relative gap " + detail::sci(worst) + " over driven sets"});
        report.checks.push_back({"driven_population_channel", true, false,
                                 "closed-form population kernels omit the X2-u Rabi coupling; max gap "
                                     + detail::sci(population_gap)});
    }

    // Cross-coherence phase: arg <X1| e^{M tau}(|X1><X2|) |X2> falls at -delta_fs.
    {
        double worst = 0.0;
        for (const double dfs : {1.0, 3.0, 7.0}) {
            CascadeParams p;
            p.delta_fs = dfs;
            p = p.with_gamma_d(0.3);
            const Liouvillian gen = build_generator(p, opt.generator);
            const auto grid = uniform_grid(2.0, 401);
            const auto states = evolve_grid(gen, ket_bra(Level::X1, Level::X2), grid, opt.evolve);
            // Unwrapped phase, least-squares slope.
            double prev = 0.0, offset = 0.0;
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                double ph = std::arg(states[k](index(Level::X1), index(Level::X2)));
                if (k > 0) {
                    while (ph + offset - prev > std::numbers::pi) offset -= 2 * std::numbers::pi;
                    while (ph + offset - prev < -std::numbers::pi) offset += 2 * std::numbers::pi;
                }
                ph += offset;
                prev = ph;
                sx += grid[k];
                sy += ph;
                sxx += grid[k] * grid[k];
                sxy += grid[k] * ph;
            }
            const double n = static_cast<double>(grid.size());
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            worst = std::max(worst, std::abs(slope + dfs));
        }
        report.checks.push_back({"w_phase_slope", worst < 1e-6, true,
                                 "max |slope + delta_fs| " + detail::sci(worst)});
    }

    // tau = 0 normalization and polarizer period.
    {
        double worst0 = 0.0, worst_eq = 0.0, worst_period = 0.0;
        for (int n = 0; n < 12; ++n) {
            const CascadeParams p = detail::random_params(rng, n % 2 == 0, n % 3 != 0);
            const Liouvillian gen = build_generator(p, opt.generator);
            const DetectorSetting d1 = detail::random_detector(rng), d2 = detail::random_detector(rng);
            const std::vector<double> zero{0.0}, one{1.3};
            worst0 = std::max(worst0, std::abs(g2_numeric_curve(gen, d1, d2, zero, opt.evolve).values[0]
                                               - g2_analytic(p, d1, d2, 0.0)));
            const DetectorSetting same{d1.theta, 0.0};
            worst_eq = std::max(worst_eq, std::abs(g2_numeric_curve(gen, same, same, zero, opt.evolve).values[0] - 4.0));
            const DetectorSetting shifted{d1.theta + std::numbers::pi, d1.phi};
            worst_period = std::max(worst_period, std::abs(g2_numeric_curve(gen, d1, d2, one, opt.evolve).values[0]
                                                           - g2_numeric_curve(gen, shifted, d2, one, opt.evolve).values[0]));
        }
        report.checks.push_back({"tau0_normalization", worst0 < 1e-10 && worst_eq < 1e-10, true,
                                 "routes differ by " + detail::sci(worst0) + ", co-polarized deviation from 4 "
                                     + detail::sci(worst_eq)});
        report.checks.push_back({"polarizer_period", worst_period < 1e-10, true,
                                 "max change under theta1 -> theta1 + pi " + detail::sci(worst_period)});
    }

    // Angle structure of the averaged coincidences and the CHSH bridge.
    {
        double structure = 0.0, bridge = 0.0;
        for (int n = 0; n < 8; ++n) {
            CascadeParams p = detail::random_params(rng, n % 2 == 0, true);
            p.gamma_u = 0.0;
            const double ch = degree_of_correlation(p, 0.0).value;
            const double cd = degree_of_correlation(p, q).value;
            const double norm = g2_avg_analytic(p, linear(0.0), linear(0.0)) / (1.0 + ch);
            std::uniform_real_distribution<double> ang(0.0, std::numbers::pi);
            for (int k = 0; k < 16; ++k) {
                const double t1 = ang(rng), t2 = ang(rng);
                const double model = norm * (1.0 + ch * std::cos(2 * t1) * std::cos(2 * t2)
                                             + cd * std::sin(2 * t1) * std::sin(2 * t2));
                structure = std::max(structure, std::abs(g2_avg_analytic(p, linear(t1), linear(t2)) - model)
                                                    / std::max(1.0, std::abs(model)));
            }
            bridge = std::max(bridge, std::abs(bell_s_shortcut(p).s - bell_s_chsh(p).s));
        }
        report.checks.push_back({"structural_identity", structure < 1e-9, true, "max residual " + detail::sci(structure)});
        report.checks.push_back({"chsh_bridge", bridge < 1e-9, true, "max |S_shortcut - S_chsh| " + detail::sci(bridge)});
    }

    // Generator hygiene.
    {
        double trace = 0.0, herm = 0.0;
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int n = 0; n < 32; ++n) {
            const CascadeParams p = detail::random_params(rng, n % 2 == 0, n % 3 != 0);
            const Liouvillian gen = build_generator(p, opt.generator);
            Operator x;
            for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = Complex(gauss(rng), gauss(rng));
            x = Operator(x + x.adjoint());
            const Operator y = gen.apply(x);
            const double scale = std::max(1.0, gen.matrix().cwiseAbs().maxCoeff());
            trace = std::max(trace, std::abs(y.trace()) / scale);
            herm = std::max(herm, (y - y.adjoint()).cwiseAbs().maxCoeff() / scale);
        }
        report.checks.push_back({"trace_preservation", trace < 1e-12, true, "max |Tr M x| " + detail::sci(trace)});
        report.checks.push_back({"hermiticity_preservation", herm < 1e-12, true,
                                 "max |Mx - (Mx)^dag| " + detail::sci(herm)});
    }
    return report;
}

} // namespace cascade
