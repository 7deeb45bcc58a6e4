#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <istream>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "cascade/correlate.hpp"
#include "cascade/errors.hpp"
#include "cascade/integrator.hpp"
#include "cascade/model.hpp"
#include "cascade/observables.hpp"

namespace cascade {

inline constexpr const char* kToolName = "cascade";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kWorkersEnv = "CASCADE_WORKERS";

// ---------------------------------------------------------------------------
// Formatting and parsing helpers

/// 12 significant digits, scientific notation.
inline std::string format_number(double v) {
    if (v == 0.0) v = 0.0; // drop negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("invalid number for '" + key + "': '" + text + "'");
    return v;
}

inline std::size_t parse_count(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("invalid count for '" + key + "': '" + text + "'");
    return v;
}

using Setting = std::pair<std::string, std::string>;

/// Parses `key = value` lines; `#` starts a comment.
inline std::vector<Setting> parse_key_values(std::istream& in) {
    std::vector<Setting> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

/// Splits a `key=value` override.
inline Setting parse_override(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be key=value: '" + text + "'");
    Setting s{trim(std::string_view(text).substr(0, eq)), trim(std::string_view(text).substr(eq + 1))};
    if (s.first.empty() || s.second.empty()) throw ConfigError("override must be key=value: '" + text + "'");
    return s;
}

// ---------------------------------------------------------------------------
// Run configuration

enum class Command { Correlate, Degree, Bell, Sweep, Figure, Verify };

struct SweepAxis {
    std::string name = "delta_fs";
    double start = 0.0;
    double stop = 10.0;
    std::size_t steps = 101;
};

struct AngleGrid {
    double start = 0.0;
    double stop = std::numbers::pi / 2;
    std::size_t steps = 91;
};

struct RunConfig {
    Command command = Command::Figure;
    CascadeParams params{};
    SweepAxis axis{};
    AngleGrid angles{};
    std::string output; ///< empty = stdout
    IntegratorTolerances tolerances{};
    Route route = Route::Analytic;

    // correlate
    double tau_max = 10.0;
    std::size_t tau_steps = 101;
    DetectorSetting detector1{};
    DetectorSetting detector2{};

    // degree: single angle if set, else the angle grid
    std::optional<double> theta;

    // figure knob: detuned curves use detuning = detuning_ratio * delta_fs
    double detuning_ratio = 5.0;

    // sweep observables
    std::vector<std::string> observables{"S"};

    void validate() const {
        params.validate();
        if (axis.steps < 2) throw ConfigError("sweep steps must be >= 2");
        if (!(axis.stop > axis.start)) throw ConfigError("sweep stop must exceed start");
        if (angles.steps < 2) throw ConfigError("angle steps must be >= 2");
        if (!(angles.stop > angles.start)) throw ConfigError("angle stop must exceed start");
        if (tau_steps < 2) throw ConfigError("tau steps must be >= 2");
        if (!(tau_max > 0.0)) throw ConfigError("tau_max must be > 0");
        for (const double t : {tolerances.rtol, tolerances.atol}) {
            if (!(t > 0.0 && t < 1e-2)) throw ConfigError("tolerances must lie in (0, 1e-2)");
        }
        if (!(detuning_ratio >= 0.0)) throw ConfigError("detuning_ratio must be >= 0");
    }
};

/// Applies one setting to a parameter set; returns false if the key is not a parameter.
inline bool apply_param(CascadeParams& p, const std::string& key, const std::string& value) {
    double* field = nullptr;
    if (key == "gamma1") field = &p.gamma1;
    else if (key == "gamma2") field = &p.gamma2;
    else if (key == "gamma3") field = &p.gamma3;
    else if (key == "gamma4") field = &p.gamma4;
    else if (key == "gamma_u") field = &p.gamma_u;
    else if (key == "gamma12") field = &p.gamma12;
    else if (key == "gamma21") field = &p.gamma21;
    else if (key == "delta_fs") field = &p.delta_fs;
    else if (key == "rabi") field = &p.rabi;
    else if (key == "detuning") field = &p.detuning;
    else if (key == "gamma_d") {
        const double v = parse_double(key, value);
        p.gamma12 = v;
        p.gamma21 = v;
        return true;
    }
    if (field == nullptr) return false;
    *field = parse_double(key, value);
    return true;
}

/// Sets a parameter (or gamma_d) by name to a numeric value.
inline CascadeParams with_param(CascadeParams p, const std::string& key, double value) {
    if (key == "gamma_d") return p.with_gamma_d(value);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    if (!apply_param(p, key, buf)) throw ConfigError("unknown sweep parameter '" + key + "'");
    return p;
}

inline Route parse_route(const std::string& v) {
    if (v == "analytic") return Route::Analytic;
    if (v == "numeric") return Route::Numeric;
    throw ConfigError("route must be 'analytic' or 'numeric'");
}

inline const char* route_name(Route r) { return r == Route::Analytic ? "analytic" : "numeric"; }

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (apply_param(cfg.params, key, value)) return;
    if (key == "theta_start") cfg.angles.start = parse_double(key, value);
    else if (key == "theta_stop") cfg.angles.stop = parse_double(key, value);
    else if (key == "theta_steps") cfg.angles.steps = parse_count(key, value);
    else if (key == "sweep_axis") cfg.axis.name = value;
    else if (key == "sweep_start" || key == "start") cfg.axis.start = parse_double(key, value);
    else if (key == "sweep_stop" || key == "stop") cfg.axis.stop = parse_double(key, value);
    else if (key == "sweep_steps" || key == "steps") cfg.axis.steps = parse_count(key, value);
    else if (key == "rtol") cfg.tolerances.rtol = parse_double(key, value);
    else if (key == "atol") cfg.tolerances.atol = parse_double(key, value);
    else if (key == "out") cfg.output = value;
    else if (key == "route") cfg.route = parse_route(value);
    else if (key == "tau_max") cfg.tau_max = parse_double(key, value);
    else if (key == "tau_steps") cfg.tau_steps = parse_count(key, value);
    else if (key == "theta") cfg.theta = parse_double(key, value);
    else if (key == "theta1") cfg.detector1.theta = parse_double(key, value);
    else if (key == "theta2") cfg.detector2.theta = parse_double(key, value);
    else if (key == "phi1") cfg.detector1.phi = parse_double(key, value);
    else if (key == "phi2") cfg.detector2.phi = parse_double(key, value);
    else if (key == "detuning_ratio") cfg.detuning_ratio = parse_double(key, value);
    else if (key == "observables") cfg.observables = split_list(value);
    else throw ConfigError("unknown setting '" + key + "'");
}

inline void apply_settings(RunConfig& cfg, const std::vector<Setting>& settings) {
    for (const auto& [k, v] : settings) apply_setting(cfg, k, v);
}

// ---------------------------------------------------------------------------
// Results

struct SweepRow {
    double x;
    std::string observable;
    double value;
};

struct SweepResult {
    std::vector<Setting> metadata;
    std::string x_name;
    std::vector<SweepRow> rows;
};

inline std::vector<Setting> param_metadata(const std::string& prefix, const CascadeParams& p) {
    return {
        {prefix + "gamma1", format_number(p.gamma1)},   {prefix + "gamma2", format_number(p.gamma2)},
        {prefix + "gamma3", format_number(p.gamma3)},   {prefix + "gamma4", format_number(p.gamma4)},
        {prefix + "gamma_u", format_number(p.gamma_u)}, {prefix + "gamma12", format_number(p.gamma12)},
        {prefix + "gamma21", format_number(p.gamma21)}, {prefix + "delta_fs", format_number(p.delta_fs)},
        {prefix + "rabi", format_number(p.rabi)},       {prefix + "detuning", format_number(p.detuning)},
    };
}

inline std::string describe(const CascadeParams& p) {
    std::string s;
    for (const auto& [k, v] : param_metadata("", p)) {
        if (!s.empty()) s += ' ';
        s += k + '=' + v;
    }
    return s;
}

/// Header comment lines, then `x,observable,value` rows; LF line endings.
inline void write_csv(std::ostream& out, const SweepResult& r) {
    out << "# tool = " << kToolName << ' ' << kToolVersion << '\n';
    for (const auto& [k, v] : r.metadata) out << "# " << k << " = " << v << '\n';
    out << "# x = " << r.x_name << '\n';
    out << "x,observable,value\n";
    for (const auto& row : r.rows)
        out << format_number(row.x) << ',' << row.observable << ',' << format_number(row.value) << '\n';
}

// ---------------------------------------------------------------------------
// Worker pool

inline std::size_t worker_count() {
    if (const char* env = std::getenv(kWorkersEnv)) {
        try {
            const std::size_t n = parse_count(kWorkersEnv, env);
            if (n > 0) return n;
        } catch (const ConfigError&) {
        }
        throw ConfigError(std::string(kWorkersEnv) + " must be a positive integer");
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Evaluates f(0..n-1) on a pool of threads; result order follows the index.
inline std::vector<double> parallel_map(std::size_t n, const std::function<double(std::size_t)>& f,
                                        std::size_t workers) {
    std::vector<double> out(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    for (const double v : out)
        if (!std::isfinite(v)) throw NumericError("sweep produced a non-finite value");
    return out;
}

// ---------------------------------------------------------------------------
// Curves and figures

/// One named series: maps the base parameters and the abscissa to the
/// parameter set evaluated at that point.
struct Curve {
    std::string label;
    std::string rule;
    std::function<CascadeParams(const CascadeParams&, double)> make;
};

inline std::vector<double> linspace(double start, double stop, std::size_t steps) {
    std::vector<double> g(steps);
    for (std::size_t k = 0; k < steps; ++k)
        g[k] = start + (stop - start) * static_cast<double>(k) / static_cast<double>(steps - 1);
    return g;
}

inline CascadeParams without_field(CascadeParams p) {
    p.rabi = 0.0;
    p.detuning = 0.0;
    return p;
}

inline CascadeParams resonant_field(CascadeParams p) {
    p.rabi = p.delta_fs;
    p.detuning = 0.0;
    return p;
}

inline CascadeParams detuned_field(CascadeParams p, double ratio) {
    p.detuning = ratio * p.delta_fs;
    p.rabi = omega_star(p.delta_fs, p.detuning);
    return p;
}

enum class FigureId { Fig3a, Fig3b, Fig3c, Fig4a, Fig4b, Fig5, Fig6 };

inline FigureId parse_figure(const std::string& s) {
    if (s == "3a") return FigureId::Fig3a;
    if (s == "3b") return FigureId::Fig3b;
    if (s == "3c") return FigureId::Fig3c;
    if (s == "4a") return FigureId::Fig4a;
    if (s == "4b") return FigureId::Fig4b;
    if (s == "5") return FigureId::Fig5;
    if (s == "6") return FigureId::Fig6;
    throw ConfigError("unknown figure '" + s + "' (expected 3a, 3b, 3c, 4a, 4b, 5 or 6)");
}

inline const char* figure_name(FigureId id) {
    switch (id) {
    case FigureId::Fig3a: return "3a";
    case FigureId::Fig3b: return "3b";
    case FigureId::Fig3c: return "3c";
    case FigureId::Fig4a: return "4a";
    case FigureId::Fig4b: return "4b";
    case FigureId::Fig5: return "5";
    case FigureId::Fig6: return "6";
    }
    return "?";
}

/// Degree of correlation per curve over the angle grid.
inline SweepResult degree_sweep(const RunConfig& cfg, const std::vector<Curve>& curves) {
    const auto thetas = linspace(cfg.angles.start, cfg.angles.stop, cfg.angles.steps);
    std::vector<CascadeParams> curve_params;
    for (const auto& c : curves) curve_params.push_back(c.make(cfg.params, 0.0));
    const std::size_t n = curves.size() * thetas.size();
    const auto values = parallel_map(
        n,
        [&](std::size_t i) {
            const std::size_t ci = i / thetas.size();
            return degree_of_correlation(curve_params[ci], thetas[i % thetas.size()], cfg.route).value;
        },
        worker_count());
    SweepResult r;
    r.x_name = "theta [rad]";
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        r.metadata.emplace_back("curve." + curves[ci].label, describe(curve_params[ci]));
        for (std::size_t k = 0; k < thetas.size(); ++k)
            r.rows.push_back({thetas[k], "C|" + curves[ci].label, values[ci * thetas.size() + k]});
    }
    return r;
}

inline constexpr std::array<std::string_view, 5> kObservables{"S", "S_chsh", "C_H", "C_D", "C_V"};

inline void check_observable(const std::string& name) {
    if (std::find(kObservables.begin(), kObservables.end(), name) == kObservables.end())
        throw ConfigError("unknown observable '" + name + "' (expected S, S_chsh, C_H, C_D or C_V)");
}

/// Named scalar observables of one parameter point.
inline double evaluate_observable(const std::string& name, const CascadeParams& p, Route route) {
    if (name == "S") return bell_s_shortcut(p, route).s;
    if (name == "S_chsh") return bell_s_chsh(p, kStandardChsh, route).s;
    if (name == "C_H") return degree_of_correlation(p, 0.0, route).value;
    if (name == "C_D") return degree_of_correlation(p, std::numbers::pi / 4, route).value;
    if (name == "C_V") return degree_of_correlation(p, std::numbers::pi / 2, route).value;
    throw ConfigError("unknown observable '" + name + "' (expected S, S_chsh, C_H, C_D or C_V)");
}

/// Observable per curve over the sweep axis.
inline SweepResult axis_sweep(const RunConfig& cfg, const std::vector<Curve>& curves,
                              const std::vector<std::string>& observables) {
    const auto xs = linspace(cfg.axis.start, cfg.axis.stop, cfg.axis.steps);
    if (observables.empty()) throw ConfigError("no observables requested");
    for (const auto& o : observables) check_observable(o);
    const std::size_t per_series = xs.size();
    const std::size_t series = curves.size() * observables.size();
    const auto values = parallel_map(
        series * per_series,
        [&](std::size_t i) {
            const std::size_t si = i / per_series;
            const auto& curve = curves[si / observables.size()];
            const auto& obs = observables[si % observables.size()];
            const CascadeParams p = curve.make(with_param(cfg.params, cfg.axis.name, xs[i % per_series]),
                                               xs[i % per_series]);
            return evaluate_observable(obs, p, cfg.route);
        },
        worker_count());
    SweepResult r;
    r.x_name = cfg.axis.name;
    for (const auto& c : curves) r.metadata.emplace_back("curve." + c.label, c.rule);
    for (std::size_t si = 0; si < series; ++si) {
        const auto& curve = curves[si / observables.size()];
        const auto& obs = observables[si % observables.size()];
        const std::string name = curves.size() == 1 && curve.label.empty() ? obs : obs + "|" + curve.label;
        for (std::size_t k = 0; k < per_series; ++k) r.rows.push_back({xs[k], name, values[si * per_series + k]});
    }
    return r;
}

inline void add_run_metadata(SweepResult& r, const std::string& command, const RunConfig& cfg) {
    std::vector<Setting> head{{"command", command}};
    for (auto& kv : param_metadata("param.", cfg.params)) head.push_back(std::move(kv));
    head.emplace_back("route", route_name(cfg.route));
    head.emplace_back("rtol", format_number(cfg.tolerances.rtol));
    head.emplace_back("atol", format_number(cfg.tolerances.atol));
    head.insert(head.end(), r.metadata.begin(), r.metadata.end());
    r.metadata = std::move(head);
}

/// Default configuration of a figure before overrides.
inline RunConfig figure_defaults(FigureId id) {
    RunConfig cfg;
    cfg.command = Command::Figure;
    switch (id) {
    case FigureId::Fig3a: break;
    case FigureId::Fig3b: cfg.params.delta_fs = 5.0; break;
    case FigureId::Fig3c:
        cfg.params.delta_fs = 10.0;
        cfg.detuning_ratio = 10.0;
        break;
    case FigureId::Fig4a: cfg.params = cfg.params.with_gamma_d(1.0); break;
    case FigureId::Fig4b:
        cfg.params = cfg.params.with_gamma_d(1.0);
        cfg.params.delta_fs = 5.0;
        break;
    case FigureId::Fig5: cfg.axis = {"delta_fs", 0.0, 10.0, 101}; break;
    case FigureId::Fig6:
        cfg.params.delta_fs = 5.0;
        cfg.axis = {"gamma_d", 0.0, 2.0, 101};
        break;
    }
    return cfg;
}

inline std::vector<Curve> field_curves(double ratio) {
    char rule[96];
    std::snprintf(rule, sizeof rule, "detuning = %g * delta_fs, rabi = sqrt(delta_fs^2 + delta_fs*detuning)", ratio);
    return {
        {"no_field", "rabi = 0, detuning = 0", [](const CascadeParams& b, double) { return without_field(b); }},
        {"resonant", "rabi = delta_fs, detuning = 0", [](const CascadeParams& b, double) { return resonant_field(b); }},
        {"detuned", rule, [ratio](const CascadeParams& b, double) { return detuned_field(b, ratio); }},
    };
}

inline SweepResult run_figure(FigureId id, const std::vector<Setting>& overrides = {}) {
    RunConfig cfg = figure_defaults(id);
    apply_settings(cfg, overrides);
    cfg.validate();

    SweepResult r;
    switch (id) {
    case FigureId::Fig3a: {
        std::vector<Curve> curves;
        for (const double d : {0.0, 1.0, 5.0, 10.0}) {
            char label[32];
            std::snprintf(label, sizeof label, "delta_fs=%g", d);
            curves.push_back({label, "", [d](const CascadeParams& b, double) {
                                  CascadeParams p = without_field(b);
                                  p.delta_fs = d;
                                  return p;
                              }});
        }
        r = degree_sweep(cfg, curves);
        break;
    }
    case FigureId::Fig3b:
    case FigureId::Fig3c:
    case FigureId::Fig4b:
        r = degree_sweep(cfg, field_curves(cfg.detuning_ratio));
        break;
    case FigureId::Fig4a: {
        std::vector<Curve> curves;
        for (const double m : {0.0, 1.0, 3.0}) {
            char label[32];
            std::snprintf(label, sizeof label, "rabi=%g*gamma_d", m);
            curves.push_back({label, "", [m](const CascadeParams& b, double) {
                                  CascadeParams p = b;
                                  p.rabi = m * 0.5 * (b.gamma12 + b.gamma21);
                                  p.detuning = 0.0;
                                  return p;
                              }});
        }
        r = degree_sweep(cfg, curves);
        break;
    }
    case FigureId::Fig5:
        r = axis_sweep(cfg, field_curves(cfg.detuning_ratio), {"S"});
        break;
    case FigureId::Fig6: {
        auto curves = field_curves(cfg.detuning_ratio);
        curves.erase(curves.begin() + 1); // resonant curve is not part of this figure
        curves.insert(curves.begin(), Curve{"delta_fs=0_no_field", "delta_fs = 0, rabi = 0, detuning = 0",
                                            [](const CascadeParams& b, double) {
                                                CascadeParams p = without_field(b);
                                                p.delta_fs = 0.0;
                                                return p;
                                            }});
        r = axis_sweep(cfg, curves, {"S"});
        break;
    }
    }
    r.metadata.insert(r.metadata.begin(), {"detuning_ratio", format_number(cfg.detuning_ratio)});
    add_run_metadata(r, std::string("figure ") + figure_name(id), cfg);
    return r;
}

/// Generic sweep of `cfg.observables` over `cfg.axis` at the configured parameters.
inline SweepResult run_sweep(const RunConfig& cfg) {
    cfg.validate();
    SweepResult r = axis_sweep(cfg, {Curve{"", "parameters as listed", [](const CascadeParams& b, double) { return b; }}},
                               cfg.observables);
    add_run_metadata(r, "sweep", cfg);
    return r;
}

/// g2 on a tau grid by both routes.
inline SweepResult run_correlate(const RunConfig& cfg) {
    cfg.validate();
    const auto taus = uniform_grid(cfg.tau_max, cfg.tau_steps);
    EvolveOptions opt;
    opt.tolerances = cfg.tolerances;
    const auto num = g2_numeric_curve(cfg.params, cfg.detector1, cfg.detector2, taus, opt);
    const auto ana = g2_analytic_curve(cfg.params, cfg.detector1, cfg.detector2, taus);
    SweepResult r;
    r.x_name = "tau [1/gamma]";
    r.metadata = {{"detector1", "theta=" + format_number(cfg.detector1.theta) + " phi=" + format_number(cfg.detector1.phi)},
                  {"detector2", "theta=" + format_number(cfg.detector2.theta) + " phi=" + format_number(cfg.detector2.phi)}};
    for (std::size_t k = 0; k < taus.size(); ++k) r.rows.push_back({taus[k], "g2_numeric", num.values[k]});
    for (std::size_t k = 0; k < taus.size(); ++k) r.rows.push_back({taus[k], "g2_analytic", ana.values[k]});
    add_run_metadata(r, "correlate", cfg);
    return r;
}

/// Degree of correlation at one angle or over the angle grid.
inline SweepResult run_degree(const RunConfig& cfg) {
    cfg.validate();
    const auto thetas = cfg.theta ? std::vector<double>{*cfg.theta}
                                  : linspace(cfg.angles.start, cfg.angles.stop, cfg.angles.steps);
    const auto values = parallel_map(
        thetas.size(), [&](std::size_t i) { return degree_of_correlation(cfg.params, thetas[i], cfg.route).value; },
        worker_count());
    SweepResult r;
    r.x_name = "theta [rad]";
    for (std::size_t k = 0; k < thetas.size(); ++k) r.rows.push_back({thetas[k], "C", values[k]});
    add_run_metadata(r, "degree", cfg);
    return r;
}

/// Bell parameter both ways plus the two degrees it is built from.
inline SweepResult run_bell(const RunConfig& cfg) {
    cfg.validate();
    const BellResult chsh = bell_s_chsh(cfg.params, kStandardChsh, cfg.route);
    const BellResult shortcut = bell_s_shortcut(cfg.params, cfg.route);
    SweepResult r;
    r.x_name = "delta_fs";
    const double x = cfg.params.delta_fs;
    r.rows = {
        {x, "C_H", degree_of_correlation(cfg.params, 0.0, cfg.route).value},
        {x, "C_D", degree_of_correlation(cfg.params, std::numbers::pi / 4, cfg.route).value},
        {x, "S_shortcut", shortcut.s},
        {x, "S_chsh", chsh.s},
        {x, "violated", chsh.violated ? 1.0 : 0.0},
    };
    r.metadata = {{"chsh_angles", format_number(chsh.settings.a1) + " " + format_number(chsh.settings.a2) + " "
                                      + format_number(chsh.settings.b1) + " " + format_number(chsh.settings.b2)}};
    add_run_metadata(r, "bell", cfg);
    return r;
}

} // namespace cascade
