// Command-line front end: figures, sweeps, single-point observables and the
// self-consistency suite.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cascade/cascade.hpp"

namespace {

using cascade::Setting;

/// Flags shared by the compute subcommands; each maps to a config key.
struct CommonFlags {
    std::string config_path;
    std::string out;
    struct Flag {
        std::string key;
        std::string value;
        CLI::Option* option = nullptr;
    };
    std::vector<std::unique_ptr<Flag>> flags;

    void add(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
        auto f = std::make_unique<Flag>();
        f->key = key;
        f->option = app->add_option(name, f->value, help);
        flags.push_back(std::move(f));
    }

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "key = value configuration file");
        app->add_option("--out", out, "output CSV path (default: stdout)");
        add(app, "--gamma1", "gamma1", "2X -> X1 decay rate");
        add(app, "--gamma2", "gamma2", "2X -> X2 decay rate");
        add(app, "--gamma3", "gamma3", "X1 -> g decay rate");
        add(app, "--gamma4", "gamma4", "X2 -> g decay rate");
        add(app, "--gamma-u", "gamma_u", "X2 -> u decay rate");
        add(app, "--gamma12", "gamma12", "X2 -> X1 incoherent rate");
        add(app, "--gamma21", "gamma21", "X1 -> X2 incoherent rate");
        add(app, "--gamma-d", "gamma_d", "sets gamma12 = gamma21");
        add(app, "--delta-fs", "delta_fs", "intermediate level splitting");
        add(app, "--rabi", "rabi", "Rabi frequency");
        add(app, "--detuning", "detuning", "drive detuning");
        add(app, "--rtol", "rtol", "integrator relative tolerance");
        add(app, "--atol", "atol", "integrator absolute tolerance");
        add(app, "--route", "route", "analytic | numeric");
    }

    /// Config file first, then explicit flags in declaration order.
    [[nodiscard]] std::vector<Setting> settings() const {
        std::vector<Setting> out_settings;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw cascade::ConfigError("cannot open config file '" + config_path + "'");
            out_settings = cascade::parse_key_values(in);
        }
        for (const auto& f : flags)
            if (f->option->count() > 0) out_settings.emplace_back(f->key, f->value);
        return out_settings;
    }

    [[nodiscard]] std::string output_path(const cascade::RunConfig& cfg) const {
        return out.empty() ? cfg.output : out;
    }
};

void emit(const cascade::SweepResult& r, const std::string& path) {
    if (path.empty()) {
        cascade::write_csv(std::cout, r);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw cascade::ConfigError("cannot open output file '" + path + "'");
    cascade::write_csv(f, r);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polarization-resolved photon-pair correlations of a driven radiative cascade"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(cascade::kToolName) + " " + cascade::kToolVersion);

    // figure
    auto* figure = app.add_subcommand("figure", "reproduce a figure's curves as CSV");
    CommonFlags figure_flags;
    figure_flags.attach(figure);
    std::string figure_id;
    std::vector<std::string> overrides;
    figure->add_option("id", figure_id, "3a | 3b | 3c | 4a | 4b | 5 | 6")->required();
    figure->add_option("--override", overrides, "key=value applied after the figure defaults");

    // correlate
    auto* correlate = app.add_subcommand("correlate", "g2(tau) by quantum regression and closed form");
    CommonFlags correlate_flags;
    correlate_flags.attach(correlate);
    correlate_flags.add(correlate, "--tau-max", "tau_max", "largest delay");
    correlate_flags.add(correlate, "--tau-steps", "tau_steps", "number of delays");
    correlate_flags.add(correlate, "--theta1", "theta1", "first analyzer angle");
    correlate_flags.add(correlate, "--theta2", "theta2", "second analyzer angle");
    correlate_flags.add(correlate, "--phi1", "phi1", "first analyzer phase");
    correlate_flags.add(correlate, "--phi2", "phi2", "second analyzer phase");

    // degree
    auto* degree = app.add_subcommand("degree", "time-averaged degree of correlation");
    CommonFlags degree_flags;
    degree_flags.attach(degree);
    degree_flags.add(degree, "--theta", "theta", "basis angle (omit for the angle grid)");
    degree_flags.add(degree, "--theta-start", "theta_start", "angle grid start");
    degree_flags.add(degree, "--theta-stop", "theta_stop", "angle grid stop");
    degree_flags.add(degree, "--theta-steps", "theta_steps", "angle grid points");

    // bell
    auto* bell = app.add_subcommand("bell", "Bell parameter at one parameter point");
    CommonFlags bell_flags;
    bell_flags.attach(bell);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "observables over one parameter axis");
    CommonFlags sweep_flags;
    sweep_flags.attach(sweep);
    sweep_flags.add(sweep, "--axis", "sweep_axis", "parameter name (e.g. delta_fs, gamma_d, rabi)");
    sweep_flags.add(sweep, "--start", "sweep_start", "axis start");
    sweep_flags.add(sweep, "--stop", "sweep_stop", "axis stop");
    sweep_flags.add(sweep, "--steps", "sweep_steps", "axis points");
    sweep_flags.add(sweep, "--observables", "observables", "comma list of S, S_chsh, C_H, C_D, C_V");

    // verify
    auto* verify = app.add_subcommand("verify", "run the self-consistency suite");
    double verify_tol = 1e-6;
    bool flip_sign = false;
    std::string verify_method = "integrator";
    std::string report_path;
    verify->add_option("--tol", verify_tol, "oracle-equivalence tolerance");
    verify->add_option("--method", verify_method, "integrator | exponential")
        ->check(CLI::IsMember({"integrator", "exponential"}));
    verify->add_option("--report", report_path, "also write the report to this file");
    verify->add_flag("--inject-splitting-sign-flip", flip_sign, "mutation check: flip the sign of the splitting term");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) {
            cascade::VerifyOptions opt;
            opt.tol = verify_tol;
            opt.generator.flip_splitting_sign = flip_sign;
            opt.evolve.method = verify_method == "integrator" ? cascade::EvolveMethod::Integrator
                                                              : cascade::EvolveMethod::Exponential;
            const cascade::VerifyReport report = cascade::run_verify(opt);
            report.write(std::cout);
            if (!report_path.empty()) {
                std::ofstream f(report_path, std::ios::binary);
                report.write(f);
            }
            return report.ok() ? 0 : 1;
        }

        if (*figure) {
            std::vector<Setting> settings = figure_flags.settings();
            for (const auto& o : overrides) settings.push_back(cascade::parse_override(o));
            const cascade::FigureId id = cascade::parse_figure(figure_id);
            cascade::RunConfig probe = cascade::figure_defaults(id);
            cascade::apply_settings(probe, settings);
            emit(cascade::run_figure(id, settings), figure_flags.output_path(probe));
            return 0;
        }

        struct Sub {
            CLI::App* app;
            CommonFlags* flags;
            cascade::Command command;
        };
        const Sub subs[] = {
            {correlate, &correlate_flags, cascade::Command::Correlate},
            {degree, &degree_flags, cascade::Command::Degree},
            {bell, &bell_flags, cascade::Command::Bell},
            {sweep, &sweep_flags, cascade::Command::Sweep},
        };
        for (const auto& s : subs) {
            if (!*s.app) continue;
            cascade::RunConfig cfg;
            cfg.command = s.command;
            cascade::apply_settings(cfg, s.flags->settings());
            cascade::SweepResult r;
            switch (s.command) {
            case cascade::Command::Correlate: r = cascade::run_correlate(cfg); break;
            case cascade::Command::Degree: r = cascade::run_degree(cfg); break;
            case cascade::Command::Bell: r = cascade::run_bell(cfg); break;
            case cascade::Command::Sweep: r = cascade::run_sweep(cfg); break;
            default: break;
            }
            emit(r, s.flags->output_path(cfg));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
