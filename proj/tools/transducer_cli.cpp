// transducer: command-line front end. See README.md for usage.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace transducer;
using namespace transducer::cli;

namespace {

struct Common {
    std::string config;
    std::string out;
    GridSpec grid;
    std::string mode = "rwa";
    std::size_t jobs = 0;
};

void add_config(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", c.out, "output CSV (stdout when omitted)");
}

void add_grid(CLI::App* sub, Common& c) {
    sub->add_option("--fmin", c.grid.fmin_hz, "lowest frequency [Hz]");
    sub->add_option("--fmax", c.grid.fmax_hz, "highest frequency [Hz]");
    sub->add_option("--points", c.grid.points, "number of grid points")->capture_default_str();
}

void add_mode(CLI::App* sub, Common& c) {
    sub->add_option("--mode", c.mode, "rwa or full")->check(CLI::IsMember({"rwa", "full"}))->capture_default_str();
}

Approximation mode_of(const Common& c) { return c.mode == "full" ? Approximation::full : Approximation::rwa; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Piezo-optomechanical transducer simulator"};
    app.require_subcommand(1);
    Common c;
    double quality = 600.0;
    SweepSpec sweep_spec;
    G0Inputs g0;
    double omega0_hz = 0.0, omega_m_hz = 0.0;
    std::string g0_out;

    auto* derive = app.add_subcommand("derive", "derived-parameter report");
    add_config(derive, c);
    derive->add_option("--quality-factor", quality, "Q entering the piezoelectric figure of merit")->capture_default_str();

    auto* eff = app.add_subcommand("efficiency", "conversion efficiency spectrum");
    add_config(eff, c);
    add_grid(eff, c);
    add_mode(eff, c);

    auto* sw = app.add_subcommand("sweep", "peak efficiency over (P_in, kappa_ex)");
    add_config(sw, c);
    add_mode(sw, c);
    sw->add_option("--pmin", sweep_spec.pmin_w, "lowest pump power [W]")->capture_default_str();
    sw->add_option("--pmax", sweep_spec.pmax_w, "highest pump power [W]")->capture_default_str();
    sw->add_option("--pcount", sweep_spec.pcount, "power samples (log spaced)")->capture_default_str();
    sw->add_option("--kmin", sweep_spec.kmin_hz, "lowest kappa_ex/2pi [Hz]")->capture_default_str();
    sw->add_option("--kmax", sweep_spec.kmax_hz, "highest kappa_ex/2pi [Hz]")->capture_default_str();
    sw->add_option("--kcount", sweep_spec.kcount, "kappa_ex samples (linear)")->capture_default_str();
    sw->add_option("--jobs", c.jobs, "worker threads (0: all cores)")->capture_default_str();

    auto* adm = app.add_subcommand("admittance", "BVD admittance spectrum");
    add_config(adm, c);
    add_grid(adm, c);
    auto* refl = app.add_subcommand("s11", "microwave reflection spectrum");
    add_config(refl, c);
    add_grid(refl, c);
    auto* trans = app.add_subcommand("transmission", "bus transmission of the dimer");
    add_config(trans, c);
    add_grid(trans, c);

    auto* g0cmd = app.add_subcommand("g0", "single-photon optomechanical coupling from field grids");
    g0cmd->add_option("--efield", g0.efield, "optical mode field grid (CSV)")->required();
    g0cmd->add_option("--strain", g0.strain, "mode strain grid (CSV)")->required();
    g0cmd->add_option("--surface", g0.surface, "interface samples (CSV)");
    g0cmd->add_option("--materials", g0.materials, "material table (JSON)")->required();
    g0cmd->add_option("--omega0", omega0_hz, "optical frequency [Hz]")->required();
    g0cmd->add_option("--u-zpf", g0.u_zpf, "zero-point displacement [m]");
    g0cmd->add_option("--displacement", g0.displacement, "mode displacement grid, for u_zpf");
    g0cmd->add_option("--omega-m", omega_m_hz, "mechanical frequency [Hz], with --displacement");
    g0cmd->add_option("--delta-eps", g0.delta_eps, "interface permittivity contrast [F/m]");
    g0cmd->add_option("--delta-eps-inv", g0.delta_eps_inv, "interface impermeability contrast [m/F]");
    g0cmd->add_option("--out", g0_out, "output CSV (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        CommandOutput o;
        std::string out = c.out;
        if (g0cmd->parsed()) {
            g0.omega_0 = two_pi * omega0_hz;
            g0.omega_m = two_pi * omega_m_hz;
            o = cmd_g0(g0);
            out = g0_out;
        } else {
            const auto cfg = load_config(c.config);
            if (derive->parsed()) o = cmd_derive(cfg, quality);
            else if (eff->parsed()) o = cmd_efficiency(cfg, c.grid, mode_of(c));
            else if (sw->parsed()) o = cmd_sweep(cfg, sweep_spec, mode_of(c), c.jobs);
            else if (adm->parsed()) o = cmd_admittance(cfg, c.grid);
            else if (refl->parsed()) o = cmd_s11(cfg, c.grid);
            else o = cmd_transmission(cfg, c.grid);
        }
        emit(o, out);
        return exit_ok;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return exit_io;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return exit_io;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}
