#pragma once

// Subcommand bodies, kept apart from argument parsing so tests can call them.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "manifest.hpp"
#include "transducer/transducer.hpp"

namespace transducer::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_io = 4 };

struct GridSpec {
    std::optional<double> fmin_hz;
    std::optional<double> fmax_hz;
    std::size_t points = 2001;
};

struct CommandOutput {
    std::string body;
    RunManifest manifest;
    std::vector<std::string> warnings;
};

inline std::vector<double> resolve_grid(const GridSpec& g, double default_lo, double default_hi, nlohmann::json& record) {
    const double lo = g.fmin_hz ? two_pi * *g.fmin_hz : default_lo;
    const double hi = g.fmax_hz ? two_pi * *g.fmax_hz : default_hi;
    if (g.points == 0) throw ConfigError("--points", "grid needs at least one point");
    if (!(lo > 0.0)) throw ConfigError("--fmin", "grid frequencies must be positive");
    if (g.points > 1 && !(hi > lo)) throw ConfigError("--fmax", "--fmax must exceed --fmin");
    record = {{"fmin_hz", lo / two_pi}, {"fmax_hz", hi / two_pi}, {"points", g.points}, {"spacing", "linear"}};
    return linspace(lo, hi, g.points);
}

inline nlohmann::json derived_parameters(const OperatingPoint& op) {
    const auto& m = op.mechanics;
    const auto& p = op.placement;
    const cplx s_m = physical_s(op.config.omega_m);
    const auto f = network_functions(op, s_m);
    return {
        {"g_em_hz", op.g_em / two_pi},
        {"Gamma_ex_rad_s", op.ports.Gamma_ex},
        {"Gamma_0_rad_s", op.ports.Gamma_0},
        {"Gamma_rad_s", op.ports.Gamma},
        {"overcoupling", op.ports.overcoupling()},
        {"gamma_ex_hz", m.gamma_ex_res / two_pi},
        {"gamma_total_hz", m.gamma_m_res / two_pi},
        {"gamma_int_hz", m.gamma_int / two_pi},
        {"g_om_hz", std::abs(op.fields.g_om) / two_pi},
        {"g_om_phase_rad", std::arg(op.fields.g_om)},
        {"photons_ring_1", op.fields.photons_1()},
        {"photons_ring_2", op.fields.photons_2()},
        {"photon_flux_per_s", op.fields.flux},
        {"J_hz", op.config.J / two_pi},
        {"Delta_1_hz", p.Delta_1 / two_pi},
        {"Delta_2_hz", p.Delta_2 / two_pi},
        {"Delta_S_hz", p.Delta_S / two_pi},
        {"Delta_A_hz", p.Delta_A / two_pi},
        {"omega_L_hz", p.omega_L / two_pi},
        {"C_OM_at_omega_m_abs", std::abs(f.C_OM)},
        {"C_OO_at_omega_m_abs", std::abs(f.C_OO)},
    };
}

namespace detail {

struct DeriveRow {
    std::string quantity;
    double value;
    std::string unit;
    std::optional<double> table;
};

inline std::string derive_csv(const std::vector<DeriveRow>& rows) {
    std::string s = "quantity,value,unit,reference_value,relative_deviation\n";
    for (const auto& r : rows) {
        s += r.quantity + "," + fmt(r.value) + "," + r.unit + ",";
        if (r.table) {
            s += fmt(*r.table) + ",";
            s += *r.table != 0.0 ? fmt((r.value - *r.table) / *r.table) : std::string();
        } else {
            s += ",";
        }
        s += "\n";
    }
    return s;
}

inline RunManifest base_manifest(const std::string& command, const TransducerConfig& c, const OperatingPoint* op) {
    RunManifest m;
    m.command = command;
    m.config = config_to_json(c);
    if (op) m.derived = derived_parameters(*op);
    return m;
}

}  // namespace detail

// Derived-parameter report. quality_factor enters the piezoelectric figure of
// merit only.
inline CommandOutput cmd_derive(const TransducerConfig& c, double quality_factor = 600.0) {
    const auto op = resolve_operating_point(c);
    const auto bvd = bvd_from_config(c);
    const double M = figure_of_merit(c.k_eff2, quality_factor);
    const cplx C_OM = network_functions(op, physical_s(c.omega_m)).C_OM;
    using R = detail::DeriveRow;
    std::vector<R> rows{
        {"g_em/2pi", op.g_em / two_pi, "Hz", 100e6},
        {"Gamma_ex", op.ports.Gamma_ex, "rad/s", std::nullopt},
        {"Gamma_0", op.ports.Gamma_0, "rad/s", std::nullopt},
        {"Gamma", op.ports.Gamma, "rad/s", std::nullopt},
        {"Gamma_ex/Gamma", op.ports.overcoupling(), "1", std::nullopt},
        {"|gamma_ex|/2pi", op.mechanics.gamma_ex_res / two_pi, "Hz", 2.9e6},
        {"gamma_total/2pi", op.mechanics.gamma_m_res / two_pi, "Hz", 8.2e6},
        {"gamma_int/2pi", op.mechanics.gamma_int / two_pi, "Hz", std::nullopt},
        {"|g_om|/2pi", std::abs(op.fields.g_om) / two_pi, "Hz", 20e6},
        {"|a2|^2", op.fields.photons_2(), "1", 1e8},
        {"|a1|^2", op.fields.photons_1(), "1", std::nullopt},
        {"photon_flux", op.fields.flux, "1/s", std::nullopt},
        {"J/2pi", c.J / two_pi, "Hz", std::nullopt},
        {"Delta_1/2pi", op.placement.Delta_1 / two_pi, "Hz", std::nullopt},
        {"Delta_2/2pi", op.placement.Delta_2 / two_pi, "Hz", std::nullopt},
        {"Delta_S/2pi", op.placement.Delta_S / two_pi, "Hz", 0.0},
        {"Delta_A/2pi", op.placement.Delta_A / two_pi, "Hz", 3.267e9},
        {"Q_o", c.omega_c_1 / c.kappa_0_1, "1", 7.5e6},
        {"Q_m", c.omega_m / c.gamma_0, "1", 600.0},
        {"M", M, "1", 2.61},
        {"C_m", bvd.Cm, "F", std::nullopt},
        {"L_m", bvd.Lm, "H", std::nullopt},
        {"R_m", bvd.Rm, "Ohm", std::nullopt},
        {"|C_OM(omega_m)|", std::abs(C_OM), "1", 0.05},
        {"static_shift/2pi", static_shift(c, op.fields.photons_2()).detuning_shift / two_pi, "Hz", std::nullopt},
    };
    CommandOutput out;
    out.manifest = detail::base_manifest("derive", c, &op);
    out.manifest.grid = {{"quality_factor", quality_factor}};
    out.body = detail::derive_csv(rows);
    return out;
}

inline CommandOutput cmd_efficiency(const TransducerConfig& c, const GridSpec& g, Approximation mode) {
    const auto op = resolve_operating_point(c);
    CommandOutput out;
    out.manifest = detail::base_manifest("efficiency", c, &op);
    const double half = conversion_window(op);
    const auto grid = resolve_grid(g, c.omega_m - half, c.omega_m + half, out.manifest.grid);
    out.manifest.grid["mode"] = mode == Approximation::rwa ? "rwa" : "full";
    const auto eta = mode == Approximation::rwa ? efficiency_rwa(op, grid) : efficiency_full(op, grid);
    out.body = "omega_hz,eta\n";
    for (std::size_t i = 0; i < grid.size(); ++i) out.body += fmt(grid[i] / two_pi) + "," + fmt(eta.value[i]) + "\n";
    return out;
}

struct SweepSpec {
    double pmin_w = 1e-3, pmax_w = 0.3;
    std::size_t pcount = 50;
    double kmin_hz = 25e6, kmax_hz = 250e6;
    std::size_t kcount = 50;
};

inline CommandOutput cmd_sweep(const TransducerConfig& c, const SweepSpec& s, Approximation mode, std::size_t jobs) {
    if (s.pcount == 0) throw ConfigError("--pcount", "empty power range");
    if (s.kcount == 0) throw ConfigError("--kcount", "empty kappa_ex range");
    if (!(s.pmin_w > 0.0) || (s.pcount > 1 && !(s.pmax_w > s.pmin_w)))
        throw ConfigError("--pmax", "empty power range");
    if (!(s.kmin_hz > 0.0) || (s.kcount > 1 && !(s.kmax_hz > s.kmin_hz)))
        throw ConfigError("--kmax", "empty kappa_ex range");
    const auto powers = logspace(s.pmin_w, s.pmax_w, s.pcount);
    auto kappas = linspace(two_pi * s.kmin_hz, two_pi * s.kmax_hz, s.kcount);
    const auto surf = sweep(c, powers, kappas, mode, jobs);
    CommandOutput out;
    out.manifest = detail::base_manifest("sweep", c, nullptr);
    out.manifest.grid = {{"pmin_w", s.pmin_w},   {"pmax_w", s.pmax_w},   {"pcount", s.pcount}, {"power_spacing", "log"},
                         {"kmin_hz", s.kmin_hz}, {"kmax_hz", s.kmax_hz}, {"kcount", s.kcount}, {"kappa_spacing", "linear"},
                         {"mode", mode == Approximation::rwa ? "rwa" : "full"}};
    out.body = "p_in_w,kappa_ex_hz,eta_peak\n";
    for (std::size_t k = 0; k < kappas.size(); ++k)
        for (std::size_t p = 0; p < powers.size(); ++p)
            out.body += fmt(powers[p]) + "," + fmt(kappas[k] / two_pi) + "," + fmt(surf.at(k, p)) + "\n";
    return out;
}

inline std::string spectrum_csv(const ComplexSpectrum& s, bool with_abs2) {
    std::string body = with_abs2 ? "omega_hz,re,im,abs2\n" : "omega_hz,re,im\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        body += fmt(s.omega[i] / two_pi) + "," + fmt(s.value[i].real()) + "," + fmt(s.value[i].imag());
        if (with_abs2) body += "," + fmt(std::norm(s.value[i]));
        body += "\n";
    }
    return body;
}

inline CommandOutput cmd_admittance(const TransducerConfig& c, const GridSpec& g) {
    CommandOutput out;
    out.manifest = detail::base_manifest("admittance", c, nullptr);
    const auto bvd = bvd_from_config(c);
    out.manifest.derived = {{"C0_F", bvd.C0}, {"Cm_F", bvd.Cm}, {"Lm_H", bvd.Lm}, {"Rm_ohm", bvd.Rm}};
    const auto grid = resolve_grid(g, 0.95 * c.omega_m, 1.05 * c.omega_m, out.manifest.grid);
    out.body = spectrum_csv(admittance(bvd, c.omega_m, c.gamma_0, grid), false);
    return out;
}

inline CommandOutput cmd_s11(const TransducerConfig& c, const GridSpec& g) {
    CommandOutput out;
    const auto mech = effective_mechanics(c);
    const auto ports = port_rates(c);
    out.manifest = detail::base_manifest("s11", c, nullptr);
    out.manifest.derived = {{"g_em_hz", g_em(c) / two_pi},         {"Gamma_ex_rad_s", ports.Gamma_ex},
                            {"Gamma_0_rad_s", ports.Gamma_0},      {"gamma_ex_hz", mech.gamma_ex_res / two_pi},
                            {"gamma_total_hz", mech.gamma_m_res / two_pi}};
    const double half = 10.0 * mech.gamma_m_res;
    const auto grid = resolve_grid(g, c.omega_m - half, c.omega_m + half, out.manifest.grid);
    out.body = spectrum_csv(s11(c, grid), false);
    return out;
}

inline CommandOutput cmd_transmission(const TransducerConfig& c, const GridSpec& g) {
    CommandOutput out;
    out.manifest = detail::base_manifest("transmission", c, nullptr);
    const auto [w_s, w_a] = supermode_frequencies(c);
    out.manifest.derived = {{"J_hz", c.J / two_pi}, {"omega_S_hz", w_s / two_pi}, {"omega_A_hz", w_a / two_pi}};
    const double mid = 0.5 * (w_s + w_a);
    const double half = 1.5 * (w_a - w_s);
    const auto grid = resolve_grid(g, mid - half, mid + half, out.manifest.grid);
    out.body = spectrum_csv(transmission_spectrum(c, grid), true);
    return out;
}

struct G0Inputs {
    std::string efield, strain, surface, materials;
    double omega_0 = 0.0;  // rad/s
    std::optional<double> u_zpf;  // m
    std::string displacement;     // alternative to u_zpf, with omega_m
    double omega_m = 0.0;
    double hbar = codata_hbar;
    double delta_eps = 0.0;      // F/m
    double delta_eps_inv = 0.0;  // m/F
};

inline CommandOutput cmd_g0(const G0Inputs& in) {
    if (!(in.omega_0 > 0.0)) throw ConfigError("--omega0", "non-positive rate: omega0");
    const auto materials = load_materials(in.materials);
    const auto e_grid = read_field_grid(in.efield, FieldKind::electric);
    const auto s_grid = read_field_grid(in.strain, FieldKind::strain);
    double u = 0.0;
    if (in.u_zpf) {
        u = *in.u_zpf;
    } else {
        if (in.displacement.empty()) throw ConfigError("--u-zpf", "missing key: --u-zpf or --displacement");
        if (!(in.omega_m > 0.0)) throw ConfigError("--omega-m", "non-positive rate: omega_m");
        u = normalize_mechanical(read_field_grid(in.displacement, FieldKind::displacement), materials, in.omega_m, in.hbar).u_zpf;
    }
    const double pe = g0_photoelastic(e_grid, s_grid, materials, in.omega_0, u);
    double mb = 0.0;
    CommandOutput out;
    if (!in.surface.empty()) {
        const auto r = g0_moving_boundary(read_surface(in.surface), in.delta_eps, in.delta_eps_inv, in.omega_0, u,
                                          electric_energy_norm(e_grid, materials));
        mb = r.g0;
        out.warnings = r.warnings;
    }
    out.manifest.command = "g0";
    out.manifest.config = {{"efield", in.efield},       {"strain", in.strain},       {"surface", in.surface},
                           {"materials", in.materials}, {"omega0_rad_s", in.omega_0}, {"delta_eps", in.delta_eps},
                           {"delta_eps_inv", in.delta_eps_inv}};
    out.manifest.derived = {{"u_zpf_m", u}, {"g0_pe_rad_s", pe}, {"g0_mb_rad_s", mb}, {"warnings", out.warnings}};
    out.body = "quantity,value,unit\n";
    out.body += "u_zpf," + fmt(u) + ",m\n";
    out.body += "g0_pe," + fmt(pe) + ",rad/s\n";
    out.body += "g0_mb," + fmt(mb) + ",rad/s\n";
    out.body += "g0_total," + fmt(pe + mb) + ",rad/s\n";
    out.body += "g0_total/2pi," + fmt((pe + mb) / two_pi) + ",Hz\n";
    return out;
}

// Writes to out (with sidecar manifest) or to the stream when out is empty.
inline void emit(CommandOutput& o, const std::string& out, std::ostream& stdout_stream = std::cout) {
    for (const auto& w : o.warnings) std::cerr << "warning: " << w << "\n";
    if (out.empty()) {
        stdout_stream << "# sha256=" << o.manifest.checksum() << "\n" << o.body;
        return;
    }
    write_artifact(o.manifest, out, o.body);
}

}  // namespace transducer::cli
