#pragma once

// Physical parameters of the transducer and their JSON representation.
//
// Every rate and frequency inside TransducerConfig is an angular quantity in
// rad/s. Configuration files carry ordinary frequencies in Hz unless their
// "frequency_unit" entry says "rad/s"; the loader applies the 2*pi factor.
// The schema is documented in docs/config_schema.md.

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "transducer/errors.hpp"
#include "transducer/numeric.hpp"

namespace transducer {

inline constexpr double codata_hbar = 1.054571817e-34;  // J s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m

enum class PumpTarget { symmetric, asymmetric, explicit_detuning };

enum class FrequencyUnit { hertz, radians_per_second };

struct TransducerConfig {
    double omega_c_1 = 0.0;  // ring resonances
    double omega_c_2 = 0.0;
    double kappa_0_1 = 0.0;  // intrinsic optical linewidths
    double kappa_0_2 = 0.0;
    double kappa_ex = 0.0;   // bus to ring 1
    double J = 0.0;          // ring-ring coupling
    double g0 = 0.0;         // single-photon optomechanical coupling
    double omega_m = 0.0;
    double omega_mw = 0.0;   // microwave mode; defaults to omega_m
    double gamma_0 = 0.0;
    double k_eff2 = 0.0;
    double C0 = 0.0;   // F
    double R0 = 0.0;   // Ohm
    double Z0 = 50.0;  // Ohm
    double P_in = 0.0;  // W
    std::optional<double> omega_L;  // only consulted for explicit pump placement
    double kappa_L = 0.0;
    double hbar = codata_hbar;
    PumpTarget pump_target = PumpTarget::symmetric;

    // Derived, never stored.
    double kappa_1() const noexcept { return kappa_0_1 + kappa_ex; }
    double kappa_2() const noexcept { return kappa_0_2; }
};

namespace detail {

struct FieldSpec {
    std::string_view key;
    double TransducerConfig::*member;
    bool angular;  // scaled by 2*pi when the file is in Hz
};

inline constexpr std::array<FieldSpec, 16> scalar_fields{{
    {"omega_c_1", &TransducerConfig::omega_c_1, true},
    {"omega_c_2", &TransducerConfig::omega_c_2, true},
    {"kappa_0_1", &TransducerConfig::kappa_0_1, true},
    {"kappa_0_2", &TransducerConfig::kappa_0_2, true},
    {"kappa_ex", &TransducerConfig::kappa_ex, true},
    {"J", &TransducerConfig::J, true},
    {"g0", &TransducerConfig::g0, true},
    {"omega_m", &TransducerConfig::omega_m, true},
    {"omega_mw", &TransducerConfig::omega_mw, true},
    {"gamma_0", &TransducerConfig::gamma_0, true},
    {"kappa_L", &TransducerConfig::kappa_L, true},
    {"k_eff2", &TransducerConfig::k_eff2, false},
    {"C0", &TransducerConfig::C0, false},
    {"R0", &TransducerConfig::R0, false},
    {"Z0", &TransducerConfig::Z0, false},
    {"P_in", &TransducerConfig::P_in, false},
}};

inline const std::set<std::string, std::less<>>& known_keys() {
    static const std::set<std::string, std::less<>> keys = [] {
        std::set<std::string, std::less<>> k;
        for (const auto& f : scalar_fields) k.emplace(f.key);
        k.insert({"omega_L", "hbar", "pump_target", "frequency_unit", "description"});
        return k;
    }();
    return keys;
}

inline std::string_view to_string(PumpTarget t) {
    switch (t) {
        case PumpTarget::symmetric: return "symmetric";
        case PumpTarget::asymmetric: return "asymmetric";
        case PumpTarget::explicit_detuning: return "explicit";
    }
    return "symmetric";
}

inline double number_at(const nlohmann::json& j, std::string_view key) {
    const auto& v = j.at(std::string(key));
    if (!v.is_number()) throw ConfigError(std::string(key), "not a number: " + std::string(key));
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(std::string(key), "non-finite value: " + std::string(key));
    return x;
}

}  // namespace detail

// Throws ConfigError naming the first offending key.
inline void validate(const TransducerConfig& c) {
    auto positive = [](double v, const char* key) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, std::string("non-positive rate: ") + key);
    };
    positive(c.omega_c_1, "omega_c_1");
    positive(c.omega_c_2, "omega_c_2");
    positive(c.kappa_0_1, "kappa_0_1");
    positive(c.kappa_0_2, "kappa_0_2");
    positive(c.kappa_ex, "kappa_ex");
    positive(c.J, "J");
    positive(c.g0, "g0");
    positive(c.omega_m, "omega_m");
    positive(c.omega_mw, "omega_mw");
    positive(c.gamma_0, "gamma_0");
    positive(c.kappa_L, "kappa_L");
    positive(c.C0, "C0");
    positive(c.R0, "R0");
    positive(c.Z0, "Z0");
    positive(c.hbar, "hbar");
    if (c.omega_L) positive(*c.omega_L, "omega_L");
    if (!(c.P_in >= 0.0) || !std::isfinite(c.P_in)) throw ConfigError("P_in", "negative power: P_in");
    if (!(c.k_eff2 > 0.0 && c.k_eff2 < 1.0)) throw ConfigError("k_eff2", "k_eff2 outside (0,1)");
    if (c.pump_target == PumpTarget::explicit_detuning && !c.omega_L)
        throw ConfigError("omega_L", "missing key: omega_L (required by explicit pump placement)");
}

inline TransducerConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("", "configuration root must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!detail::known_keys().contains(key)) throw ConfigError(key, "unknown key: " + key);

    double scale = two_pi;
    if (j.contains("frequency_unit")) {
        const auto unit = j.at("frequency_unit").get<std::string>();
        if (unit == "Hz") scale = two_pi;
        else if (unit == "rad/s") scale = 1.0;
        else throw ConfigError("frequency_unit", "frequency_unit must be \"Hz\" or \"rad/s\"");
    }

    TransducerConfig c;
    c.Z0 = 50.0;
    c.hbar = codata_hbar;
    c.kappa_L = two_pi * 1.0e4;

    static constexpr std::array<std::string_view, 10> required{
        "omega_c_1", "kappa_0_1", "kappa_ex", "g0", "omega_m", "gamma_0", "k_eff2", "C0", "R0", "P_in"};
    for (auto key : required)
        if (!j.contains(std::string(key))) throw ConfigError(std::string(key), "missing key: " + std::string(key));

    for (const auto& f : detail::scalar_fields) {
        if (!j.contains(std::string(f.key))) continue;
        const double raw = detail::number_at(j, f.key);
        c.*f.member = f.angular ? raw * scale : raw;
    }
    if (!j.contains("omega_c_2")) c.omega_c_2 = c.omega_c_1;
    if (!j.contains("kappa_0_2")) c.kappa_0_2 = c.kappa_0_1;
    if (!j.contains("J")) c.J = 0.5 * c.omega_m;
    if (!j.contains("omega_mw")) c.omega_mw = c.omega_m;
    if (j.contains("omega_L")) c.omega_L = detail::number_at(j, "omega_L") * scale;
    if (j.contains("hbar")) c.hbar = detail::number_at(j, "hbar");
    if (j.contains("pump_target")) {
        const auto t = j.at("pump_target").get<std::string>();
        if (t == "symmetric") c.pump_target = PumpTarget::symmetric;
        else if (t == "asymmetric") c.pump_target = PumpTarget::asymmetric;
        else if (t == "explicit") c.pump_target = PumpTarget::explicit_detuning;
        else throw ConfigError("pump_target", "pump_target must be symmetric, asymmetric or explicit");
    }
    validate(c);
    return c;
}

// Every field is written, defaults included.
inline nlohmann::json config_to_json(const TransducerConfig& c, FrequencyUnit unit = FrequencyUnit::hertz) {
    const double scale = unit == FrequencyUnit::hertz ? two_pi : 1.0;
    nlohmann::json j;
    j["frequency_unit"] = unit == FrequencyUnit::hertz ? "Hz" : "rad/s";
    for (const auto& f : detail::scalar_fields) {
        const double v = c.*f.member;
        j[std::string(f.key)] = f.angular ? v / scale : v;
    }
    if (c.omega_L) j["omega_L"] = *c.omega_L / scale;
    j["hbar"] = c.hbar;
    j["pump_target"] = std::string(detail::to_string(c.pump_target));
    return j;
}

inline TransducerConfig parse_config(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("", std::string("malformed configuration: ") + e.what());
    }
}

inline TransducerConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open configuration file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

// Photons per second carried by a monochromatic beam.
inline double photon_flux(double power, double omega_L, double hbar = codata_hbar) {
    if (!(omega_L > 0.0)) throw std::invalid_argument("photon_flux: omega_L must be positive");
    if (!(power >= 0.0)) throw std::invalid_argument("photon_flux: negative power");
    return power / (hbar * omega_L);
}

// Parameter set of the reference device (pump on the symmetric supermode).
inline TransducerConfig reference_config() {
    TransducerConfig c;
    c.omega_c_1 = two_pi * 193e12;
    c.omega_c_2 = c.omega_c_1;
    c.kappa_ex = two_pi * 125e6;
    c.kappa_0_1 = two_pi * 25e6;
    c.kappa_0_2 = c.kappa_0_1;
    c.g0 = two_pi * 400.0;
    c.omega_m = two_pi * 3.267e9;
    c.omega_mw = c.omega_m;
    c.J = 0.5 * c.omega_m;
    c.gamma_0 = two_pi * 5.3e6;
    c.k_eff2 = 4.3e-3;
    c.C0 = 200e-15;
    c.R0 = 10e3;
    c.Z0 = 50.0;
    c.P_in = 0.1;
    c.kappa_L = two_pi * 1e4;
    c.hbar = codata_hbar;
    c.pump_target = PumpTarget::symmetric;
    return c;
}

}  // namespace transducer
