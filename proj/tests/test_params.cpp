#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "support.hpp"

using namespace transducer;
using transducer::testing::source_path;

namespace {

nlohmann::json reference_json() {
    std::ifstream in(source_path("configs/reference.json"));
    return nlohmann::json::parse(in);
}

void expect_config_error(const nlohmann::json& j, const std::string& key, const std::string& message) {
    try {
        config_from_json(j);
        FAIL() << "expected ConfigError for " << key;
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), key);
        EXPECT_EQ(std::string(e.what()), message);
    }
}

}  // namespace

TEST(LoadConfig, ReferenceFileInAngularUnits) {
    const auto c = load_config(source_path("configs/reference.json"));
    EXPECT_DOUBLE_EQ(c.kappa_ex, 2.0 * std::numbers::pi * 1.25e8);
    EXPECT_DOUBLE_EQ(c.omega_c_1, 2.0 * std::numbers::pi * 193e12);
    EXPECT_DOUBLE_EQ(c.g0, 2.0 * std::numbers::pi * 400.0);
    EXPECT_DOUBLE_EQ(c.C0, 200e-15);
    EXPECT_DOUBLE_EQ(c.P_in, 0.1);
}

TEST(LoadConfig, DefaultsApplied) {
    auto j = reference_json();
    j.erase("Z0");
    const auto c = config_from_json(j);
    EXPECT_EQ(c.Z0, 50.0);
    EXPECT_EQ(c.omega_c_2, c.omega_c_1);
    EXPECT_EQ(c.kappa_0_2, c.kappa_0_1);
    EXPECT_EQ(c.J, 0.5 * c.omega_m);
    EXPECT_EQ(c.omega_mw, c.omega_m);
    EXPECT_EQ(c.hbar, 1.054571817e-34);
    EXPECT_DOUBLE_EQ(c.kappa_L, 2.0 * std::numbers::pi * 1e4);
    EXPECT_EQ(c.pump_target, PumpTarget::symmetric);
}

TEST(LoadConfig, DerivedLinewidths) {
    const auto c = load_config(source_path("configs/reference.json"));
    EXPECT_EQ(c.kappa_1(), c.kappa_0_1 + c.kappa_ex);
    EXPECT_EQ(c.kappa_2(), c.kappa_0_2);
}

TEST(LoadConfig, ZeroRateRejected) {
    auto j = reference_json();
    j["kappa_ex"] = 0;
    expect_config_error(j, "kappa_ex", "non-positive rate: kappa_ex");
    j = reference_json();
    j["gamma_0"] = -1.0;
    expect_config_error(j, "gamma_0", "non-positive rate: gamma_0");
}

TEST(LoadConfig, MissingKeyRejected) {
    auto j = reference_json();
    j.erase("g0");
    expect_config_error(j, "g0", "missing key: g0");
}

TEST(LoadConfig, CouplingFactorRange) {
    for (double k : {0.0, 1.0, 1.5}) {
        auto j = reference_json();
        j["k_eff2"] = k;
        expect_config_error(j, "k_eff2", "k_eff2 outside (0,1)");
    }
}

TEST(LoadConfig, UnknownKeyRejected) {
    auto j = reference_json();
    j["kapa_ex"] = 1.0;
    expect_config_error(j, "kapa_ex", "unknown key: kapa_ex");
}

TEST(LoadConfig, BadUnitAndTarget) {
    auto j = reference_json();
    j["frequency_unit"] = "GHz";
    EXPECT_THROW(config_from_json(j), ConfigError);
    j = reference_json();
    j["pump_target"] = "explicit";
    expect_config_error(j, "omega_L", "missing key: omega_L (required by explicit pump placement)");
    j["omega_L"] = 193e12;
    EXPECT_NO_THROW(config_from_json(j));
}

TEST(LoadConfig, ZeroPowerAllowed) {
    auto j = reference_json();
    j["P_in"] = 0.0;
    EXPECT_EQ(config_from_json(j).P_in, 0.0);
}

TEST(LoadConfig, InvalidJsonAndMissingFile) {
    EXPECT_THROW(parse_config("{ not json"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(LoadConfig, RoundTripAngularIsExact) {
    const auto c = load_config(source_path("configs/reference.json"));
    const auto back = config_from_json(config_to_json(c, FrequencyUnit::radians_per_second));
    for (const auto& f : detail::scalar_fields) EXPECT_EQ(c.*f.member, back.*f.member) << f.key;
}

TEST(LoadConfig, RoundTripHertzReproducesFile) {
    auto j = reference_json();
    j["omega_L"] = 193.001e12;
    j["pump_target"] = "explicit";
    j["J"] = 1.6e9;
    const auto out = config_to_json(config_from_json(j));
    for (const auto& [key, v] : j.items()) {
        if (!v.is_number()) continue;
        const double a = v.get<double>();
        const double b = out.at(key).get<double>();
        EXPECT_LE(std::abs(a - b), 2.0 * std::numeric_limits<double>::epsilon() * std::abs(a)) << key;
    }
}

TEST(LoadConfig, HertzAndRadianFilesAgreeDownstream) {
    const auto hz = load_config(source_path("configs/reference.json"));
    const auto rad = load_config(source_path("configs/reference_rad.json"));
    const auto grid = linspace(hz.omega_m - two_pi * 30e6, hz.omega_m + two_pi * 30e6, 201);
    const auto a = efficiency_rwa(hz, grid);
    const auto b = efficiency_rwa(rad, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LE(relative_difference(a.value[i], b.value[i]), 1e-12);
    const auto sa = s11(hz, grid);
    const auto sb = s11(rad, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LE(relative_difference(sa.value[i], sb.value[i]), 1e-12);
}

TEST(PhotonFlux, ZeroPower) { EXPECT_EQ(photon_flux(0.0, two_pi * 193e12), 0.0); }

TEST(PhotonFlux, ReferencePump) {
    // 0.1 W / (hbar * 2 pi * 193 THz), evaluated separately.
    EXPECT_NEAR(photon_flux(0.1, two_pi * 193e12) / 7.819638241279076e17, 1.0, 1e-12);
}

TEST(PhotonFlux, LinearInPower) {
    const double w = two_pi * 193e12;
    EXPECT_DOUBLE_EQ(photon_flux(0.2, w), 2.0 * photon_flux(0.1, w));
}

TEST(PhotonFlux, Preconditions) {
    EXPECT_THROW(photon_flux(-1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(photon_flux(1.0, 0.0), std::invalid_argument);
    EXPECT_EQ(photon_flux(2.0, 4.0, 1.0), 0.5);
}

TEST(ComplexFrequency, PhysicalAxisConvention) {
    const auto f = ComplexFrequency::physical(3.0);
    EXPECT_EQ(f.s, cplx(0.0, -3.0));
    EXPECT_EQ(f.omega(), 3.0);
}
