#pragma once

// Mode-normalization and overlap quadratures over sampled field grids.
//
// Voigt convention: index pairs (11, 22, 33, 23, 13, 12) map to 0..5.
// Strain vectors carry engineering shear (S4 = 2 S23, ...), so stress-like
// contractions T = c S, D = e S and the impermeability change dEta = p S are
// plain matrix-vector products. Impermeability is stored as a tensor Voigt
// vector (no factor two on the shear entries).
//
// All sums are midpoint cell sums in grid order with pairwise accumulation,
// hence bit-reproducible for a fixed cell order.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "transducer/errors.hpp"
#include "transducer/numeric.hpp"
#include "transducer/params.hpp"

namespace transducer {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix36d = Eigen::Matrix<double, 3, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Vec3 = std::array<double, 3>;

// ---------------------------------------------------------------- Voigt ---

inline constexpr int voigt_index(int i, int j) noexcept {
    if (i == j) return i;
    const int a = i < j ? i : j;
    const int b = i < j ? j : i;
    if (a == 1 && b == 2) return 3;
    if (a == 0 && b == 2) return 4;
    return 5;
}

inline constexpr std::array<std::array<int, 2>, 6> voigt_pairs{{{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};

// Rank-4 tensor with minor symmetries, flattened as t[((i*3+j)*3+k)*3+l].
using Tensor4 = std::array<double, 81>;

inline Tensor4 tensor4_from_voigt(const Matrix6d& m) {
    Tensor4 t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    t[((i * 3 + j) * 3 + k) * 3 + l] = m(voigt_index(i, j), voigt_index(k, l));
    return t;
}

inline Matrix6d voigt_from_tensor4(const Tensor4& t) {
    Matrix6d m;
    for (int I = 0; I < 6; ++I)
        for (int J = 0; J < 6; ++J) {
            const auto [i, j] = voigt_pairs[I];
            const auto [k, l] = voigt_pairs[J];
            m(I, J) = t[((i * 3 + j) * 3 + k) * 3 + l];
        }
    return m;
}

// Engineering-shear Voigt strain of a displacement gradient grad(i, j) = du_i/dx_j.
inline Vector6d voigt_strain(const Eigen::Matrix3d& grad) {
    const Eigen::Matrix3d s = 0.5 * (grad + grad.transpose());
    Vector6d v;
    v << s(0, 0), s(1, 1), s(2, 2), 2.0 * s(1, 2), 2.0 * s(0, 2), 2.0 * s(0, 1);
    return v;
}

// Symmetric 3x3 tensor from a tensor-style Voigt vector (no shear factor).
inline Eigen::Matrix3d tensor_from_voigt(const Vector6d& v) {
    Eigen::Matrix3d t;
    t << v(0), v(5), v(4),
         v(5), v(1), v(3),
         v(4), v(3), v(2);
    return t;
}

// Photoelastic matrix of an isotropic (amorphous) solid.
inline Matrix6d build_amorphous_p(double p11, double p12) {
    const double p44 = 0.5 * (p11 - p12);
    Matrix6d p = Matrix6d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p(i, j) = i == j ? p11 : p12;
    for (int i = 3; i < 6; ++i) p(i, i) = p44;
    return p;
}

// ------------------------------------------------------------ materials ---

struct Material {
    double rho = 0.0;    // kg/m^3
    double eps_r = 1.0;  // relative permittivity, isotropic
    Matrix6d c = Matrix6d::Zero();  // Pa
    Matrix6d p = Matrix6d::Zero();
    std::optional<Matrix36d> e;  // C/m^2; present only for piezoelectric media
};

using MaterialTable = std::map<std::string, Material, std::less<>>;

inline const Material& material_at(const MaterialTable& table, const std::string& id) {
    auto it = table.find(id);
    if (it == table.end()) throw ConfigError(id, "unknown material: " + id);
    return it->second;
}

// ----------------------------------------------------------------- grids ---

enum class FieldKind { electric, displacement, strain };

inline constexpr std::size_t component_count(FieldKind k) noexcept { return k == FieldKind::strain ? 6 : 3; }

struct FieldSample {
    Vec3 position{};
    double cell_volume = 0.0;
    std::string material;
    std::array<double, 6> value{};  // first component_count(kind) entries used
};

struct FieldGrid {
    FieldKind kind = FieldKind::electric;
    std::vector<FieldSample> samples;

    std::size_t size() const noexcept { return samples.size(); }

    double total_volume() const {
        std::vector<double> v;
        v.reserve(samples.size());
        for (const auto& s : samples) v.push_back(s.cell_volume);
        return pairwise_sum(v);
    }

    double norm2(std::size_t i) const noexcept {
        double acc = 0.0;
        for (std::size_t c = 0; c < component_count(kind); ++c) acc += samples[i].value[c] * samples[i].value[c];
        return acc;
    }

    void validate(const char* who) const {
        if (samples.empty()) throw NumericalError(std::string(who) + ": empty grid");
        for (const auto& s : samples)
            if (!(s.cell_volume > 0.0)) throw NumericalError(std::string(who) + ": non-positive cell volume");
    }
};

inline Vector6d strain_of(const FieldSample& s) {
    Vector6d v;
    for (int i = 0; i < 6; ++i) v(i) = s.value[i];
    return v;
}

inline Eigen::Vector3d vector_of(const FieldSample& s) { return {s.value[0], s.value[1], s.value[2]}; }

namespace detail {

inline void require_kind(const FieldGrid& g, FieldKind k, const char* who) {
    if (g.kind != k) throw std::invalid_argument(std::string(who) + ": wrong field kind");
}

// Two grids describe the same cells: same count, positions and volumes.
inline void require_same_cells(const FieldGrid& a, const FieldGrid& b, const char* who) {
    if (a.size() != b.size()) throw NumericalError(std::string(who) + ": mismatched grids (cell count)");
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a.samples[i];
        const auto& y = b.samples[i];
        bool same = x.material == y.material && relative_difference(x.cell_volume, y.cell_volume) <= 1e-12;
        for (int c = 0; c < 3 && same; ++c) {
            const double scale = std::max({std::abs(x.position[c]), std::abs(y.position[c]), std::cbrt(x.cell_volume)});
            same = std::abs(x.position[c] - y.position[c]) <= 1e-9 * scale;
        }
        if (!same) throw NumericalError(std::string(who) + ": mismatched grids at cell " + std::to_string(i));
    }
}

}  // namespace detail

// ----------------------------------------------------------- normalizing ---

struct ModeNormalization {
    double m_eff = 0.0;    // kg
    double u_zpf = 0.0;    // m
    double eps_r_eff = 0.0;
};

inline double zero_point_displacement(double m_eff, double omega_m, double hbar = codata_hbar) {
    if (!(m_eff > 0.0) || !(omega_m > 0.0)) throw std::invalid_argument("zero_point_displacement: non-positive input");
    return std::sqrt(hbar / (2.0 * m_eff * omega_m));
}

inline ModeNormalization normalize_mechanical(const FieldGrid& grid, const MaterialTable& materials, double omega_m,
                                              double hbar = codata_hbar) {
    detail::require_kind(grid, FieldKind::displacement, "normalize_mechanical");
    grid.validate("normalize_mechanical");
    if (!(omega_m > 0.0)) throw std::invalid_argument("normalize_mechanical: omega_m must be positive");
    std::vector<double> terms(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& s = grid.samples[i];
        terms[i] = material_at(materials, s.material).rho * grid.norm2(i) * s.cell_volume;
    }
    const double m = pairwise_sum(terms);
    if (!(m > 0.0)) throw NumericalError("normalize_mechanical: zero-norm mode");
    ModeNormalization out;
    out.m_eff = m;
    out.u_zpf = zero_point_displacement(m, omega_m, hbar);
    return out;
}

inline double normalize_electric(const FieldGrid& grid, const MaterialTable& materials) {
    detail::require_kind(grid, FieldKind::electric, "normalize_electric");
    grid.validate("normalize_electric");
    std::vector<double> terms(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& s = grid.samples[i];
        terms[i] = material_at(materials, s.material).eps_r * grid.norm2(i) * s.cell_volume;
    }
    const double e = pairwise_sum(terms);
    if (!(e > 0.0)) throw NumericalError("normalize_electric: zero-norm mode");
    return e;
}

// int E.D dV in SI units, with D = eps0 eps_r E.
inline double electric_energy_norm(const FieldGrid& grid, const MaterialTable& materials) {
    return vacuum_permittivity * normalize_electric(grid, materials);
}

// ------------------------------------------------------------- overlaps ---

// Squared piezoelectric overlap of a microwave mode function F and a mode
// strain S, restricted to cells whose material carries an e tensor.
inline double k_eff2_overlap(const FieldGrid& e_grid, const FieldGrid& s_grid, const MaterialTable& materials,
                             double c_eff, double eps_eff) {
    detail::require_kind(e_grid, FieldKind::electric, "k_eff2_overlap");
    detail::require_kind(s_grid, FieldKind::strain, "k_eff2_overlap");
    e_grid.validate("k_eff2_overlap");
    detail::require_same_cells(e_grid, s_grid, "k_eff2_overlap");
    if (!(c_eff > 0.0) || !(eps_eff > 0.0)) throw std::invalid_argument("k_eff2_overlap: non-positive effective constants");
    const double norm = 1.0 / std::sqrt(c_eff * eps_eff);
    std::vector<double> terms;
    for (std::size_t i = 0; i < e_grid.size(); ++i) {
        const auto& mat = material_at(materials, e_grid.samples[i].material);
        if (!mat.e) continue;
        const double contraction = vector_of(e_grid.samples[i]).dot(*mat.e * strain_of(s_grid.samples[i]));
        terms.push_back(norm * contraction * e_grid.samples[i].cell_volume);
    }
    if (terms.empty()) throw NumericalError("k_eff2_overlap: no piezoelectric cells");
    const double root = pairwise_sum(terms);
    return root * root;
}

// Relative-permittivity change of an isotropic medium under strain S.
inline Eigen::Matrix3d delta_eps_r(const Material& mat, const Vector6d& strain) {
    const Eigen::Matrix3d d_eta = tensor_from_voigt(mat.p * strain);
    return -mat.eps_r * mat.eps_r * d_eta;
}

// Photoelastic single-photon coupling. The strain grid holds the mode strain
// per unit zero-point amplitude; the result is the frequency shift per
// u_zpf, sign included.
inline double g0_photoelastic(const FieldGrid& e_grid, const FieldGrid& s_grid, const MaterialTable& materials,
                              double omega_0, double u_zpf) {
    detail::require_kind(e_grid, FieldKind::electric, "g0_photoelastic");
    detail::require_kind(s_grid, FieldKind::strain, "g0_photoelastic");
    e_grid.validate("g0_photoelastic");
    detail::require_same_cells(e_grid, s_grid, "g0_photoelastic");
    std::vector<double> num(e_grid.size());
    std::vector<double> den(e_grid.size());
    for (std::size_t i = 0; i < e_grid.size(); ++i) {
        const auto& s = e_grid.samples[i];
        const auto& mat = material_at(materials, s.material);
        const Eigen::Vector3d E = vector_of(s);
        num[i] = E.dot(delta_eps_r(mat, strain_of(s_grid.samples[i])) * E) * s.cell_volume;
        den[i] = mat.eps_r * E.squaredNorm() * s.cell_volume;
    }
    const double d = pairwise_sum(den);
    if (!(d > 0.0)) throw NumericalError("g0_photoelastic: zero normalization denominator");
    return -0.5 * omega_0 * pairwise_sum(num) / d * u_zpf;
}

struct SurfaceSample {
    Vec3 normal{0.0, 0.0, 1.0};
    double area = 0.0;             // m^2
    std::array<double, 2> e_parallel{};  // V/m
    double d_perp = 0.0;           // C/m^2
    std::optional<Vec3> displacement;  // mode displacement; unit normal motion when absent
};

struct MovingBoundaryResult {
    double g0 = 0.0;  // rad/s
    std::vector<std::string> warnings;
};

// Moving-boundary coupling. delta_eps [F/m] and delta_eps_inv [m/F] are the
// (inner minus outer) interface contrasts; energy_norm is int E.D dV of the
// optical mode in the same units as the surface fields.
inline MovingBoundaryResult g0_moving_boundary(const std::vector<SurfaceSample>& surface, double delta_eps,
                                               double delta_eps_inv, double omega_0, double displacement_zpf,
                                               double energy_norm) {
    if (!(energy_norm > 0.0)) throw NumericalError("g0_moving_boundary: zero normalization denominator");
    MovingBoundaryResult out;
    std::vector<double> terms(surface.size());
    for (std::size_t i = 0; i < surface.size(); ++i) {
        const auto& s = surface[i];
        if (!(s.area > 0.0)) throw NumericalError("g0_moving_boundary: non-positive surface element");
        Eigen::Vector3d n(s.normal[0], s.normal[1], s.normal[2]);
        const double len = n.norm();
        if (!(len > 0.0)) throw NumericalError("g0_moving_boundary: zero normal at sample " + std::to_string(i));
        if (std::abs(len - 1.0) > 1e-9) {
            out.warnings.push_back("sample " + std::to_string(i) + ": normal of length " + std::to_string(len) +
                                   " renormalized");
            n /= len;
        }
        const double qn = s.displacement
                              ? Eigen::Vector3d((*s.displacement)[0], (*s.displacement)[1], (*s.displacement)[2]).dot(n)
                              : 1.0;
        const double e_par2 = s.e_parallel[0] * s.e_parallel[0] + s.e_parallel[1] * s.e_parallel[1];
        terms[i] = qn * (delta_eps * e_par2 - delta_eps_inv * s.d_perp * s.d_perp) * s.area;
    }
    out.g0 = -0.5 * omega_0 * displacement_zpf * pairwise_sum(terms) / energy_norm;
    return out;
}

}  // namespace transducer
