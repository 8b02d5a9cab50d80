#pragma once

// Readers for sampled field grids, interface samples and material tables.
// Formats are described in docs/file_formats.md. Lines starting with '#' are
// comments; the first non-comment line is the header.

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "transducer/errors.hpp"
#include "transducer/modes.hpp"

namespace transducer {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

struct CsvTable {
    std::string file;
    std::size_t header_line = 0;
    std::map<std::string, std::size_t, std::less<>> columns;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line number, cells)

    bool has(std::string_view name) const { return columns.find(name) != columns.end(); }

    std::size_t column(std::string_view name) const {
        auto it = columns.find(name);
        if (it == columns.end()) throw FormatError(file, header_line, "missing column: " + std::string(name));
        return it->second;
    }

    double number(std::size_t row, std::string_view name) const {
        const auto& [line, cells] = rows[row];
        const std::string& cell = cells[column(name)];
        double v = 0.0;
        const auto* first = cell.data();
        const auto* last = cell.data() + cell.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || cell.empty())
            throw FormatError(file, line, "invalid number in column " + std::string(name) + ": '" + cell + "'");
        return v;
    }

    const std::string& text(std::size_t row, std::string_view name) const { return rows[row].second[column(name)]; }
};

inline CsvTable parse_csv(std::istream& in, const std::string& file) {
    CsvTable t;
    t.file = file;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto cells = split_csv(body);
        if (!header) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i].empty()) throw FormatError(file, lineno, "empty column name");
                if (!t.columns.emplace(std::string(cells[i]), i).second)
                    throw FormatError(file, lineno, "duplicate column: " + std::string(cells[i]));
            }
            header = true;
            t.header_line = lineno;
            continue;
        }
        if (cells.size() != t.columns.size())
            throw FormatError(file, lineno,
                              "expected " + std::to_string(t.columns.size()) + " fields, got " + std::to_string(cells.size()));
        std::vector<std::string> owned(cells.begin(), cells.end());
        t.rows.emplace_back(lineno, std::move(owned));
    }
    if (!header) throw FormatError(file, 0, "no header line");
    return t;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path, 0, "cannot open file");
    return in;
}

inline std::array<const char*, 6> component_names(FieldKind k) {
    switch (k) {
        case FieldKind::electric: return {"Ex", "Ey", "Ez", "", "", ""};
        case FieldKind::displacement: return {"Qx", "Qy", "Qz", "", "", ""};
        case FieldKind::strain: return {"S1", "S2", "S3", "S4", "S5", "S6"};
    }
    return {};
}

}  // namespace detail

inline FieldGrid read_field_grid(std::istream& in, FieldKind kind, const std::string& file = "<stream>") {
    const auto t = detail::parse_csv(in, file);
    const auto names = detail::component_names(kind);
    FieldGrid g;
    g.kind = kind;
    g.samples.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        FieldSample s;
        s.position = {t.number(r, "x"), t.number(r, "y"), t.number(r, "z")};
        s.cell_volume = t.number(r, "dV");
        if (!(s.cell_volume > 0.0)) throw FormatError(file, t.rows[r].first, "cell volume must be positive");
        s.material = t.text(r, "material");
        if (s.material.empty()) throw FormatError(file, t.rows[r].first, "empty material id");
        for (std::size_t c = 0; c < component_count(kind); ++c) s.value[c] = t.number(r, names[c]);
        g.samples.push_back(std::move(s));
    }
    return g;
}

inline FieldGrid read_field_grid(const std::string& path, FieldKind kind) {
    auto in = detail::open_input(path);
    return read_field_grid(in, kind, path);
}

inline std::vector<SurfaceSample> read_surface(std::istream& in, const std::string& file = "<stream>") {
    const auto t = detail::parse_csv(in, file);
    const bool has_q = t.has("Qx") || t.has("Qy") || t.has("Qz");
    std::vector<SurfaceSample> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        SurfaceSample s;
        s.normal = {t.number(r, "nx"), t.number(r, "ny"), t.number(r, "nz")};
        s.area = t.number(r, "dA");
        if (!(s.area > 0.0)) throw FormatError(file, t.rows[r].first, "surface element must be positive");
        s.e_parallel = {t.number(r, "Epar1"), t.number(r, "Epar2")};
        s.d_perp = t.number(r, "Dperp");
        if (has_q) s.displacement = Vec3{t.number(r, "Qx"), t.number(r, "Qy"), t.number(r, "Qz")};
        out.push_back(s);
    }
    return out;
}

inline std::vector<SurfaceSample> read_surface(const std::string& path) {
    auto in = detail::open_input(path);
    return read_surface(in, path);
}

namespace detail {

template <int R, int C>
Eigen::Matrix<double, R, C> matrix_from_json(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != R) throw ConfigError(what, what + ": expected " + std::to_string(R) + " rows");
    Eigen::Matrix<double, R, C> m;
    for (int r = 0; r < R; ++r) {
        if (!j[r].is_array() || j[r].size() != C)
            throw ConfigError(what, what + ": expected " + std::to_string(C) + " columns");
        for (int c = 0; c < C; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

}  // namespace detail

// {"materials": {"<id>": {"rho": .., "eps_r": .., "p": [[6x6]] | "p11"+"p12",
//                          "c": [[6x6]], "e": [[3x6]]}}}
inline MaterialTable materials_from_json(const nlohmann::json& j) {
    static const std::set<std::string, std::less<>> keys{"rho", "eps_r", "p", "p11", "p12", "c", "e"};
    if (!j.is_object() || !j.contains("materials") || !j.at("materials").is_object())
        throw ConfigError("materials", "missing key: materials");
    MaterialTable table;
    for (const auto& [id, m] : j.at("materials").items()) {
        for (const auto& [k, _] : m.items())
            if (!keys.contains(k)) throw ConfigError(id + "." + k, "unknown key: " + id + "." + k);
        Material mat;
        mat.rho = m.value("rho", 0.0);
        mat.eps_r = m.value("eps_r", 1.0);
        if (!(mat.rho >= 0.0)) throw ConfigError(id + ".rho", "negative density: " + id);
        if (!(mat.eps_r > 0.0)) throw ConfigError(id + ".eps_r", "non-positive permittivity: " + id);
        if (m.contains("p")) {
            mat.p = detail::matrix_from_json<6, 6>(m.at("p"), id + ".p");
        } else if (m.contains("p11") || m.contains("p12")) {
            if (!m.contains("p11") || !m.contains("p12")) throw ConfigError(id + ".p12", "p11 and p12 go together: " + id);
            mat.p = build_amorphous_p(m.at("p11").get<double>(), m.at("p12").get<double>());
        }
        if (m.contains("c")) mat.c = detail::matrix_from_json<6, 6>(m.at("c"), id + ".c");
        if (m.contains("e")) mat.e = detail::matrix_from_json<3, 6>(m.at("e"), id + ".e");
        table.emplace(id, std::move(mat));
    }
    return table;
}

inline MaterialTable load_materials(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open materials file: " + path);
    try {
        return materials_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("", path + ": " + e.what());
    }
}

}  // namespace transducer
