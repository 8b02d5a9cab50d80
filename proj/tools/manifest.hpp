#pragma once

// Run manifests. Each output file starts with a '#' line naming its sidecar
// manifest and the SHA-256 of the manifest core (command, grid, config,
// derived parameters). The sidecar adds the SHA-256 of every artifact.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace transducer::cli {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 failed");
    }
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

// 17 significant digits: doubles survive a text round trip.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

struct RunManifest {
    std::string command;
    nlohmann::json grid = nlohmann::json::object();
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json derived = nlohmann::json::object();
    std::vector<std::pair<std::string, std::string>> artifacts;  // (path, sha256)

    nlohmann::json core() const {
        return {{"command", command}, {"grid", grid}, {"config", config}, {"derived", derived}};
    }

    std::string checksum() const { return sha256_hex(core().dump()); }

    nlohmann::json to_json() const {
        nlohmann::json j = core();
        j["manifest_sha256"] = checksum();
        j["artifacts"] = nlohmann::json::array();
        for (const auto& [path, sum] : artifacts) j["artifacts"].push_back({{"path", path}, {"sha256", sum}});
        return j;
    }
};

inline std::string manifest_path(const std::string& out) { return out + ".manifest.json"; }

inline std::string metadata_line(const RunManifest& m, const std::string& out) {
    const auto slash = out.find_last_of('/');
    const std::string name = manifest_path(slash == std::string::npos ? out : out.substr(slash + 1));
    return "# manifest=" + name + " sha256=" + m.checksum() + "\n";
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << content;
    f.flush();
    if (!f) throw IoError("write failed: " + path);
}

// Writes body (prefixed with the metadata line) to out, then the sidecar.
inline void write_artifact(RunManifest& m, const std::string& out, const std::string& body) {
    const std::string content = metadata_line(m, out) + body;
    write_file(out, content);
    m.artifacts.emplace_back(out, sha256_hex(content));
    write_file(manifest_path(out), m.to_json().dump(2) + "\n");
}

}  // namespace transducer::cli
