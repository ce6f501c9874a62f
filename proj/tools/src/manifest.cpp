#include "manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include <besovlab/error.hpp>
#include <besovlab/io.hpp>

namespace besovlab::cli {

namespace fs = std::filesystem;

OutputDir::OutputDir(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw Error("io", "cannot create output directory " + root_.string() + ": " + ec.message());
}

fs::path OutputDir::path(std::string_view name) const {
    const fs::path rel(name);
    if (name.empty() || rel.is_absolute() || rel.has_parent_path() || name == "." || name == "..") {
        throw Error("invalid-argument", "output name '" + std::string(name) + "' must be a plain file name");
    }
    return root_ / rel;
}

void OutputDir::write_text(std::string_view name, std::string_view text) const {
    const fs::path p = path(name);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("io", "cannot open " + p.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("io", "write failed for " + p.string());
}

void RunManifest::add_input(const std::string& path) { inputs.emplace_back(path, hex64(fnv1a64_file(path))); }

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = "besovlab";
    j["version"] = tool_version();
    j["subcommand"] = subcommand;
    j["params"] = params;
    auto in = nlohmann::ordered_json::array();
    for (const auto& [p, h] : inputs) in.push_back({{"path", p}, {"fnv1a64", h}});
    j["inputs"] = in;
    j["outputs"] = outputs;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["timestamp"] = stamp;
    return j;
}

void RunManifest::write(const OutputDir& out) const { out.write_text("manifest.json", to_json().dump(2) + "\n"); }

std::string tool_version() { return BESOVLAB_VERSION; }

}  // namespace besovlab::cli
