#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace besovlab::cli {

/// Output directory guard: every file a subcommand writes goes through
/// `path()`, which rejects names that would escape the directory.
class OutputDir {
public:
    explicit OutputDir(std::filesystem::path root);

    const std::filesystem::path& root() const noexcept { return root_; }
    /// Throws Error("invalid-argument") for absolute names, separators or "..".
    std::filesystem::path path(std::string_view name) const;
    /// Writes text; records nothing, see RunManifest for the listing.
    void write_text(std::string_view name, std::string_view text) const;

private:
    std::filesystem::path root_;
};

struct RunManifest {
    std::string subcommand;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    /// (path, FNV-1a 64 hex) per input file.
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<std::string> outputs;

    void add_input(const std::string& path);
    nlohmann::ordered_json to_json() const;
    /// Written to <out>/manifest.json before any output.
    void write(const OutputDir& out) const;
};

std::string tool_version();

}  // namespace besovlab::cli
