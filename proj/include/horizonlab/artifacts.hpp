#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "horizonlab/error.hpp"

namespace horizonlab {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string to_csv() const;
    std::string to_json() const;
};

struct RunRecord {
    std::string command;
    std::string scenario;
    std::string status = "ok";  // ok | numerical_failure
    std::optional<ErrorCode> error_code;
    std::string error_message;
};

/// Output files collected in memory and written together with a manifest, so
/// a run that fails validation leaves nothing behind.
class ArtifactSet {
public:
    ArtifactSet(std::filesystem::path directory, std::string format);

    const std::filesystem::path& directory() const { return dir_; }
    const std::string& format() const { return format_; }

    void add_text(const std::string& relative_path, std::string content);
    /// Writes `stem`.csv or `stem`.json depending on the format.
    void add_table(const std::string& stem, const Table& table);
    void log(const std::string& line);

    bool contains(const std::string& relative_path) const { return files_.count(relative_path) > 0; }
    const std::string& content(const std::string& relative_path) const;

    /// Writes every file plus run.log and manifest.json. Returns the manifest path.
    std::filesystem::path commit(const RunRecord& record);

private:
    std::filesystem::path dir_;
    std::string format_;
    std::map<std::string, std::string> files_;
    std::string log_;
};

struct ManifestCheck {
    bool ok = false;
    std::size_t files = 0;
    std::string problem;
};

/// Confirms every manifest entry exists with the recorded size and hash.
ManifestCheck verify_manifest(const std::filesystem::path& directory);

}  // namespace horizonlab
