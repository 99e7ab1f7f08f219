#include "horizonlab/artifacts.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "horizonlab/format.hpp"

namespace horizonlab {

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        fail(ErrorCode::IoError, "SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t k = 0; k < columns.size(); ++k) out += (k ? "," : "") + columns[k];
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += fmt_double(row[k]);
        }
        out += '\n';
    }
    return out;
}

std::string Table::to_json() const {
    nlohmann::ordered_json j;
    j["columns"] = columns;
    nlohmann::ordered_json data = nlohmann::ordered_json::array();
    for (const auto& row : rows) data.push_back(row);
    j["rows"] = data;
    return j.dump(1) + "\n";
}

ArtifactSet::ArtifactSet(std::filesystem::path directory, std::string format)
    : dir_(std::move(directory)), format_(std::move(format)) {
    if (format_ != "csv" && format_ != "json") {
        fail(ErrorCode::ValidationError, "--format must be csv or json, got '" + format_ + "'");
    }
}

void ArtifactSet::add_text(const std::string& relative_path, std::string content) {
    files_[relative_path] = std::move(content);
}

void ArtifactSet::add_table(const std::string& stem, const Table& table) {
    if (format_ == "json") add_text(stem + ".json", table.to_json());
    else add_text(stem + ".csv", table.to_csv());
}

void ArtifactSet::log(const std::string& line) {
    log_ += line;
    log_ += '\n';
}

const std::string& ArtifactSet::content(const std::string& relative_path) const {
    auto it = files_.find(relative_path);
    if (it == files_.end()) fail(ErrorCode::InvalidArgument, "no artifact named " + relative_path);
    return it->second;
}

std::filesystem::path ArtifactSet::commit(const RunRecord& record) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) fail(ErrorCode::IoError, "cannot create output directory " + dir_.string() + ": " + ec.message());

    files_["run.log"] = log_;
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& [name, bytes] : files_) {
        const std::filesystem::path path = dir_ / name;
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
        std::ofstream out(path, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
        entries.push_back({{"path", name}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
    }

    nlohmann::ordered_json m;
    m["command"] = record.command;
    m["scenario"] = record.scenario;
    m["status"] = record.status;
    if (record.error_code) {
        m["error"] = {{"code", std::string(to_string(*record.error_code))}, {"message", record.error_message}};
    } else {
        m["error"] = nullptr;
    }
    m["files"] = entries;
    const std::filesystem::path manifest = dir_ / "manifest.json";
    std::ofstream out(manifest, std::ios::binary);
    out << m.dump(2) << '\n';
    if (!out) fail(ErrorCode::IoError, "cannot write " + manifest.string());
    return manifest;
}

ManifestCheck verify_manifest(const std::filesystem::path& directory) {
    ManifestCheck check;
    std::ifstream in(directory / "manifest.json");
    if (!in) {
        check.problem = "manifest.json missing";
        return check;
    }
    nlohmann::json m;
    try {
        in >> m;
    } catch (const std::exception& e) {
        check.problem = std::string("manifest.json unreadable: ") + e.what();
        return check;
    }
    for (const auto& entry : m.at("files")) {
        const std::string name = entry.at("path").get<std::string>();
        std::ifstream f(directory / name, std::ios::binary);
        if (!f) {
            check.problem = name + " missing";
            return check;
        }
        std::stringstream ss;
        ss << f.rdbuf();
        const std::string bytes = ss.str();
        if (bytes.size() != entry.at("bytes").get<std::size_t>() || sha256_hex(bytes) != entry.at("sha256").get<std::string>()) {
            check.problem = name + " does not match its recorded hash";
            return check;
        }
        ++check.files;
    }
    check.ok = true;
    return check;
}

}  // namespace horizonlab
