#pragma once

// Profile interchange document and the directory-backed profile store.
//
//   { "format": "cvd-profile/1", "session_id": "...", "timestamp": "2026-01-01T00:00:00Z",
//     "beta": 0.2, "alpha_p": 0.1, "alpha_d": 0.8, "alpha_n": 0.8 }
//
// Degrees are serialized with round-trip precision, so write-then-read is lossless.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cvd/error.hpp"
#include "cvd/image_io.hpp"
#include "cvd/profile.hpp"

namespace cvd {

inline constexpr std::string_view kProfileFormat = "cvd-profile/1";

struct ProfileDocument {
    std::string session_id;
    std::string timestamp;
    FuzzyProfile profile;
};

inline std::string utc_timestamp_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline nlohmann::json profile_to_json(const ProfileDocument& doc) {
    return {{"format", kProfileFormat},     {"session_id", doc.session_id},
            {"timestamp", doc.timestamp},   {"beta", doc.profile.beta},
            {"alpha_p", doc.profile.alpha_p}, {"alpha_d", doc.profile.alpha_d},
            {"alpha_n", doc.profile.alpha_n}};
}

inline ProfileDocument profile_from_json(const nlohmann::json& j) {
    ProfileDocument doc;
    try {
        if (j.contains("format") && j.at("format").get<std::string>() != kProfileFormat) {
            throw ParseError("unsupported profile format", 0, "format");
        }
        doc.session_id = j.value("session_id", std::string{});
        doc.timestamp = j.value("timestamp", std::string{});
        doc.profile.beta = j.at("beta").get<double>();
        doc.profile.alpha_p = j.at("alpha_p").get<double>();
        doc.profile.alpha_d = j.at("alpha_d").get<double>();
        doc.profile.alpha_n = j.at("alpha_n").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed profile document: ") + e.what());
    }
    doc.profile.validate();
    return doc;
}

inline std::string serialize_profile(const ProfileDocument& doc) { return profile_to_json(doc).dump(2) + "\n"; }

inline ProfileDocument parse_profile(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed profile document: ") + e.what());
    }
    return profile_from_json(j);
}

inline ProfileDocument read_profile(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return parse_profile(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

inline void write_profile(const std::filesystem::path& path, const ProfileDocument& doc) {
    const std::string text = serialize_profile(doc);
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

/// Session ids double as file names, so they are restricted to [A-Za-z0-9_-], 1..64 chars.
inline bool valid_session_id(std::string_view id) {
    if (id.empty() || id.size() > 64) return false;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
        if (!ok) return false;
    }
    return true;
}

/// Writes go to a temporary file first and are renamed into place.
inline void atomic_write_text(const std::filesystem::path& path, std::string_view text) {
    auto tmp = path;
    tmp += ".tmp";
    write_file_bytes(tmp, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    std::filesystem::rename(tmp, path);
}

/// session id -> profile document, one JSON file per session.
class ProfileStore {
public:
    explicit ProfileStore(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    void put(const ProfileDocument& doc) {
        if (!valid_session_id(doc.session_id)) throw DomainError("invalid session id '" + doc.session_id + "'");
        doc.profile.validate();
        std::lock_guard lock(mu_);
        atomic_write_text(path_for(doc.session_id), serialize_profile(doc));
    }

    [[nodiscard]] std::optional<ProfileDocument> get(const std::string& session_id) const {
        if (!valid_session_id(session_id)) return std::nullopt;
        std::lock_guard lock(mu_);
        const auto p = path_for(session_id);
        if (!std::filesystem::exists(p)) return std::nullopt;
        return read_profile(p);
    }

    [[nodiscard]] const std::filesystem::path& directory() const noexcept { return dir_; }

private:
    [[nodiscard]] std::filesystem::path path_for(const std::string& id) const { return dir_ / (id + ".json"); }

    std::filesystem::path dir_;
    mutable std::mutex mu_;
};

}  // namespace cvd
