#pragma once

// Flat key = value configuration text: one assignment per line, '#' starts a
// comment, lists are comma-separated. Parsing keeps insertion order so a
// config round-trips through serialize().

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pulearn/errors.hpp"

namespace pulearn {

class KvConfig {
public:
    static KvConfig parse_file(const std::filesystem::path& path);
    static KvConfig parse(std::string_view text, std::string origin = "<string>");

    std::string serialize() const;

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    std::string require(const std::string& key) const;

    double require_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::size_t get_count(const std::string& key, std::size_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // empty when the key is missing or its value is blank
    std::vector<std::string> get_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;

    void set(const std::string& key, std::string value);

    const std::string& origin() const noexcept { return origin_; }

private:
    struct Entry {
        std::string key;
        std::string value;
    };
    std::vector<Entry> entries_;
    std::string origin_ = "<empty>";
};

}  // namespace pulearn
