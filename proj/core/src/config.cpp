#include "pulearn/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pulearn {

namespace {

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

double parse_double(const std::string& value, const std::string& context) {
    double out;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError(context + ": '" + value + "' is not a number");
    return out;
}

}  // namespace

KvConfig KvConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.string());
}

KvConfig KvConfig::parse(std::string_view text, std::string origin) {
    KvConfig config;
    config.origin_ = std::move(origin);
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(start) : text.substr(start, nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;

        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(config.origin_ + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + stripped + "'");
        std::string key = trim(std::string_view(stripped).substr(0, eq));
        std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty())
            throw ConfigError(config.origin_ + ":" + std::to_string(lineno) + ": empty key");
        for (const auto& entry : config.entries_)
            if (entry.key == key)
                throw ConfigError(config.origin_ + ":" + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
        config.entries_.push_back({std::move(key), std::move(value)});
    }
    return config;
}

std::string KvConfig::serialize() const {
    std::string out;
    for (const auto& entry : entries_) {
        out += entry.key;
        out += " = ";
        out += entry.value;
        out += '\n';
    }
    return out;
}

bool KvConfig::has(const std::string& key) const { return get(key).has_value(); }

std::optional<std::string> KvConfig::get(const std::string& key) const {
    for (const auto& entry : entries_)
        if (entry.key == key) return entry.value;
    return std::nullopt;
}

std::string KvConfig::require(const std::string& key) const {
    const auto value = get(key);
    if (!value) throw ConfigError(origin_ + ": missing required key '" + key + "'");
    return *value;
}

double KvConfig::require_double(const std::string& key) const {
    return parse_double(require(key), origin_ + ": key '" + key + "'");
}

double KvConfig::get_double(const std::string& key, double fallback) const {
    const auto value = get(key);
    return value ? parse_double(*value, origin_ + ": key '" + key + "'") : fallback;
}

std::uint64_t KvConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto value = get(key);
    if (!value) return fallback;
    std::uint64_t out;
    const auto [ptr, ec] = std::from_chars(value->data(), value->data() + value->size(), out);
    if (ec != std::errc() || ptr != value->data() + value->size())
        throw ConfigError(origin_ + ": key '" + key + "': '" + *value +
                          "' is not a nonnegative integer");
    return out;
}

std::size_t KvConfig::get_count(const std::string& key, std::size_t fallback) const {
    return static_cast<std::size_t>(get_u64(key, fallback));
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
    const auto value = get(key);
    if (!value) return fallback;
    if (*value == "true" || *value == "1") return true;
    if (*value == "false" || *value == "0") return false;
    throw ConfigError(origin_ + ": key '" + key + "': '" + *value + "' is not a boolean");
}

std::vector<std::string> KvConfig::get_list(const std::string& key) const {
    const auto value = get(key);
    std::vector<std::string> items;
    if (!value || trim(*value).empty()) return items;
    std::size_t start = 0;
    while (start <= value->size()) {
        const auto comma = value->find(',', start);
        const auto piece = comma == std::string::npos ? value->substr(start)
                                                      : value->substr(start, comma - start);
        items.push_back(trim(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

std::vector<double> KvConfig::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : get_list(key))
        out.push_back(parse_double(item, origin_ + ": key '" + key + "'"));
    return out;
}

void KvConfig::set(const std::string& key, std::string value) {
    for (auto& entry : entries_) {
        if (entry.key == key) {
            entry.value = std::move(value);
            return;
        }
    }
    entries_.push_back({key, std::move(value)});
}

}  // namespace pulearn
