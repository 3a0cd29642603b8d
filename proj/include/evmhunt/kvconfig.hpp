#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace evmhunt {

// INI-style key = value text. Keys inside a [section] are stored as
// "section.key". Order is preserved; '#' starts a comment.
class KvConfig {
public:
    static KvConfig parse_text(const std::string& text);
    static KvConfig parse_file(const std::string& path);

    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    long get_int(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // Comma-separated list value.
    std::vector<std::string> get_list(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }
    std::string to_text() const;

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

std::string trim(const std::string& s);

} // namespace evmhunt
