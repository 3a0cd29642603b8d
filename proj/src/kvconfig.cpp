#include "evmhunt/kvconfig.hpp"

#include "evmhunt/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace evmhunt {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

KvConfig KvConfig::parse_text(const std::string& text) {
    KvConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw DataError("config line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DataError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw DataError("config line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        cfg.set(key, value);
    }
    return cfg;
}

KvConfig KvConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

void KvConfig::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : items_)
        if (k == key) {
            v = value;
            return;
        }
    items_.emplace_back(key, value);
}

std::optional<std::string> KvConfig::get(const std::string& key) const {
    for (const auto& [k, v] : items_)
        if (k == key) return v;
    return std::nullopt;
}

bool KvConfig::has(const std::string& key) const { return get(key).has_value(); }

std::string KvConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto v = get(key);
    return v ? *v : fallback;
}

long KvConfig::get_int(const std::string& key, long fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        return std::stol(*v);
    } catch (const std::exception&) {
        throw DataError("config key '" + key + "': not an integer: " + *v);
    }
}

double KvConfig::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        return std::stod(*v);
    } catch (const std::exception&) {
        throw DataError("config key '" + key + "': not a number: " + *v);
    }
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    std::string s = *v;
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw DataError("config key '" + key + "': not a boolean: " + *v);
}

std::vector<std::string> KvConfig::get_list(const std::string& key) const {
    std::vector<std::string> out;
    auto v = get(key);
    if (!v) return out;
    std::istringstream in(*v);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string KvConfig::to_text() const {
    // Keys sharing a section prefix are grouped back under a [section].
    std::ostringstream out;
    std::string section;
    for (const auto& [k, v] : items_) {
        auto dot = k.find('.');
        std::string sec = dot == std::string::npos ? "" : k.substr(0, dot);
        std::string key = dot == std::string::npos ? k : k.substr(dot + 1);
        if (sec != section) {
            out << "[" << sec << "]\n";
            section = sec;
        }
        out << key << " = " << v << "\n";
    }
    return out.str();
}

} // namespace evmhunt
