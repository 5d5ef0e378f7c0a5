#include "gridflex/config.hpp"

#include <fstream>
#include <sstream>

#include "gridflex/csv.hpp"
#include "gridflex/errors.hpp"

namespace gridflex {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

void parse_into(Config& cfg, std::istream& in, const std::string& origin) {
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.set(key, value);
    }
}

} // namespace

Config Config::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config: " + path.string());
    Config cfg;
    parse_into(cfg, in, path.string());
    return cfg;
}

Config Config::from_string(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    Config cfg;
    parse_into(cfg, in, origin);
    return cfg;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ValidationError("missing config key: " + key);
    return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : csv::parse_double(it->second, "config key " + key);
}

long Config::get_long(const std::string& key, long fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : csv::parse_long(it->second, "config key " + key);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ValidationError("config key " + key + ": expected boolean, got '" + v + "'");
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    for (const auto& f : csv::split(it->second))
        if (!f.empty()) out.push_back(csv::parse_double(f, "config key " + key));
    return out;
}

std::vector<std::string> Config::get_string_list(const std::string& key,
                                                 const std::vector<std::string>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<std::string> out;
    for (auto& f : csv::split(it->second)) {
        std::string t = f;
        size_t a = t.find_first_not_of(' ');
        size_t b = t.find_last_not_of(' ');
        if (a == std::string::npos) continue;
        out.push_back(t.substr(a, b - a + 1));
    }
    return out;
}

} // namespace gridflex
