#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gridflex {

/// Flat `section.key = value` configuration. `#` starts a comment, blank
/// lines are skipped, later assignments win. CLI flags are applied on top
/// via set().
class Config {
public:
    Config() = default;

    static Config from_file(const std::filesystem::path& path);
    static Config from_string(const std::string& text, const std::string& origin = "<string>");

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Comma-separated list of doubles ("0.25,1.0").
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;
    /// Comma-separated list of strings.
    std::vector<std::string> get_string_list(const std::string& key,
                                             const std::vector<std::string>& fallback) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

} // namespace gridflex
