#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace expsum {

/// Minimal TOML subset used by the experiment configs: [section] headers,
/// key = value with numbers, booleans, quoted strings and flat arrays.
/// Keys are returned as "section.key" ("" section for the top level).
class TomlTable {
public:
    using Value = std::variant<double, bool, std::string, std::vector<double>,
                               std::vector<std::string>>;

    static TomlTable parse_file(const std::string& path);
    static TomlTable parse(const std::string& text);

    bool contains(const std::string& key) const { return values_.count(key) > 0; }

    double number(const std::string& key, double fallback) const;
    bool boolean(const std::string& key, bool fallback) const;
    std::string str(const std::string& key, const std::string& fallback) const;
    std::vector<double> numbers(const std::string& key) const;  // empty if absent

    const std::map<std::string, Value>& values() const { return values_; }

private:
    std::map<std::string, Value> values_;
};

}  // namespace expsum
