#include "expsum/toml_lite.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace expsum {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

TomlTable::Value parse_scalar(const std::string& tok, int lineno) {
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
        return tok.substr(1, tok.size() - 2);
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used == tok.size()) return v;
    } catch (...) {
    }
    throw std::runtime_error("toml: bad value '" + tok + "' at line " + std::to_string(lineno));
}

}  // namespace

TomlTable TomlTable::parse(const std::string& text) {
    TomlTable table;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("toml: bad section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("toml: expected key = value at line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::runtime_error("toml: empty key or value at line " + std::to_string(lineno));
        std::string full = section.empty() ? key : section + "." + key;

        if (val.front() == '[') {
            if (val.back() != ']')
                throw std::runtime_error("toml: unterminated array at line " + std::to_string(lineno));
            std::string body = val.substr(1, val.size() - 2);
            std::vector<std::string> toks;
            std::string cur;
            bool in_string = false;
            for (char ch : body) {
                if (ch == '"') in_string = !in_string;
                if (ch == ',' && !in_string) {
                    toks.push_back(trim(cur));
                    cur.clear();
                } else {
                    cur.push_back(ch);
                }
            }
            if (!trim(cur).empty()) toks.push_back(trim(cur));
            bool strings = !toks.empty() && !toks.front().empty() && toks.front().front() == '"';
            if (strings) {
                std::vector<std::string> out;
                for (const auto& t : toks) out.push_back(std::get<std::string>(parse_scalar(t, lineno)));
                table.values_[full] = out;
            } else {
                std::vector<double> out;
                for (const auto& t : toks) out.push_back(std::get<double>(parse_scalar(t, lineno)));
                table.values_[full] = out;
            }
        } else {
            table.values_[full] = parse_scalar(val, lineno);
        }
    }
    return table;
}

TomlTable TomlTable::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

double TomlTable::number(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (const double* v = std::get_if<double>(&it->second)) return *v;
    throw std::runtime_error("toml: key '" + key + "' is not a number");
}

bool TomlTable::boolean(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (const bool* v = std::get_if<bool>(&it->second)) return *v;
    throw std::runtime_error("toml: key '" + key + "' is not a boolean");
}

std::string TomlTable::str(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (const std::string* v = std::get_if<std::string>(&it->second)) return *v;
    throw std::runtime_error("toml: key '" + key + "' is not a string");
}

std::vector<double> TomlTable::numbers(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return {};
    if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
    if (const double* v = std::get_if<double>(&it->second)) return {*v};
    throw std::runtime_error("toml: key '" + key + "' is not a numeric array");
}

}  // namespace expsum
