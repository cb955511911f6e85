#include "conebook/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "conebook/errors.hpp"

namespace conebook {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void Config::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        }
        set(key, value);
    }
}

void Config::set_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set expects key=value, got: " + assignment);
    }
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
    values_[key] = value;
    consumed_[key] = false;
}

std::string Config::get_string(const std::string& key, const std::string& def) {
    auto it = values_.find(key);
    const std::string v = it == values_.end() ? def : it->second;
    resolved_[key] = v;
    consumed_[key] = true;
    return v;
}

double Config::get_double(const std::string& key, double def) {
    auto it = values_.find(key);
    if (it == values_.end()) {
        resolved_[key] = std::to_string(def);
        consumed_[key] = true;
        return def;
    }
    const char* s = it->second.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0') {
        throw ConfigError("config key '" + key + "': expected a number, got '" +
                          it->second + "'");
    }
    resolved_[key] = it->second;
    consumed_[key] = true;
    return v;
}

long long Config::get_int(const std::string& key, long long def) {
    auto it = values_.find(key);
    if (it == values_.end()) {
        resolved_[key] = std::to_string(def);
        consumed_[key] = true;
        return def;
    }
    const char* s = it->second.c_str();
    char* end = nullptr;
    const long long v = std::strtoll(s, &end, 10);
    if (end == s || *end != '\0') {
        throw ConfigError("config key '" + key + "': expected an integer, got '" +
                          it->second + "'");
    }
    resolved_[key] = it->second;
    consumed_[key] = true;
    return v;
}

bool Config::get_bool(const std::string& key, bool def) {
    auto it = values_.find(key);
    if (it == values_.end()) {
        resolved_[key] = def ? "true" : "false";
        consumed_[key] = true;
        return def;
    }
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    resolved_[key] = it->second;
    consumed_[key] = true;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" +
                      it->second + "'");
}

void Config::reject_unknown_keys() const {
    std::vector<std::string> unknown;
    for (const auto& [k, used] : consumed_) {
        if (!used) unknown.push_back(k);
    }
    if (!unknown.empty()) {
        std::string msg = "unknown config key(s):";
        for (const auto& k : unknown) msg += " " + k;
        throw ConfigError(msg);
    }
}

std::string Config::resolved_text() const {
    std::ostringstream out;
    for (const auto& [k, v] : resolved_) out << k << " = " << v << "\n";
    return out.str();
}

}  // namespace conebook
