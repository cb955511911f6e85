#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace conebook {

// Flat key=value configuration with dotted keys. Files use one `key = value`
// per line, '#' comments, blank lines ignored. Command-line overrides are
// applied after the file. Lookups with a typed default register the key, so
// any key left unconsumed at the end is reported as unknown.
class Config {
public:
    Config() = default;

    void load_file(const std::string& path);
    void set_override(const std::string& assignment);  // "key=value"
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& def);
    double get_double(const std::string& key, double def);
    long long get_int(const std::string& key, long long def);
    bool get_bool(const std::string& key, bool def);
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    // Throws ConfigError naming every key that was set but never read.
    void reject_unknown_keys() const;

    // Every key that was read, with its resolved value (defaults included).
    std::string resolved_text() const;

private:
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, std::string> resolved_;
    mutable std::map<std::string, bool> consumed_;
};

}  // namespace conebook
