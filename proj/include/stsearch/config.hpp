#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stsearch {

// Flat `key = value` file. Blank lines and lines starting with '#' are
// ignored; later keys override earlier ones.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(std::istream& in);
    static KeyValueConfig load(const std::filesystem::path& path);

    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& at(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;

    double get_double(const std::string& key) const;
    long long get_int(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;

    // Comma separated integers; `a:b` expands to a..b inclusive and
    // `a:b:s` to a, a+s, ... <= b.
    std::vector<long long> get_int_list(const std::string& key) const;

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace stsearch
