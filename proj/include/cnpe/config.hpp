#pragma once

#include <map>
#include <string>
#include <vector>

namespace cnpe {

/// Flat `section.key = value` configuration text. Lines starting with '#' or
/// ';' are comments; later assignments win. Keys are case-sensitive.
class Config {
public:
    static Config parse_string(const std::string& text);
    static Config parse_file(const std::string& path);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;

    /// Sorted `key = value` lines; embedded in report metadata for
    /// reproducibility.
    std::string serialize() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

std::vector<std::string> split_csv(const std::string& s);

} // namespace cnpe
