#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdsde/error.hpp"

namespace rdsde::cli {

/// Config problem; the message carries "source:line: section.key: ...".
class ConfigError : public Error {
public:
    using Error::Error;
};

struct ConfigValue {
    enum class Type { boolean, number, string, array };

    Type type = Type::number;
    bool boolean = false;
    double number = 0.0;
    std::string string;
    std::vector<ConfigValue> items;
};

struct ConfigEntry {
    ConfigValue value;
    std::string where;  ///< "file:line" or "--set"
};

/// Parsed sectioned key-value file. See docs/config_format.md.
class ConfigFile {
public:
    static ConfigFile parse(std::string_view text, const std::string& source);
    static ConfigFile load(const std::string& path);

    /// Applies "section.key=value" with the value grammar of the file.
    void set(std::string_view assignment);

    const std::map<std::string, std::map<std::string, ConfigEntry>>& sections() const noexcept { return sections_; }

    nlohmann::json to_json() const;

private:
    std::map<std::string, std::map<std::string, ConfigEntry>> sections_;
};

/// Typed access that remembers which keys were read; reject_unknown() then
/// fails on the first key nobody asked for.
class ConfigReader {
public:
    explicit ConfigReader(const ConfigFile& file) : file_(&file) {}

    std::optional<double> number(const std::string& section, const std::string& key);
    double number(const std::string& section, const std::string& key, double fallback);
    double required_number(const std::string& section, const std::string& key);
    std::optional<long long> integer(const std::string& section, const std::string& key);
    long long integer(const std::string& section, const std::string& key, long long fallback);
    bool boolean(const std::string& section, const std::string& key, bool fallback);
    std::optional<std::string> string(const std::string& section, const std::string& key);
    std::string string(const std::string& section, const std::string& key, const std::string& fallback);
    /// A string array; a plain string counts as an array of one.
    std::optional<std::vector<std::string>> strings(const std::string& section, const std::string& key);

    /// Every key of a free-form section (marks them all used).
    std::map<std::string, double> numbers_in(const std::string& section);

    void reject_unknown(const std::set<std::string>& known_sections) const;

    /// "where: section.key: message".
    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& message) const;

private:
    const ConfigEntry* find(const std::string& section, const std::string& key);

    const ConfigFile* file_;
    std::set<std::pair<std::string, std::string>> used_;
};

}  // namespace rdsde::cli
