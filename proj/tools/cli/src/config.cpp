#include "rdsde_cli/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rdsde::cli {

namespace {

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

bool is_identifier(std::string_view s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front())) != 0) {
        return false;
    }
    for (char c : s) {
        if (!is_ident_char(c)) {
            return false;
        }
    }
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) {
        s.remove_suffix(1);
    }
    return s;
}

class ValueParser {
public:
    ValueParser(std::string_view text, std::string where) : text_(text), where_(std::move(where)) {}

    ConfigValue parse_all() {
        ConfigValue v = value(true);
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] != '#') {
            error("unexpected text after value");
        }
        return v;
    }

private:
    [[noreturn]] void error(const std::string& what) const { throw ConfigError(where_ + ": " + what); }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    ConfigValue value(bool allow_array) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] == '#') {
            error("missing value");
        }
        const char c = text_[pos_];
        if (c == '"') {
            return string_value();
        }
        if (c == '[') {
            if (!allow_array) {
                error("nested arrays are not supported");
            }
            return array_value();
        }
        if (is_ident_char(c) && std::isdigit(static_cast<unsigned char>(c)) == 0) {
            std::size_t end = pos_;
            while (end < text_.size() && is_ident_char(text_[end])) {
                ++end;
            }
            const std::string_view word = text_.substr(pos_, end - pos_);
            ConfigValue v;
            v.type = ConfigValue::Type::boolean;
            if (word == "true") {
                v.boolean = true;
            } else if (word != "false") {
                error("bare word '" + std::string(word) + "' (strings need double quotes)");
            }
            pos_ = end;
            return v;
        }
        return number_value();
    }

    ConfigValue string_value() {
        ++pos_;
        ConfigValue v;
        v.type = ConfigValue::Type::string;
        while (true) {
            if (pos_ >= text_.size()) {
                error("unterminated string");
            }
            const char c = text_[pos_++];
            if (c == '"') {
                break;
            }
            if (c == '\\') {
                if (pos_ >= text_.size()) {
                    error("unterminated string");
                }
                const char e = text_[pos_++];
                switch (e) {
                    case '"': v.string += '"'; break;
                    case '\\': v.string += '\\'; break;
                    case 'n': v.string += '\n'; break;
                    case 't': v.string += '\t'; break;
                    default: error(std::string("unknown escape \\") + e);
                }
                continue;
            }
            v.string += c;
        }
        return v;
    }

    ConfigValue array_value() {
        ++pos_;
        ConfigValue v;
        v.type = ConfigValue::Type::array;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ']') {
            ++pos_;
            return v;
        }
        while (true) {
            v.items.push_back(value(false));
            skip_ws();
            if (pos_ >= text_.size()) {
                error("unterminated array");
            }
            if (text_[pos_] == ',') {
                ++pos_;
                continue;
            }
            if (text_[pos_] == ']') {
                ++pos_;
                return v;
            }
            error("expected ',' or ']' in array");
        }
    }

    ConfigValue number_value() {
        std::size_t start = pos_;
        if (text_[start] == '+') {
            ++start;
        }
        double out = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + text_.size();
        const auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc() || ptr == first || !std::isfinite(out)) {
            error("malformed value");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        ConfigValue v;
        v.type = ConfigValue::Type::number;
        v.number = out;
        return v;
    }

    std::string_view text_;
    std::string where_;
    std::size_t pos_ = 0;
};

nlohmann::json value_json(const ConfigValue& v) {
    switch (v.type) {
        case ConfigValue::Type::boolean: return v.boolean;
        case ConfigValue::Type::number: return v.number;
        case ConfigValue::Type::string: return v.string;
        case ConfigValue::Type::array: {
            nlohmann::json a = nlohmann::json::array();
            for (const auto& item : v.items) {
                a.push_back(value_json(item));
            }
            return a;
        }
    }
    return nullptr;
}

const char* type_name(ConfigValue::Type t) {
    switch (t) {
        case ConfigValue::Type::boolean: return "a boolean";
        case ConfigValue::Type::number: return "a number";
        case ConfigValue::Type::string: return "a string";
        case ConfigValue::Type::array: return "an array";
    }
    return "a value";
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text, const std::string& source) {
    ConfigFile file;
    std::string section;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        const std::string where = source + ":" + std::to_string(line_no);
        const std::string_view line = trim(text.substr(start, end - start));
        start = end + 1;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (line.front() == '[') {
            const std::size_t close = line.find(']');
            if (close == std::string_view::npos) {
                throw ConfigError(where + ": unterminated section header");
            }
            const std::string_view rest = trim(line.substr(close + 1));
            if (!rest.empty() && rest.front() != '#') {
                throw ConfigError(where + ": unexpected text after section header");
            }
            const std::string_view name = trim(line.substr(1, close - 1));
            if (!is_identifier(name)) {
                throw ConfigError(where + ": invalid section name '" + std::string(name) + "'");
            }
            section = std::string(name);
            file.sections_[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (!is_identifier(key)) {
            throw ConfigError(where + ": invalid key '" + key + "'");
        }
        if (section.empty()) {
            throw ConfigError(where + ": key '" + key + "' outside any section");
        }
        const std::string path = section + "." + key;
        ValueParser vp(line.substr(eq + 1), where + ": " + path);
        auto& entries = file.sections_[section];
        if (entries.count(key) != 0) {
            throw ConfigError(where + ": " + path + ": duplicate key (first set at " + entries[key].where + ")");
        }
        entries[key] = ConfigEntry{vp.parse_all(), where};
    }
    return file;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void ConfigFile::set(std::string_view assignment) {
    const std::size_t eq = assignment.find('=');
    const std::size_t dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
        throw ConfigError("--set expects section.key=value, got '" + std::string(assignment) + "'");
    }
    const std::string section(trim(assignment.substr(0, dot)));
    const std::string key(trim(assignment.substr(dot + 1, eq - dot - 1)));
    if (!is_identifier(section) || !is_identifier(key)) {
        throw ConfigError("--set: invalid key path '" + std::string(assignment.substr(0, eq)) + "'");
    }
    ValueParser vp(assignment.substr(eq + 1), "--set: " + section + "." + key);
    sections_[section][key] = ConfigEntry{vp.parse_all(), "--set"};
}

nlohmann::json ConfigFile::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [section, entries] : sections_) {
        nlohmann::json s = nlohmann::json::object();
        for (const auto& [key, entry] : entries) {
            s[key] = value_json(entry.value);
        }
        j[section] = s;
    }
    return j;
}

const ConfigEntry* ConfigReader::find(const std::string& section, const std::string& key) {
    used_.insert({section, key});
    const auto s = file_->sections().find(section);
    if (s == file_->sections().end()) {
        return nullptr;
    }
    const auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
}

void ConfigReader::fail(const std::string& section, const std::string& key, const std::string& message) const {
    std::string where = "config";
    const auto s = file_->sections().find(section);
    if (s != file_->sections().end()) {
        const auto e = s->second.find(key);
        if (e != s->second.end()) {
            where = e->second.where;
        }
    }
    throw ConfigError(where + ": " + section + "." + key + ": " + message);
}

std::optional<double> ConfigReader::number(const std::string& section, const std::string& key) {
    const ConfigEntry* e = find(section, key);
    if (e == nullptr) {
        return std::nullopt;
    }
    if (e->value.type != ConfigValue::Type::number) {
        fail(section, key, std::string("expected a number, got ") + type_name(e->value.type));
    }
    return e->value.number;
}

double ConfigReader::number(const std::string& section, const std::string& key, double fallback) {
    return number(section, key).value_or(fallback);
}

double ConfigReader::required_number(const std::string& section, const std::string& key) {
    const auto v = number(section, key);
    if (!v) {
        throw ConfigError("config: missing required key " + section + "." + key);
    }
    return *v;
}

std::optional<long long> ConfigReader::integer(const std::string& section, const std::string& key) {
    const auto v = number(section, key);
    if (!v) {
        return std::nullopt;
    }
    if (std::floor(*v) != *v || std::abs(*v) > 9.0e15) {
        fail(section, key, "expected an integer");
    }
    return static_cast<long long>(*v);
}

long long ConfigReader::integer(const std::string& section, const std::string& key, long long fallback) {
    return integer(section, key).value_or(fallback);
}

bool ConfigReader::boolean(const std::string& section, const std::string& key, bool fallback) {
    const ConfigEntry* e = find(section, key);
    if (e == nullptr) {
        return fallback;
    }
    if (e->value.type != ConfigValue::Type::boolean) {
        fail(section, key, std::string("expected true or false, got ") + type_name(e->value.type));
    }
    return e->value.boolean;
}

std::optional<std::string> ConfigReader::string(const std::string& section, const std::string& key) {
    const ConfigEntry* e = find(section, key);
    if (e == nullptr) {
        return std::nullopt;
    }
    if (e->value.type != ConfigValue::Type::string) {
        fail(section, key, std::string("expected a string, got ") + type_name(e->value.type));
    }
    return e->value.string;
}

std::string ConfigReader::string(const std::string& section, const std::string& key, const std::string& fallback) {
    return string(section, key).value_or(fallback);
}

std::optional<std::vector<std::string>> ConfigReader::strings(const std::string& section, const std::string& key) {
    const ConfigEntry* e = find(section, key);
    if (e == nullptr) {
        return std::nullopt;
    }
    if (e->value.type == ConfigValue::Type::string) {
        return std::vector<std::string>{e->value.string};
    }
    if (e->value.type != ConfigValue::Type::array) {
        fail(section, key, std::string("expected an array of strings, got ") + type_name(e->value.type));
    }
    std::vector<std::string> out;
    for (const auto& item : e->value.items) {
        if (item.type != ConfigValue::Type::string) {
            fail(section, key, "array items must be strings");
        }
        out.push_back(item.string);
    }
    return out;
}

std::map<std::string, double> ConfigReader::numbers_in(const std::string& section) {
    std::map<std::string, double> out;
    const auto s = file_->sections().find(section);
    if (s == file_->sections().end()) {
        return out;
    }
    for (const auto& [key, entry] : s->second) {
        out[key] = number(section, key).value();
    }
    return out;
}

void ConfigReader::reject_unknown(const std::set<std::string>& known_sections) const {
    for (const auto& [section, entries] : file_->sections()) {
        if (known_sections.count(section) == 0) {
            const std::string where = entries.empty() ? std::string("config") : entries.begin()->second.where;
            throw ConfigError(where + ": unknown section [" + section + "]");
        }
        for (const auto& [key, entry] : entries) {
            if (used_.count({section, key}) == 0) {
                throw ConfigError(entry.where + ": " + section + "." + key + ": unknown key");
            }
        }
    }
}

}  // namespace rdsde::cli
