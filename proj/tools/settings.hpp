#pragma once

#include <qlambda/units.hpp>

#include <CLI11.hpp>

#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qlambda::cli {

/// Parameters of one subcommand: a flat `key = value` config file overlaid
/// by command-line flags. Every flag `--some-name` maps to the config key
/// `some_name`; physical constants (hbar, c, eps0, e, m_e, V, alpha) are
/// config-only. Lookup failures throw ParseError naming the key.
class Settings {
public:
    explicit Settings(CLI::App& sub);

    void flag(const std::string& name, const std::string& help);

    /// Reads the config file (if --config was given) and applies flags.
    void finalize();

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> raw(const std::string& key) const;

    std::string text(const std::string& key, const std::string& fallback) const;
    std::string choice(const std::string& key, const std::string& fallback,
                       std::initializer_list<std::string_view> allowed) const;
    double number(const std::string& key, double fallback) const;
    std::optional<double> number(const std::string& key) const;
    int integer(const std::string& key, int fallback) const;
    std::vector<double> list(const std::string& key, std::vector<double> fallback) const;
    /// Three comma-separated components.
    Vec3 vec3(const std::string& key, const Vec3& fallback) const;

    const Constants& constants() const { return constants_; }

private:
    struct Flag {
        std::string key;
        std::string value;
        CLI::Option* option = nullptr;
    };

    CLI::App& sub_;
    std::string config_path_;
    std::vector<std::unique_ptr<Flag>> flags_;
    std::map<std::string, std::string> values_;
    Constants constants_ = Constants::natural();
};

/// Writes to `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& content);

}  // namespace qlambda::cli
