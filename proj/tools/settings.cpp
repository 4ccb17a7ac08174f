#include "settings.hpp"

#include <qlambda/error.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace qlambda::cli {

namespace {

const std::set<std::string, std::less<>> kConstantKeys{"hbar", "c", "eps0", "e", "m_e", "V", "alpha"};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, std::string_view expected) {
    throw Error(ErrorCode::ParseError, "key '" + key + "': cannot read '" + value + "' as " + std::string(expected));
}

std::optional<double> to_double(std::string_view s) {
    double x = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
    return x;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    return out;
}

}  // namespace

Settings::Settings(CLI::App& sub) : sub_(sub) {
    sub_.add_option("--config", config_path_, "key = value file; flags take precedence");
}

void Settings::flag(const std::string& name, const std::string& help) {
    auto f = std::make_unique<Flag>();
    f->key = name;
    std::replace(f->key.begin(), f->key.end(), '-', '_');
    f->option = sub_.add_option("--" + name, f->value, help);
    flags_.push_back(std::move(f));
}

void Settings::finalize() {
    if (!config_path_.empty()) {
        std::ifstream in(config_path_);
        if (!in) throw Error(ErrorCode::ParseError, "key 'config': cannot open '" + config_path_ + "'");
        std::ostringstream constants;
        std::string line;
        for (int number = 1; std::getline(in, line); ++number) {
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            if (trim(line).empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw Error(ErrorCode::ParseError,
                            config_path_ + ":" + std::to_string(number) + ": expected 'key = value'");
            }
            const std::string key = trim(std::string_view(line).substr(0, eq));
            const std::string value = trim(std::string_view(line).substr(eq + 1));
            if (kConstantKeys.count(key) != 0) {
                constants << key << " = " << value << '\n';
                continue;
            }
            const bool known = std::any_of(flags_.begin(), flags_.end(), [&](const auto& f) { return f->key == key; });
            if (!known) throw Error(ErrorCode::ParseError, "unknown key '" + key + "' in " + config_path_);
            if (!values_.emplace(key, value).second) {
                throw Error(ErrorCode::ParseError, "key '" + key + "' given twice in " + config_path_);
            }
        }
        std::istringstream text(constants.str());
        constants_ = load_constants(text);
    }
    for (const auto& f : flags_) {
        if (f->option->count() > 0) values_[f->key] = f->value;
    }
}

std::optional<std::string> Settings::raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Settings::text(const std::string& key, const std::string& fallback) const {
    return raw(key).value_or(fallback);
}

std::string Settings::choice(const std::string& key, const std::string& fallback,
                             std::initializer_list<std::string_view> allowed) const {
    const std::string value = text(key, fallback);
    if (std::find(allowed.begin(), allowed.end(), value) != allowed.end()) return value;
    std::string options;
    for (auto a : allowed) options += (options.empty() ? "" : ", ") + std::string(a);
    bad_value(key, value, "one of {" + options + "}");
}

std::optional<double> Settings::number(const std::string& key) const {
    const auto value = raw(key);
    if (!value) return std::nullopt;
    const auto x = to_double(*value);
    if (!x) bad_value(key, *value, "a number");
    return x;
}

double Settings::number(const std::string& key, double fallback) const {
    return number(key).value_or(fallback);
}

int Settings::integer(const std::string& key, int fallback) const {
    const auto value = raw(key);
    if (!value) return fallback;
    int x = 0;
    const auto [end, ec] = std::from_chars(value->data(), value->data() + value->size(), x);
    if (ec != std::errc() || end != value->data() + value->size()) bad_value(key, *value, "an integer");
    return x;
}

std::vector<double> Settings::list(const std::string& key, std::vector<double> fallback) const {
    const auto value = raw(key);
    if (!value) return fallback;
    std::vector<double> out;
    for (const auto& item : split(*value)) {
        const auto x = to_double(item);
        if (!x) bad_value(key, *value, "a comma-separated list of numbers");
        out.push_back(*x);
    }
    if (out.empty()) bad_value(key, *value, "a non-empty list");
    return out;
}

Vec3 Settings::vec3(const std::string& key, const Vec3& fallback) const {
    if (!has(key)) return fallback;
    const auto xs = list(key, {});
    if (xs.size() != 3) bad_value(key, *raw(key), "three comma-separated numbers");
    return {xs[0], xs[1], xs[2]};
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content) || !out.flush()) {
        throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    }
}

}  // namespace qlambda::cli
