#include "stsearch/config.hpp"
#include "stsearch/types.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace stsearch {

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            out.emplace_back(s.substr(pos));
            return out;
        }
        out.emplace_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
    KeyValueConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        }
        auto key = trim(std::string_view(text).substr(0, eq));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        }
        cfg.values_[key] = trim(std::string_view(text).substr(eq + 1));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config " + path.string());
    }
    return parse(in);
}

const std::string& KeyValueConfig::at(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw std::invalid_argument("missing config key '" + key + "'");
    }
    return it->second;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return std::nullopt;
    }
    return it->second;
}

namespace {

long long to_int(const std::string& key, std::string_view text) {
    long long v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("config key '" + key + "': not an integer: " +
                                    std::string(text));
    }
    return v;
}

}  // namespace

double KeyValueConfig::get_double(const std::string& key) const {
    const auto& text = at(key);
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::logic_error&) {
        throw std::invalid_argument("config key '" + key + "': not a number: " + text);
    }
}

long long KeyValueConfig::get_int(const std::string& key) const {
    return to_int(key, at(key));
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    return contains(key) ? get_double(key) : fallback;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
    return contains(key) ? get_int(key) : fallback;
}

std::vector<long long> KeyValueConfig::get_int_list(const std::string& key) const {
    std::vector<long long> out;
    for (const auto& raw : split(at(key), ',')) {
        const auto item = trim(raw);
        if (item.empty()) {
            continue;
        }
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(to_int(key, item));
            continue;
        }
        if (parts.size() > 3) {
            throw std::invalid_argument("config key '" + key + "': bad range " + item);
        }
        const auto lo = to_int(key, trim(parts[0]));
        const auto hi = to_int(key, trim(parts[1]));
        const auto step = parts.size() == 3 ? to_int(key, trim(parts[2])) : 1;
        if (step <= 0) {
            throw std::invalid_argument("config key '" + key + "': range step must be positive");
        }
        for (auto v = lo; v <= hi; v += step) {
            out.push_back(v);
        }
    }
    return out;
}

std::string_view to_string(PredictorVariant v) {
    switch (v) {
        case PredictorVariant::first_order:
            return "first";
        case PredictorVariant::second_order:
            return "second";
        case PredictorVariant::pooled_first_order:
            return "pooled";
    }
    return "?";
}

PredictorVariant parse_predictor_variant(std::string_view text) {
    if (text == "first" || text == "first_order") {
        return PredictorVariant::first_order;
    }
    if (text == "second" || text == "second_order") {
        return PredictorVariant::second_order;
    }
    if (text == "pooled" || text == "pooled_first_order") {
        return PredictorVariant::pooled_first_order;
    }
    throw std::invalid_argument("unknown predictor variant '" + std::string(text) + "'");
}

}  // namespace stsearch
