#pragma once

// JSON forms of sequences and maps, and locale-free CSV number formatting.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "epsilon.hpp"
#include "maps.hpp"

namespace manneville {

using json = nlohmann::json;

inline sequence_kind parse_sequence_kind(const std::string& name)
{
    for (auto k : {sequence_kind::power, sequence_kind::geometric, sequence_kind::log_corrected,
                   sequence_kind::inverse_log, sequence_kind::degenerate})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown sequence kind '" + name +
                                "' (expected power, geometric, log_corrected, inverse_log, degenerate)");
}

/// {"kind": "power", "alpha": 0.5, "c": 0.5}; missing parameters take the
/// family defaults. Unknown keys are rejected.
inline epsilon_sequence sequence_from_json(const json& j)
{
    if (!j.is_object()) throw std::invalid_argument("sequence spec must be a JSON object");
    if (!j.contains("kind")) throw std::invalid_argument("sequence spec needs a \"kind\"");
    for (const auto& [key, value] : j.items()) {
        if (key != "kind" && key != "alpha" && key != "beta" && key != "a" && key != "c")
            throw std::invalid_argument("unknown sequence parameter '" + key + "'");
        if (key != "kind" && !value.is_number()) throw std::invalid_argument("parameter '" + key + "' must be a number");
    }
    const auto kind = parse_sequence_kind(j.at("kind").get<std::string>());
    auto num = [&](const char* key, double fallback) { return j.contains(key) ? j.at(key).get<double>() : fallback; };
    auto need = [&](const char* key) {
        if (!j.contains(key)) throw std::invalid_argument(std::string("sequence kind needs \"") + key + "\"");
        return j.at(key).get<double>();
    };
    switch (kind) {
    case sequence_kind::power: return epsilon_sequence::power(need("alpha"), num("c", 0.5));
    case sequence_kind::geometric: return epsilon_sequence::geometric(num("a", 2.0), num("c", 1.0));
    case sequence_kind::log_corrected:
        return epsilon_sequence::log_corrected(need("alpha"), need("beta"), num("c", 0.5));
    case sequence_kind::inverse_log: return epsilon_sequence::inverse_log(num("c", 0.5));
    case sequence_kind::degenerate: return epsilon_sequence::degenerate();
    }
    throw std::invalid_argument("unhandled sequence kind");
}

inline json to_json(const epsilon_sequence& s)
{
    json j{{"kind", to_string(s.kind())}};
    switch (s.kind()) {
    case sequence_kind::power: j["alpha"] = s.alpha(); j["c"] = s.c(); break;
    case sequence_kind::geometric: j["a"] = s.a(); j["c"] = s.c(); break;
    case sequence_kind::log_corrected:
        j["alpha"] = s.alpha();
        j["beta"] = s.beta();
        j["c"] = s.c();
        break;
    case sequence_kind::inverse_log: j["c"] = s.c(); break;
    case sequence_kind::degenerate: break;
    }
    return j;
}

/// {"type": "manneville", "z": 3} or {"type": "linear", "seq": {...}}.
inline interval_map map_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("type")) throw std::invalid_argument("map spec needs a \"type\"");
    const auto type = j.at("type").get<std::string>();
    if (type == "manneville") return interval_map::manneville(j.at("z").get<double>());
    if (type == "linear") return interval_map::linear(sequence_from_json(j.at("seq")));
    throw std::invalid_argument("unknown map type '" + type + "'");
}

inline json to_json(const interval_map& m)
{
    if (m.is_manneville()) return {{"type", "manneville"}, {"z", m.as_manneville().z}};
    return {{"type", "linear"}, {"seq", to_json(m.as_linear().seq)}};
}

/// Shortest round-trip decimal form; '.' separator regardless of locale.
inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), r.ptr);
}

inline std::string format_number(std::uint64_t v) { return std::to_string(v); }
inline std::string format_number(std::int64_t v) { return std::to_string(v); }

/// Minimal CSV writer: one header row, numeric or plain-text cells.
class csv_table {
public:
    explicit csv_table(std::vector<std::string> header) : width_(header.size()) { add(header); }

    template <class... Cells>
    void row(const Cells&... cells)
    {
        static_assert(sizeof...(Cells) > 0);
        if (sizeof...(Cells) != width_) throw std::logic_error("csv_table: row width mismatch");
        std::vector<std::string> out{cell(cells)...};
        add(out);
    }

    const std::string& str() const noexcept { return text_; }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    template <class T>
    static std::string cell(const T& v)
    {
        if constexpr (std::is_floating_point_v<T>) return format_number(static_cast<double>(v));
        else if constexpr (std::is_signed_v<T>) return format_number(static_cast<std::int64_t>(v));
        else return format_number(static_cast<std::uint64_t>(v));
    }

    void add(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
    }

    std::size_t width_;
    std::string text_;
};

} // namespace manneville
