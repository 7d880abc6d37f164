#pragma once

#include <cstdint>
#include <random>

#include "manneville/symbolic.hpp"

namespace testgen {

/// Random admissible string of length n: countdowns with leading symbols
/// drawn from a heavy-ish mix, so short and long runs both occur. The string
/// may end mid-countdown.
inline manneville::symbol_string admissible_string(std::mt19937_64& rng, std::size_t n, std::uint32_t max_lead = 40)
{
    std::uniform_int_distribution<std::uint32_t> small(0, 3), large(0, max_lead);
    std::bernoulli_distribution pick_large(0.3);
    manneville::symbol_string s;
    s.symbols.reserve(n);
    while (s.size() < n) {
        std::uint32_t lead = pick_large(rng) ? large(rng) : small(rng);
        for (std::uint32_t v = lead + 1; v-- > 0 && s.size() < n;) s.symbols.push_back(v);
    }
    return s;
}

/// Same, but always ending in 0.
inline manneville::symbol_string complete_string(std::mt19937_64& rng, std::size_t approx_n, std::uint32_t max_lead = 40)
{
    auto s = admissible_string(rng, approx_n, max_lead);
    while (!s.symbols.empty() && s.symbols.back() != 0) {
        const auto v = s.symbols.back();
        s.symbols.push_back(v - 1);
    }
    if (s.symbols.empty()) s.symbols.push_back(0);
    return s;
}

} // namespace testgen
