#include <random>

#include <gtest/gtest.h>

#include "manneville/symbolic.hpp"
#include "support/strings.hpp"

using namespace manneville;

namespace {

symbol_string str(std::initializer_list<symbol> v) { return symbol_string{std::vector<symbol>(v)}; }

// Pairwise lookup in an explicit matrix.
bool admissible_by_matrix(const symbol_string& s, const transition_matrix& m)
{
    for (symbol x : s.symbols)
        if (x >= m.size()) return false;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (!m(s.symbols[i], s.symbols[i + 1])) return false;
    return true;
}

bool admissible_countable_by_rule(const symbol_string& s)
{
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const auto a = s.symbols[i], b = s.symbols[i + 1];
        if (a != 0 && b + 1 != a) return false;
    }
    return true;
}

} // namespace

TEST(EncodeOrbit, HandIteratedGeometric)
{
    const auto g = interval_map::linear(epsilon_sequence::geometric());
    EXPECT_EQ(encode_orbit(g, 0.3, 3), str({1, 0, 2}));
    EXPECT_EQ(encode_orbit(g, 0.9, 1), str({0}));
    EXPECT_THROW(encode_orbit(g, 0.0, 3), std::domain_error);
    EXPECT_THROW(encode_orbit(g, 0.5, 0), std::domain_error);
}

TEST(EncodeOrbit, StartsWithCountdown)
{
    for (const auto& map : {interval_map::linear(epsilon_sequence::power(0.5)), interval_map::manneville(3.0)}) {
        for (std::int64_t k = 0; k < 20; ++k) {
            const double x = 0.5 * (map.cell_floor(k) + map.cell_floor(k - 1));
            const auto s = encode_orbit(map, x, static_cast<std::size_t>(k) + 1);
            for (std::int64_t t = 0; t <= k; ++t) ASSERT_EQ(s.symbols[t], static_cast<symbol>(k - t));
        }
    }
}

TEST(EncodeOrbit, OutputIsAdmissible)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // Orbits of the inverse-log map reach cells beyond 2^62 within a few
    // thousand steps, where cell_index refuses; it is covered by countdowns above.
    for (const auto& map : {interval_map::linear(epsilon_sequence::power(1.5)), interval_map::manneville(2.5),
                            interval_map::linear(epsilon_sequence::log_corrected(1, 2, 0.2))}) {
        for (int i = 0; i < 50; ++i) {
            const double x0 = 1.0 - unit(rng);
            const auto s = encode_orbit(map, x0, 2000);
            ASSERT_TRUE(is_admissible(s)) << x0;
        }
    }
}

TEST(TransitionMatrix, Shapes)
{
    EXPECT_EQ(build_transition_matrix(1), transition_matrix::from_rows({{1, 1}, {1, 1}}));
    EXPECT_EQ(build_transition_matrix(2), transition_matrix::from_rows({{1, 1, 1}, {1, 0, 0}, {0, 1, 1}}));
    for (std::size_t N = 1; N <= 64; ++N) {
        const auto m = build_transition_matrix(N);
        ASSERT_EQ(m.size(), N + 1);
        ASSERT_EQ(m.row_sum(0), N + 1);
        for (std::size_t i = 1; i < N; ++i) ASSERT_EQ(m.row_sum(i), 1u);
        ASSERT_EQ(m.row_sum(N), 2u);
    }
    EXPECT_THROW(build_transition_matrix(0), std::domain_error);
    EXPECT_EQ(to_csv(build_transition_matrix(2)), "1,1,1\n1,0,0\n0,1,1\n");
}

TEST(Admissibility, Examples)
{
    EXPECT_TRUE(is_admissible(str({3, 2, 1, 0, 0, 5})));
    EXPECT_FALSE(is_admissible(str({2, 0})));
    EXPECT_TRUE(is_admissible(str({2, 2, 1, 0}), 2));
    EXPECT_FALSE(is_admissible(str({2, 2, 1, 0})));
    EXPECT_FALSE(is_admissible(str({3, 2, 1, 0}), 2)); // symbol above N is not an error
    EXPECT_TRUE(is_admissible(str({})));
    EXPECT_TRUE(is_admissible(str({7})));
}

TEST(Admissibility, AgreesWithMatrixLookup)
{
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<symbol> sym(0, 4);
    std::uniform_int_distribution<int> len(1, 12);
    const symbol N = 4;
    const auto m = build_transition_matrix(N);
    int accepted = 0;
    for (int i = 0; i < 20000; ++i) {
        symbol_string s;
        const int n = len(rng);
        for (int j = 0; j < n; ++j) s.symbols.push_back(sym(rng));
        ASSERT_EQ(is_admissible(s, N), admissible_by_matrix(s, m)) << to_text(s);
        ASSERT_EQ(is_admissible(s), admissible_countable_by_rule(s)) << to_text(s);
        accepted += is_admissible(s, N);
    }
    EXPECT_GT(accepted, 100);
    // generated admissible strings pass too
    for (int i = 0; i < 1000; ++i) ASSERT_TRUE(is_admissible(testgen::admissible_string(rng, 200)));
}

TEST(TruncateAlphabet, Examples)
{
    EXPECT_EQ(truncate_alphabet(str({3, 2, 1, 0}), 2), str({2, 2, 1, 0}));
    EXPECT_EQ(truncate_alphabet(str({0, 4, 3, 2, 1, 0}), 1), str({0, 1, 1, 1, 1, 0}));
    EXPECT_THROW(truncate_alphabet(str({0}), 0), std::domain_error);
}

TEST(TruncateAlphabet, LandsInFiniteShift)
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 10000; ++i) {
        const auto s = testgen::admissible_string(rng, 100);
        const symbol N = static_cast<symbol>(1 + i % 9);
        ASSERT_TRUE(is_admissible(truncate_alphabet(s, N), N));
    }
}

TEST(TruncateAlphabet, CommutesWithCoarseCoding)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // power(1.5): an alpha = 0.5 linear orbit lands beyond the 32-bit symbol range
    // about once per 10^5 steps, which this many orbits would hit
    for (const auto& map : {interval_map::linear(epsilon_sequence::power(1.5)), interval_map::manneville(3.0)}) {
        for (int seed = 0; seed < 1000; ++seed) {
            const double x0 = 1.0 - unit(rng);
            const auto fine = encode_orbit(map, x0, 200);
            for (symbol N : {1u, 2u, 8u}) ASSERT_EQ(truncate_alphabet(fine, N), encode_coarse_orbit(map, x0, 200, N));
        }
    }
}

TEST(SymbolText, RoundTrip)
{
    const auto s = str({7, 6, 5, 0, 12});
    EXPECT_EQ(to_text(s), "7 6 5 0 12");
    EXPECT_EQ(parse_symbol_string(to_text(s)), s);
    EXPECT_THROW(parse_symbol_string("1 2 x"), std::invalid_argument);
    EXPECT_THROW(parse_symbol_string("1 -2"), std::invalid_argument);
}
