#pragma once

// Symbol strings over the countable alphabet {0, 1, 2, ...}, orbit coding,
// and the 0/1 structure matrices of the finite and countable sub-shifts.
//
// Countable structure: symbol s >= 1 must be followed by s - 1, symbol 0 may
// be followed by anything. Finite structure of size N + 1: row 0 all ones,
// m_{i,i-1} = 1 for 1 <= i <= N, m_{N,N} = 1, everything else 0.

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "maps.hpp"

namespace manneville {

using symbol = std::uint32_t;

struct symbol_string {
    std::vector<symbol> symbols;

    std::size_t size() const noexcept { return symbols.size(); }
    bool operator==(const symbol_string&) const = default;
};

/// One line of space-separated decimal symbols (no trailing newline).
inline std::string to_text(const symbol_string& s)
{
    std::string out;
    out.reserve(s.size() * 3);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out.push_back(' ');
        out += std::to_string(s.symbols[i]);
    }
    return out;
}

inline symbol_string parse_symbol_string(std::string_view text)
{
    symbol_string s;
    std::istringstream in{std::string(text)};
    long long v = 0;
    while (in >> v) {
        if (v < 0 || v > static_cast<long long>(UINT32_MAX)) throw std::invalid_argument("symbol out of range");
        s.symbols.push_back(static_cast<symbol>(v));
    }
    if (!in.eof()) throw std::invalid_argument("malformed symbol string");
    return s;
}

/// Thrown when an orbit lands exactly on the fixed point 0, where no cell
/// applies. Carries the symbols produced before that step.
class orbit_truncated : public std::runtime_error {
public:
    explicit orbit_truncated(symbol_string partial)
        : std::runtime_error("orbit reached the fixed point 0"), partial_(std::move(partial))
    {
    }
    const symbol_string& partial() const noexcept { return partial_; }

private:
    symbol_string partial_;
};

namespace detail {

inline symbol to_symbol(std::uint64_t cell)
{
    if (cell > UINT32_MAX) throw std::overflow_error("cell index exceeds 32-bit symbol range");
    return static_cast<symbol>(cell);
}

} // namespace detail

/// sigma_t = cell index of the t-th orbit point, t = 0..n-1.
inline symbol_string encode_orbit(const interval_map& map, double x0, std::size_t n)
{
    if (!(x0 > 0.0 && x0 <= 1.0)) throw std::domain_error("encode_orbit: x0 must lie in (0,1]");
    if (n < 1) throw std::domain_error("encode_orbit: n must be >= 1");
    symbol_string s;
    s.symbols.reserve(n);
    // Below the stored ladder cell_index walks forward with the same float
    // operations as apply, so the index of f(x) is exactly one less.
    const std::uint64_t walk_from = map.is_manneville() ? map.as_manneville().ladder->depth() : UINT64_MAX;
    double x = x0;
    std::uint64_t k = 0;
    bool known = false;
    for (std::size_t t = 0; t < n; ++t) {
        if (x == 0.0) throw orbit_truncated(std::move(s));
        if (!known) k = map.cell_index(x);
        s.symbols.push_back(detail::to_symbol(k));
        known = k > walk_from;
        --k;
        if (t + 1 < n) x = map.apply(x);
    }
    return s;
}

/// Orbit coding of the piecewise-linear map in working precision Real.
template <class Real>
symbol_string encode_linear_orbit(const linear_map<Real>& map, Real x0, std::size_t n)
{
    if (!(x0 > Real(0) && x0 <= Real(1))) throw std::domain_error("encode_orbit: x0 must lie in (0,1]");
    if (n < 1) throw std::domain_error("encode_orbit: n must be >= 1");
    symbol_string s;
    s.symbols.reserve(n);
    Real x = std::move(x0);
    for (std::size_t t = 0; t < n; ++t) {
        if (x == Real(0)) throw orbit_truncated(std::move(s));
        s.symbols.push_back(detail::to_symbol(static_cast<std::uint64_t>(map.cell(x))));
        if (t + 1 < n) x = map(x);
    }
    return s;
}

/// Coding by the coarse partition B_i = A_i (i < N), B_N = [0, eps_{N-1}]
/// (Manneville: [0, x_{N-1}]), read off the orbit directly.
inline symbol_string encode_coarse_orbit(const interval_map& map, double x0, std::size_t n, symbol N)
{
    if (N < 1) throw std::domain_error("encode_coarse_orbit: N must be >= 1");
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw std::domain_error("encode_coarse_orbit: x0 outside [0,1]");
    symbol_string s;
    s.symbols.reserve(n);
    const double floor_n = map.cell_floor(static_cast<std::int64_t>(N) - 1);
    double x = x0;
    for (std::size_t t = 0; t < n; ++t) {
        if (x <= floor_n)
            s.symbols.push_back(N);
        else
            s.symbols.push_back(detail::to_symbol(map.cell_index(x)));
        if (t + 1 < n) x = map.apply(x);
    }
    return s;
}

// ---------------------------------------------------------------------------

/// Square 0/1 matrix, row-major.
class transition_matrix {
public:
    explicit transition_matrix(std::size_t size) : size_(size), entries_(size * size, 0) {}

    static transition_matrix from_rows(const std::vector<std::vector<int>>& rows)
    {
        transition_matrix m(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) throw std::invalid_argument("transition_matrix: not square");
            for (std::size_t j = 0; j < rows.size(); ++j) {
                if (rows[i][j] != 0 && rows[i][j] != 1) throw std::invalid_argument("transition_matrix: entries must be 0/1");
                m.set(i, j, rows[i][j] != 0);
            }
        }
        return m;
    }

    std::size_t size() const noexcept { return size_; }
    bool operator()(std::size_t i, std::size_t j) const { return entries_[i * size_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v) { entries_[i * size_ + j] = v ? 1 : 0; }

    std::size_t row_sum(std::size_t i) const
    {
        std::size_t s = 0;
        for (std::size_t j = 0; j < size_; ++j) s += (*this)(i, j);
        return s;
    }

    bool operator==(const transition_matrix&) const = default;

private:
    std::size_t size_;
    std::vector<std::uint8_t> entries_;
};

/// (N+1) x (N+1) structure matrix of the finite sub-shift.
inline transition_matrix build_transition_matrix(std::size_t N)
{
    if (N < 1) throw std::domain_error("build_transition_matrix: N must be >= 1");
    transition_matrix m(N + 1);
    for (std::size_t j = 0; j <= N; ++j) m.set(0, j, true);
    for (std::size_t i = 1; i <= N; ++i) m.set(i, i - 1, true);
    m.set(N, N, true);
    return m;
}

inline std::string to_csv(const transition_matrix& m)
{
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j) out.push_back(',');
            out.push_back(m(i, j) ? '1' : '0');
        }
        out.push_back('\n');
    }
    return out;
}

/// Admissible for the countable structure (N absent) or for the finite one of
/// size N + 1 (symbols above N are simply inadmissible).
inline bool is_admissible(const symbol_string& s, std::optional<symbol> N = std::nullopt)
{
    const auto& v = s.symbols;
    if (N) {
        for (symbol x : v)
            if (x > *N) return false;
    }
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const symbol a = v[i];
        const symbol b = v[i + 1];
        if (a == 0) continue;
        if (b == a - 1) continue;
        if (N && a == *N && b == *N) continue;
        return false;
    }
    return true;
}

/// Lumps every cell j >= N into B_N: symbol j becomes min(j, N).
inline symbol_string truncate_alphabet(const symbol_string& s, symbol N)
{
    if (N < 1) throw std::domain_error("truncate_alphabet: N must be >= 1");
    symbol_string out = s;
    for (symbol& x : out.symbols) x = std::min(x, N);
    return out;
}

} // namespace manneville
