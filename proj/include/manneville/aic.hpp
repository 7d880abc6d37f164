#pragma once

// Recurrence-time compression of admissible strings. An admissible string is
// a concatenation of countdowns "s, s-1, ..., 1, 0"; storing only each leading
// symbol s is lossless. The cost of a string is sum log2(s + 2) bits.

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "renewal.hpp"
#include "symbolic.hpp"

namespace manneville {

struct compressed_string {
    /// Leading symbol of each complete countdown, in order.
    std::vector<std::uint64_t> runs;
    /// Trailing countdown cut off before reaching 0: its first symbol and how
    /// many of its symbols are present. Not counted in N_n.
    std::uint64_t partial_symbol = 0;
    std::uint64_t partial_length = 0;
    /// Length of the original string.
    std::uint64_t n = 0;

    /// N_n, the number of complete runs (= number of zeros).
    std::uint64_t count() const noexcept { return runs.size(); }
    bool has_partial() const noexcept { return partial_length > 0; }

    bool operator==(const compressed_string&) const = default;
};

inline compressed_string compress(const symbol_string& s)
{
    if (!is_admissible(s)) throw structure_error("compress: string is not admissible");
    compressed_string out;
    out.n = s.size();
    const auto& v = s.symbols;
    std::size_t i = 0;
    while (i < v.size()) {
        const std::uint64_t lead = v[i];
        const std::size_t end = i + lead + 1; // one past the 0 closing this run
        if (end <= v.size()) {
            out.runs.push_back(lead);
            i = end;
        } else {
            out.partial_symbol = lead;
            out.partial_length = v.size() - i;
            break;
        }
    }
    return out;
}

inline symbol_string decompress(const compressed_string& c)
{
    symbol_string out;
    out.symbols.reserve(c.n);
    auto emit = [&](std::uint64_t lead, std::uint64_t length) {
        for (std::uint64_t j = 0; j < length; ++j) out.symbols.push_back(detail::to_symbol(lead - j));
    };
    for (std::uint64_t r : c.runs) emit(r, r + 1);
    if (c.has_partial()) emit(c.partial_symbol, c.partial_length);
    return out;
}

/// The string truncated to its last complete run.
inline compressed_string complete_prefix(const compressed_string& c)
{
    compressed_string out;
    out.runs = c.runs;
    out.n = c.n - c.partial_length;
    return out;
}

/// log2(s + 2) summed over runs (plus the partial run, if any).
inline double aic_estimate(const compressed_string& c)
{
    compensated_sum s;
    for (std::uint64_t r : c.runs) s.add(std::log2(static_cast<double>(r) + 2.0));
    if (c.has_partial()) s.add(std::log2(static_cast<double>(c.partial_symbol) + 2.0));
    return s.value();
}

struct aic_bounds {
    double lower;
    double upper;
};

/// (N - 1) + log2(n - N + 2) <= I <= N log2((n + N) / N), for strings ending in 0.
inline aic_bounds aic_bounds_for(double n, double N)
{
    if (!(N >= 1.0)) throw numeric_error("aic bounds: undefined for N_n = 0");
    return {(N - 1.0) + std::log2(n - N + 2.0), N * std::log2((n + N) / N)};
}

struct aic_result {
    double estimate;
    /// Present only when the string ends in 0.
    std::optional<aic_bounds> bounds;
};

inline aic_result aic_estimate_and_bounds(const compressed_string& c)
{
    if (c.count() == 0) throw numeric_error("aic_estimate_and_bounds: N_n = 0");
    aic_result out{aic_estimate(c), std::nullopt};
    if (!c.has_partial()) out.bounds = aic_bounds_for(static_cast<double>(c.n), static_cast<double>(c.count()));
    return out;
}

/// lower <= estimate <= upper up to a relative rounding slack.
inline bool within_bounds(double estimate, const aic_bounds& b, double rel = 1e-12)
{
    const double slack = rel * std::max(1.0, std::abs(estimate));
    return b.lower <= estimate + slack && estimate <= b.upper + slack;
}

struct aic_row {
    std::uint64_t n;
    double mean_N;
    double mean_estimate;
    /// Bounds evaluated at each trajectory's last complete run, averaged over
    /// trajectories with at least one run.
    double mean_lower;
    double mean_upper;
    std::size_t bounded_trials;
};

struct aic_ensemble {
    std::vector<aic_row> rows;
    std::size_t trials = 0;
    /// Checkpoint/trajectory pairs where the complete-prefix estimate left its bounds.
    std::uint64_t sandwich_violations = 0;
    std::uint64_t sandwich_checks = 0;
};

/// Compression statistics of renewal trajectories at each checkpoint.
/// Trajectory t draws from counter_rng(seed, t); the result does not depend
/// on `threads`.
inline aic_ensemble ensemble_mean_aic(const renewal_model& model, std::vector<std::uint64_t> checkpoints,
                                      std::size_t trials, std::uint64_t seed, unsigned threads = 0)
{
    if (trials < 1) throw std::domain_error("ensemble_mean_aic: trials must be >= 1");
    if (checkpoints.empty()) throw std::domain_error("ensemble_mean_aic: no checkpoints");
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    if (checkpoints.front() < 1) throw std::domain_error("ensemble_mean_aic: checkpoints must be >= 1");

    struct cell {
        std::uint64_t N;
        double estimate;
        double lower;
        double upper;
    };
    const std::size_t nc = checkpoints.size();
    std::vector<cell> grid(trials * nc);
    std::vector<std::uint64_t> violations(trials, 0), checks(trials, 0);

    parallel_for(trials, threads, [&](std::size_t t) {
        counter_rng rng(seed, t);
        cell* row = grid.data() + t * nc;
        std::uint64_t position = 0;
        std::uint64_t events = 0;
        compensated_sum cost;
        std::size_t c = 0;
        while (c < nc) {
            const std::uint64_t x = sample_recurrence(model, rng);
            const std::uint64_t next = x >= saturated_index ? saturated_index : position + x;
            const double run_cost = std::log2(static_cast<double>(x) + 1.0); // lead symbol x - 1
            while (c < nc && checkpoints[c] < next) {
                cell& out = row[c++];
                out.N = events;
                // position < checkpoint < next: the run in progress is partial
                out.estimate = cost.value() + run_cost;
                if (events >= 1) {
                    const auto b = aic_bounds_for(static_cast<double>(position), static_cast<double>(events));
                    out.lower = b.lower;
                    out.upper = b.upper;
                    ++checks[t];
                    if (!within_bounds(cost.value(), b)) ++violations[t];
                } else {
                    out.lower = out.upper = 0.0;
                }
            }
            if (c < nc && checkpoints[c] == next) {
                // run completes exactly at the checkpoint
                cost.add(run_cost);
                position = next;
                ++events;
                cell& out = row[c++];
                out.N = events;
                out.estimate = cost.value();
                const auto b = aic_bounds_for(static_cast<double>(position), static_cast<double>(events));
                out.lower = b.lower;
                out.upper = b.upper;
                ++checks[t];
                if (!within_bounds(cost.value(), b)) ++violations[t];
                continue;
            }
            cost.add(run_cost);
            position = next;
            ++events;
        }
    });

    aic_ensemble out;
    out.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        out.sandwich_violations += violations[t];
        out.sandwich_checks += checks[t];
    }
    out.rows.reserve(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        compensated_sum sN, sE, sL, sU;
        std::size_t bounded = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const cell& v = grid[t * nc + c];
            sN.add(static_cast<double>(v.N));
            sE.add(v.estimate);
            if (v.N >= 1) {
                sL.add(v.lower);
                sU.add(v.upper);
                ++bounded;
            }
        }
        const double tr = static_cast<double>(trials);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.rows.push_back({checkpoints[c], sN.value() / tr, sE.value() / tr,
                            bounded ? sL.value() / static_cast<double>(bounded) : nan,
                            bounded ? sU.value() / static_cast<double>(bounded) : nan, bounded});
    }
    return out;
}

struct scaling_fit_result {
    double exponent;
    double intercept; // natural log of the prefactor
    double r2;
};

/// Least squares of log(value) on log(n) over points with n in [lo, hi].
inline scaling_fit_result scaling_fit(const std::vector<std::pair<double, double>>& points, double lo, double hi)
{
    std::vector<double> xs, ys;
    for (const auto& [n, v] : points) {
        if (n < lo || n > hi) continue;
        if (!(n > 0.0) || !(v > 0.0)) throw std::domain_error("scaling_fit: values must be positive");
        xs.push_back(std::log(n));
        ys.push_back(std::log(v));
    }
    if (xs.size() < 3) throw std::domain_error("scaling_fit: need at least 3 points in the window");
    const double k = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double vx = 0, vy = 0, cxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        vx += dx * dx;
        vy += dy * dy;
        cxy += dx * dy;
    }
    if (!(vx > 0.0)) throw std::domain_error("scaling_fit: degenerate window");
    const double slope = cxy / vx;
    const double r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
    return {slope, my - slope * mx, r2};
}

} // namespace manneville
