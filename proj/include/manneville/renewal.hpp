#pragma once

// The Markov chain of the piecewise-linear map under Lebesgue measure, seen
// as a recurrent event: visits to A_0 recur after X steps with
// P[X = k] = f_k = p_{k-1}. Everything between visits is the deterministic
// countdown, so the chain is fully described by this renewal process.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "convolution.hpp"
#include "epsilon.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace manneville {

enum class renewal_regime { finite_variance, alpha_1_2, alpha_0_1, null_other, ergodic_other };

inline std::string to_string(renewal_regime r)
{
    switch (r) {
    case renewal_regime::finite_variance: return "finite_variance";
    case renewal_regime::alpha_1_2: return "alpha_1_2";
    case renewal_regime::alpha_0_1: return "alpha_0_1";
    case renewal_regime::null_other: return "null_other";
    case renewal_regime::ergodic_other: return "ergodic_other";
    }
    return "unknown";
}

struct renewal_model {
    renewal_law law;
    renewal_regime regime;

    /// f_k = P[X = k] = p_{k-1}, k >= 1.
    double interarrival(std::int64_t k) const
    {
        if (k < 1) return 0.0;
        return law.seq(k - 2) - law.seq(k - 1);
    }
};

inline renewal_regime classify_regime(const renewal_law& law)
{
    if (std::isfinite(law.moments.second_moment)) return renewal_regime::finite_variance;
    if (law.tail) {
        const double a = law.tail->exponent;
        if (a > 1.0 && a < 2.0) return renewal_regime::alpha_1_2;
        if (a > 0.0 && a < 1.0) return renewal_regime::alpha_0_1;
    }
    return std::isfinite(law.moments.mean) ? renewal_regime::ergodic_other : renewal_regime::null_other;
}

inline renewal_model make_renewal_model(const epsilon_sequence& seq, std::int64_t tail_cutoff = std::int64_t{1} << 20)
{
    renewal_law law = make_renewal_law(seq, tail_cutoff);
    const renewal_regime regime = classify_regime(law);
    return {std::move(law), regime};
}

/// Inverse-CDF draw of X: 1 + min{k : eps_k < U}. Returns saturated_index for
/// draws too large to represent.
inline std::uint64_t sample_recurrence(const renewal_model& model, counter_rng& rng)
{
    const std::uint64_t k = model.law.seq.first_below(rng.uniform_open());
    return k >= saturated_index ? saturated_index : k + 1;
}

/// Roughly `per_decade` log-spaced integers in [first, last], always ending at last.
inline std::vector<std::uint64_t> log_checkpoints(std::uint64_t first, std::uint64_t last, int per_decade = 20)
{
    if (first < 1 || last < first) throw std::domain_error("log_checkpoints: need 1 <= first <= last");
    std::vector<std::uint64_t> out;
    const double lo = std::log10(static_cast<double>(first));
    const double hi = std::log10(static_cast<double>(last));
    const auto steps = static_cast<long>(std::ceil((hi - lo) * per_decade - 1e-9));
    for (long i = 0; i <= steps; ++i) {
        const double e = std::min(hi, lo + static_cast<double>(i) / per_decade);
        const auto v = static_cast<std::uint64_t>(std::llround(std::pow(10.0, e)));
        if (out.empty() || v > out.back()) out.push_back(std::min(v, last));
    }
    if (out.back() != last) out.push_back(last);
    return out;
}

struct count_simulation {
    std::vector<std::uint64_t> checkpoints;
    std::size_t trials = 0;
    /// N at each checkpoint, row-major [trial][checkpoint].
    std::vector<std::uint64_t> counts;
    std::vector<double> mean;
    std::vector<double> std_error;

    std::uint64_t count(std::size_t trial, std::size_t checkpoint) const
    {
        return counts[trial * checkpoints.size() + checkpoint];
    }
    /// N_n of every trial (last checkpoint).
    std::vector<std::uint64_t> final_counts() const
    {
        std::vector<std::uint64_t> out(trials);
        for (std::size_t t = 0; t < trials; ++t) out[t] = count(t, checkpoints.size() - 1);
        return out;
    }
};

/// Per-trial renewal counts N_m (events within the first m steps) at each
/// checkpoint; trial t draws from counter_rng(seed, t).
inline count_simulation simulate_counts(const renewal_model& model, std::uint64_t n, std::size_t trials,
                                        std::uint64_t seed, std::vector<std::uint64_t> checkpoints = {},
                                        unsigned threads = 0)
{
    if (n < 1 || trials < 1) throw std::domain_error("simulate_counts: n and trials must be >= 1");
    if (checkpoints.empty()) checkpoints = log_checkpoints(1, n);
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    if (checkpoints.back() != n) checkpoints.push_back(n);
    if (checkpoints.front() < 1 || checkpoints.back() > n) throw std::domain_error("simulate_counts: checkpoint outside [1, n]");

    count_simulation out;
    out.checkpoints = std::move(checkpoints);
    out.trials = trials;
    const std::size_t nc = out.checkpoints.size();
    out.counts.assign(trials * nc, 0);

    parallel_for(trials, threads, [&](std::size_t t) {
        counter_rng rng(seed, t);
        std::uint64_t* row = out.counts.data() + t * nc;
        std::uint64_t position = 0; // time of the last event
        std::uint64_t events = 0;
        std::size_t c = 0;
        while (c < nc) {
            const std::uint64_t x = sample_recurrence(model, rng);
            const std::uint64_t next = x >= saturated_index ? saturated_index : position + x;
            while (c < nc && out.checkpoints[c] < next) row[c++] = events;
            position = next;
            ++events;
        }
    });

    out.mean.assign(nc, 0.0);
    out.std_error.assign(nc, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
        compensated_sum s, s2;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto v = static_cast<double>(out.count(t, c));
            s.add(v);
            s2.add(v * v);
        }
        const double tr = static_cast<double>(trials);
        const double mean = s.value() / tr;
        const double var = trials > 1 ? std::max(0.0, (s2.value() - tr * mean * mean) / (tr - 1.0)) : 0.0;
        out.mean[c] = mean;
        out.std_error[c] = std::sqrt(var / tr);
    }
    return out;
}

inline constexpr std::uint64_t max_exact_horizon = 10'000'000;

struct exact_counts {
    /// u_m: probability of an event at step m, m = 0..n.
    std::vector<double> u;
    /// E[N_m] = U_m - 1 with U_m = sum_{i<=m} u_i, m = 0..n.
    std::vector<double> expected;
    /// 1/m_0 (0 when m_0 is infinite); u_n tends to it.
    double u_limit = 0.0;
    double limit_gap() const { return u.back() - u_limit; }
};

/// u_m and E[N_m] for m <= n from the renewal equation.
inline exact_counts exact_mean_counts(const renewal_model& model, std::uint64_t n)
{
    if (n > max_exact_horizon) throw resource_error("exact_mean_counts: n exceeds the supported horizon");
    const std::size_t count = static_cast<std::size_t>(n) + 1;
    std::vector<double> f(count, 0.0);
    for (std::size_t k = 1; k < count; ++k) f[k] = model.interarrival(static_cast<std::int64_t>(k));

    exact_counts out;
    out.u = solve_renewal_equation(f, count);
    out.expected.resize(count);
    compensated_sum U;
    for (std::size_t m = 0; m < count; ++m) {
        U.add(out.u[m]);
        out.expected[m] = U.value() - 1.0;
    }
    out.u_limit = std::isfinite(model.law.moments.mean) ? 1.0 / model.law.moments.mean : 0.0;
    return out;
}

struct feller_estimate {
    renewal_regime regime;
    /// Predicted E[N_n]; NaN when only an order statement exists.
    double value;
    std::string label;
};

/// Asymptotic E[N_n] by regime:
///   finite variance  n/m0 + (V - m0 + m0^2) / (2 m0^2)
///   1 < alpha < 2    n/m0 + A n^{2-alpha} / ((alpha-1)(2-alpha) m0^2)
///   0 < alpha < 1    sin(alpha pi) n^alpha / (A alpha pi)
///   ergodic other    n/m0
///   null other       o(n), no prefactor
inline feller_estimate feller_prediction(const renewal_model& model, double n)
{
    const auto& law = model.law;
    if (law.tail && law.tail->exponent == 1.0)
        throw unsupported_regime("feller_prediction: tail exponent 1 is not covered");
    const double m0 = law.moments.mean;
    const double V = law.moments.second_moment;
    switch (model.regime) {
    case renewal_regime::finite_variance:
        return {model.regime, n / m0 + (V - m0 + m0 * m0) / (2.0 * m0 * m0), "n/m0 + const"};
    case renewal_regime::alpha_1_2: {
        const double A = law.tail->prefactor;
        const double a = law.tail->exponent;
        return {model.regime, n / m0 + A * std::pow(n, 2.0 - a) / ((a - 1.0) * (2.0 - a) * m0 * m0),
                "n/m0 + A n^(2-alpha)/((alpha-1)(2-alpha)m0^2)"};
    }
    case renewal_regime::alpha_0_1: {
        const double A = law.tail->prefactor;
        const double a = law.tail->exponent;
        return {model.regime, std::sin(a * std::numbers::pi) * std::pow(n, a) / (A * a * std::numbers::pi),
                "sin(alpha pi) n^alpha/(A alpha pi)"};
    }
    case renewal_regime::ergodic_other: return {model.regime, n / m0, "n/m0"};
    case renewal_regime::null_other:
        return {model.regime, std::numeric_limits<double>::quiet_NaN(), "o(n)"};
    }
    return {model.regime, std::numeric_limits<double>::quiet_NaN(), "unknown"};
}

} // namespace manneville
