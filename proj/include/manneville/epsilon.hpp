#pragma once

// The defining sequence (eps_k) of the piecewise-linear family and the
// renewal law it induces under Lebesgue measure: p_i = eps_{i-1} - eps_i,
// recurrence time X with P[X = k] = p_{k-1} and P[X > k] = eps_{k-1}.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace manneville {

enum class sequence_kind { power, geometric, log_corrected, inverse_log, degenerate };

inline std::string to_string(sequence_kind kind)
{
    switch (kind) {
    case sequence_kind::power: return "power";
    case sequence_kind::geometric: return "geometric";
    case sequence_kind::log_corrected: return "log_corrected";
    case sequence_kind::inverse_log: return "inverse_log";
    case sequence_kind::degenerate: return "degenerate";
    }
    return "unknown";
}

/// Upper bound on cell indices and recurrence times. Values at or above it
/// mean "beyond any horizon we can represent".
inline constexpr std::uint64_t saturated_index = std::uint64_t{1} << 62;

/// P[X > x] ~ prefactor * x^-exponent.
struct power_tail {
    double prefactor;
    double exponent;
};

/// Parametric generator of eps_k, k >= -1, with eps_{-1} = 1.
///
///   power          eps_k = c (k+1)^-alpha
///   geometric      eps_k = c a^-(k+1)
///   log_corrected  eps_k = c (k+2)^-alpha log(k+2)^-beta
///   inverse_log    eps_k = c / log(k+2)
///   degenerate     eps_k = 0 for k >= 0 (unit mass p_0 = 1; renewal fixture only,
///                  it does not define a map)
class epsilon_sequence {
public:
    static epsilon_sequence power(double alpha, double c = 0.5)
    {
        if (!(alpha > 0.0)) throw std::invalid_argument("power: alpha must be positive");
        require_open_unit(c, "power");
        return {sequence_kind::power, alpha, 0.0, 0.0, c};
    }

    static epsilon_sequence geometric(double a = 2.0, double c = 1.0)
    {
        if (!(a > 1.0)) throw std::invalid_argument("geometric: a must exceed 1");
        if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("geometric: c must lie in (0,1]");
        return {sequence_kind::geometric, 0.0, 0.0, a, c};
    }

    static epsilon_sequence log_corrected(double alpha, double beta, double c = 0.5)
    {
        if (!(alpha > 0.0 || (alpha == 0.0 && beta > 0.0)))
            throw std::invalid_argument("log_corrected: sequence must decay (alpha > 0, or alpha = 0 with beta > 0)");
        require_open_unit(c, "log_corrected");
        return {sequence_kind::log_corrected, alpha, beta, 0.0, c};
    }

    static epsilon_sequence inverse_log(double c = 0.5)
    {
        require_open_unit(c, "inverse_log");
        return {sequence_kind::inverse_log, 0.0, 0.0, 0.0, c};
    }

    static epsilon_sequence degenerate() { return {sequence_kind::degenerate, 0.0, 0.0, 0.0, 0.0}; }

    sequence_kind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double a() const noexcept { return a_; }
    double c() const noexcept { return c_; }

    /// eps_k.
    double operator()(std::int64_t k) const
    {
        if (k < -1) throw std::domain_error("epsilon: index must be >= -1");
        if (k == -1) return 1.0;
        return value_at(static_cast<double>(k));
    }

    /// eps_k evaluated in an arbitrary floating type (e.g. multiprecision).
    template <class Real>
    Real at(std::int64_t k) const
    {
        using std::log;
        using std::pow;
        if (k < -1) throw std::domain_error("epsilon: index must be >= -1");
        if (k == -1) return Real(1);
        const Real c(c_);
        switch (kind_) {
        case sequence_kind::power: return c * pow(Real(k + 1), Real(-alpha_));
        case sequence_kind::geometric: return c * pow(Real(a_), Real(-(k + 1)));
        case sequence_kind::log_corrected: {
            const Real m(k + 2);
            return c * pow(m, Real(-alpha_)) * pow(log(m), Real(-beta_));
        }
        case sequence_kind::inverse_log: return c / log(Real(k + 2));
        case sequence_kind::degenerate: return Real(0);
        }
        return Real(0);
    }

    /// Continuous extension eps(x) for real x >= 0; used for tail integrals.
    double value_at(double x) const
    {
        switch (kind_) {
        case sequence_kind::power: return c_ * std::pow(x + 1.0, -alpha_);
        case sequence_kind::geometric: return c_ * std::pow(a_, -(x + 1.0));
        case sequence_kind::log_corrected:
            return c_ * std::pow(x + 2.0, -alpha_) * std::pow(std::log(x + 2.0), -beta_);
        case sequence_kind::inverse_log: return c_ / std::log(x + 2.0);
        case sequence_kind::degenerate: return 0.0;
        }
        return 0.0;
    }

    /// Smallest k >= 0 with eps_k < u, saturating at saturated_index.
    /// For u in (0,1] this is the index i of the cell (eps_i, eps_{i-1}] holding u,
    /// and 1 + first_below(U) is an inverse-CDF draw of the recurrence time.
    std::uint64_t first_below(double u) const
    {
        if (!(u > 0.0)) return saturated_index;
        if (kind_ == sequence_kind::degenerate) return 0;
        if (kind_ == sequence_kind::log_corrected) return gallop_below(u);

        // Closed-form inverse t, with eps_k < u  <=>  k > t - 1 (power, geometric)
        // or k > t - 2 (inverse_log).
        double t = 0.0;
        std::int64_t shift = 0;
        switch (kind_) {
        case sequence_kind::power: t = std::pow(c_ / u, 1.0 / alpha_); break;
        case sequence_kind::geometric: t = std::log(c_ / u) / std::log(a_); break;
        case sequence_kind::inverse_log: t = std::exp(c_ / u); shift = 1; break;
        default: break;
        }
        if (!(t < static_cast<double>(saturated_index))) return saturated_index;
        const double fl = std::floor(t);
        std::int64_t k = static_cast<std::int64_t>(fl) - shift;
        if (k < 0) k = 0;
        const double frac = t - fl;
        const double slack = 1e-9 * std::max(1.0, t);
        if (t > 0x1p50 || (frac > slack && 1.0 - frac > slack)) return static_cast<std::uint64_t>(k);
        return static_cast<std::uint64_t>(refine(k, u));
    }

    /// Exact tail of the recurrence-time law, when it is a pure power law.
    std::optional<power_tail> tail() const
    {
        if (kind_ == sequence_kind::power) return power_tail{c_, alpha_};
        if (kind_ == sequence_kind::log_corrected && beta_ == 0.0) return power_tail{c_, alpha_};
        return std::nullopt;
    }

    /// m_0 = sum_k k p_{k-1} < inf, decided from the closed form.
    bool finite_mean() const noexcept
    {
        switch (kind_) {
        case sequence_kind::power: return alpha_ > 1.0;
        case sequence_kind::geometric: return true;
        case sequence_kind::log_corrected: return alpha_ > 1.0 || (alpha_ == 1.0 && beta_ > 1.0);
        case sequence_kind::inverse_log: return false;
        case sequence_kind::degenerate: return true;
        }
        return false;
    }

    /// V = sum_k k^2 p_{k-1} < inf, decided from the closed form.
    bool finite_second_moment() const noexcept
    {
        switch (kind_) {
        case sequence_kind::power: return alpha_ > 2.0;
        case sequence_kind::geometric: return true;
        case sequence_kind::log_corrected: return alpha_ > 2.0 || (alpha_ == 2.0 && beta_ > 1.0);
        case sequence_kind::inverse_log: return false;
        case sequence_kind::degenerate: return true;
        }
        return false;
    }

    /// int_from^inf w(x) eps(x) dx with w(x) = 1 (order 0) or 2x + 3 (order 1).
    /// Only meaningful when the corresponding moment is finite.
    double tail_integral(double from, int order) const
    {
        switch (kind_) {
        case sequence_kind::power: {
            const double m = from + 1.0;
            const double first = c_ * std::pow(m, 1.0 - alpha_) / (alpha_ - 1.0);
            if (order == 0) return first;
            return 2.0 * c_ * std::pow(m, 2.0 - alpha_) / (alpha_ - 2.0) + first;
        }
        case sequence_kind::geometric: {
            const double l = std::log(a_);
            const double e = c_ * std::exp(-l * (from + 1.0));
            if (order == 0) return e / l;
            return e * ((2.0 * from + 3.0) / l + 2.0 / (l * l));
        }
        case sequence_kind::degenerate: return 0.0;
        default: break;
        }
        boost::math::quadrature::exp_sinh<double> integrator;
        auto integrand = [&](double x) {
            const double w = order == 0 ? 1.0 : 2.0 * x + 3.0;
            return w * value_at(x);
        };
        return integrator.integrate([&](double s) { return integrand(from + s); }, 0.0,
                                    std::numeric_limits<double>::infinity());
    }

private:
    epsilon_sequence(sequence_kind kind, double alpha, double beta, double a, double c)
        : kind_(kind), alpha_(alpha), beta_(beta), a_(a), c_(c)
    {
    }

    static void require_open_unit(double c, const char* who)
    {
        if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument(std::string(who) + ": c must lie in (0,1)");
    }

    std::int64_t refine(std::int64_t k, double u) const
    {
        auto below = [&](std::int64_t j) { return (*this)(j) < u; };
        if (below(k)) {
            while (k > 0 && below(k - 1)) --k;
        } else {
            do {
                ++k;
            } while (!below(k) && k < static_cast<std::int64_t>(saturated_index));
        }
        return k;
    }

    std::uint64_t gallop_below(double u) const
    {
        auto below = [&](std::int64_t j) { return (*this)(j) < u; };
        if (below(0)) return 0;
        std::int64_t lo = 0; // !below(lo)
        std::int64_t hi = 1;
        while (!below(hi)) {
            lo = hi;
            if (hi >= static_cast<std::int64_t>(saturated_index / 2)) return saturated_index;
            hi *= 2;
        }
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            (below(mid) ? hi : lo) = mid;
        }
        return static_cast<std::uint64_t>(hi);
    }

    sequence_kind kind_;
    double alpha_;
    double beta_;
    double a_;
    double c_;
};

/// eps_k; k = -1 gives 1.
inline double epsilon(const epsilon_sequence& seq, std::int64_t k) { return seq(k); }

// ---------------------------------------------------------------------------
// Admissibility of a sequence

enum class sequence_condition { positivity, monotonicity, ratio };

inline std::string to_string(sequence_condition c)
{
    switch (c) {
    case sequence_condition::positivity: return "positivity";
    case sequence_condition::monotonicity: return "monotonicity";
    case sequence_condition::ratio: return "ratio";
    }
    return "unknown";
}

struct validity_report {
    bool positive = true;
    bool decreasing = true;
    bool ratio_below_one = true;
    std::optional<std::int64_t> first_failure;
    std::optional<sequence_condition> failed_condition;

    bool ok() const noexcept { return positive && decreasing && ratio_below_one; }
};

/// Checks eps_k > 0, eps_k < eps_{k-1} and
/// (eps_{k-1} - eps_k) < (eps_{k-2} - eps_{k-1}) for k <= K.
/// `eps` is anything callable as eps(k) for k >= -1.
template <class Sequence>
validity_report validate(const Sequence& eps, std::int64_t K)
{
    if (K < 2) throw std::domain_error("validate: K must be >= 2");
    validity_report report;
    auto fail = [&](std::int64_t k, sequence_condition c) {
        if (!report.first_failure) {
            report.first_failure = k;
            report.failed_condition = c;
        }
    };
    // Library families are evaluated in long double so that a fast geometric
    // decay is not reported as non-positive once it leaves the double range.
    auto value = [&](std::int64_t k) -> long double {
        if constexpr (std::is_same_v<Sequence, epsilon_sequence>) return eps.template at<long double>(k);
        else return static_cast<long double>(eps(k));
    };
    long double prev2 = 0.0L;
    long double prev = value(-1);
    for (std::int64_t k = 0; k <= K; ++k) {
        const long double cur = value(k);
        if (!(cur > 0.0)) {
            report.positive = false;
            fail(k, sequence_condition::positivity);
        }
        if (!(cur < prev)) {
            report.decreasing = false;
            fail(k, sequence_condition::monotonicity);
        }
        if (k >= 1 && !((prev - cur) < (prev2 - prev))) {
            report.ratio_below_one = false;
            fail(k, sequence_condition::ratio);
        }
        prev2 = prev;
        prev = cur;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Renewal law under Lebesgue measure

/// Neumaier-compensated running sum.
class compensated_sum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Mean m_0 and second moment V of the recurrence time. Infinite moments are
/// +inf; finite ones carry an error bound on the tail approximation.
struct recurrence_moments {
    double mean;
    double mean_error;
    double second_moment;
    double second_moment_error;
};

/// m_0 = 1 + sum_{j>=0} eps_j and V = 1 + sum_{j>=0} (2j+3) eps_j, summed
/// exactly up to tail_cutoff and closed with an Euler-Maclaurin tail.
inline recurrence_moments compute_recurrence_moments(const epsilon_sequence& seq,
                                                     std::int64_t tail_cutoff = std::int64_t{1} << 20)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (tail_cutoff < 16) throw std::domain_error("recurrence_moments: tail_cutoff too small");
    recurrence_moments out{inf, 0.0, inf, 0.0};
    const bool mean_ok = seq.finite_mean();
    const bool second_ok = seq.finite_second_moment();
    if (!mean_ok) return out;

    compensated_sum first, second;
    first.add(1.0);
    second.add(1.0);
    for (std::int64_t j = 0; j < tail_cutoff; ++j) {
        const double e = seq(j);
        first.add(e);
        if (second_ok) second.add((2.0 * static_cast<double>(j) + 3.0) * e);
    }

    // sum_{j>=K} g(j) = int_K^inf g + g(K)/2 - g'(K)/12 + ...
    const double K = static_cast<double>(tail_cutoff);
    auto closure = [&](int order, double& error) {
        auto g = [&](double x) { return (order == 0 ? 1.0 : 2.0 * x + 3.0) * seq.value_at(x); };
        const double dg = g(K + 0.5) - g(K - 0.5);
        error = std::abs(dg) / 12.0 + 1e-16 * K;
        return seq.tail_integral(K, order) + 0.5 * g(K) - dg / 12.0;
    };
    double err = 0.0;
    first.add(closure(0, err));
    out.mean = first.value();
    out.mean_error = err;
    if (second_ok) {
        second.add(closure(1, err));
        out.second_moment = second.value();
        out.second_moment_error = err;
    }
    return out;
}

/// The recurrence-time law p_i = eps_{i-1} - eps_i with its moments and tail.
struct renewal_law {
    epsilon_sequence seq;
    recurrence_moments moments;
    std::optional<power_tail> tail;
};

inline renewal_law make_renewal_law(const epsilon_sequence& seq, std::int64_t tail_cutoff = std::int64_t{1} << 20)
{
    return {seq, compute_recurrence_moments(seq, tail_cutoff), seq.tail()};
}

/// p_i = l(A_i) = eps_{i-1} - eps_i.
inline double cell_mass(const renewal_law& law, std::int64_t i)
{
    if (i < 0) throw std::domain_error("cell_mass: index must be >= 0");
    return law.seq(i - 1) - law.seq(i);
}

/// F(x) = sum_{r <= floor(x)} p_r = 1 - eps_floor(x).
inline double distribution_function(const renewal_law& law, double x)
{
    if (!(x >= 0.0)) throw std::domain_error("distribution_function: x must be >= 0");
    const double k = std::floor(std::min(x, static_cast<double>(saturated_index)));
    return 1.0 - law.seq(static_cast<std::int64_t>(k));
}

inline recurrence_moments compute_recurrence_moments(const renewal_law& law, std::int64_t tail_cutoff)
{
    return compute_recurrence_moments(law.seq, tail_cutoff);
}

/// Invariant weight pbar(k) = sum_{n>=0} p_{k+n} = eps_{k-1}.
inline double invariant_cell_mass(const renewal_law& law, std::int64_t k)
{
    if (k < 1) throw std::domain_error("invariant_cell_mass: k must be >= 1");
    return law.seq(k - 1);
}

/// sum_{k>=0} pbar(k) = m_0: finite (normalizable to a probability) iff the
/// mean recurrence time is finite.
inline double invariant_total_mass(const renewal_law& law) { return law.moments.mean; }

} // namespace manneville
