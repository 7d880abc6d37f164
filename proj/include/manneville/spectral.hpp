#pragma once

// Perron data of a 0/1 structure matrix: largest eigenvalue (topological
// entropy log lambda), the Parry chain P_ij = m_ij v_j / (lambda v_i) with
// stationary pi_i ~ u_i v_i, and the Kolmogorov-Sinai entropy of a Markov
// measure.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "symbolic.hpp"

namespace manneville {

struct perron_result {
    double lambda;
    std::vector<double> vector; // strictly positive, max-norm 1
    int iterations;
};

namespace detail {

enum class side { right, left };

// Power iteration on M + I: same eigenvectors, spectrum shifted by one, which
// rules out the period oscillations plain iteration shows on periodic
// matrices. Stops once successive Rayleigh quotients agree to tol and the
// residual |Mv - lambda v| is below tol |v| (max norms).
inline perron_result perron_iterate(const transition_matrix& m, double tol, side which)
{
    const std::size_t n = m.size();
    if (n == 0) throw std::domain_error("largest_eigenvalue: empty matrix");
    if (!(tol > 0.0)) throw std::domain_error("largest_eigenvalue: tol must be positive");
    constexpr int max_iterations = 100000;

    auto entry = [&](std::size_t i, std::size_t j) { return which == side::right ? m(i, j) : m(j, i); };
    std::vector<double> v(n, 1.0), mv(n);
    double previous = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (entry(i, j)) acc += v[j];
            mv[i] = acc;
        }
        double num = 0.0, den = 0.0, vmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += v[i] * mv[i];
            den += v[i] * v[i];
            vmax = std::max(vmax, v[i]);
        }
        const double rayleigh = num / den;
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(mv[i] - rayleigh * v[i]));
        if (it > 1 && std::abs(rayleigh - previous) < tol * std::max(1.0, std::abs(rayleigh)) &&
            residual < tol * vmax) {
            if (std::any_of(v.begin(), v.end(), [](double x) { return !(x > 0.0); }))
                throw numeric_error("largest_eigenvalue: Perron vector not strictly positive (reducible matrix?)");
            return {rayleigh, v, it};
        }
        previous = rayleigh;
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] += mv[i];
            scale = std::max(scale, v[i]);
        }
        if (!(scale > 0.0)) throw numeric_error("largest_eigenvalue: iterate collapsed to zero");
        for (double& x : v) x /= scale;
    }
    throw numeric_error("largest_eigenvalue: power iteration did not converge");
}

} // namespace detail

/// lambda_max and the right Perron vector; h_top = log lambda_max.
inline perron_result largest_eigenvalue(const transition_matrix& m, double tol = 1e-12)
{
    return detail::perron_iterate(m, tol, detail::side::right);
}

inline perron_result left_perron_vector(const transition_matrix& m, double tol = 1e-12)
{
    return detail::perron_iterate(m, tol, detail::side::left);
}

inline double topological_entropy(const transition_matrix& m, double tol = 1e-12)
{
    return std::log(largest_eigenvalue(m, tol).lambda);
}

/// Stochastic matrix with its stationary distribution.
struct markov_measure {
    std::size_t size = 0;
    std::vector<double> transition; // row-major
    std::vector<double> stationary;
    double lambda = 0.0;            // Perron eigenvalue when built as a Parry measure

    double p(std::size_t i, std::size_t j) const { return transition[i * size + j]; }
};

/// Maximal-entropy Markov measure of the sub-shift.
inline markov_measure parry_measure(const transition_matrix& m, double tol = 1e-12)
{
    const auto right = largest_eigenvalue(m, tol);
    const auto left = left_perron_vector(m, tol);
    const std::size_t n = m.size();
    const double lam = right.lambda;
    const auto& v = right.vector;
    const auto& u = left.vector;

    markov_measure mm;
    mm.size = n;
    mm.lambda = lam;
    mm.transition.assign(n * n, 0.0);
    // v_j / (lambda v_i), with (Mv)_i in place of lambda v_i so rows sum to 1
    // to rounding rather than to the eigen-solver tolerance
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (m(i, j)) row += v[j];
        for (std::size_t j = 0; j < n; ++j)
            if (m(i, j)) mm.transition[i * n + j] = v[j] / row;
    }

    mm.stationary.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += u[i] * v[i];
    for (std::size_t i = 0; i < n; ++i) mm.stationary[i] = u[i] * v[i] / total;
    return mm;
}

struct entropy_value {
    double nats;
    double bits;
};

/// -sum_i pi_i sum_j P_ij log P_ij, with 0 log 0 = 0.
inline entropy_value markov_ks_entropy(const markov_measure& mm)
{
    double h = 0.0;
    for (std::size_t i = 0; i < mm.size; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < mm.size; ++j) {
            const double p = mm.p(i, j);
            if (p > 0.0) row -= p * std::log(p);
        }
        h += mm.stationary[i] * row;
    }
    return {h, h / std::numbers::ln2};
}

} // namespace manneville
