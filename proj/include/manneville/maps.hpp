#pragma once

// Point dynamics of the Manneville map f(x) = x + x^z (mod 1) and of the
// piecewise-linear family L built on a sequence eps_k, with the partitions
//   A_0 = (eps_0, 1],  A_k = (eps_k, eps_{k-1}]     (linear map)
//   B_0 = (x_0, 1],    B_k = (x_k, x_{k-1}]         (Manneville map)
// Cells are lower-open and upper-closed; 0 belongs to no cell.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <type_traits>
#include <span>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "epsilon.hpp"

namespace manneville {

/// f(x) = x + x^z, reduced by 1 only when it exceeds 1 (so f(x_0) = 1).
inline double manneville_apply(double z, double x)
{
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("manneville_apply: x outside [0,1]");
    const double y = x + std::pow(x, z);
    return y > 1.0 ? y - 1.0 : y;
}

namespace detail {

/// Root of x + x^z = target on [0, target] by bisection, run until the
/// bracket stops shrinking.
inline double lower_preimage(double z, double target)
{
    double lo = 0.0;
    double hi = target;
    for (int it = 0; it < 2200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double r = mid + std::pow(mid, z) - target;
        if (r == 0.0) return mid;
        (r > 0.0 ? hi : lo) = mid;
    }
    const double rl = std::abs(lo + std::pow(lo, z) - target);
    const double rh = std::abs(hi + std::pow(hi, z) - target);
    return rl <= rh ? lo : hi;
}

} // namespace detail

/// x_0 > x_1 > ... > x_K with x_0 + x_0^z = 1 and x_k + x_k^z = x_{k-1}.
class preimage_ladder {
public:
    preimage_ladder(double z, std::size_t depth, double tol = 1e-13) : z_(z), tol_(tol)
    {
        if (!(z > 1.0)) throw std::domain_error("preimage_ladder: z must exceed 1");
        if (!(tol > 0.0)) throw std::domain_error("preimage_ladder: tol must be positive");
        points_.reserve(depth + 1);
        double target = 1.0;
        for (std::size_t k = 0; k <= depth; ++k) {
            const double x = detail::lower_preimage(z, target);
            if (!(x > 0.0 && x < target)) throw std::logic_error("preimage_ladder: bisection failed to bracket");
            points_.push_back(x);
            if (!(residual(k) < tol)) throw std::logic_error("preimage_ladder: residual above tolerance");
            target = x;
        }
    }

    double z() const noexcept { return z_; }
    double tol() const noexcept { return tol_; }
    std::size_t depth() const noexcept { return points_.size() - 1; }
    std::span<const double> points() const noexcept { return points_; }

    /// x_k for k >= -1 (x_{-1} = 1). Past the stored depth the ladder is
    /// continued on the fly from x_K, at O(k - K) cost.
    double point(std::int64_t k) const
    {
        if (k < -1) throw std::domain_error("preimage_ladder: index must be >= -1");
        if (k == -1) return 1.0;
        if (static_cast<std::size_t>(k) < points_.size()) return points_[static_cast<std::size_t>(k)];
        double x = points_.back();
        for (std::size_t j = points_.size(); j <= static_cast<std::size_t>(k); ++j)
            x = detail::lower_preimage(z_, x);
        return x;
    }

    /// |x_k + x_k^z - x_{k-1}|.
    double residual(std::size_t k) const
    {
        const double prev = k == 0 ? 1.0 : points_[k - 1];
        const double x = points_[k];
        return std::abs(x + std::pow(x, z_) - prev);
    }

    /// Index k with x in B_k, using the ladder and, below x_K, the cell shift
    /// f(B_k) = B_{k-1}.
    std::uint64_t cell_of(double x) const
    {
        if (!(x > 0.0 && x <= 1.0)) throw std::domain_error("cell_index: x must lie in (0,1]");
        if (x > points_.back()) {
            // first k with x_k < x on a decreasing array
            auto it = std::partition_point(points_.begin(), points_.end(), [x](double p) { return p >= x; });
            return static_cast<std::uint64_t>(it - points_.begin());
        }
        std::uint64_t steps = 0;
        double y = x;
        while (y <= points_.back()) {
            const double next = y + std::pow(y, z_);
            if (next == y) throw std::domain_error("cell_index: x too close to the fixed point to resolve");
            y = next;
            ++steps;
        }
        return steps + cell_of(y);
    }

private:
    double z_;
    double tol_;
    std::vector<double> points_;
};

inline preimage_ladder make_preimage_ladder(double z, std::size_t K, double tol = 1e-13)
{
    return preimage_ladder(z, K, tol);
}

// ---------------------------------------------------------------------------
// Piecewise-linear map

/// L on A_k (k >= 1) is the affine bijection onto A_{k-1}; on A_0 it is the
/// affine bijection onto (0,1]; L(0) = 0. For non-double Real a lazily grown
/// table of eps_k avoids recomputing multiprecision powers; that table makes
/// such instances unsafe to share between threads. linear_map<double> is stateless.
template <class Real = double>
class linear_map {
public:
    explicit linear_map(epsilon_sequence seq) : seq_(seq) {}

    const epsilon_sequence& sequence() const noexcept { return seq_; }

    /// eps_k in working precision, k >= -1.
    Real eps(std::int64_t k) const
    {
        if (k < -1) throw std::domain_error("epsilon: index must be >= -1");
        if constexpr (std::is_same_v<Real, double>) {
            return seq_(k);
        }
        const auto slot = static_cast<std::size_t>(k + 1);
        if (slot < table_.size()) return table_[slot];
        if (slot > max_cached) return seq_.template at<Real>(k);
        while (table_.size() <= slot) table_.push_back(seq_.template at<Real>(static_cast<std::int64_t>(table_.size()) - 1));
        return table_[slot];
    }

    /// i with x in A_i, x in (0,1].
    std::int64_t cell(const Real& x) const
    {
        if (!(x > Real(0) && x <= Real(1))) throw std::domain_error("cell_index: x must lie in (0,1]");
        const double xd = static_cast<double>(x);
        std::uint64_t guess = seq_.first_below(xd > 0.0 ? xd : 0x1p-1074);
        if (guess >= saturated_index) throw std::domain_error("cell_index: x too close to 0 to resolve");
        auto k = static_cast<std::int64_t>(guess);
        // settle exactly against the working-precision table
        while (k > 0 && eps(k - 1) < x) --k;
        while (!(eps(k) < x)) ++k;
        return k;
    }

    Real operator()(const Real& x) const
    {
        if (!(x >= Real(0) && x <= Real(1))) throw std::domain_error("linear_apply: x outside [0,1]");
        if (x == Real(0)) return Real(0);
        const std::int64_t k = cell(x);
        if (k == 0) {
            const Real e0 = eps(0);
            return (x - e0) / (Real(1) - e0);
        }
        const Real lo = eps(k);
        const Real mid = eps(k - 1);
        const Real hi = eps(k - 2);
        return (hi - mid) / (mid - lo) * (x - lo) + mid;
    }

private:
    static constexpr std::size_t max_cached = std::size_t{1} << 22;
    epsilon_sequence seq_;
    mutable std::vector<Real> table_;
};

/// L(x) for the map built on seq.
inline double linear_apply(const epsilon_sequence& seq, double x) { return linear_map<double>(seq)(x); }

// ---------------------------------------------------------------------------
// Either map behind one value type

class interval_map {
public:
    struct manneville_params {
        double z;
        std::shared_ptr<const preimage_ladder> ladder;
    };
    struct linear_params {
        epsilon_sequence seq;
    };

    static interval_map manneville(double z, std::size_t ladder_depth = 4096)
    {
        return interval_map(manneville_params{z, std::make_shared<const preimage_ladder>(z, ladder_depth)});
    }

    static interval_map linear(const epsilon_sequence& seq) { return interval_map(linear_params{seq}); }

    bool is_manneville() const noexcept { return std::holds_alternative<manneville_params>(params_); }
    const manneville_params& as_manneville() const { return std::get<manneville_params>(params_); }
    const linear_params& as_linear() const { return std::get<linear_params>(params_); }

    double apply(double x) const
    {
        if (is_manneville()) return manneville_apply(as_manneville().z, x);
        return linear_.value()(x);
    }

    std::uint64_t cell_index(double x) const
    {
        if (x == 0.0) throw std::domain_error("cell_index: 0 is the fixed point and lies in no cell");
        if (is_manneville()) return as_manneville().ladder->cell_of(x);
        return static_cast<std::uint64_t>(linear_.value().cell(x));
    }

    /// eps_k (linear) or x_k (Manneville): the lower end of cell k.
    double cell_floor(std::int64_t k) const
    {
        if (is_manneville()) return as_manneville().ladder->point(k);
        return as_linear().seq(k);
    }

private:
    explicit interval_map(manneville_params p) : params_(std::move(p)) {}
    explicit interval_map(linear_params p) : params_(p), linear_(linear_map<double>(p.seq)) {}

    std::variant<manneville_params, linear_params> params_;
    std::optional<linear_map<double>> linear_;
};

inline std::uint64_t cell_index(const interval_map& map, double x) { return map.cell_index(x); }

// ---------------------------------------------------------------------------
// Finite-depth conjugacy h with h o f = L o h

/// Piecewise-linear approximation of the homeomorphism h carrying B-cylinders
/// onto A-cylinders. Depth 1 interpolates h(x_k) = eps_k; each further level
/// uses h = (L^{k+1}|A_k)^{-1} o h o f^{k+1} on B_k, where the inverse branch
/// keeps the relative position inside A_k.
class conjugacy {
public:
    conjugacy(const epsilon_sequence& seq, double z, std::size_t ladder_depth = 4096)
        : seq_(seq), ladder_(std::make_shared<const preimage_ladder>(z, ladder_depth))
    {
    }

    conjugacy(const epsilon_sequence& seq, std::shared_ptr<const preimage_ladder> ladder)
        : seq_(seq), ladder_(std::move(ladder))
    {
    }

    const preimage_ladder& ladder() const noexcept { return *ladder_; }

    double operator()(double x, int depth) const
    {
        if (depth < 1) throw std::domain_error("conjugacy_approx: depth must be >= 1");
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        const auto k = static_cast<std::int64_t>(ladder_->cell_of(x));
        const auto K = static_cast<std::int64_t>(ladder_->depth());
        if (k > K) {
            // below the stored ladder: f^{k-K} carries B_k onto B_K and L^{k-K}
            // carries A_k affinely onto A_K, so h keeps the relative position
            double y = x;
            for (std::int64_t j = 0; j < k - K; ++j) y = y + std::pow(y, ladder_->z());
            const double width = seq_(K - 1) - seq_(K);
            if (!(width > 0.0)) return seq_(k); // A_K underflowed to a point
            const double t = ((*this)(y, depth) - seq_(K)) / width;
            return seq_(k) + std::clamp(t, 0.0, 1.0) * (seq_(k - 1) - seq_(k));
        }
        const double x_hi = ladder_->point(k - 1);
        const double e_lo = seq_(k);
        const double e_hi = seq_(k - 1);
        if (x == x_hi) return e_hi;
        if (depth == 1) {
            const double x_lo = ladder_->point(k);
            return e_lo + (x - x_lo) / (x_hi - x_lo) * (e_hi - e_lo);
        }
        double y = x;
        for (std::int64_t j = 0; j <= k; ++j) y = manneville_apply(ladder_->z(), std::clamp(y, 0.0, 1.0));
        return e_lo + (*this)(y, depth - 1) * (e_hi - e_lo);
    }

private:
    epsilon_sequence seq_;
    std::shared_ptr<const preimage_ladder> ladder_;
};

inline double conjugacy_approx(const epsilon_sequence& seq, double z, double x, int depth)
{
    return conjugacy(seq, z)(x, depth);
}

} // namespace manneville
