#pragma once

// Renewal equation u_0 = 1, u_m = sum_{k=1}^{m} f_k u_{m-k}, solved exactly
// (up to rounding) by online divide-and-conquer convolution: the left half of
// every block is finished first, then its contribution to the right half is
// added with one cyclic FFT product. Cost O(n log^2 n).

#include <bit>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace manneville {
namespace detail {

struct fftw_deleter {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <class T>
using fftw_buffer = std::unique_ptr<T[], fftw_deleter>;

template <class T>
fftw_buffer<T> fftw_alloc(std::size_t n)
{
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (!p) throw std::bad_alloc();
    return fftw_buffer<T>(p);
}

/// Not thread-safe: FFTW planning is global state. One instance per call.
class online_renewal_solver {
public:
    online_renewal_solver(std::span<const double> f, std::size_t count)
        : count_(count), size_(std::bit_ceil(std::max<std::size_t>(count, 2))), f_(size_, 0.0), u_(size_, 0.0),
          acc_(size_, 0.0)
    {
        for (std::size_t k = 1; k < std::min(f.size(), size_); ++k) f_[k] = f[k];
        // prefix_[k] = f_1 + ... + f_k
        prefix_.resize(size_ + 1, 0.0L);
        long double sum = 0.0L, carry = 0.0L;
        for (std::size_t k = 1; k < size_; ++k) {
            const long double y = f_[k] - carry;
            const long double t = sum + y;
            carry = (t - sum) - y;
            sum = t;
            prefix_[k] = sum;
        }
        prefix_[size_] = sum;
    }

    ~online_renewal_solver()
    {
        for (auto& [s, lvl] : levels_) {
            fftw_destroy_plan(lvl.forward);
            fftw_destroy_plan(lvl.backward);
        }
    }

    online_renewal_solver(const online_renewal_solver&) = delete;
    online_renewal_solver& operator=(const online_renewal_solver&) = delete;

    std::vector<double> solve()
    {
        solve(0, size_);
        u_.resize(count_);
        return std::move(u_);
    }

private:
    static constexpr std::size_t leaf = 64;
    static constexpr std::size_t direct_limit = 256;

    struct level {
        fftw_buffer<double> real;
        fftw_buffer<fftw_complex> spectrum;
        fftw_buffer<fftw_complex> kernel; // transform of f[0..S)
        fftw_plan forward = nullptr;
        fftw_plan backward = nullptr;
    };

    void solve(std::size_t l, std::size_t r)
    {
        if (l >= count_) return;
        if (r - l <= leaf) {
            for (std::size_t m = l; m < r && m < count_; ++m) {
                if (m == 0) {
                    u_[0] = 1.0;
                    continue;
                }
                double s = acc_[m];
                for (std::size_t j = l; j < m; ++j) s += f_[m - j] * u_[j];
                u_[m] = s;
            }
            return;
        }
        const std::size_t mid = l + (r - l) / 2;
        solve(l, mid);
        if (mid < count_) contribute(l, mid, r);
        solve(mid, r);
    }

    // acc[m] += sum_{j in [l,mid)} f[m-j] u[j] for m in [mid, r).
    void contribute(std::size_t l, std::size_t mid, std::size_t r)
    {
        const std::size_t S = r - l;
        const std::size_t hi = std::min(r, count_);
        if (S <= direct_limit) {
            for (std::size_t m = mid; m < hi; ++m) {
                double s = 0.0;
                for (std::size_t j = l; j < mid; ++j) s += f_[m - j] * u_[j];
                acc_[m] += s;
            }
            return;
        }
        // Only the deviation of u from its block mean goes through the FFT;
        // the mean times a window sum of f is added from exact prefix sums.
        // FFT rounding scales with the norm of its input, so this keeps
        // near-constant u (the ergodic case) accurate far past 10^6 terms.
        long double mean_acc = 0.0L;
        for (std::size_t j = l; j < mid; ++j) mean_acc += u_[j];
        const double mean = static_cast<double>(mean_acc / static_cast<long double>(mid - l));
        for (std::size_t m = mid; m < hi; ++m)
            acc_[m] += mean * static_cast<double>(prefix_[m - l] - prefix_[m - mid]);

        level& lv = get_level(S);
        double* in = lv.real.get();
        for (std::size_t i = 0; i < mid - l; ++i) in[i] = u_[l + i] - mean;
        for (std::size_t i = mid - l; i < S; ++i) in[i] = 0.0;
        fftw_execute_dft_r2c(lv.forward, in, lv.spectrum.get());
        const std::size_t bins = S / 2 + 1;
        auto* a = reinterpret_cast<std::complex<double>*>(lv.spectrum.get());
        const auto* b = reinterpret_cast<const std::complex<double>*>(lv.kernel.get());
        for (std::size_t i = 0; i < bins; ++i) a[i] *= b[i];
        fftw_execute_dft_c2r(lv.backward, lv.spectrum.get(), in);
        // Cyclic length S aliases only onto indices below mid - l, which are not read.
        const double inv = 1.0 / static_cast<double>(S);
        for (std::size_t m = mid; m < hi; ++m) acc_[m] += in[m - l] * inv;
    }

    level& get_level(std::size_t S)
    {
        auto it = levels_.find(S);
        if (it != levels_.end()) return it->second;
        level lv;
        lv.real = fftw_alloc<double>(S);
        lv.spectrum = fftw_alloc<fftw_complex>(S / 2 + 1);
        lv.kernel = fftw_alloc<fftw_complex>(S / 2 + 1);
        const int n = static_cast<int>(S);
        lv.forward = fftw_plan_dft_r2c_1d(n, lv.real.get(), lv.spectrum.get(), FFTW_ESTIMATE);
        lv.backward = fftw_plan_dft_c2r_1d(n, lv.spectrum.get(), lv.real.get(), FFTW_ESTIMATE);
        if (!lv.forward || !lv.backward) throw std::runtime_error("fftw planning failed");
        for (std::size_t i = 0; i < S; ++i) lv.real[i] = f_[i];
        fftw_execute_dft_r2c(lv.forward, lv.real.get(), lv.kernel.get());
        return levels_.emplace(S, std::move(lv)).first->second;
    }

    std::size_t count_;
    std::size_t size_;
    std::vector<double> f_;
    std::vector<double> u_;
    std::vector<double> acc_;
    std::vector<long double> prefix_;
    std::map<std::size_t, level> levels_;
};

} // namespace detail

/// u_0..u_{count-1} for interarrival masses f (f[0] ignored, f[k] = P[X = k]).
inline std::vector<double> solve_renewal_equation(std::span<const double> f, std::size_t count)
{
    if (count == 0) return {};
    detail::online_renewal_solver solver(f, count);
    return solver.solve();
}

} // namespace manneville
