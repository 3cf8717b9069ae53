// fft.hpp: iterative radix-2 complex FFT. Power-of-two lengths only; callers
// pad. Unitary convention is not used: forward is unscaled, inverse divides by
// n, so inverse(forward(x)) = x.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "decolab/qcore.hpp"

namespace decolab {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

inline void fft_in_place(std::vector<cx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("fft: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * 3.14159265358979323846 / static_cast<double>(len);
        const cx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cx u = a[i + k];
                const cx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (cx& x : a) x /= static_cast<double>(n);
}

}  // namespace detail

inline void fft_forward(std::vector<cx>& a) { detail::fft_in_place(a, false); }
inline void fft_inverse(std::vector<cx>& a) { detail::fft_in_place(a, true); }

}  // namespace decolab
