// grid1d.hpp: complex wavefunction on a uniform 1-D position grid, plus the
// exact free-particle propagator (split-step Fourier, periodic boundary).
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "decolab/constants.hpp"
#include "decolab/fft.hpp"
#include "decolab/qcore.hpp"
#include "decolab/rng.hpp"

namespace decolab {

struct Wavefunction1D {
    double x_first = 0.0;
    double dx = 0.0;
    std::vector<cx> amps;

    double position(std::size_t i) const { return x_first + static_cast<double>(i) * dx; }
    std::size_t size() const { return amps.size(); }
    double length() const { return dx * static_cast<double>(amps.size()); }

    double norm_squared() const {
        double s = 0.0;
        for (const cx& a : amps) s += std::norm(a);
        return s * dx;
    }

    void validate() const {
        if (!(dx > 0.0) || amps.size() < 2)
            throw std::invalid_argument("Wavefunction1D: need dx > 0 and at least 2 points");
        if (std::abs(norm_squared() - 1.0) > 1e-8)
            throw std::invalid_argument("Wavefunction1D: norm deviates beyond 1e-8");
    }

    void normalize() {
        const double n2 = norm_squared();
        if (!(n2 > 0.0)) throw std::runtime_error("Wavefunction1D: cannot normalize zero state");
        const double s = 1.0 / std::sqrt(n2);
        for (cx& a : amps) a *= s;
    }
};

// Normalized Gaussian packet exp(ik0 x) exp(-(x-c)^2/(4 sigma^2)) on the grid.
inline Wavefunction1D gaussian_packet(std::size_t n, double x_first, double dx, double center,
                                      double sigma, double k0 = 0.0) {
    Wavefunction1D psi;
    psi.x_first = x_first;
    psi.dx = dx;
    psi.amps.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = psi.position(i);
        const double arg = (x - center) / (2.0 * sigma);
        psi.amps[i] = std::polar(std::exp(-arg * arg), k0 * x);
    }
    psi.normalize();
    return psi;
}

// Draws a position from |psi|^2 dx by inverse CDF over cells, uniform within
// the selected cell.
template <typename Rng>
double sample_position(const Wavefunction1D& psi, Rng& g) {
    double total = 0.0;
    for (const cx& a : psi.amps) total += std::norm(a);
    if (!(total > 0.0)) throw std::runtime_error("sample_position: zero density");
    double target = uniform_unit(g) * total;
    std::size_t i = 0;
    for (; i + 1 < psi.amps.size(); ++i) {
        const double cell = std::norm(psi.amps[i]);
        if (target <= cell) break;
        target -= cell;
    }
    return psi.position(i) + (uniform_unit(g) - 0.5) * psi.dx;
}

// Exact free step: multiply each momentum mode by exp(-i hbar k^2 dt / (2 m)).
// Periodic boundary; the caller keeps support away from the wrap seam.
inline void free_evolve_step(Wavefunction1D& psi, double mass, double dt,
                             double hbar = constants::hbar) {
    const std::size_t n = psi.amps.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("free_evolve_step: grid length must be a power of two");
    if (!(mass > 0.0)) throw std::invalid_argument("free_evolve_step: mass must be positive");
    fft_forward(psi.amps);
    const double dk = 2.0 * 3.14159265358979323846 / psi.length();
    for (std::size_t i = 0; i < n; ++i) {
        // FFT bin i holds wavenumber i*dk for i < n/2, (i-n)*dk above.
        const double k = dk * (i < n / 2 ? static_cast<double>(i)
                                         : static_cast<double>(i) - static_cast<double>(n));
        psi.amps[i] *= std::polar(1.0, -hbar * k * k * dt / (2.0 * mass));
    }
    fft_inverse(psi.amps);
}

}  // namespace decolab
