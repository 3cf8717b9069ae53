// spinbath.hpp: bit-by-bit spin-environment decoherence. Exact product
// decoherence factor z(t), its squared modulus, the concentrated-coupling
// Gaussian approximation, and the factorial recurrence scale.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "decolab/qcore.hpp"
#include "decolab/rng.hpp"

namespace decolab {

struct SpinBathParams {
    std::vector<double> couplings;              // g_k, rad/s
    std::vector<std::pair<cx, cx>> env_amps;    // (a_k, b_k), each pair normalized
    cx alpha{1.0, 0.0}, beta{0.0, 0.0};         // system amplitudes

    std::size_t n() const { return couplings.size(); }

    void validate() const {
        if (couplings.empty()) throw std::invalid_argument("SpinBathParams: empty bath");
        if (env_amps.size() != couplings.size())
            throw std::invalid_argument("SpinBathParams: amplitude/coupling count mismatch");
        for (const auto& [a, b] : env_amps)
            if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-10)
                throw std::invalid_argument("SpinBathParams: environment pair not normalized");
        if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10)
            throw std::invalid_argument("SpinBathParams: system amplitudes not normalized");
    }

    // Seeded default bath: couplings uniform on (0, g_max], environment
    // amplitudes uniform on the Bloch sphere.
    static SpinBathParams random(std::uint64_t seed, std::size_t n, double g_max = 1.0) {
        auto g = substream(seed, 0x5b);
        SpinBathParams p;
        p.couplings.reserve(n);
        p.env_amps.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            p.couplings.push_back(g_max * uniform_unit(g));
            const double cos_theta = uniform_in(g, -1.0, 1.0);
            const double phi = uniform_in(g, 0.0, 6.283185307179586476925287);
            const double half = std::acos(cos_theta) / 2.0;
            p.env_amps.emplace_back(cx(std::cos(half), 0.0),
                                    std::polar(std::sin(half), phi));
        }
        const double r = 1.0 / std::sqrt(2.0);
        p.alpha = cx(r, 0.0);
        p.beta = cx(r, 0.0);
        return p;
    }

    static SpinBathParams uniform(std::size_t n, double g, cx a, cx b) {
        SpinBathParams p;
        p.couplings.assign(n, g);
        p.env_amps.assign(n, {a, b});
        const double r = 1.0 / std::sqrt(2.0);
        p.alpha = cx(r, 0.0);
        p.beta = cx(r, 0.0);
        return p;
    }
};

namespace detail {

// Product of per-spin factors with log-domain rescaling: whenever the running
// magnitude drops below 1e-150 the exponent is banked, so phase information
// survives products that would otherwise underflow (all factors have |w| <= 1,
// so overflow cannot occur). Engaged for n > 64 per the module contract.
template <typename Factor>
cx rescaled_product(std::size_t n, Factor factor) {
    cx prod(1.0, 0.0);
    double log_offset = 0.0;
    const bool rescale = n > 64;
    for (std::size_t k = 0; k < n; ++k) {
        prod *= factor(k);
        if (rescale && std::norm(prod) < 1e-300 && prod != cx(0.0, 0.0)) {
            const double mag = std::abs(prod);
            log_offset += std::log(mag);
            prod /= mag;
        }
    }
    return std::exp(log_offset) * prod;
}

}  // namespace detail

// z(t) = prod_k (|a_k|^2 e^{-2 i g_k t} + |b_k|^2 e^{+2 i g_k t}).
inline cx decoherence_factor(const SpinBathParams& p, double t) {
    return detail::rescaled_product(p.n(), [&](std::size_t k) {
        const double pa = std::norm(p.env_amps[k].first);
        const double pb = std::norm(p.env_amps[k].second);
        const double th = 2.0 * p.couplings[k] * t;
        // pa e^{-i th} + pb e^{+i th} = cos(th) + i (pb - pa) sin(th)
        return cx(std::cos(th), (pb - pa) * std::sin(th));
    });
}

// |z(t)|^2 = prod_k { 1 + [ (|a_k|^2-|b_k|^2)^2 - 1 ] sin^2(2 g_k t) },
// accumulated as a sum of logs for n > 64.
inline double modulus_squared(const SpinBathParams& p, double t) {
    const std::size_t n = p.n();
    auto factor = [&](std::size_t k) {
        const double d = std::norm(p.env_amps[k].first) - std::norm(p.env_amps[k].second);
        const double s = std::sin(2.0 * p.couplings[k] * t);
        return 1.0 + (d * d - 1.0) * s * s;
    };
    if (n <= 64) {
        double prod = 1.0;
        for (std::size_t k = 0; k < n; ++k) prod *= factor(k);
        return prod;
    }
    double log_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double f = factor(k);
        if (f <= 0.0) return 0.0;
        log_sum += std::log(f);
    }
    return std::exp(log_sum);
}

struct GaussianBathMoments {
    double s2;   // s_n^2 = sum_k 4 |a_k|^2 |b_k|^2 g_k^2
    double b;    // B_n  = sum_k g_k (|a_k|^2 - |b_k|^2)
};

inline GaussianBathMoments gaussian_moments(const SpinBathParams& p) {
    GaussianBathMoments m{0.0, 0.0};
    for (std::size_t k = 0; k < p.n(); ++k) {
        const double pa = std::norm(p.env_amps[k].first);
        const double pb = std::norm(p.env_amps[k].second);
        m.s2 += 4.0 * pa * pb * p.couplings[k] * p.couplings[k];
        m.b += p.couplings[k] * (pa - pb);
    }
    return m;
}

// Concentrated-coupling approximation z(t) ~ e^{i B_n t} e^{-s_n^2 t^2 / 2}.
inline cx gaussian_factor(const SpinBathParams& p, double t) {
    const auto m = gaussian_moments(p);
    return std::polar(std::exp(-0.5 * m.s2 * t * t), m.b * t);
}

// ln(n!) by log-gamma: the recurrence time grows proportionally to n!, so only
// the log-scale estimate is meaningful.
inline double recurrence_order(std::size_t n) {
    if (n < 1) throw std::invalid_argument("recurrence_order: n >= 1 required");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

// Reduced 2x2 spin matrix: diagonal fixed by the system amplitudes (the
// interaction commutes with the system observable), off-diagonals damped by z.
inline DensityMatrix reduced_spin_matrix(const SpinBathParams& p, double t) {
    const cx z = decoherence_factor(p, t);
    Eigen::MatrixXcd m(2, 2);
    m(0, 0) = std::norm(p.alpha);
    m(1, 1) = std::norm(p.beta);
    m(0, 1) = p.alpha * std::conj(p.beta) * z;
    m(1, 0) = std::conj(m(0, 1));
    return DensityMatrix(std::move(m), FactorShape{2});
}

}  // namespace decolab
