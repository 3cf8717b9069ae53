// scatterdec.hpp: environmental-scattering decoherence. Decay factor and
// decoherence time for a particle bathed in scatterers, off-diagonal damping of
// position-basis density matrices, and the analytic two-Gaussian double slit.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "decolab/constants.hpp"
#include "decolab/qcore.hpp"

namespace decolab {

struct ScatterEnvParams {
    double eta = 0.0;         // scatterer number density, m^-3
    double v = 0.0;           // mean scatterer speed, m/s
    double sigma_t = 0.0;     // total cross section, m^2
    double c_geom = 1.0;      // dimensionless geometric constant
    double lambda_env = 0.0;  // environment de Broglie wavelength, m

    void validate() const {
        if (!(eta > 0.0 && v > 0.0 && sigma_t > 0.0 && c_geom > 0.0 && lambda_env > 0.0))
            throw std::invalid_argument("ScatterEnvParams: all parameters must be positive");
    }
};

inline double decoherence_time(const ScatterEnvParams& p) {
    p.validate();
    return 1.0 / (p.c_geom * p.eta * p.sigma_t * p.v);
}

// Off-diagonal survival factor between positions x1 and x2 after dt. Separations
// beyond the environment wavelength saturate at exp(-dt/tau_d); separations a
// single scatterer cannot resolve decay with the quadratic (dx/lambda)^2 law.
// The interpolating exponent scale 1 - exp(-(dx/lambda)^2) has both limits and
// keeps the entrywise map completely positive: exp(-c(1 - exp(-r^2/lambda^2)))
// expands as a positive combination of Gaussian kernels, each positive
// semidefinite, so the Schur product with any density matrix stays positive.
// A hard min(1, (dx/lambda)^2) cutoff fails that requirement measurably.
inline double decay_factor(const ScatterEnvParams& p, double x1, double x2, double dt) {
    if (dt < 0.0) throw std::invalid_argument("decay_factor: dt must be nonnegative");
    if (x1 == x2) return 1.0;
    const double ratio = std::abs(x1 - x2) / p.lambda_env;
    const double resolve = -std::expm1(-ratio * ratio);
    return std::exp(-dt / decoherence_time(p) * resolve);
}

// Density matrix over a uniform position grid; trace = sum of diagonal * dx.
struct PositionDensityMatrix {
    double x_first = 0.0;
    double dx = 0.0;
    Eigen::MatrixXcd entries;

    double position(std::size_t i) const { return x_first + static_cast<double>(i) * dx; }
    std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }

    void validate() const {
        if (!(dx > 0.0) || entries.rows() != entries.cols() || entries.rows() < 1)
            throw std::invalid_argument("PositionDensityMatrix: bad grid or block");
        const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
        if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw std::invalid_argument("PositionDensityMatrix: not Hermitian");
        if (std::abs(entries.trace().real() * dx - 1.0) > 1e-8)
            throw std::invalid_argument("PositionDensityMatrix: trace * dx != 1");
    }
};

// Multiplies each entry by the positional decay factor; diagonal untouched.
inline PositionDensityMatrix apply_scatter_decoherence(const PositionDensityMatrix& rho,
                                                       const ScatterEnvParams& p, double dt) {
    PositionDensityMatrix out = rho;
    const auto n = rho.entries.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out.entries(i, j) *= decay_factor(p, rho.position(static_cast<std::size_t>(i)),
                                              rho.position(static_cast<std::size_t>(j)), dt);
    return out;
}

struct DoubleSlitParams {
    double packet_sep = 0.0;    // m, center-to-center
    double packet_width = 0.0;  // m, initial position spread (std dev)
    double mass = 0.0;          // kg
    double t = 0.0;             // s, free flight time to the screen
    double coherence = 1.0;     // in [0, 1], scales the cross terms
    double hbar = constants::hbar;

    void validate() const {
        if (!(packet_sep > 0.0 && packet_width > 0.0 && mass > 0.0 && t >= 0.0))
            throw std::invalid_argument("DoubleSlitParams: geometry must be positive");
        if (coherence < 0.0 || coherence > 1.0)
            throw std::invalid_argument("DoubleSlitParams: coherence outside [0, 1]");
    }
};

struct IntensityProfile {
    double x_first = 0.0;
    double dx = 0.0;
    std::vector<double> intensity;
    std::vector<double> envelope;  // incoherent sum of the two packets, same grid

    double position(std::size_t i) const { return x_first + static_cast<double>(i) * dx; }
};

// Free evolution of psi0(x) = (2 pi s^2)^{-1/4} exp(-(x-c)^2 / (4 s^2)).
inline cx free_gaussian(double x, double center, double sigma0, double mass, double t, double hbar) {
    const cx spread(1.0, hbar * t / (2.0 * mass * sigma0 * sigma0));
    const double d = x - center;
    const cx amp = std::pow(6.283185307179586476925287 * sigma0 * sigma0, -0.25) / std::sqrt(spread);
    return amp * std::exp(-d * d / (4.0 * sigma0 * sigma0 * spread));
}

// Screen intensity |c1 psi1 + c2 psi2|^2 for an equal-weight two-Gaussian
// superposition, with the interference term scaled by the coherence parameter.
inline IntensityProfile double_slit_pattern(const DoubleSlitParams& p, std::size_t n_points = 0) {
    p.validate();
    const double spread_t =
        p.packet_width * std::sqrt(1.0 + std::pow(p.hbar * p.t / (2.0 * p.mass * p.packet_width * p.packet_width), 2));
    const double half_range = 0.5 * p.packet_sep + 6.0 * spread_t;
    double dx = spread_t / 16.0;
    if (p.t > 0.0) {
        const double fringe = constants::h * p.t / (p.mass * p.packet_sep);
        dx = std::min(dx, fringe / 16.0);
    }
    std::size_t n = n_points > 0 ? n_points
                                 : static_cast<std::size_t>(std::ceil(2.0 * half_range / dx)) + 1;
    if (n > (1u << 21)) n = 1u << 21;
    dx = 2.0 * half_range / static_cast<double>(n - 1);

    // Unitary evolution preserves the branch overlap, so the normalization of
    // the coherent sum is known in closed form from the t = 0 packets.
    const double overlap0 = std::exp(-p.packet_sep * p.packet_sep / (8.0 * p.packet_width * p.packet_width));
    const double norm = 1.0 + p.coherence * overlap0;

    IntensityProfile out;
    out.x_first = -half_range;
    out.dx = dx;
    out.intensity.resize(n);
    out.envelope.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = out.position(i);
        const cx p1 = free_gaussian(x, -0.5 * p.packet_sep, p.packet_width, p.mass, p.t, p.hbar);
        const cx p2 = free_gaussian(x, +0.5 * p.packet_sep, p.packet_width, p.mass, p.t, p.hbar);
        const double cross = 2.0 * std::real(p1 * std::conj(p2));
        out.envelope[i] = 0.5 * std::norm(p1) + 0.5 * std::norm(p2);
        out.intensity[i] = (out.envelope[i] + 0.5 * p.coherence * cross) / norm;
    }
    return out;
}

// Fringe visibility as the contrast of intensity/envelope where the envelope
// carries weight. Normalizing out the packet envelope isolates the oscillatory
// interference term: the result is 0 for coherence 0 and ~1 for coherence 1,
// independent of how much the envelope itself varies across the screen.
inline double fringe_visibility(const IntensityProfile& profile) {
    double peak = 0.0;
    for (double e : profile.envelope) peak = std::max(peak, e);
    if (peak <= 0.0) return 0.0;
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < profile.intensity.size(); ++i) {
        if (profile.envelope[i] < 1e-3 * peak) continue;
        const double r = profile.intensity[i] / profile.envelope[i];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    if (hi <= 0.0) return 0.0;
    return (hi - lo) / (hi + lo);
}

}  // namespace decolab
