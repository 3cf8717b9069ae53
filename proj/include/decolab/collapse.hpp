// collapse.hpp: objective-collapse machinery. GRW localization hits and
// Poisson-timed trajectories, the gravity-weighted Diosi norm, Penrose
// superposition lifetimes, the van Wezel non-unitary step, and the double-well
// WKB localization ratio.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "decolab/constants.hpp"
#include "decolab/grid1d.hpp"
#include "decolab/qcore.hpp"
#include "decolab/rng.hpp"

namespace decolab {

struct GRWParams {
    double d = 1e-7;          // localization width, m (canonical GRW default)
    double lam = 1e-16;       // hit rate per particle, 1/s (canonical GRW default)
    std::size_t n_particles = 1;

    // lam = 0 is allowed: the no-collapse limit is a contract case.
    void validate() const {
        if (!(d > 0.0) || lam < 0.0 || n_particles < 1)
            throw std::invalid_argument("GRWParams: d > 0, lam >= 0, n_particles >= 1 required");
    }
};

struct CollapseEvent {
    double t = 0.0;
    double center = 0.0;
    double branch_weight_before = 0.0;  // squared norm of the hit-multiplied state, in [0,1]
};

// Squared norm of psi multiplied by the localization Gaussian at X, before
// renormalization. For a branch concentrated within d of X this is the branch
// mass; P(X) = weight / (sqrt(pi) d) is the collapse-center density.
inline double grw_hit_weight(const Wavefunction1D& psi, double X, double d) {
    double s = 0.0;
    for (std::size_t i = 0; i < psi.amps.size(); ++i) {
        const double u = (psi.position(i) - X) / d;
        s += std::norm(psi.amps[i]) * std::exp(-u * u);
    }
    return s * psi.dx;
}

inline Wavefunction1D grw_hit(const Wavefunction1D& psi, double X, double d) {
    if (!(d > 0.0)) throw std::invalid_argument("grw_hit: d must be positive");
    if (X < psi.x_first || X > psi.position(psi.amps.size() - 1))
        throw std::invalid_argument("grw_hit: X outside the grid");
    Wavefunction1D out = psi;
    for (std::size_t i = 0; i < out.amps.size(); ++i) {
        const double u = (out.position(i) - X) / d;
        out.amps[i] *= std::exp(-0.5 * u * u);
    }
    const double n2 = out.norm_squared();
    if (!(n2 > 1e-280)) throw std::runtime_error("grw_hit: norm underflow, hit in a zero-amplitude region");
    const double s = 1.0 / std::sqrt(n2);
    for (cx& a : out.amps) a *= s;
    return out;
}

// Draws the hit center from P(X) proportional to the collapsed-state squared
// norm. Sampling is exact: x0 ~ |psi|^2, then X | x0 ~ Normal(x0, d^2/2),
// whose X-marginal is the Gaussian-smoothed density.
template <typename Rng>
double grw_sample_center(const Wavefunction1D& psi, double d, Rng& g) {
    const double x0 = sample_position(psi, g);
    return x0 + d / std::sqrt(2.0) * normal_unit(g);
}

struct GRWTrajectoryResult {
    Wavefunction1D psi;
    std::vector<CollapseEvent> events;
};

// Free unitary evolution interleaved with hits at exact Poisson arrival times
// of total rate n_particles * lam. The unitary step lands on arrival times
// exactly (split-step propagation is exact for the free Hamiltonian at any dt).
template <typename Rng>
GRWTrajectoryResult grw_trajectory(const Wavefunction1D& psi0, const GRWParams& p, double mass,
                                   double T, double dt, Rng& g, double hbar = constants::hbar) {
    p.validate();
    psi0.validate();
    if (!(dt > 0.0) || T < 0.0) throw std::invalid_argument("grw_trajectory: need dt > 0, T >= 0");
    const double rate = static_cast<double>(p.n_particles) * p.lam;
    if (rate * dt > 0.1)
        std::fprintf(stderr, "grw_trajectory: dt does not resolve the mean hit interval "
                             "(rate*dt = %.3g)\n", rate * dt);

    GRWTrajectoryResult out{psi0, {}};
    double t = 0.0;
    double next_hit = rate > 0.0 ? -std::log(uniform_unit(g)) / rate
                                 : std::numeric_limits<double>::infinity();
    while (t < T) {
        const double t_target = std::min({t + dt, next_hit, T});
        if (t_target > t) free_evolve_step(out.psi, mass, t_target - t, hbar);
        t = t_target;
        if (t == next_hit && t <= T) {
            const double X = grw_sample_center(out.psi, p.d, g);
            const double w = grw_hit_weight(out.psi, X, p.d);
            out.psi = grw_hit(out.psi, X, p.d);
            out.events.push_back({t, X, w});
            next_hit = t - std::log(uniform_unit(g)) / rate;
        }
    }
    return out;
}

struct MassDensity {
    std::vector<std::array<double, 3>> points;  // m
    std::vector<double> weights;                // kg

    void validate() const {
        if (points.size() != weights.size())
            throw std::invalid_argument("MassDensity: points/weights length mismatch");
        double total = 0.0;
        for (double w : weights) total += w;
        if (!(total > 0.0)) throw std::invalid_argument("MassDensity: total mass must be positive");
    }
};

inline double pair_distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Mutual Coulomb-type kernel of two identical uniform balls of radius r0 at
// center distance r: 1/r beyond contact, and for overlapping balls the closed
// form (1/r0)(6/5 - 2x^2 + (3/2)x^3 - (1/5)x^5) with x = r/(2 r0), which meets
// 1/r in value and slope at x = 1 and gives the coincident limit 6/(5 r0).
inline double coulomb_ball_kernel(double r, double r0) {
    if (r0 > 0.0 && r < 2.0 * r0) {
        const double x = r / (2.0 * r0);
        const double x2 = x * x;
        return (1.2 - 2.0 * x2 + 1.5 * x2 * x - 0.2 * x2 * x2 * x) / r0;
    }
    if (r > 0.0) return 1.0 / r;
    throw std::invalid_argument("coulomb_ball_kernel: coincident points without regularization");
}

// G sum_{i != j} w_i w_j K(|r_i - r_j|) with close pairs smeared to uniform
// balls of radius r0. Self pairs are excluded: for sampled clouds their
// contribution vanishes in the refinement limit.
inline double diosi_norm(const MassDensity& f, double r0, double newton_g = constants::G) {
    if (f.points.empty()) return 0.0;  // vanishing density, vanishing norm
    f.validate();
    double s = 0.0;
    for (std::size_t i = 0; i < f.points.size(); ++i)
        for (std::size_t j = i + 1; j < f.points.size(); ++j)
            s += f.weights[i] * f.weights[j] * coulomb_ball_kernel(pair_distance(f.points[i], f.points[j]), r0);
    return newton_g * 2.0 * s;
}

struct PenroseResult {
    double delta_e = 0.0;  // J
    double tau = 0.0;      // s, hbar / delta_e
    double r0 = 0.0;       // smearing radius used
    double tau_r0_half = 0.0;    // sensitivity: lifetime with r0 / 2
    double tau_r0_double = 0.0;  // sensitivity: lifetime with r0 * 2
};

namespace detail {

// Full double sum over the difference density, self pairs included: the
// gravitational self-energy of (rho1 - rho2) needs the i = j ball self-term
// (6/5) w^2 / r0, which carries the whole answer for single-lump densities.
inline double penrose_delta_e(const MassDensity& rho1, const MassDensity& rho2, double r0,
                              double newton_g) {
    std::vector<std::array<double, 3>> pts = rho1.points;
    std::vector<double> w = rho1.weights;
    pts.insert(pts.end(), rho2.points.begin(), rho2.points.end());
    for (double v : rho2.weights) w.push_back(-v);
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            s += w[i] * w[j] * coulomb_ball_kernel(pair_distance(pts[i], pts[j]), r0);
    return 4.0 * 3.14159265358979323846 * newton_g * std::abs(s);
}

}  // namespace detail

// Lifetime tau = hbar / delta_e of a superposition of two mass configurations,
// with delta_e the 4 pi G weighted self-energy magnitude of their difference.
// The smearing radius r0 regularizes point lumps; its influence is reported via
// lifetimes at r0/2 and 2 r0.
inline PenroseResult penrose_lifetime(const MassDensity& rho1, const MassDensity& rho2, double r0,
                                      double newton_g = constants::G,
                                      double hbar = constants::hbar) {
    rho1.validate();
    rho2.validate();
    if (!(r0 > 0.0)) throw std::invalid_argument("penrose_lifetime: r0 must be positive");
    PenroseResult out;
    out.r0 = r0;
    out.delta_e = detail::penrose_delta_e(rho1, rho2, r0, newton_g);
    const double de_half = detail::penrose_delta_e(rho1, rho2, 0.5 * r0, newton_g);
    const double de_double = detail::penrose_delta_e(rho1, rho2, 2.0 * r0, newton_g);
    const double inf = std::numeric_limits<double>::infinity();
    out.tau = out.delta_e > 0.0 ? hbar / out.delta_e : inf;
    out.tau_r0_half = de_half > 0.0 ? hbar / de_half : inf;
    out.tau_r0_double = de_double > 0.0 ? hbar / de_double : inf;
    return out;
}

struct VanWezelParams {
    double mass = 0.0;         // kg
    double plate_width = 0.0;  // m, the L in the attenuation coefficient
    double hbar = constants::hbar;
    double newton_g = constants::G;  // set 0 to disable the non-unitary term
    bool kinetic = true;             // include the free Hamiltonian in the step

    void validate() const {
        if (!(mass > 0.0 && plate_width > 0.0 && hbar > 0.0) || newton_g < 0.0)
            throw std::invalid_argument("VanWezelParams: mass, plate_width, hbar > 0; G >= 0");
    }
    // Attenuation coefficient G m^2 / (2 L^3 hbar), units 1/(m^2 s).
    double kappa() const {
        return newton_g * mass * mass / (2.0 * plate_width * plate_width * plate_width * hbar);
    }
};

// One Strang step of d psi/dt = -(i/hbar)[H - i G m^2/(2 L^3) (x - xi)^2] psi.
// The anti-Hermitian term is position-diagonal so its half steps are exact
// multiplications; the output is deliberately left unnormalized.
inline Wavefunction1D van_wezel_step(const Wavefunction1D& psi, const VanWezelParams& p, double xi,
                                     double dt) {
    p.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("van_wezel_step: dt must be positive");
    Wavefunction1D out = psi;
    const double k = p.kappa();
    auto damp = [&](double fraction) {
        if (k == 0.0) return;
        for (std::size_t i = 0; i < out.amps.size(); ++i) {
            const double u = out.position(i) - xi;
            out.amps[i] *= std::exp(-k * u * u * dt * fraction);
        }
    };
    if (p.kinetic) {
        damp(0.5);
        free_evolve_step(out, p.mass, dt, p.hbar);
        damp(0.5);
    } else {
        damp(1.0);
    }
    return out;
}

struct PotentialProfile {
    double x_first = 0.0;
    double dx = 0.0;
    std::vector<double> values;  // J

    double position(std::size_t i) const { return x_first + static_cast<double>(i) * dx; }
};

// WKB ratio of ground-state amplitudes across a barrier:
// exp(-(1/hbar) integral_{a1}^{a2} sqrt(2 m V0(x)) dx), trapezoid quadrature
// with linearly interpolated partial end cells.
inline double double_well_ratio(const PotentialProfile& v, double mass, double a1, double a2,
                                double hbar = constants::hbar) {
    if (!(v.dx > 0.0) || v.values.size() < 2)
        throw std::invalid_argument("double_well_ratio: bad potential grid");
    const double x_last = v.position(v.values.size() - 1);
    if (!(a1 < a2) || a1 < v.x_first || a2 > x_last)
        throw std::invalid_argument("double_well_ratio: need a1 < a2 inside the grid");
    if (!(mass > 0.0 && hbar > 0.0))
        throw std::invalid_argument("double_well_ratio: mass and hbar must be positive");

    auto value_at = [&](double x) {
        const double s = (x - v.x_first) / v.dx;
        const std::size_t i = std::min(static_cast<std::size_t>(s), v.values.size() - 2);
        const double frac = s - static_cast<double>(i);
        return v.values[i] * (1.0 - frac) + v.values[i + 1] * frac;
    };
    auto integrand = [&](double pot, double x) {
        if (pot < -1e-12 * (std::abs(pot) + 1.0))
            throw std::invalid_argument("double_well_ratio: negative potential in the integration window");
        (void)x;
        return std::sqrt(2.0 * mass * std::max(pot, 0.0));
    };

    const std::size_t i_lo = static_cast<std::size_t>(std::ceil((a1 - v.x_first) / v.dx - 1e-12));
    const std::size_t i_hi = static_cast<std::size_t>(std::floor((a2 - v.x_first) / v.dx + 1e-12));
    double integral = 0.0;
    if (i_lo > i_hi) {
        // both endpoints inside one cell
        integral = 0.5 * (integrand(value_at(a1), a1) + integrand(value_at(a2), a2)) * (a2 - a1);
    } else {
        double prev_x = a1;
        double prev_f = integrand(value_at(a1), a1);
        for (std::size_t i = i_lo; i <= i_hi; ++i) {
            const double x = v.position(i);
            const double f = integrand(v.values[i], x);
            integral += 0.5 * (prev_f + f) * (x - prev_x);
            prev_x = x;
            prev_f = f;
        }
        integral += 0.5 * (prev_f + integrand(value_at(a2), a2)) * (a2 - prev_x);
    }
    return std::exp(-integral / hbar);
}

}  // namespace decolab
