// oscdec.hpp: coherent-state algebra, the damped-pendulum decoherence factor
// with its system-size exponent K, and an exact fixed-step integrator for one
// oscillator linearly coupled to a finite bath (amplitude flow of the quadratic
// Hamiltonian restricted to coherent states).
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "decolab/constants.hpp"
#include "decolab/qcore.hpp"

namespace decolab {

struct CoherentState {
    cx alpha{0.0, 0.0};  // eigenvalue of the lowering operator, dimensionless
};

// <a|b> = exp(-(|a-b|^2 + i phi)/2), phi = Im(a b* - a* b). Equivalent to
// exp(-(|a|^2+|b|^2)/2 + conj(a) b).
inline cx coherent_overlap(const CoherentState& a, const CoherentState& b) {
    const cx d = a.alpha - b.alpha;
    const double phi = std::imag(a.alpha * std::conj(b.alpha) - std::conj(a.alpha) * b.alpha);
    return std::exp(cx(-0.5 * std::norm(d), -0.5 * phi));
}

struct PendulumParams {
    double mass = 0.0;         // kg
    double omega = 0.0;        // rad/s
    double gamma = 0.0;        // 1/s, amplitude damping rate
    double delta_omega = 0.0;  // rad/s, environment-induced frequency shift
    double x01 = 0.0;          // m, initial amplitude of branch 1 (p0 = 0)
    double x02 = 0.0;          // m, initial amplitude of branch 2 (p0 = 0)
    double hbar = constants::hbar;

    void validate() const {
        if (!(mass > 0.0 && omega > 0.0 && gamma > 0.0 && hbar > 0.0))
            throw std::invalid_argument("PendulumParams: mass, omega, gamma, hbar must be positive");
    }
};

inline CoherentState alpha_from_phase_space(const PendulumParams& p, double x0, double p0) {
    const double s = std::sqrt(2.0 * p.mass * p.hbar * p.omega);
    return {cx(p.mass * p.omega * x0, p0) / s};
}

// alpha(t) = alpha(0) exp(-i(omega+delta_omega)t - gamma t). The fluctuating
// drive term is omitted; integrate_bath is the exact alternative.
inline CoherentState damped_alpha(const CoherentState& a0, const PendulumParams& p, double t) {
    if (t < 0.0) throw std::invalid_argument("damped_alpha: t must be nonnegative");
    return {a0.alpha * std::exp(cx(-p.gamma * t, -(p.omega + p.delta_omega) * t))};
}

// Exponent of the long-time decoherence floor: K = |a1(0)-a2(0)|^2 / 2 with
// the branch amplitudes taken at p0 = 0, equal to m omega |x01-x02|^2 / (4 hbar).
inline double pendulum_exponent(const PendulumParams& p) {
    const cx d = alpha_from_phase_space(p, p.x01, 0.0).alpha - alpha_from_phase_space(p, p.x02, 0.0).alpha;
    return 0.5 * std::norm(d);
}

struct PendulumDecoherence {
    double log_magnitude = 0.0;  // exact even when magnitude underflows
    double magnitude = 1.0;
    double phase = 0.0;  // convention-dependent, not contract-bearing
};

// Overlap of the two bath branches entangled with the damped pendulum:
// magnitude exp(-K (1 - e^(-2 gamma t))). The phase aggregates per-mode
// contributions that depend on the unspecified bath realization; it is
// reported as the relative phase of the damped branch amplitudes.
inline PendulumDecoherence pendulum_decoherence_factor(const PendulumParams& p, double t) {
    p.validate();
    if (t < 0.0) throw std::invalid_argument("pendulum_decoherence_factor: t must be nonnegative");
    PendulumDecoherence out;
    const double k = pendulum_exponent(p);
    out.log_magnitude = -k * (1.0 - std::exp(-2.0 * p.gamma * t));
    out.magnitude = std::exp(out.log_magnitude);
    const cx a1 = damped_alpha(alpha_from_phase_space(p, p.x01, 0.0), p, t).alpha;
    const cx a2 = damped_alpha(alpha_from_phase_space(p, p.x02, 0.0), p, t).alpha;
    out.phase = std::imag(a1 * std::conj(a2));
    return out;
}

struct DecoherenceRatio {
    double k = 0.0;
    double tau_d_over_tau = 0.0;  // 1/K; infinite when the branches coincide
};

inline DecoherenceRatio decoherence_ratio(const PendulumParams& p) {
    p.validate();
    DecoherenceRatio r;
    r.k = pendulum_exponent(p);
    r.tau_d_over_tau = r.k > 0.0 ? 1.0 / r.k : std::numeric_limits<double>::infinity();
    return r;
}

// Amplitudes of one system oscillator (alpha, frequency omega) coupled to bath
// modes: i da/dt = omega a + sum_k lambda_k b_k, i db_k/dt = omega_k b_k + conj(lambda_k) a.
struct BathODEState {
    cx alpha{0.0, 0.0};
    double omega = 0.0;  // system frequency, rad/s
    std::vector<cx> betas;
    std::vector<double> omegas;
    std::vector<cx> lambdas;

    void validate() const {
        if (betas.size() != omegas.size() || betas.size() != lambdas.size())
            throw std::invalid_argument("BathODEState: sequence lengths disagree");
    }
    double total_excitation() const {
        double s = std::norm(alpha);
        for (const cx& b : betas) s += std::norm(b);
        return s;
    }
};

// Weisskopf-Wigner bilinear conj(a).amps dot b.amps, conserved by the joint flow.
inline cx ww_invariant(const BathODEState& a, const BathODEState& b) {
    if (a.betas.size() != b.betas.size())
        throw std::invalid_argument("ww_invariant: bath sizes disagree");
    cx s = std::conj(a.alpha) * b.alpha;
    for (std::size_t k = 0; k < a.betas.size(); ++k) s += std::conj(a.betas[k]) * b.betas[k];
    return s;
}

namespace detail {

inline void bath_deriv(const BathODEState& s, const std::vector<cx>& y, std::vector<cx>& dy) {
    const std::size_t n = s.betas.size();
    cx acc = s.omega * y[0];
    for (std::size_t k = 0; k < n; ++k) acc += s.lambdas[k] * y[k + 1];
    dy[0] = cx(0.0, -1.0) * acc;
    for (std::size_t k = 0; k < n; ++k)
        dy[k + 1] = cx(0.0, -1.0) * (s.omegas[k] * y[k + 1] + std::conj(s.lambdas[k]) * y[0]);
}

}  // namespace detail

struct BathTrajectory {
    std::vector<double> times;
    std::vector<BathODEState> states;  // parallel to times
};

// Classical 4th-order Runge-Kutta with a fixed step chosen so the final time is
// hit exactly. Total excitation is monitored every step; drift beyond 1e-4 of
// the initial value aborts the run. Snapshots are recorded every record_every
// steps plus the initial and final states.
inline BathTrajectory integrate_bath(const BathODEState& s0, double t, double dt,
                                     std::size_t record_every = 1) {
    s0.validate();
    if (!(dt > 0.0) || t < 0.0) throw std::invalid_argument("integrate_bath: need dt > 0 and t >= 0");
    if (record_every == 0) record_every = 1;

    if (!s0.omegas.empty()) {
        double lo = s0.omegas.front(), hi = s0.omegas.front(), lmax = 0.0;
        for (double w : s0.omegas) { lo = std::min(lo, w); hi = std::max(hi, w); }
        for (const cx& l : s0.lambdas) lmax = std::max(lmax, std::abs(l));
        if (s0.omegas.size() > 1 && lmax > (hi - lo))
            std::fprintf(stderr, "integrate_bath: couplings exceed the bath frequency spread; "
                                 "weak-coupling decay estimates do not apply\n");
    }

    const std::size_t n = s0.betas.size();
    const std::size_t steps = t > 0.0 ? static_cast<std::size_t>(std::ceil(t / dt - 1e-9)) : 0;
    const double h = steps > 0 ? t / static_cast<double>(steps) : 0.0;

    std::vector<cx> y(n + 1), k1(n + 1), k2(n + 1), k3(n + 1), k4(n + 1), tmp(n + 1);
    y[0] = s0.alpha;
    for (std::size_t k = 0; k < n; ++k) y[k + 1] = s0.betas[k];

    const double exc0 = s0.total_excitation();
    auto snapshot = [&](const std::vector<cx>& v) {
        BathODEState s = s0;
        s.alpha = v[0];
        for (std::size_t k = 0; k < n; ++k) s.betas[k] = v[k + 1];
        return s;
    };

    BathTrajectory traj;
    traj.states.reserve(steps / record_every + 2);
    traj.times.push_back(0.0);
    traj.states.push_back(snapshot(y));
    for (std::size_t step = 0; step < steps; ++step) {
        detail::bath_deriv(s0, y, k1);
        for (std::size_t i = 0; i <= n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        detail::bath_deriv(s0, tmp, k2);
        for (std::size_t i = 0; i <= n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        detail::bath_deriv(s0, tmp, k3);
        for (std::size_t i = 0; i <= n; ++i) tmp[i] = y[i] + h * k3[i];
        detail::bath_deriv(s0, tmp, k4);
        for (std::size_t i = 0; i <= n; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        if (exc0 > 0.0) {
            double exc = std::norm(y[0]);
            for (std::size_t k = 0; k < n; ++k) exc += std::norm(y[k + 1]);
            if (std::abs(exc / exc0 - 1.0) > 1e-4)
                throw std::runtime_error("integrate_bath: invariant drift exceeds 1e-4; step too large");
        }
        if ((step + 1) % record_every == 0 || step + 1 == steps) {
            traj.times.push_back(static_cast<double>(step + 1) * h);
            traj.states.push_back(snapshot(y));
        }
    }
    return traj;
}

// Fermi golden-rule amplitude decay rate pi |lambda|^2 / spacing, evaluated at
// the bath mode nearest the system frequency. This spectral-density bridge is a
// modeling choice: it assumes a locally flat band with uniform level spacing.
// |alpha(t)| then decays as exp(-rate * t); energy decays at twice the rate.
inline double golden_rule_rate(const BathODEState& s) {
    s.validate();
    if (s.omegas.size() < 2) throw std::invalid_argument("golden_rule_rate: need at least 2 bath modes");
    std::size_t best = 0;
    for (std::size_t k = 1; k < s.omegas.size(); ++k)
        if (std::abs(s.omegas[k] - s.omega) < std::abs(s.omegas[best] - s.omega)) best = k;
    double spacing;
    if (best == 0) spacing = std::abs(s.omegas[1] - s.omegas[0]);
    else if (best + 1 == s.omegas.size()) spacing = std::abs(s.omegas[best] - s.omegas[best - 1]);
    else spacing = 0.5 * std::abs(s.omegas[best + 1] - s.omegas[best - 1]);
    if (!(spacing > 0.0)) throw std::invalid_argument("golden_rule_rate: degenerate bath spectrum");
    return 3.14159265358979323846 * std::norm(s.lambdas[best]) / spacing;
}

}  // namespace decolab
