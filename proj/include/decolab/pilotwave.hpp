// pilotwave.hpp: guiding-equation velocity field on a 1-D grid and trajectory
// ensembles under free Schroedinger evolution. Velocities use centered finite
// differences in the ratio form (hbar/m) Im(psi* psi') / |psi|^2, which equals
// the probability current over the density; node regions below a relative
// density floor fall back to one-sided upwinded differences and persistent
// residents are excluded from the ensemble.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "decolab/constants.hpp"
#include "decolab/grid1d.hpp"
#include "decolab/parallel.hpp"

namespace decolab {

struct Trajectory {
    std::vector<double> times;
    std::vector<double> positions;

    void validate() const {
        if (times.size() != positions.size())
            throw std::invalid_argument("Trajectory: times/positions length mismatch");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw std::invalid_argument("Trajectory: times must be strictly increasing");
    }
};

struct EnsembleResult {
    std::vector<Trajectory> trajectories;  // survivors only
    std::size_t node_excluded = 0;         // dropped after persistent node contact
};

namespace detail {

inline cx grid_slope(const Wavefunction1D& psi, std::size_t i) {
    const std::size_t n = psi.size();
    if (i == 0) return (psi.amps[1] - psi.amps[0]) / psi.dx;
    if (i + 1 == n) return (psi.amps[n - 1] - psi.amps[n - 2]) / psi.dx;
    return (psi.amps[i + 1] - psi.amps[i - 1]) / (2.0 * psi.dx);
}

// Per-cell velocities with a node mask; linear interpolation between cells.
struct VelocityField {
    double x_first = 0.0;
    double dx = 0.0;
    std::vector<double> v;
    std::vector<char> ok;

    double eval(double x, bool& node_hit) const {
        const double t = (x - x_first) / dx;
        std::ptrdiff_t j = static_cast<std::ptrdiff_t>(std::floor(t));
        j = std::max<std::ptrdiff_t>(0, std::min<std::ptrdiff_t>(j, static_cast<std::ptrdiff_t>(v.size()) - 2));
        const std::size_t lo = static_cast<std::size_t>(j);
        const double w = std::max(0.0, std::min(1.0, t - static_cast<double>(j)));
        node_hit = !ok[lo] || !ok[lo + 1];
        return (1.0 - w) * v[lo] + w * v[lo + 1];
    }
};

inline VelocityField make_velocity_field(const Wavefunction1D& psi, double mass, double hbar,
                                         double floor_frac) {
    const std::size_t n = psi.size();
    VelocityField f;
    f.x_first = psi.x_first;
    f.dx = psi.dx;
    f.v.assign(n, 0.0);
    f.ok.assign(n, 1);

    std::vector<double> rho(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        rho[i] = std::norm(psi.amps[i]);
        peak = std::max(peak, rho[i]);
    }
    const double floor_abs = floor_frac * peak;
    const double scale = hbar / mass;

    for (std::size_t i = 0; i < n; ++i) {
        if (rho[i] >= floor_abs && rho[i] > 0.0) {
            f.v[i] = scale * std::imag(std::conj(psi.amps[i]) * grid_slope(psi, i)) / rho[i];
            continue;
        }
        // Node cell: take the one-sided difference anchored at the denser
        // neighbor; a dead neighborhood marks the cell as a node region.
        const std::size_t left = i > 0 ? i - 1 : i;
        const std::size_t right = i + 1 < n ? i + 1 : i;
        const std::size_t j = rho[left] >= rho[right] ? left : right;
        if (j != i && rho[j] >= floor_abs && rho[j] > 0.0) {
            const cx d = (psi.amps[j] - psi.amps[i]) /
                         ((static_cast<double>(j) - static_cast<double>(i)) * psi.dx);
            f.v[i] = scale * std::imag(std::conj(psi.amps[j]) * d) / rho[j];
        } else {
            f.ok[i] = 0;
        }
    }
    return f;
}

}  // namespace detail

// Guiding-equation velocity at the grid cell nearest x. Normalization-free
// (invariant under psi -> c psi); throws in node regions below the density
// floor and outside the grid span.
inline double bohm_velocity(const Wavefunction1D& psi, double x, double mass,
                            double hbar = constants::hbar, double floor_frac = 1e-12) {
    if (!(psi.dx > 0.0) || psi.size() < 3)
        throw std::invalid_argument("bohm_velocity: need dx > 0 and at least 3 grid points");
    if (!(mass > 0.0)) throw std::invalid_argument("bohm_velocity: mass must be positive");
    const double last = psi.position(psi.size() - 1);
    if (!(x >= psi.x_first && x <= last))
        throw std::out_of_range("bohm_velocity: x outside the grid");

    const std::size_t i = static_cast<std::size_t>(
        std::min<double>(std::round((x - psi.x_first) / psi.dx),
                         static_cast<double>(psi.size() - 1)));
    double peak = 0.0;
    for (const cx& a : psi.amps) peak = std::max(peak, std::norm(a));
    const double rho = std::norm(psi.amps[i]);
    if (!(rho >= floor_frac * peak) || !(rho > 0.0))
        throw std::domain_error("bohm_velocity: node region below the density floor");
    return hbar / mass * std::imag(std::conj(psi.amps[i]) * detail::grid_slope(psi, i)) / rho;
}

// Probability current J = (hbar / 2 m i)(psi* psi' - psi (psi*)') per grid
// cell, written in the explicit two-term form so J / rho is an independent
// route to the guiding velocity.
inline std::vector<double> probability_current(const Wavefunction1D& psi, double mass,
                                               double hbar = constants::hbar) {
    if (!(psi.dx > 0.0) || psi.size() < 3)
        throw std::invalid_argument("probability_current: need dx > 0 and at least 3 grid points");
    if (!(mass > 0.0)) throw std::invalid_argument("probability_current: mass must be positive");
    std::vector<double> j(psi.size());
    const cx two_i(0.0, 2.0);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const cx d = detail::grid_slope(psi, i);
        const cx expr = std::conj(psi.amps[i]) * d - psi.amps[i] * std::conj(d);
        j[i] = hbar / mass * (expr / two_i).real();
    }
    return j;
}

// Integrates the ensemble through the time-dependent velocity field with the
// classical 4th-order Runge-Kutta scheme; the wavefunction advances in exact
// half steps so every stage sees its own snapshot. A trajectory inside a node
// region for more than kNodePersistence consecutive steps is excluded.
inline EnsembleResult evolve_trajectories_from(const Wavefunction1D& psi0, double mass, double T,
                                               double dt, const std::vector<double>& x0,
                                               double hbar = constants::hbar,
                                               std::size_t record_stride = 1) {
    psi0.validate();
    if (!(mass > 0.0) || !(T > 0.0) || !(dt > 0.0) || record_stride < 1)
        throw std::invalid_argument("evolve_trajectories: need positive mass, T, dt and stride >= 1");
    if (x0.empty()) throw std::invalid_argument("evolve_trajectories: empty initial ensemble");

    constexpr std::size_t kNodePersistence = 3;
    constexpr double kFloorFrac = 1e-12;
    const std::size_t n = x0.size();
    const std::size_t steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));

    std::vector<double> pos = x0;
    std::vector<std::size_t> node_run(n, 0);
    std::vector<char> alive(n, 1);
    std::vector<double> rec_times{0.0};
    std::vector<std::vector<double>> rec_pos{pos};

    Wavefunction1D psi_t = psi0;
    double t = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
        const double h = std::min(dt, T - t);
        if (!(h > 0.0)) break;
        Wavefunction1D psi_half = psi_t;
        free_evolve_step(psi_half, mass, h / 2.0, hbar);
        Wavefunction1D psi_next = psi_half;
        free_evolve_step(psi_next, mass, h / 2.0, hbar);

        const detail::VelocityField f0 = detail::make_velocity_field(psi_t, mass, hbar, kFloorFrac);
        const detail::VelocityField f1 =
            detail::make_velocity_field(psi_half, mass, hbar, kFloorFrac);
        const detail::VelocityField f2 =
            detail::make_velocity_field(psi_next, mass, hbar, kFloorFrac);

        parallel_for(n, [&](std::size_t i) {
            if (!alive[i]) return;
            bool hit = false, stage_hit = false;
            const double k1 = f0.eval(pos[i], stage_hit);
            hit |= stage_hit;
            const double k2 = f1.eval(pos[i] + 0.5 * h * k1, stage_hit);
            hit |= stage_hit;
            const double k3 = f1.eval(pos[i] + 0.5 * h * k2, stage_hit);
            hit |= stage_hit;
            const double k4 = f2.eval(pos[i] + h * k3, stage_hit);
            hit |= stage_hit;
            pos[i] += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            node_run[i] = hit ? node_run[i] + 1 : 0;
            if (node_run[i] > kNodePersistence) alive[i] = 0;
        });

        psi_t = std::move(psi_next);
        t += h;
        if ((s + 1) % record_stride == 0 || s + 1 == steps) {
            rec_times.push_back(t);
            rec_pos.push_back(pos);
        }
    }

    EnsembleResult out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!alive[i]) {
            ++out.node_excluded;
            continue;
        }
        Trajectory traj;
        traj.times = rec_times;
        traj.positions.reserve(rec_times.size());
        for (const auto& snapshot : rec_pos) traj.positions.push_back(snapshot[i]);
        out.trajectories.push_back(std::move(traj));
    }
    return out;
}

// Ensemble with initial positions drawn from |psi0|^2, the equivariance
// precondition.
template <typename Rng>
EnsembleResult evolve_trajectories(const Wavefunction1D& psi0, double mass, double T, double dt,
                                   std::size_t n_traj, Rng& g, double hbar = constants::hbar,
                                   std::size_t record_stride = 1) {
    if (n_traj < 1) throw std::invalid_argument("evolve_trajectories: need n_traj >= 1");
    std::vector<double> x0(n_traj);
    for (double& x : x0) x = sample_position(psi0, g);
    return evolve_trajectories_from(psi0, mass, T, dt, x0, hbar, record_stride);
}

}  // namespace decolab
