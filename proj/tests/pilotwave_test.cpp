#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "decolab/grid1d.hpp"
#include "decolab/pilotwave.hpp"
#include "decolab/rng.hpp"

using decolab::bohm_velocity;
using decolab::cx;
using decolab::EnsembleResult;
using decolab::evolve_trajectories;
using decolab::evolve_trajectories_from;
using decolab::gaussian_packet;
using decolab::probability_current;
using decolab::Trajectory;
using decolab::Wavefunction1D;

namespace {

const double kPi = 3.14159265358979323846;

// Empirical KS distance of a sample against a normal CDF.
double ks_against_normal(std::vector<double> xs, double mean, double sd) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = 0.5 * std::erfc(-(xs[i] - mean) / (sd * std::sqrt(2.0)));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

Wavefunction1D plane_wave(std::size_t n, double length, int mode) {
    Wavefunction1D psi;
    psi.x_first = 0.0;
    psi.dx = length / static_cast<double>(n);
    psi.amps.resize(n);
    const double k = 2.0 * kPi * static_cast<double>(mode) / length;
    const double amp = 1.0 / std::sqrt(length);
    for (std::size_t i = 0; i < n; ++i) psi.amps[i] = std::polar(amp, k * psi.position(i));
    return psi;
}

}  // namespace

TEST_CASE("trajectory container invariants", "[pilotwave]") {
    Trajectory good;
    good.times = {0.0, 0.5, 1.5};
    good.positions = {1.0, 1.1, 1.3};
    REQUIRE_NOTHROW(good.validate());

    Trajectory short_pos = good;
    short_pos.positions.pop_back();
    REQUIRE_THROWS_AS(short_pos.validate(), std::invalid_argument);

    Trajectory stalled = good;
    stalled.times = {0.0, 0.5, 0.5};
    REQUIRE_THROWS_AS(stalled.validate(), std::invalid_argument);
}

TEST_CASE("velocity field basics", "[pilotwave]") {
    SECTION("real wavefunction gives zero velocity") {
        const Wavefunction1D psi = gaussian_packet(512, -16.0, 32.0 / 512.0, 0.0, 2.0);
        for (double x : {-3.0, -0.7, 0.0, 1.9, 4.2})
            REQUIRE(std::abs(bohm_velocity(psi, x, 1.0, 1.0)) < 1e-14);
    }
    SECTION("plane wave moves at hbar k / m") {
        const int mode = 2;
        const Wavefunction1D psi = plane_wave(8192, 100.0, mode);
        const double k = 2.0 * kPi * mode / 100.0;
        for (double mass : {1.0, 2.5}) {
            const double expected = k / mass;
            for (double x : {11.0, 47.3, 83.6}) {
                const double v = bohm_velocity(psi, x, mass, 1.0);
                REQUIRE(std::abs(v - expected) < 1e-6 * std::abs(expected));
            }
        }
    }
    SECTION("invariant under constant rescaling of psi") {
        Wavefunction1D psi = gaussian_packet(1024, -24.0, 48.0 / 1024.0, -2.0, 1.5, 0.8);
        decolab::free_evolve_step(psi, 1.0, 1.2, 1.0);
        Wavefunction1D scaled = psi;
        for (cx& a : scaled.amps) a *= cx(1.7, -0.9);
        for (double x : {-4.0, -1.1, 0.3, 2.6}) {
            const double v = bohm_velocity(psi, x, 1.0, 1.0);
            const double w = bohm_velocity(scaled, x, 1.0, 1.0);
            REQUIRE(std::abs(v - w) < 1e-10);
        }
    }
    SECTION("input validation") {
        const Wavefunction1D psi = gaussian_packet(512, -16.0, 32.0 / 512.0, 0.0, 2.0);
        REQUIRE_THROWS_AS(bohm_velocity(psi, 99.0, 1.0, 1.0), std::out_of_range);
        REQUIRE_THROWS_AS(bohm_velocity(psi, 0.0, 0.0, 1.0), std::invalid_argument);
    }
    SECTION("node region is rejected") {
        // Odd packet x exp(-x^2 / 4 sigma^2): exact node at the origin.
        Wavefunction1D psi;
        psi.x_first = -16.0;
        psi.dx = 32.0 / 1024.0;
        psi.amps.resize(1024);
        for (std::size_t i = 0; i < 1024; ++i) {
            const double x = psi.position(i);
            psi.amps[i] = x * std::exp(-x * x / 8.0);
        }
        psi.normalize();
        REQUIRE_THROWS_AS(bohm_velocity(psi, 0.0, 1.0, 1.0), std::domain_error);
        REQUIRE(std::abs(bohm_velocity(psi, 3.0, 1.0, 1.0)) < 1e-12);
    }
}

TEST_CASE("guiding velocity equals probability current over density", "[pilotwave]") {
    Wavefunction1D psi = gaussian_packet(2048, -50.0, 100.0 / 2048.0, -10.0, 2.0, 1.0);
    decolab::free_evolve_step(psi, 1.0, 3.0, 1.0);

    const std::vector<double> j = probability_current(psi, 1.0, 1.0);
    double peak = 0.0;
    for (const cx& a : psi.amps) peak = std::max(peak, std::norm(a));
    std::size_t checked = 0;
    for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
        const double rho = std::norm(psi.amps[i]);
        if (rho < 1e-9 * peak) continue;
        const double v = bohm_velocity(psi, psi.position(i), 1.0, 1.0);
        REQUIRE(std::abs(v - j[i] / rho) < 1e-8);
        ++checked;
    }
    REQUIRE(checked > 500);
}

TEST_CASE("stationary sine mode leaves trajectories static", "[pilotwave]") {
    Wavefunction1D psi;
    psi.x_first = 0.0;
    psi.dx = 64.0 / 1024.0;
    psi.amps.resize(1024);
    const double k = 2.0 * kPi * 3.0 / 64.0;
    for (std::size_t i = 0; i < 1024; ++i) psi.amps[i] = std::sin(k * psi.position(i));
    psi.normalize();

    const std::vector<double> x0 = {5.3, 16.0, 37.0, 58.6};
    for (double x : x0) REQUIRE(std::abs(bohm_velocity(psi, x, 1.0, 1.0)) < 1e-10);

    const EnsembleResult res = evolve_trajectories_from(psi, 1.0, 2.0, 0.05, x0, 1.0);
    REQUIRE(res.node_excluded == 0);
    REQUIRE(res.trajectories.size() == x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) {
        res.trajectories[i].validate();
        for (double p : res.trajectories[i].positions)
            REQUIRE(std::abs(p - x0[i]) < 1e-8);
    }
}

TEST_CASE("persistent node residents are flagged and excluded", "[pilotwave]") {
    const std::size_t n = 2048;
    const double dx = 64.0 / static_cast<double>(n);
    const Wavefunction1D left = gaussian_packet(n, -32.0, dx, -12.0, 1.0);
    const Wavefunction1D right = gaussian_packet(n, -32.0, dx, 12.0, 1.0);
    Wavefunction1D psi = left;
    for (std::size_t i = 0; i < n; ++i) psi.amps[i] += right.amps[i];
    psi.normalize();

    const std::vector<double> x0 = {-12.0, 0.0, 12.0};
    const EnsembleResult res = evolve_trajectories_from(psi, 1.0, 0.2, 0.02, x0, 1.0);
    REQUIRE(res.node_excluded == 1);
    REQUIRE(res.trajectories.size() == 2);
    REQUIRE(std::abs(res.trajectories[0].positions.back() + 12.0) < 0.05);
    REQUIRE(std::abs(res.trajectories[1].positions.back() - 12.0) < 0.05);
}

TEST_CASE("free packet ensemble stays |psi_t|^2 distributed", "[pilotwave]") {
    const std::size_t n = 4096;
    const double span = 200.0, sigma = 2.0, k0 = 1.0, center = -30.0, tmax = 30.0;
    const Wavefunction1D psi0 = gaussian_packet(n, -100.0, span / n, center, sigma, k0);

    auto g = decolab::substream(424214, 0);
    const EnsembleResult res = evolve_trajectories(psi0, 1.0, tmax, 0.05, 10000, g, 1.0, 100);
    REQUIRE(res.node_excluded == 0);
    REQUIRE(res.trajectories.size() == 10000);
    const std::size_t n_rec = res.trajectories[0].times.size();
    REQUIRE(n_rec == 7);  // t = 0, 5, ..., 30

    SECTION("KS distance against the spreading Gaussian at every checkpoint") {
        for (std::size_t r = 0; r < n_rec; ++r) {
            const double t = res.trajectories[0].times[r];
            std::vector<double> xs;
            xs.reserve(res.trajectories.size());
            for (const Trajectory& traj : res.trajectories) xs.push_back(traj.positions[r]);
            const double mean = center + k0 * t;
            const double sd = std::sqrt(sigma * sigma + std::pow(t / (2.0 * sigma), 2));
            const double d = ks_against_normal(std::move(xs), mean, sd);
            INFO("checkpoint t = " << t);
            REQUIRE(d < 0.03);
            if (r + 1 == n_rec) REQUIRE(d < 0.02);
        }
    }
    SECTION("trajectories never cross") {
        std::vector<std::size_t> order(res.trajectories.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return res.trajectories[a].positions[0] < res.trajectories[b].positions[0];
        });
        for (std::size_t r = 1; r < n_rec; ++r)
            for (std::size_t i = 1; i < order.size(); ++i)
                REQUIRE(res.trajectories[order[i - 1]].positions[r] <=
                        res.trajectories[order[i]].positions[r] + 1e-9);
    }
}

TEST_CASE("two-particle velocity depends on the other particle only when entangled",
          "[pilotwave]") {
    // Coarse 2-D grid demo: psi(x1, x2) = f(x1) g(x2) + g(x1) f(x2) with
    // counter-propagating packets f and g.
    const std::size_t n = 128;
    const double x_first = -16.0, dx = 0.25, sigma = 1.0, kf = 0.8;
    auto axis = [&](std::size_t i) { return x_first + static_cast<double>(i) * dx; };
    auto f = [&](double x) {
        return std::polar(std::exp(-std::pow((x + 3.0) / (2.0 * sigma), 2)), kf * x);
    };
    auto gfun = [&](double x) {
        return std::polar(std::exp(-std::pow((x - 3.0) / (2.0 * sigma), 2)), -kf * x);
    };

    auto v1_at = [&](auto&& psi_of, std::size_t i1, std::size_t i2) {
        const cx mid = psi_of(axis(i1), axis(i2));
        const cx slope = (psi_of(axis(i1 + 1), axis(i2)) - psi_of(axis(i1 - 1), axis(i2))) /
                         (2.0 * dx);
        return std::imag(std::conj(mid) * slope) / std::norm(mid);
    };

    auto entangled = [&](double x1, double x2) { return f(x1) * gfun(x2) + gfun(x1) * f(x2); };
    auto product = [&](double x1, double x2) { return f(x1) * (gfun(x2) + f(x2)); };

    const std::size_t i_mid = 64;            // x1 = 0
    const std::size_t i_low = 52, i_hi = 76; // x2 = -3 and +3

    const double va = v1_at(entangled, i_mid, i_low);
    const double vb = v1_at(entangled, i_mid, i_hi);
    REQUIRE(std::abs(va + kf) < 0.05);  // branch g(x1) f(x2) dominates
    REQUIRE(std::abs(vb - kf) < 0.05);  // branch f(x1) g(x2) dominates
    REQUIRE(std::abs(va - vb) > 1.0);

    const double pa = v1_at(product, i_mid, i_low);
    const double pb = v1_at(product, i_mid, i_hi);
    REQUIRE(std::abs(pa - pb) < 1e-10);
    (void)n;
}

TEST_CASE("ensemble input validation", "[pilotwave]") {
    const Wavefunction1D psi = gaussian_packet(512, -16.0, 32.0 / 512.0, 0.0, 2.0);
    const std::vector<double> x0 = {0.0};
    const std::vector<double> none;
    REQUIRE_THROWS_AS(evolve_trajectories_from(psi, 1.0, 1.0, 0.1, none, 1.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(evolve_trajectories_from(psi, 1.0, -1.0, 0.1, x0, 1.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(evolve_trajectories_from(psi, 1.0, 1.0, 0.1, x0, 1.0, 0),
                      std::invalid_argument);
}
