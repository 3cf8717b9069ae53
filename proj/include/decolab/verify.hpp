// verify.hpp: end-to-end verification suites, one self-contained check per
// claim the library stakes. Each check reports the observed metric against its
// target and tolerance; suites group them for the CLI `verify` subcommand and
// for the standalone verification binary.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "decolab/collapse.hpp"
#include "decolab/constants.hpp"
#include "decolab/envariance.hpp"
#include "decolab/grid1d.hpp"
#include "decolab/nogo.hpp"
#include "decolab/oscdec.hpp"
#include "decolab/pilotwave.hpp"
#include "decolab/presets.hpp"
#include "decolab/qcore.hpp"
#include "decolab/rng.hpp"
#include "decolab/scatterdec.hpp"
#include "decolab/spinbath.hpp"
#include "decolab/vonneumann.hpp"

namespace decolab::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;  // space-separated key=value pairs, no commas
};

namespace detail {

constexpr double kPi = 3.14159265358979323846;

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Phase product (1/2)(z conj) route: prod_k (p_a e^{i g t} + p_b e^{-i g t}).
inline cx single_phase_product(const SpinBathParams& p, double t) {
    cx prod(1.0, 0.0);
    for (std::size_t k = 0; k < p.n(); ++k) {
        const double pa = std::norm(p.env_amps[k].first);
        const double pb = std::norm(p.env_amps[k].second);
        prod *= pa * std::polar(1.0, p.couplings[k] * t) +
                pb * std::polar(1.0, -p.couplings[k] * t);
    }
    return prod;
}

inline Wavefunction1D two_peak(std::size_t n, double x_first, double dx, double c1, double c2,
                               double sigma, double p) {
    const Wavefunction1D g1 = gaussian_packet(n, x_first, dx, c1, sigma);
    const Wavefunction1D g2 = gaussian_packet(n, x_first, dx, c2, sigma);
    Wavefunction1D out = g1;
    for (std::size_t i = 0; i < n; ++i)
        out.amps[i] = std::sqrt(p) * g1.amps[i] + std::sqrt(1.0 - p) * g2.amps[i];
    return out;
}

inline double mass_below(const Wavefunction1D& psi, double x_cut) {
    double s = 0.0;
    for (std::size_t i = 0; i < psi.amps.size(); ++i)
        if (psi.position(i) < x_cut) s += std::norm(psi.amps[i]);
    return s * psi.dx;
}

inline std::array<double, 3> ball_point(std::mt19937_64& g, double radius,
                                        const std::array<double, 3>& center) {
    double v[3];
    double n2 = 0.0;
    for (double& c : v) {
        c = normal_unit(g);
        n2 += c * c;
    }
    const double r = radius * std::cbrt(uniform_unit(g)) / std::sqrt(n2);
    return {center[0] + r * v[0], center[1] + r * v[1], center[2] + r * v[2]};
}

inline BathODEState flat_band_bath(std::size_t n, double omega, double halfwidth, double lambda) {
    BathODEState s;
    s.alpha = cx(1.0, 0.0);
    s.omega = omega;
    s.betas.assign(n, cx(0.0, 0.0));
    s.omegas.resize(n);
    s.lambdas.assign(n, cx(lambda, 0.0));
    const double spacing = 2.0 * halfwidth / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k)
        s.omegas[k] = omega + spacing * (static_cast<double>(k) - 0.5 * static_cast<double>(n - 1));
    return s;
}

inline double ks_against_normal(std::vector<double> xs, double mean, double sd) {
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

inline std::string read_file_bytes(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return f ? ss.str() : std::string("<unreadable:" + p.string() + ">");
}

}  // namespace detail

// 1. Equal-weight mixture vs superposition: <S_x> = 0 on the mixture and
// hbar/2 on the pure state (computed in hbar = 1 units).
inline CriterionResult check_expectations() {
    CriterionResult r{1, "expectations", 0.0, 0.0, 1e-12, false, ""};
    const FactorShape shape({2});
    Eigen::MatrixXcd sx(2, 2);
    sx << cx(0.0, 0.0), cx(0.5, 0.0), cx(0.5, 0.0), cx(0.0, 0.0);
    const Operator op = Operator::whole(sx, shape);

    const double inv = 1.0 / std::sqrt(2.0);
    const StateVector plus({cx(inv, 0.0), cx(inv, 0.0)}, shape);
    const DensityMatrix rho_pure = pure_density(plus);
    const DensityMatrix rho_mix(Eigen::MatrixXcd::Identity(2, 2) * 0.5, shape);

    const double mix_val = expectation(op, rho_mix).real();
    const double pure_val = expectation(op, rho_pure).real();
    r.observed = std::max(std::abs(mix_val), std::abs(pure_val - 0.5));
    r.pass = r.observed <= r.tolerance;
    r.detail = "sx_mix=" + detail::num(mix_val) + " sx_pure=" + detail::num(pure_val);
    return r;
}

// 2. Spin-bath decay, periodicity, and 1/sqrt(n) fluctuation scaling.
inline CriterionResult check_spinbath() {
    CriterionResult r{2, "spinbath", 0.0, 0.0, 1e-3, false, ""};
    const auto p = SpinBathParams::random(424215, 1000);
    r.observed = modulus_squared(p, 1.0);
    const bool decay_ok = r.observed < 1e-3;

    auto pu = SpinBathParams::random(424216, 64);
    for (double& g : pu.couplings) g = 1.0;
    double period_dev = 0.0;
    for (double t : {0.3, 1.1, 2.6})
        period_dev = std::max(period_dev, std::abs(modulus_squared(pu, t + detail::kPi) -
                                                   modulus_squared(pu, t)));
    const bool period_ok = period_dev < 1e-12;

    auto var_of_z = [](std::size_t n, std::uint64_t seed) {
        auto pb = SpinBathParams::random(seed, n);
        for (double& g : pb.couplings) g = 1.0;
        auto g = substream(seed, 99);
        cx mean(0.0, 0.0);
        double mean_sq = 0.0;
        const int samples = 4000;
        for (int i = 0; i < samples; ++i) {
            const double t = uniform_in(g, 0.0, detail::kPi);
            const cx z = decoherence_factor(pb, t);
            mean += z;
            mean_sq += std::norm(z);
        }
        mean /= static_cast<double>(samples);
        return mean_sq / samples - std::norm(mean);
    };
    const double ratio = var_of_z(100, 51) / var_of_z(10000, 52);
    const bool fluct_ok = ratio > 10.0 / 3.0 && ratio < 30.0;

    r.pass = decay_ok && period_ok && fluct_ok;
    r.detail = "abs2_at_1=" + detail::num(r.observed) + " period_dev=" + detail::num(period_dev) +
               " var_ratio=" + detail::num(ratio) + " var_ratio_target=10";
    return r;
}

// 3. Gaussian short-time approximation against the exact phase product for a
// concentrated coupling distribution (n = 500), out to t = 1/s_n.
inline CriterionResult check_gaussian() {
    CriterionResult r{3, "gaussian", 0.0, 0.0, 0.05, false, ""};
    auto g = substream(35, 0);
    SpinBathParams p;
    for (std::size_t k = 0; k < 500; ++k) {
        p.couplings.push_back(1.0 + uniform_in(g, -0.05, 0.05));
        const double cos_theta = uniform_in(g, -1.0, 1.0);
        const double phi = uniform_in(g, 0.0, 2.0 * detail::kPi);
        const double half = std::acos(cos_theta) / 2.0;
        p.env_amps.emplace_back(cx(std::cos(half), 0.0), std::polar(std::sin(half), phi));
    }
    const auto moments = gaussian_moments(p);
    const double t_max = 1.0 / std::sqrt(moments.s2);
    double worst = 0.0;
    for (int i = 1; i <= 20; ++i) {
        const double t = t_max * static_cast<double>(i) / 20.0;
        const cx exact = detail::single_phase_product(p, t);
        const cx approx = gaussian_factor(p, t);
        worst = std::max(worst, std::abs(approx - exact) / std::abs(exact));
    }
    r.observed = worst;
    r.pass = worst < r.tolerance;
    r.detail = "s_n=" + detail::num(std::sqrt(moments.s2)) + " t_max=" + detail::num(t_max);
    return r;
}

// 4. Discrete scattering product vs the exponential decay law for box faces
// holding at least 1e6 cross sections.
inline CriterionResult check_scatter() {
    CriterionResult r{4, "scatter", 0.0, 0.0, 1e-6, false, ""};
    ScatterEnvParams p;
    p.eta = 1e20;
    p.v = 500.0;
    p.sigma_t = 1e-18;
    p.c_geom = 1.0;
    p.lambda_env = 1e-9;
    const double tau = decoherence_time(p);
    double worst = 0.0;
    for (double dt : {0.4 * tau, tau}) {
        const double expo = decay_factor(p, 0.0, 1e-6, dt);
        for (double l2_over_sigma : {1e6, 1e7, 1e8}) {
            const double l2 = l2_over_sigma * p.sigma_t;
            const double hits = p.c_geom * p.eta * l2 * p.v * dt;
            const double product = std::pow(1.0 - p.sigma_t / l2, hits);
            worst = std::max(worst, std::abs(product / expo - 1.0));
        }
    }
    r.observed = worst;
    r.pass = worst < r.tolerance;
    r.detail = "tau_d=" + detail::num(tau);
    return r;
}

// 5. Gram pendulum: K in [1e19, 1e21] (reported as log10 K vs 20 +- 1) and the
// short-time decay factor matching exp(-2 K gamma t) within 1% to t = 0.01/gamma.
inline CriterionResult check_pendulum() {
    CriterionResult r{5, "pendulum", 0.0, 20.0, 1.0, false, ""};
    const Preset& preset = find_preset("omnes-1g");
    PendulumParams p;
    p.mass = preset.param("mass_kg");
    p.omega = 2.0 * detail::kPi / preset.param("period_s");
    p.gamma = preset.param("damping_rate_per_s");
    p.x01 = 0.0;
    p.x02 = preset.param("separation_m");
    const DecoherenceRatio ratio = decoherence_ratio(p);
    r.observed = std::log10(ratio.k);
    const bool k_ok = std::abs(r.observed - r.expected) <= r.tolerance;

    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
        const double t = 0.01 / p.gamma * static_cast<double>(i) / 10.0;
        const double exact = pendulum_decoherence_factor(p, t).log_magnitude;
        const double approx = -2.0 * ratio.k * p.gamma * t;
        worst = std::max(worst, std::abs(exact / approx - 1.0));
    }
    r.pass = k_ok && worst <= 0.01;
    r.detail = "K=" + detail::num(ratio.k) + " tau_d_over_tau=" + detail::num(ratio.tau_d_over_tau) +
               " short_time_dev=" + detail::num(worst);
    return r;
}

// 6. Weisskopf-Wigner bath integration: excitation invariant drift below 1e-8
// for N = 5 and N = 200; the N = 200 flat band decays at the golden-rule rate
// within 20%.
inline CriterionResult check_weisskopf() {
    CriterionResult r{6, "weisskopf", 0.0, 0.0, 1e-8, false, ""};
    double worst_drift = 0.0;
    for (std::size_t n : {std::size_t{5}, std::size_t{200}}) {
        const BathODEState s = detail::flat_band_bath(n, 10.0, 1.0, 0.0126);
        const double gamma = golden_rule_rate(s);
        const double t_max = n == 200 ? 3.0 / gamma : 50.0;
        const auto traj = integrate_bath(s, t_max, 1e-3, 200);
        for (const auto& st : traj.states)
            worst_drift = std::max(worst_drift, std::abs(st.total_excitation() - 1.0));
    }
    r.observed = worst_drift;

    const BathODEState s = detail::flat_band_bath(200, 10.0, 1.0, 0.0126);
    const double gamma = golden_rule_rate(s);
    const auto traj = integrate_bath(s, 3.0 / gamma, 1e-3, 1000);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double x = traj.times[i];
        const double y = std::log(std::abs(traj.states[i].alpha));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double envelope_dev = std::abs(-slope / gamma - 1.0);

    r.pass = worst_drift < r.tolerance && envelope_dev < 0.2;
    r.detail = "gamma=" + detail::num(gamma) + " fit_rate=" + detail::num(-slope) +
               " envelope_dev=" + detail::num(envelope_dev);
    return r;
}

// 7. GRW statistics: unit collapse-center density, branch frequencies within
// 3 sigma, the rate-zero limit identical to free evolution, and single-hit
// collapse of a rigid-body superposition.
inline CriterionResult check_grw() {
    CriterionResult r{7, "grw", 0.0, 0.0, 1e-6, false, ""};
    const Wavefunction1D psi = gaussian_packet(512, -8.0, 16.0 / 512.0, 0.3, 1.0);
    const double d = 0.5, dX = 0.005;
    double total = 0.0;
    for (double X = -10.0; X <= 10.0 + 1e-12; X += dX) total += grw_hit_weight(psi, X, d) * dX;
    total /= std::sqrt(detail::kPi) * d;
    r.observed = std::abs(total - 1.0);
    const bool density_ok = r.observed < 1e-6;

    auto g = substream(424220, 0);
    const double dh = 0.1;
    const Wavefunction1D biased = detail::two_peak(4096, -2.0, 4.0 / 4096.0, -1.0, 1.0, dh / 10.0, 0.64);
    int low = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i)
        if (grw_sample_center(biased, dh, g) < 0.0) ++low;
    const double freq_dev = std::abs(low / static_cast<double>(draws) - 0.64);
    const double freq_limit = 3.0 * std::sqrt(0.64 * 0.36 / draws);
    const bool freq_ok = freq_dev <= freq_limit;

    const Wavefunction1D packet = gaussian_packet(256, -20.0, 40.0 / 256.0, -3.0, 1.0, 0.5);
    auto g2 = substream(424220, 1);
    const auto run = grw_trajectory(packet, {0.05, 0.0, 1}, 1.0, 1.0, 0.01, g2, 1.0);
    Wavefunction1D direct = packet;
    free_evolve_step(direct, 1.0, 1.0, 1.0);
    double lam0_dev = static_cast<double>(run.events.size());
    for (std::size_t i = 0; i < direct.amps.size(); ++i)
        lam0_dev = std::max(lam0_dev, std::abs(run.psi.amps[i] - direct.amps[i]));
    const bool lam0_ok = lam0_dev < 1e-6;

    double rigid_dev = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double a = 0.2 * k, b = a + 2.0;
        const Wavefunction1D body = detail::two_peak(4096, -0.5, 4.0 / 4096.0, a, b, dh / 10.0, 0.5);
        const double mid = 0.5 * (a + b);
        rigid_dev = std::max(rigid_dev, 1.0 - detail::mass_below(grw_hit(body, a, dh), mid));
        rigid_dev = std::max(rigid_dev, detail::mass_below(grw_hit(body, b, dh), mid));
    }
    const bool rigid_ok = rigid_dev < 1e-10;

    r.pass = density_ok && freq_ok && lam0_ok && rigid_ok;
    r.detail = "freq_dev=" + detail::num(freq_dev) + " freq_limit=" + detail::num(freq_limit) +
               " lam0_dev=" + detail::num(lam0_dev) + " rigid_dev=" + detail::num(rigid_dev);
    return r;
}

// 8. Gravity-weighted self-interaction of a uniform unit sphere: the 448-point
// cloud (about 1e5 distinct pairs) must land within 2% of (6/5) G m^2 / R.
inline CriterionResult check_diosi() {
    CriterionResult r{8, "diosi", 0.0, 0.0, 0.02, false, ""};
    const std::size_t n = 448;
    auto g = substream(424204, 0);
    MassDensity cloud;
    for (std::size_t i = 0; i < n; ++i) {
        cloud.points.push_back(detail::ball_point(g, 1.0, {0.0, 0.0, 0.0}));
        cloud.weights.push_back(1.0 / static_cast<double>(n));
    }
    const double estimate = diosi_norm(cloud, 1e-3, 1.0);
    r.observed = std::abs(estimate / 1.2 - 1.0);
    r.pass = r.observed < r.tolerance;
    r.detail = "estimate=" + detail::num(estimate) + " target=1.2 pairs=" +
               std::to_string(n * (n - 1) / 2);
    return r;
}

// 9. Lifetimes tau = hbar / Delta E: the 10 um droplet within two orders of
// 1e-6 s (reported as log10 tau vs -6 +- 2), the smeared proton within two
// orders of 1e14 s, with the smearing-radius sensitivity reported.
inline CriterionResult check_penrose() {
    CriterionResult r{9, "penrose", 0.0, -6.0, 2.0, false, ""};
    const Preset& droplet = find_preset("droplet-10um");
    const double radius = droplet.param("radius_m");
    const double mass = droplet.param("density_kg_m3") * 4.0 / 3.0 * detail::kPi *
                        radius * radius * radius;
    MassDensity here{{{0.0, 0.0, 0.0}}, {mass}};
    MassDensity there{{{droplet.param("displacement_m"), 0.0, 0.0}}, {mass}};
    const PenroseResult drop = penrose_lifetime(here, there, droplet.param("smear_radius_m"));
    r.observed = std::log10(drop.tau);
    const bool droplet_ok = std::abs(r.observed - r.expected) <= r.tolerance;

    const Preset& proton = find_preset("proton-1fm");
    MassDensity p1{{{0.0, 0.0, 0.0}}, {proton.param("mass_kg")}};
    MassDensity p2{{{proton.param("displacement_m"), 0.0, 0.0}}, {proton.param("mass_kg")}};
    const PenroseResult prot = penrose_lifetime(p1, p2, proton.param("smear_radius_m"));
    const bool proton_ok = std::abs(std::log10(prot.tau) - 14.0) <= 2.0;
    const bool sensitivity_ok = drop.tau_r0_half < drop.tau && drop.tau < drop.tau_r0_double;

    r.pass = droplet_ok && proton_ok && sensitivity_ok;
    r.detail = "tau_droplet=" + detail::num(drop.tau) + " tau_proton=" + detail::num(prot.tau) +
               " tau_r0_half=" + detail::num(drop.tau_r0_half) +
               " tau_r0_double=" + detail::num(drop.tau_r0_double);
    return r;
}

// 10. Attenuated-plate dynamics: the fixed-center step is linear to 1e-10 and
// the ensemble coherence decay rate sits within x3 of kappa (x1 - x2)^2.
inline CriterionResult check_vanwezel() {
    CriterionResult r{10, "vanwezel", 0.0, 1.0, 3.0, false, ""};
    VanWezelParams p;
    p.mass = 1.0;
    p.plate_width = 1.0;
    p.hbar = 1.0;
    p.newton_g = 1.0;

    const std::size_t n = 64;
    auto g = substream(424205, 0);
    Wavefunction1D psi1, psi2;
    psi1.x_first = psi2.x_first = 0.0;
    psi1.dx = psi2.dx = 1.0 / n;
    psi1.amps.resize(n);
    psi2.amps.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        psi1.amps[i] = cx(uniform_in(g, -1.0, 1.0), uniform_in(g, -1.0, 1.0));
        psi2.amps[i] = cx(uniform_in(g, -1.0, 1.0), uniform_in(g, -1.0, 1.0));
    }
    const cx alpha(0.3, -0.7), beta(1.1, 0.2);
    Wavefunction1D combo = psi1;
    for (std::size_t i = 0; i < n; ++i) combo.amps[i] = alpha * psi1.amps[i] + beta * psi2.amps[i];
    const double xi = 0.3, dt = 0.02;
    const Wavefunction1D lhs = van_wezel_step(combo, p, xi, dt);
    const Wavefunction1D s1 = van_wezel_step(psi1, p, xi, dt);
    const Wavefunction1D s2 = van_wezel_step(psi2, p, xi, dt);
    double lin_dev = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        lin_dev = std::max(lin_dev, std::abs(lhs.amps[i] - (alpha * s1.amps[i] + beta * s2.amps[i])));
    const bool linear_ok = lin_dev < 1e-10;

    VanWezelParams flat = p;
    flat.kinetic = false;
    const double kappa = flat.kappa();
    const int steps = 400, members = 1000;
    Wavefunction1D psi0;
    psi0.x_first = 0.125;
    psi0.dx = 0.75;
    psi0.amps = {cx(1.0 / std::sqrt(1.5), 0.0), cx(1.0 / std::sqrt(1.5), 0.0)};
    double mean_coherence = 0.0;
    for (int m = 0; m < members; ++m) {
        auto gm = substream(424206, static_cast<std::uint64_t>(m));
        Wavefunction1D psi = psi0;
        for (int s = 0; s < steps; ++s) psi = van_wezel_step(psi, flat, uniform_unit(gm), dt);
        const cx off = psi.amps[0] * std::conj(psi.amps[1]);
        const cx off0 = psi0.amps[0] * std::conj(psi0.amps[1]);
        mean_coherence += (off / off0).real();
    }
    mean_coherence /= members;
    const double rate = -std::log(mean_coherence) / (steps * dt);
    const double naive = kappa * 0.75 * 0.75;
    r.observed = rate / naive;
    r.pass = linear_ok && r.observed > 1.0 / 3.0 && r.observed < 3.0;
    r.detail = "linearity_dev=" + detail::num(lin_dev) + " rate=" + detail::num(rate) +
               " two_level_rate=" + detail::num(naive);
    return r;
}

// 11. Equal-coefficient chain certifies p = 1/2 with residuals below 1e-10;
// the counting route returns m/(m+n) exactly for every m + n <= 64.
inline CriterionResult check_envariance() {
    CriterionResult r{11, "envariance", 0.0, 0.0, 1e-10, false, ""};
    SchmidtPair s;
    const double inv = 1.0 / std::sqrt(2.0);
    s.coefficients = {cx(inv, 0.0), std::polar(inv, 0.3)};
    s.system_labels = {0, 1};
    s.env_labels = {0, 1};
    const ChainReport chain = equal_prob_chain(s);
    r.observed = chain.max_residual;
    const bool chain_ok = chain.applies && chain.max_residual < 1e-10 &&
                          std::abs(chain.p_plus - 0.5) < 1e-12;

    long long counted = 0;
    bool counting_ok = true;
    for (int total = 2; total <= 64 && counting_ok; ++total)
        for (int m = 1; m < total && counting_ok; ++m) {
            const int n = total - m;
            const Rational p = born_from_counting(m, n);
            const long long gcd = std::gcd(static_cast<long long>(m), static_cast<long long>(total));
            counting_ok = p.num == m / gcd && p.den == total / gcd;
            ++counted;
        }

    r.pass = chain_ok && counting_ok;
    r.detail = "p_plus=" + detail::num(chain.p_plus) + " counting_pairs=" + std::to_string(counted) +
               std::string(counting_ok ? " counting=exact" : " counting=mismatch");
    return r;
}

// 12. 100 random calibrated unitary schemes on joint dimensions 8 through 64:
// witness distance <= 1 + 1e-9 in every case, plus 20 impure variants.
inline CriterionResult check_nogo() {
    CriterionResult r{12, "nogo", 0.0, 1.0, 1e-9, false, ""};
    const std::size_t dims[] = {4, 8, 16, 32};  // apparatus factor; joint is twice that
    double worst = 0.0;
    bool all_ok = true;
    for (std::size_t trial = 0; trial < 100; ++trial) {
        auto g = substream(424217, trial);
        const TolerantScheme s = make_random_scheme(dims[trial % 4], 1 + trial % 3, g, 0.05, 0.2);
        const WitnessReport rep = impossibility_witness(s, trial % s.ready_states.size());
        worst = std::max(worst, rep.distance);
        all_ok = all_ok && rep.bound_violated && rep.linearity_ok;
    }

    double impure_worst = 0.0;
    for (std::size_t trial = 0; trial < 20; ++trial) {
        auto g = substream(424218, trial);
        const TolerantScheme s = make_random_scheme(8, 3, g, 0.05, 0.2);
        const Eigen::Index dim = static_cast<Eigen::Index>(s.joint_dim());
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(dim, dim);
        const double mu[] = {0.3, 0.7};
        for (int comp = 0; comp < 2; ++comp) {
            Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(s.apparatus_dim));
            Eigen::VectorXcd b = a;
            for (const auto& rs : s.ready_states) {
                a += cx(normal_unit(g), normal_unit(g)) * rs;
                b += cx(normal_unit(g), normal_unit(g)) * rs;
            }
            a /= a.norm();
            b /= b.norm();
            Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(dim);
            phi.head(dim / 2) = a / std::sqrt(2.0);
            phi.tail(dim / 2) = b / std::sqrt(2.0);
            rho0 += mu[comp] * (phi * phi.adjoint());
        }
        const WitnessReport rep = impure_variant(s, rho0);
        impure_worst = std::max(impure_worst, rep.distance);
        all_ok = all_ok && rep.bound_violated;
    }

    r.observed = std::max(worst, impure_worst);
    r.pass = all_ok && r.observed <= r.expected + r.tolerance;
    r.detail = "max_distance=" + detail::num(worst) + " impure_max=" + detail::num(impure_worst) +
               " schemes=100 impure_schemes=20";
    return r;
}

// 13. Guiding equation: plane-wave velocity hbar k / m to 1e-6; a 1e4-member
// ensemble stays |psi_t|^2-distributed (KS < 0.03 at every checkpoint) and
// trajectories never cross.
inline CriterionResult check_pilotwave() {
    CriterionResult r{13, "pilotwave", 0.0, 0.0, 0.03, false, ""};
    Wavefunction1D wave;
    wave.x_first = 0.0;
    wave.dx = 100.0 / 8192.0;
    wave.amps.resize(8192);
    const double k = 2.0 * detail::kPi * 2.0 / 100.0;
    for (std::size_t i = 0; i < wave.amps.size(); ++i)
        wave.amps[i] = std::polar(0.1, k * wave.position(i));
    double pw_dev = 0.0;
    for (double mass : {1.0, 2.5})
        for (double x : {11.0, 47.3, 83.6})
            pw_dev = std::max(pw_dev,
                              std::abs(bohm_velocity(wave, x, mass, 1.0) / (k / mass) - 1.0));
    const bool pw_ok = pw_dev < 1e-6;

    const std::size_t n = 4096;
    const double sigma = 2.0, k0 = 1.0, center = -30.0, tmax = 30.0;
    const Wavefunction1D psi0 = gaussian_packet(n, -100.0, 200.0 / n, center, sigma, k0);
    auto g = substream(424219, 0);
    const EnsembleResult res = evolve_trajectories(psi0, 1.0, tmax, 0.05, 10000, g, 1.0, 100);
    bool ensemble_ok = res.node_excluded == 0 && res.trajectories.size() == 10000;

    double worst_ks = 0.0;
    const std::size_t n_rec = res.trajectories.empty() ? 0 : res.trajectories[0].times.size();
    for (std::size_t rec = 0; rec < n_rec; ++rec) {
        const double t = res.trajectories[0].times[rec];
        std::vector<double> xs;
        xs.reserve(res.trajectories.size());
        for (const Trajectory& traj : res.trajectories) xs.push_back(traj.positions[rec]);
        const double mean = center + k0 * t;
        const double sd = std::sqrt(sigma * sigma + std::pow(t / (2.0 * sigma), 2));
        worst_ks = std::max(worst_ks, detail::ks_against_normal(std::move(xs), mean, sd));
    }

    std::size_t crossings = 0;
    if (n_rec > 0) {
        std::vector<std::size_t> order(res.trajectories.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return res.trajectories[a].positions[0] < res.trajectories[b].positions[0];
        });
        for (std::size_t rec = 1; rec < n_rec; ++rec)
            for (std::size_t i = 1; i < order.size(); ++i)
                if (res.trajectories[order[i - 1]].positions[rec] >
                    res.trajectories[order[i]].positions[rec] + 1e-9)
                    ++crossings;
    }

    r.observed = worst_ks;
    r.pass = pw_ok && ensemble_ok && worst_ks < r.tolerance && crossings == 0;
    r.detail = "plane_wave_dev=" + detail::num(pw_dev) + " worst_ks=" + detail::num(worst_ks) +
               " crossings=" + std::to_string(crossings);
    return r;
}

// 14. Determinism of the CLI: identical bytes for identical (config, seed)
// across repeated runs and across DECOLAB_THREADS=1 vs 8.
inline CriterionResult check_determinism(const std::string& cli_path) {
    CriterionResult r{14, "determinism", 0.0, 0.0, 0.5, false, ""};
    if (cli_path.empty()) {
        r.detail = "error=no_cli_path";
        return r;
    }
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "decolab-verify-determinism";
    std::error_code ec;
    fs::remove_all(base, ec);
    fs::create_directories(base);

    int failures = 0;
    auto run = [&](const std::string& args, const fs::path& out, const char* threads) {
        std::string cmd = threads ? "DECOLAB_THREADS=" + std::string(threads) + " " : std::string();
        cmd += "\"" + cli_path + "\" " + args + " --out \"" + out.string() + "\" > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) ++failures;
    };

    run("spinbath --n 400 --t-max 3 --steps 200 --seed 7", base / "a1", nullptr);
    run("spinbath --n 400 --t-max 3 --steps 200 --seed 7", base / "a2", nullptr);
    const std::string pw_args =
        "pilotwave --n-traj 64 --grid 1024 --span 120 --t-max 6 --dt 0.05 --seed 9";
    run(pw_args, base / "b1", "1");
    run(pw_args, base / "b2", "8");

    int mismatches = 0;
    const std::string a1 = detail::read_file_bytes(base / "a1" / "spinbath.csv");
    const std::string a2 = detail::read_file_bytes(base / "a2" / "spinbath.csv");
    if (a1 != a2 || a1.empty()) ++mismatches;
    const std::string b1 = detail::read_file_bytes(base / "b1" / "pilotwave.csv");
    const std::string b2 = detail::read_file_bytes(base / "b2" / "pilotwave.csv");
    if (b1 != b2 || b1.empty()) ++mismatches;

    r.observed = static_cast<double>(mismatches + failures);
    r.pass = mismatches == 0 && failures == 0;
    r.detail = "reruns_equal=" + std::string(a1 == a2 ? "yes" : "no") +
               " threads_equal=" + std::string(b1 == b2 ? "yes" : "no") +
               " exit_failures=" + std::to_string(failures);
    fs::remove_all(base, ec);
    return r;
}

inline const std::vector<std::pair<int, std::string>>& criteria_names() {
    static const std::vector<std::pair<int, std::string>> names = {
        {1, "expectations"}, {2, "spinbath"}, {3, "gaussian"},   {4, "scatter"},
        {5, "pendulum"},     {6, "weisskopf"}, {7, "grw"},        {8, "diosi"},
        {9, "penrose"},      {10, "vanwezel"}, {11, "envariance"}, {12, "nogo"},
        {13, "pilotwave"},   {14, "determinism"},
    };
    return names;
}

inline CriterionResult run_criterion(int id, const std::string& cli_path = "") {
    switch (id) {
        case 1: return check_expectations();
        case 2: return check_spinbath();
        case 3: return check_gaussian();
        case 4: return check_scatter();
        case 5: return check_pendulum();
        case 6: return check_weisskopf();
        case 7: return check_grw();
        case 8: return check_diosi();
        case 9: return check_penrose();
        case 10: return check_vanwezel();
        case 11: return check_envariance();
        case 12: return check_nogo();
        case 13: return check_pilotwave();
        case 14: return check_determinism(cli_path);
        default: throw std::invalid_argument("unknown criterion id " + std::to_string(id));
    }
}

// Suite name -> criterion ids; "all" runs everything.
inline std::vector<int> suite_ids(const std::string& suite) {
    if (suite == "all") {
        std::vector<int> ids(criteria_names().size());
        std::iota(ids.begin(), ids.end(), 1);
        return ids;
    }
    for (const auto& [id, name] : criteria_names())
        if (name == suite) return {id};
    throw std::invalid_argument("unknown verification suite '" + suite + "'");
}

// One machine-readable line: id,name,observed,expected,tolerance,pass,detail.
inline std::string format_line(const CriterionResult& r) {
    char head[160];
    std::snprintf(head, sizeof head, "%d,%s,%.10g,%.10g,%.10g,%s", r.id, r.name.c_str(),
                  r.observed, r.expected, r.tolerance, r.pass ? "pass" : "FAIL");
    std::string line = head;
    if (!r.detail.empty()) line += "," + r.detail;
    return line;
}

}  // namespace decolab::verify
