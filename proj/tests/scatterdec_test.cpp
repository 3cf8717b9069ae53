#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "decolab/constants.hpp"
#include "decolab/scatterdec.hpp"

using decolab::cx;
using decolab::ScatterEnvParams;
using decolab::PositionDensityMatrix;
using decolab::DoubleSlitParams;

namespace {

ScatterEnvParams dense_air() {
    ScatterEnvParams p;
    p.eta = 1e20;
    p.v = 500.0;
    p.sigma_t = 1e-18;
    p.c_geom = 1.0;
    p.lambda_env = 1e-9;
    return p;
}

// Pure-state density matrix for a normalized two-peak wavefunction on a grid.
PositionDensityMatrix two_peak_rho(std::size_t n, double dx, double sep, double width) {
    std::vector<cx> psi(n);
    double norm2 = 0.0;
    const double x0 = -0.5 * static_cast<double>(n - 1) * dx;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = x0 + static_cast<double>(i) * dx;
        const double g1 = std::exp(-(x - 0.5 * sep) * (x - 0.5 * sep) / (4.0 * width * width));
        const double g2 = std::exp(-(x + 0.5 * sep) * (x + 0.5 * sep) / (4.0 * width * width));
        psi[i] = cx(g1 + g2, 0.0);
        norm2 += std::norm(psi[i]) * dx;
    }
    const double s = 1.0 / std::sqrt(norm2);
    PositionDensityMatrix rho;
    rho.x_first = x0;
    rho.dx = dx;
    rho.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            rho.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                s * psi[i] * std::conj(s * psi[j]);
    return rho;
}

double offdiag_sum(const PositionDensityMatrix& rho) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < rho.entries.rows(); ++i)
        for (Eigen::Index j = 0; j < rho.entries.cols(); ++j)
            if (i != j) s += std::abs(rho.entries(i, j));
    return s;
}

}  // namespace

TEST_CASE("decoherence time from flux times cross section", "[scatterdec]") {
    ScatterEnvParams unit;
    unit.eta = unit.v = unit.sigma_t = unit.c_geom = unit.lambda_env = 1.0;
    REQUIRE(decolab::decoherence_time(unit) == Catch::Approx(1.0));

    ScatterEnvParams p = dense_air();
    REQUIRE(decolab::decoherence_time(p) == Catch::Approx(2e-5).epsilon(1e-12));

    ScatterEnvParams dbl = p;
    dbl.eta *= 2.0;
    REQUIRE(decolab::decoherence_time(dbl) == Catch::Approx(1e-5).epsilon(1e-12));

    ScatterEnvParams bad = p;
    bad.v = 0.0;
    REQUIRE_THROWS_AS(decolab::decoherence_time(bad), std::invalid_argument);
}

TEST_CASE("decay factor endpoints and range", "[scatterdec]") {
    const ScatterEnvParams p = dense_air();
    REQUIRE(decolab::decay_factor(p, 0.0, 3e-7, 0.0) == 1.0);
    for (double dt : {1e-7, 2e-5, 1.0}) {
        REQUIRE(decolab::decay_factor(p, 4.2e-8, 4.2e-8, dt) == 1.0);
        const double f = decolab::decay_factor(p, 0.0, 1e-6, dt);
        REQUIRE(f >= 0.0);
        REQUIRE(f <= 1.0);
    }
    REQUIRE_THROWS_AS(decolab::decay_factor(p, 0.0, 1e-6, -1.0), std::invalid_argument);
}

TEST_CASE("separations beyond the environment wavelength saturate", "[scatterdec]") {
    const ScatterEnvParams p = dense_air();
    const double tau = decolab::decoherence_time(p);
    const double dt = 3.0 * tau;
    const double sat = std::exp(-dt / tau);
    REQUIRE(decolab::decay_factor(p, 0.0, 6.0 * p.lambda_env, dt) == Catch::Approx(sat).epsilon(1e-10));
    REQUIRE(decolab::decay_factor(p, 0.0, 10.0 * p.lambda_env, dt) == Catch::Approx(sat).epsilon(1e-12));
    // Below the wavelength the exponent follows the quadratic law.
    const double f_tiny = decolab::decay_factor(p, 0.0, 0.01 * p.lambda_env, dt);
    REQUIRE(std::log(f_tiny) == Catch::Approx(-dt / tau * 1e-4).epsilon(1e-4));
    const double f_half = decolab::decay_factor(p, 0.0, 0.5 * p.lambda_env, dt);
    REQUIRE(std::log(f_half) == Catch::Approx(-dt / tau * -std::expm1(-0.25)).epsilon(1e-12));
}

TEST_CASE("discrete scattering product matches the exponential law", "[scatterdec]") {
    // n = C eta L^2 v dt scatterers cross the box face in dt; each leaves the
    // off-diagonal term a factor (1 - sigma_t/L^2). The compounded product must
    // reproduce exp(-dt/tau_d) once the face is much larger than the cross
    // section.
    const ScatterEnvParams p = dense_air();
    const double tau = decolab::decoherence_time(p);
    for (double dt : {0.4 * tau, tau}) {
        const double expo = decolab::decay_factor(p, 0.0, 1e-6, dt);
        for (double l2_over_sigma : {1e6, 1e7, 1e8}) {
            const double l2 = l2_over_sigma * p.sigma_t;
            const double hits = p.c_geom * p.eta * l2 * p.v * dt;
            const double product = std::pow(1.0 - p.sigma_t / l2, hits);
            REQUIRE(std::abs(product / expo - 1.0) < 1e-6);
        }
    }
}

TEST_CASE("decay factor composes as a semigroup", "[scatterdec]") {
    const ScatterEnvParams p = dense_air();
    const double tau = decolab::decoherence_time(p);
    for (double sep : {0.2 * p.lambda_env, p.lambda_env, 5.0 * p.lambda_env}) {
        for (auto [dt1, dt2] : std::vector<std::pair<double, double>>{
                 {0.3 * tau, 0.7 * tau}, {1e-9, 2.0 * tau}, {tau, tau}}) {
            const double split = decolab::decay_factor(p, 0.0, sep, dt1) *
                                 decolab::decay_factor(p, 0.0, sep, dt2);
            const double whole = decolab::decay_factor(p, 0.0, sep, dt1 + dt2);
            REQUIRE(std::abs(split - whole) < 1e-10);
        }
    }
}

TEST_CASE("position density matrix validation", "[scatterdec]") {
    PositionDensityMatrix rho = two_peak_rho(40, 2e-7, 3e-6, 4e-7);
    REQUIRE_NOTHROW(rho.validate());

    PositionDensityMatrix skew = rho;
    skew.entries(2, 5) += cx(0.0, 1e-3);
    REQUIRE_THROWS_AS(skew.validate(), std::invalid_argument);

    PositionDensityMatrix off = rho;
    off.entries *= 1.5;
    REQUIRE_THROWS_AS(off.validate(), std::invalid_argument);
}

TEST_CASE("scatter map fixes the diagonal and damps coherences", "[scatterdec]") {
    const ScatterEnvParams p = dense_air();
    const double tau = decolab::decoherence_time(p);
    const PositionDensityMatrix rho = two_peak_rho(48, 2e-7, 3e-6, 4e-7);

    const PositionDensityMatrix same = decolab::apply_scatter_decoherence(rho, p, 0.0);
    REQUIRE((same.entries - rho.entries).cwiseAbs().maxCoeff() == 0.0);

    const PositionDensityMatrix late = decolab::apply_scatter_decoherence(rho, p, 5.0 * tau);
    REQUIRE_NOTHROW(late.validate());
    for (Eigen::Index i = 0; i < rho.entries.rows(); ++i)
        REQUIRE(late.entries(i, i) == rho.entries(i, i));
    REQUIRE(std::abs(late.entries.trace().real() * late.dx - 1.0) < 1e-10);

    // Grid spacing exceeds lambda_env, so every off-diagonal entry saturates.
    const PositionDensityMatrix gone = decolab::apply_scatter_decoherence(rho, p, 60.0 * tau);
    REQUIRE(offdiag_sum(gone) < 1e-12 * offdiag_sum(rho));
}

TEST_CASE("coherence decreases monotonically under scattering", "[scatterdec]") {
    const ScatterEnvParams p = dense_air();
    const double tau = decolab::decoherence_time(p);
    const PositionDensityMatrix rho = two_peak_rho(48, 2e-7, 3e-6, 4e-7);
    double prev = offdiag_sum(rho);
    for (double dt : {0.5 * tau, tau, 2.0 * tau, 5.0 * tau}) {
        const double cur = offdiag_sum(decolab::apply_scatter_decoherence(rho, p, dt));
        REQUIRE(cur < prev);
        prev = cur;
    }
}

TEST_CASE("scatter map preserves positivity", "[scatterdec]") {
    ScatterEnvParams p = dense_air();
    p.lambda_env = 1e-6;  // grid spacing below the wavelength exercises the interpolation
    const double tau = decolab::decoherence_time(p);
    const PositionDensityMatrix rho = two_peak_rho(48, 2e-7, 3e-6, 4e-7);
    for (double dt : {0.3 * tau, tau, 4.0 * tau}) {
        const PositionDensityMatrix out = decolab::apply_scatter_decoherence(rho, p, dt);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out.entries);
        const double floor = -1e-10 * out.entries.real().diagonal().maxCoeff();
        REQUIRE(es.eigenvalues().minCoeff() >= floor);
    }
}

TEST_CASE("scatter map composes over time steps", "[scatterdec]") {
    const ScatterEnvParams p = dense_air();
    const double tau = decolab::decoherence_time(p);
    const PositionDensityMatrix rho = two_peak_rho(32, 2e-7, 3e-6, 4e-7);
    const PositionDensityMatrix two = decolab::apply_scatter_decoherence(
        decolab::apply_scatter_decoherence(rho, p, 0.4 * tau), p, 1.1 * tau);
    const PositionDensityMatrix one = decolab::apply_scatter_decoherence(rho, p, 1.5 * tau);
    REQUIRE((two.entries - one.entries).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("double slit visibility tracks the coherence parameter", "[scatterdec]") {
    DoubleSlitParams d;
    d.packet_sep = 2e-5;
    d.packet_width = 1e-6;
    d.mass = 9.1e-31;
    d.t = 1e-6;

    d.coherence = 0.0;
    const auto incoherent = decolab::double_slit_pattern(d);
    REQUIRE(decolab::fringe_visibility(incoherent) < 1e-6);

    d.coherence = 1.0;
    const auto coherent = decolab::double_slit_pattern(d);
    REQUIRE(decolab::fringe_visibility(coherent) > 0.9);

    double prev = -1.0;
    for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        d.coherence = c;
        const double vis = decolab::fringe_visibility(decolab::double_slit_pattern(d));
        REQUIRE(vis >= prev - 1e-9);
        prev = vis;
    }
}

TEST_CASE("double slit profile is a unit-mass distribution", "[scatterdec]") {
    DoubleSlitParams d;
    d.packet_sep = 2e-5;
    d.packet_width = 1e-6;
    d.mass = 9.1e-31;
    d.t = 1e-6;
    for (double c : {0.0, 0.5, 1.0}) {
        d.coherence = c;
        const auto prof = decolab::double_slit_pattern(d);
        double mass = 0.0;
        for (double v : prof.intensity) mass += v * prof.dx;
        REQUIRE(std::abs(mass - 1.0) < 1e-6);
        for (double v : prof.intensity) REQUIRE(v >= -1e-12);
    }
}

TEST_CASE("fringe spacing matches the two-source formula", "[scatterdec]") {
    DoubleSlitParams d;
    d.packet_sep = 2e-5;
    d.packet_width = 1e-6;
    d.mass = 9.1e-31;
    d.t = 1e-6;
    d.coherence = 1.0;
    const auto prof = decolab::double_slit_pattern(d);

    // Peak-find on the envelope-normalized ratio so packet falloff does not
    // drag the maxima; refine each peak with a parabola through 3 points.
    const double expected = decolab::constants::h * d.t / (d.mass * d.packet_sep);
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < prof.intensity.size(); ++i) {
        if (std::abs(prof.position(i)) > 3.2 * expected) continue;
        const double rm = prof.intensity[i - 1] / prof.envelope[i - 1];
        const double r0 = prof.intensity[i] / prof.envelope[i];
        const double rp = prof.intensity[i + 1] / prof.envelope[i + 1];
        // >= on the left arm so a crest straddling two equal samples still counts once
        if (r0 >= rm && r0 > rp) {
            const double denom = rm - 2.0 * r0 + rp;
            const double shift = denom != 0.0 ? 0.5 * (rm - rp) / denom : 0.0;
            peaks.push_back(prof.position(i) + shift * prof.dx);
        }
    }
    REQUIRE(peaks.size() >= 4);
    double mean_spacing = 0.0;
    for (std::size_t i = 1; i < peaks.size(); ++i) mean_spacing += peaks[i] - peaks[i - 1];
    mean_spacing /= static_cast<double>(peaks.size() - 1);
    REQUIRE(mean_spacing == Catch::Approx(expected).epsilon(0.02));
}
