// Side-by-side timescales for one macroscopic object: how fast the different
// mechanisms suppress or destroy a superposition of a 10 um droplet (and the
// gram-scale pendulum for the damped-oscillator route).
#include <cstdio>

#include "decolab/collapse.hpp"
#include "decolab/constants.hpp"
#include "decolab/oscdec.hpp"
#include "decolab/presets.hpp"
#include "decolab/scatterdec.hpp"

int main() {
    namespace k = decolab::constants;
    const auto& droplet = decolab::find_preset("droplet-10um");
    const double radius = droplet.param("radius_m");
    const double mass =
        droplet.param("density_kg_m3") * 4.0 / 3.0 * 3.14159265358979323846 * radius * radius * radius;

    // Air-like scattering environment, separation fully resolved.
    decolab::ScatterEnvParams air;
    air.eta = 1e20;
    air.v = 500.0;
    air.sigma_t = 1e-18;
    air.c_geom = 1.0;
    air.lambda_env = 1e-9;
    const double tau_scatter = decolab::decoherence_time(air);

    // Gravitational self-energy lifetime of the displaced droplet.
    const decolab::MassDensity here{{{0.0, 0.0, 0.0}}, {mass}};
    const decolab::MassDensity there{{{droplet.param("displacement_m"), 0.0, 0.0}}, {mass}};
    const auto penrose = decolab::penrose_lifetime(here, there, droplet.param("smear_radius_m"));

    // Spontaneous localization: mean wait for the first hit on any nucleon.
    const double lam_grw = 1e-16;  // per nucleon per second
    const double nucleons = mass / k::amu;
    const double tau_grw = 1.0 / (lam_grw * nucleons);

    // Damped gram pendulum: decoherence time as a fraction of the damping time.
    const auto& omnes = decolab::find_preset("omnes-1g");
    decolab::PendulumParams pend;
    pend.mass = omnes.param("mass_kg");
    pend.omega = 2.0 * 3.14159265358979323846 / omnes.param("period_s");
    pend.gamma = omnes.param("damping_rate_per_s");
    pend.x02 = omnes.param("separation_m");
    const double tau_pendulum = decolab::decoherence_ratio(pend).tau_d_over_tau / pend.gamma;

    std::printf("object: %s, mass %.3g kg\n\n", droplet.name.c_str(), mass);
    std::printf("%-34s %12s\n", "mechanism", "timescale");
    std::printf("%-34s %12.3g s\n", "scattering decoherence", tau_scatter);
    std::printf("%-34s %12.3g s\n", "self-energy lifetime", penrose.tau);
    std::printf("%-34s %12.3g s  (%.3g nucleons)\n", "spontaneous localization wait", tau_grw,
                nucleons);
    std::printf("%-34s %12.3g s  (1 g pendulum)\n", "damped-oscillator decoherence", tau_pendulum);
    return 0;
}
