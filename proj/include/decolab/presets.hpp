// presets.hpp: named parameter sets for the scenarios the models target, with
// the experimental or literature origin of each value. Catalog order is fixed.
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "decolab/constants.hpp"

namespace decolab {

struct Preset {
    std::string name;
    std::string description;
    std::string source;
    std::vector<std::pair<std::string, double>> params;

    double param(const std::string& key) const {
        for (const auto& [k, v] : params)
            if (k == key) return v;
        throw std::invalid_argument("Preset '" + name + "' has no parameter '" + key + "'");
    }
};

inline const std::vector<Preset>& preset_catalog() {
    static const std::vector<Preset> catalog = {
        {"droplet-10um",
         "10 um water droplet in a two-place superposition displaced by its own diameter",
         "Penrose, Gen. Rel. Grav. 28, 581 (1996): gravitational collapse estimate for a water speck",
         {{"radius_m", 5e-6},
          {"density_kg_m3", 1000.0},
          {"displacement_m", 1e-5},
          {"smear_radius_m", 5e-6}}},
        {"fullerene-720amu",
         "C60/C70-scale fullerene beam interfering at a 100 nm grating",
         "Arndt et al., Nature 401, 680 (1999): wave-particle duality of C60 molecules",
         {{"mass_kg", 720.0 * constants::amu},
          {"velocity_m_s", 220.0},
          {"slit_separation_m", 1e-7},
          {"slit_width_m", 2.5e-8},
          {"flight_length_m", 1.25}}},
        {"gerlich-6910amu",
         "430-atom organic molecule (6910 AMU) with a 1 pm de Broglie wavelength",
         "Gerlich et al., Nature Communications 2, 263 (2011): interference of large organic molecules",
         {{"mass_kg", 6910.0 * constants::amu},
          {"de_broglie_wavelength_m", 1e-12},
          {"slit_separation_m", 2.66e-7},
          {"slit_width_m", 6e-8},
          {"flight_length_m", 0.56}}},
        {"omnes-1g",
         "1 g pendulum with a 1 s period in a superposition separated by 1 um",
         "textbook damped-pendulum decoherence estimate (1 g, 1 s, 1 um)",
         {{"mass_kg", 1e-3},
          {"period_s", 1.0},
          {"separation_m", 1e-6},
          {"damping_rate_per_s", 0.1}}},
        {"proton-1fm",
         "single proton smeared over its charge radius, displaced by an atomic diameter",
         "proton rms charge radius 0.84 fm (CODATA); 0.1 nm displacement",
         {{"mass_kg", constants::proton_mass},
          {"smear_radius_m", 8.4e-16},
          {"displacement_m", 1e-10}}},
    };
    return catalog;
}

inline const Preset& find_preset(const std::string& name) {
    for (const Preset& p : preset_catalog())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace decolab
