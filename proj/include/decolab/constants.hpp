// constants.hpp: physical constants (SI) shared by all models.
#pragma once

namespace decolab::constants {

inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double h = 6.62607015e-34;       // J s
inline constexpr double G = 6.674e-11;            // m^3 kg^-1 s^-2
inline constexpr double amu = 1.66053906660e-27;  // kg
inline constexpr double proton_mass = 1.67262192369e-27;  // kg

}  // namespace decolab::constants
