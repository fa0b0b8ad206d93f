#ifndef MICROPILLAR_CONSTANTS_HPP
#define MICROPILLAR_CONSTANTS_HPP

namespace micropillar {

// Fixed CODATA values (2018 exact definitions).
struct PhysicalConstants {
    double planck_h = 6.62607015e-34;    // J s
    double boltzmann_kB = 1.380649e-23;  // J/K
    double speed_of_light = 299792458.0; // m/s
};

inline constexpr PhysicalConstants constants{};

inline constexpr double pi = 3.14159265358979323846;

} // namespace micropillar

#endif
