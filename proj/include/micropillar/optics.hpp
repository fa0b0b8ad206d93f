#ifndef MICROPILLAR_OPTICS_HPP
#define MICROPILLAR_OPTICS_HPP

#include <complex>

#include "micropillar/types.hpp"

// Dielectric mirror evaluation by the 2x2 characteristic-matrix method,
// normal incidence, lossless (real) indices.

namespace micropillar {

struct StackResponse {
    double reflectance = 0.0;   // fraction
    double transmittance = 0.0; // fraction
    std::complex<double> r;     // amplitude reflection coefficient
    std::complex<double> t;     // amplitude transmission coefficient
};

// Alternating high/low-index quarter-wave layers, high-index first from
// the incidence side; each layer is lambda0/(4n) thick.
CoatingStack quarter_wave_stack(double n_high, double n_low, int doublets,
                                double design_wavelength, double n_incident,
                                double n_substrate);

StackResponse stack_transmission(const CoatingStack& stack, double wavelength);

// F = 2*pi / (t1 + t2 + round_trip_loss); valid in the high-finesse
// regime, total loss in (0, 0.1).
double cavity_finesse(double t1, double t2, double round_trip_loss);

} // namespace micropillar

#endif
