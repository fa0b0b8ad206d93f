#ifndef MICROPILLAR_BUDGET_HPP
#define MICROPILLAR_BUDGET_HPP

#include <complex>
#include <vector>

#include "micropillar/types.hpp"

// Quantum ground-state criteria, the displacement-noise scaling law, the
// cooling relation, and a thermal-noise spectrum for the sensitivity
// comparison.  PSD convention: one-sided, argument in Hz.

namespace micropillar {

struct GroundStateReport {
    double ground_temperature = 0.0; // K, h*nu/kB
    double occupancy = 0.0;          // mean phonon number
    bool in_ground_state = false;    // occupancy < 1
};

GroundStateReport quantum_criteria(double frequency, double temperature);

struct NoiseBudget {
    double s_x_at_resonance = 0.0;    // m^2/Hz
    double required_sensitivity = 0.0; // m/sqrt(Hz)
};

// S_x[nu_m] = (25 ug / M) (Q_c / 2e3) (4 MHz / nu_m)^2 * 1e-38 m^2/Hz.
NoiseBudget zero_point_noise(double effective_mass, double cooled_quality,
                             double frequency);

struct CoolingResult {
    double cooled_temperature = 0.0; // K
    double cooled_quality = 0.0;     // Q * T_c / T
    double cooling_ratio = 0.0;      // T_c / T
};

// Q_c/T_c = Q/T: optical damping lowers temperature and quality factor by
// the same ratio.
CoolingResult cooled_quality(double quality_factor, double temperature,
                             double cooled_temperature);

// chi(omega) = 1 / (M (w_m^2 - w^2 + i w w_m / Q)), viscous damping.
std::complex<double> mechanical_susceptibility(const OscillatorParams& osc,
                                               double omega);

// One-sided displacement PSD in m^2/Hz on the given frequency grid:
// S_x(nu) = S_F |chi(2 pi nu)|^2 with S_F = 4 kB T M w_m / Q.
std::vector<double> thermal_psd(const OscillatorParams& osc,
                                const std::vector<double>& frequency_grid);

} // namespace micropillar

#endif
