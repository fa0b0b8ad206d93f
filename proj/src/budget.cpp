#include "micropillar/budget.hpp"

#include <cmath>

namespace micropillar {

GroundStateReport quantum_criteria(double frequency, double temperature) {
    if (!(frequency > 0.0)) throw ValidationError("frequency must be positive");
    if (!(temperature >= 0.0)) throw ValidationError("temperature must be non-negative");

    GroundStateReport report;
    report.ground_temperature = constants.planck_h * frequency / constants.boltzmann_kB;
    if (temperature == 0.0) {
        report.occupancy = 0.0;
    } else {
        const double x = report.ground_temperature / temperature;
        report.occupancy = 1.0 / std::expm1(x);
    }
    report.in_ground_state = report.occupancy < 1.0;
    return report;
}

NoiseBudget zero_point_noise(double effective_mass, double cooled_quality,
                             double frequency) {
    if (!(effective_mass > 0.0)) throw ValidationError("effective_mass must be positive");
    if (!(cooled_quality > 0.0)) throw ValidationError("cooled_quality must be positive");
    if (!(frequency > 0.0)) throw ValidationError("frequency must be positive");

    const double mass_ref = 25e-9;  // 25 ug
    const double q_ref = 2e3;
    const double nu_ref = 4e6;      // 4 MHz
    const double ratio = nu_ref / frequency;

    NoiseBudget budget;
    budget.s_x_at_resonance =
        (mass_ref / effective_mass) * (cooled_quality / q_ref) * ratio * ratio * 1e-38;
    budget.required_sensitivity = std::sqrt(budget.s_x_at_resonance);
    return budget;
}

CoolingResult cooled_quality(double quality_factor, double temperature,
                             double cooled_temperature) {
    if (!(quality_factor > 0.0)) throw ValidationError("quality_factor must be positive");
    if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
    if (!(cooled_temperature > 0.0)) {
        throw ValidationError("cooled_temperature must be positive");
    }
    if (cooled_temperature > temperature) {
        throw ValidationError("invalid cooling ratio: cooled_temperature exceeds temperature");
    }
    CoolingResult result;
    result.cooled_temperature = cooled_temperature;
    result.cooling_ratio = cooled_temperature / temperature;
    result.cooled_quality = quality_factor * result.cooling_ratio;
    return result;
}

std::complex<double> mechanical_susceptibility(const OscillatorParams& osc,
                                               double omega) {
    const double w_m = 2.0 * pi * osc.frequency;
    const std::complex<double> denom(w_m * w_m - omega * omega,
                                     omega * w_m / osc.quality_factor);
    return 1.0 / (osc.effective_mass * denom);
}

std::vector<double> thermal_psd(const OscillatorParams& osc,
                                const std::vector<double>& frequency_grid) {
    validate(osc);
    const double w_m = 2.0 * pi * osc.frequency;
    const double gamma = w_m / osc.quality_factor;
    const double force_psd =
        4.0 * constants.boltzmann_kB * osc.temperature * osc.effective_mass * gamma;

    std::vector<double> psd;
    psd.reserve(frequency_grid.size());
    for (double nu : frequency_grid) {
        if (!(nu > 0.0)) throw ValidationError("frequency grid must be positive");
        psd.push_back(force_psd * std::norm(mechanical_susceptibility(osc, 2.0 * pi * nu)));
    }
    return psd;
}

} // namespace micropillar
