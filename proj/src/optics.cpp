#include "micropillar/optics.hpp"

#include <cmath>

namespace micropillar {

CoatingStack quarter_wave_stack(double n_high, double n_low, int doublets,
                                double design_wavelength, double n_incident,
                                double n_substrate) {
    if (doublets < 0) throw ValidationError("doublets must be non-negative");
    CoatingStack stack;
    stack.incident_index = n_incident;
    stack.substrate_index = n_substrate;
    stack.design_wavelength = design_wavelength;
    stack.layers.reserve(static_cast<std::size_t>(2 * doublets));
    for (int i = 0; i < doublets; ++i) {
        stack.layers.push_back({n_high, design_wavelength / (4.0 * n_high)});
        stack.layers.push_back({n_low, design_wavelength / (4.0 * n_low)});
    }
    return validated(stack);
}

StackResponse stack_transmission(const CoatingStack& stack, double wavelength) {
    validate(stack);
    if (!(wavelength > 0.0)) throw ValidationError("wavelength must be positive");

    using cd = std::complex<double>;
    const cd i(0.0, 1.0);

    // Characteristic matrix product over layers, incidence side first.
    // Admittances in units of the free-space admittance.
    cd m11(1.0), m12(0.0), m21(0.0), m22(1.0);
    for (const CoatingLayer& layer : stack.layers) {
        const double eta = layer.refractive_index;
        const double delta = 2.0 * pi * layer.refractive_index * layer.thickness / wavelength;
        const cd c = std::cos(delta);
        const cd s = std::sin(delta);
        const cd l11 = c, l12 = i * s / eta, l21 = i * eta * s, l22 = c;
        const cd n11 = m11 * l11 + m12 * l21;
        const cd n12 = m11 * l12 + m12 * l22;
        const cd n21 = m21 * l11 + m22 * l21;
        const cd n22 = m21 * l12 + m22 * l22;
        m11 = n11; m12 = n12; m21 = n21; m22 = n22;
    }

    const double eta0 = stack.incident_index;
    const double etas = stack.substrate_index;
    const cd b = m11 + m12 * etas;
    const cd c = m21 + m22 * etas;

    StackResponse response;
    response.r = (eta0 * b - c) / (eta0 * b + c);
    response.t = 2.0 * eta0 / (eta0 * b + c);
    response.reflectance = std::norm(response.r);
    response.transmittance = etas / eta0 * std::norm(response.t);
    return response;
}

double cavity_finesse(double t1, double t2, double round_trip_loss) {
    if (t1 < 0.0 || t2 < 0.0 || round_trip_loss < 0.0) {
        throw ValidationError("transmissions and losses must be non-negative");
    }
    const double total = t1 + t2 + round_trip_loss;
    if (total <= 0.0) {
        throw ValidationError("total round-trip loss must be positive");
    }
    if (total >= 0.1) {
        throw ValidationError("total round-trip loss outside the high-finesse regime (>= 0.1)");
    }
    return 2.0 * pi / total;
}

} // namespace micropillar
