#ifndef MICROPILLAR_TYPES_HPP
#define MICROPILLAR_TYPES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "micropillar/constants.hpp"
#include "micropillar/errors.hpp"

// Domain value types shared by every other module.  All quantities are SI.
// Types are plain immutable-by-convention aggregates; validate() throws a
// ValidationError naming the first violated invariant, validated() is the
// pass-through form used when constructing from config or caller input.

namespace micropillar {

struct Material {
    double young_modulus = 0.0; // Pa
    double density = 0.0;       // kg/m^3
    double intrinsic_q = 0.0;   // dimensionless
};

enum class SectionShape { EquilateralTriangle, Square, Circle };

const char* section_shape_name(SectionShape shape);

struct CrossSection {
    SectionShape shape = SectionShape::EquilateralTriangle;
    double dimension = 0.0; // side for triangle/square, diameter for circle (m)

    double area() const; // closed form per shape

    static CrossSection equilateral_triangle(double side);
    static CrossSection square(double side);
    static CrossSection circle(double diameter);
};

// Counter-oscillating support ring, modeled as a second axial member
// clamped to ground through the outer membrane.
struct FrameGeometry {
    double length = 0.0;                   // m
    CrossSection cross_section;
    double outer_membrane_stiffness = 0.0; // N/m, lumped
};

struct PillarGeometry {
    double length = 0.0;             // m
    CrossSection cross_section;
    double membrane_thickness = 0.0; // m, axial grip of the central membrane
    // Lumped axial stiffness of the central membrane.  When absent the
    // calibrated default kCalibration * E*A/L is used (see modal).
    std::optional<double> membrane_stiffness; // N/m
    double membrane_lumped_mass = 0.0;        // kg, optional extra mass at the waist
    std::optional<FrameGeometry> frame;
};

// Total structural mass: members plus lumped membrane mass.
double total_mass(const Material& material, const PillarGeometry& geometry);

// Lumped description of one mechanical mode.
struct OscillatorParams {
    double frequency = 0.0;      // Hz
    double effective_mass = 0.0; // kg
    double quality_factor = 0.0; // dimensionless, >= 1
    double temperature = 0.0;    // K
};

struct CoatingLayer {
    double refractive_index = 1.0;
    double thickness = 0.0; // m, physical
};

// Dielectric stack, incidence-side layer first.
struct CoatingStack {
    double incident_index = 1.0;
    double substrate_index = 1.0;
    std::vector<CoatingLayer> layers;
    double design_wavelength = 0.0; // m
};

// Michelson bench model parameters.  The seed fully determines every
// stochastic realization drawn from these parameters.
struct InterferometerParams {
    double wavelength = 1064e-9;          // m
    double mean_intensity = 1.0;          // a.u. (I0)
    double visibility = 1.0;              // [0,1]
    double operating_phase = pi / 2.0;    // rad, pi/2 = mid-fringe lock
    double additive_noise_rms = 0.0;      // a.u.
    double jitter_rms = 0.0;              // rad
    double jitter_correlation_time = 0.01;// s
    std::uint64_t seed = 0;
};

void validate(const Material& m);
void validate(const CrossSection& c);
void validate(const PillarGeometry& g);
void validate(const OscillatorParams& o);
void validate(const CoatingStack& s);
void validate(const InterferometerParams& p);

template <class T>
T validated(T value) {
    validate(value);
    return value;
}

} // namespace micropillar

#endif
