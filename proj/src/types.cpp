#include "micropillar/types.hpp"

#include <cmath>

namespace micropillar {

const char* section_shape_name(SectionShape shape) {
    switch (shape) {
    case SectionShape::EquilateralTriangle: return "equilateral-triangle";
    case SectionShape::Square: return "square";
    case SectionShape::Circle: return "circle";
    }
    return "unknown";
}

double CrossSection::area() const {
    switch (shape) {
    case SectionShape::EquilateralTriangle:
        return std::sqrt(3.0) / 4.0 * dimension * dimension;
    case SectionShape::Square:
        return dimension * dimension;
    case SectionShape::Circle:
        return pi * dimension * dimension / 4.0;
    }
    return 0.0;
}

CrossSection CrossSection::equilateral_triangle(double side) {
    return CrossSection{SectionShape::EquilateralTriangle, side};
}

CrossSection CrossSection::square(double side) {
    return CrossSection{SectionShape::Square, side};
}

CrossSection CrossSection::circle(double diameter) {
    return CrossSection{SectionShape::Circle, diameter};
}

double total_mass(const Material& material, const PillarGeometry& geometry) {
    double mass = material.density * geometry.cross_section.area() * geometry.length;
    mass += geometry.membrane_lumped_mass;
    if (geometry.frame) {
        mass += material.density * geometry.frame->cross_section.area() * geometry.frame->length;
    }
    return mass;
}

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw ValidationError(message);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

} // namespace

void validate(const Material& m) {
    require(positive_finite(m.young_modulus), "young_modulus must be positive");
    require(positive_finite(m.density), "density must be positive");
    require(positive_finite(m.intrinsic_q), "intrinsic_q must be positive");
}

void validate(const CrossSection& c) {
    require(positive_finite(c.dimension), "cross-section dimension must be positive");
}

void validate(const PillarGeometry& g) {
    require(positive_finite(g.length), "length must be positive");
    validate(g.cross_section);
    require(positive_finite(g.membrane_thickness), "membrane_thickness must be positive");
    require(g.membrane_thickness < g.length,
            "membrane_thickness must be smaller than the pillar length");
    if (g.membrane_stiffness) {
        require(std::isfinite(*g.membrane_stiffness) && *g.membrane_stiffness >= 0.0,
                "membrane_stiffness must be non-negative");
    }
    require(std::isfinite(g.membrane_lumped_mass) && g.membrane_lumped_mass >= 0.0,
            "membrane_lumped_mass must be non-negative");
    if (g.frame) {
        require(positive_finite(g.frame->length), "frame length must be positive");
        validate(g.frame->cross_section);
        require(std::isfinite(g.frame->outer_membrane_stiffness) &&
                    g.frame->outer_membrane_stiffness >= 0.0,
                "outer_membrane_stiffness must be non-negative");
    }
}

void validate(const OscillatorParams& o) {
    require(positive_finite(o.frequency), "frequency must be positive");
    require(positive_finite(o.effective_mass), "effective_mass must be positive");
    // An unbounded quality factor is a legal lossless idealization.
    require(o.quality_factor >= 1.0, "quality_factor must be at least 1");
    require(std::isfinite(o.temperature) && o.temperature >= 0.0,
            "temperature must be non-negative");
}

void validate(const CoatingStack& s) {
    require(std::isfinite(s.incident_index) && s.incident_index >= 1.0,
            "incident_index must be at least 1");
    require(std::isfinite(s.substrate_index) && s.substrate_index >= 1.0,
            "substrate_index must be at least 1");
    require(positive_finite(s.design_wavelength), "design_wavelength must be positive");
    for (const CoatingLayer& layer : s.layers) {
        require(std::isfinite(layer.refractive_index) && layer.refractive_index >= 1.0,
                "layer refractive_index must be at least 1");
        require(positive_finite(layer.thickness), "layer thickness must be positive");
    }
}

void validate(const InterferometerParams& p) {
    require(positive_finite(p.wavelength), "wavelength must be positive");
    require(positive_finite(p.mean_intensity), "mean_intensity must be positive");
    require(std::isfinite(p.visibility) && p.visibility >= 0.0 && p.visibility <= 1.0,
            "visibility must lie in [0,1]");
    require(std::isfinite(p.operating_phase), "operating_phase must be finite");
    require(std::isfinite(p.additive_noise_rms) && p.additive_noise_rms >= 0.0,
            "additive_noise_rms must be non-negative");
    require(std::isfinite(p.jitter_rms) && p.jitter_rms >= 0.0,
            "jitter_rms must be non-negative");
    require(positive_finite(p.jitter_correlation_time),
            "jitter_correlation_time must be positive");
}

} // namespace micropillar
