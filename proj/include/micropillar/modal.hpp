#ifndef MICROPILLAR_MODAL_HPP
#define MICROPILLAR_MODAL_HPP

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "micropillar/types.hpp"

// Longitudinal modes of the pillar/membrane/frame assembly.
//
// Two routes are provided: a closed-form free-free rod oracle
// (analytic_modes) and a 1-D finite-element surrogate assembled from
// two-node axial elements with consistent mass matrices.  The central
// membrane enters as a lumped spring distributed over its axial grip,
// tying the pillar waist to the frame (or to ground when no frame is
// modeled); the outer membrane ties the frame to ground the same way.

namespace micropillar {

enum class Region { Pillar, Membrane, Frame, OuterMembrane };

const char* region_name(Region region);

// Calibration constant for the default membrane stiffness,
// kCalibration * E*A_pillar/L.  The grounded fundamental stays within 2%
// of the free-free value with this choice (the mode node sits at the
// membrane); the applied value is echoed in reports.
inline constexpr double kMembraneStiffnessCalibration = 1.0;

// Frame defaults, used when a frame is requested without dimensions.
// The frame member is longer than the pillar so that its own compression
// resonance lies below the pillar mode and the frame responds in
// counter-phase, with matched momenta by symmetry.
inline constexpr double kDefaultFrameLengthRatio = 1.4;

struct AnalyticMode {
    int order = 0;          // n >= 1, shape cos(n*pi*z/L)
    double frequency = 0.0; // Hz, n/(2L)*sqrt(E/rho)
};

// First n_max longitudinal modes of the geometry treated as a uniform
// free-free rod (membrane and frame ignored).
std::vector<AnalyticMode> analytic_modes(const Material& material,
                                         const PillarGeometry& geometry,
                                         int n_max);

struct DiscreteSystem {
    // One scalar axial displacement per node.  Pillar nodes come first
    // (z in [0,L]), then frame nodes when present.
    Eigen::VectorXd node_positions;
    int pillar_nodes = 0; // node range [0, pillar_nodes)
    int frame_nodes = 0;  // node range [pillar_nodes, pillar_nodes+frame_nodes)

    Eigen::MatrixXd stiffness; // N/m, symmetric
    Eigen::MatrixXd mass;      // kg, symmetric positive-definite

    // Per-element bookkeeping used for strain-energy partitions.
    // node_j < 0 marks a spring to ground.
    struct Element {
        Region region;
        int node_i = 0;
        int node_j = -1;
        double stiffness = 0.0; // scalar k; energy = k/2 (u_i - u_j)^2
    };
    std::vector<Element> elements;

    double total_mass = 0.0; // kg
    double pillar_length = 0.0;
    double applied_membrane_stiffness = 0.0; // N/m, after defaulting
    double applied_outer_stiffness = 0.0;    // N/m, 0 when no frame

    int n_nodes() const { return static_cast<int>(node_positions.size()); }
    int pillar_top_node() const { return pillar_nodes - 1; } // z = L
};

// Throws ValidationError when K is asymmetric beyond 1e-12 relative or M
// is not symmetric positive-definite.
void validate(const DiscreteSystem& system);

DiscreteSystem assemble_system(const Material& material,
                               const PillarGeometry& geometry,
                               int n_elements);

struct ModalResult {
    std::vector<double> frequencies; // Hz, ascending
    std::vector<bool> rigid;         // frequency below 1 Hz

    // Columns are mass-normalized (u^T M u = 1).
    Eigen::MatrixXd shapes;
    // Same shapes rescaled to unit displacement at the pillar top face;
    // a column is left zero when the top face is a node of that mode.
    Eigen::MatrixXd shapes_top;

    // Modal mass referred to the pillar top face, NaN when the top face
    // is a node.  Use effective_mass() for the checked accessor.
    std::vector<double> effective_masses;

    // Strain-energy fraction per region; empty for rigid modes.
    std::vector<std::map<Region, double>> energy_partition;

    // Geometry echo needed by the interpolation and report helpers.
    Eigen::VectorXd node_positions;
    int pillar_nodes = 0;
    int frame_nodes = 0;
    double pillar_length = 0.0;
    double total_mass = 0.0;

    int n_modes() const { return static_cast<int>(frequencies.size()); }
};

// Generalized symmetric eigensolve K u = w^2 M u via a Cholesky reduction
// of M followed by a dense symmetric eigensolve; modes come back ascending.
ModalResult solve_modes(const DiscreteSystem& system, int n_modes);

// Modal mass normalized to unit displacement at the pillar top face.
// Throws ComputeError when the top face is a node of the mode.
double effective_mass(const ModalResult& result, int mode);

struct ClampingQ {
    double value = 0.0;
    bool unbounded = false; // loss fraction underflowed to zero
};

// Q = 1 / (strain-energy fraction in the outermost grounding membrane):
// the outer membrane when a frame is modeled, otherwise the central
// membrane, which then carries the clamping role.
ClampingQ clamping_q(const ModalResult& result, int mode);

struct LossContribution {
    double participation = 0.0; // [0,1]
    double q = 0.0;
};

// 1/Q_total = sum participation_i / q_i.
double loss_budget(const std::vector<LossContribution>& contributions);

// Signed displacement at axial position z on the pillar, normalized to
// the pillar top face; linear interpolation between nodes.
double mode_amplitude_at(const ModalResult& result, int mode, double z);

// Index of the first flexible mode whose strain energy is dominated by
// the pillar region (the paper's compression-expansion mode).  Falls back
// to the first flexible mode.
int pillar_mode_index(const ModalResult& result);

} // namespace micropillar

#endif
