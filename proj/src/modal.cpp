#include "micropillar/modal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace micropillar {

namespace {

constexpr double kRigidFrequencyHz = 1.0;

double wave_speed(const Material& material) {
    return std::sqrt(material.young_modulus / material.density);
}

} // namespace

const char* region_name(Region region) {
    switch (region) {
    case Region::Pillar: return "pillar";
    case Region::Membrane: return "membrane";
    case Region::Frame: return "frame";
    case Region::OuterMembrane: return "outer-membrane";
    }
    return "unknown";
}

std::vector<AnalyticMode> analytic_modes(const Material& material,
                                         const PillarGeometry& geometry,
                                         int n_max) {
    validate(material);
    validate(geometry);
    if (n_max < 1) throw ValidationError("n_max must be at least 1");

    const double base = wave_speed(material) / (2.0 * geometry.length);
    std::vector<AnalyticMode> modes;
    modes.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        modes.push_back({n, n * base});
    }
    return modes;
}

namespace {

// Uniform two-node axial rod: k = EA/h [[1,-1],[-1,1]], consistent mass
// m = rho*A*h/6 [[2,1],[1,2]].
void add_rod(DiscreteSystem& system, Region region, int first_node, int n_elements,
             double member_length, double ea, double rho_a) {
    const double h = member_length / n_elements;
    const double k = ea / h;
    const double m = rho_a * h / 6.0;
    for (int e = 0; e < n_elements; ++e) {
        const int i = first_node + e;
        const int j = i + 1;
        system.stiffness(i, i) += k;
        system.stiffness(j, j) += k;
        system.stiffness(i, j) -= k;
        system.stiffness(j, i) -= k;
        system.mass(i, i) += 2.0 * m;
        system.mass(j, j) += 2.0 * m;
        system.mass(i, j) += m;
        system.mass(j, i) += m;
        system.elements.push_back({region, i, j, k});
    }
}

void add_spring(DiscreteSystem& system, Region region, int i, int j, double k) {
    system.stiffness(i, i) += k;
    if (j >= 0) {
        system.stiffness(j, j) += k;
        system.stiffness(i, j) -= k;
        system.stiffness(j, i) -= k;
    }
    system.elements.push_back({region, i, j, k});
}

// Nodes of one member whose axial coordinate lies within half a membrane
// thickness of the attachment plane; never empty (falls back to the
// nearest node).
std::vector<int> attachment_nodes(const Eigen::VectorXd& z, int first, int count,
                                  double plane, double half_span) {
    std::vector<int> nodes;
    const double tol = 1e-12 + half_span;
    for (int n = first; n < first + count; ++n) {
        if (std::abs(z[n] - plane) <= tol) nodes.push_back(n);
    }
    if (nodes.empty()) {
        int best = first;
        for (int n = first; n < first + count; ++n) {
            if (std::abs(z[n] - plane) < std::abs(z[best] - plane)) best = n;
        }
        nodes.push_back(best);
    }
    return nodes;
}

int nearest_node(const Eigen::VectorXd& z, int first, int count, double target) {
    int best = first;
    for (int n = first; n < first + count; ++n) {
        if (std::abs(z[n] - target) < std::abs(z[best] - target)) best = n;
    }
    return best;
}

} // namespace

DiscreteSystem assemble_system(const Material& material,
                               const PillarGeometry& geometry,
                               int n_elements) {
    validate(material);
    validate(geometry);
    if (n_elements < 4) throw ValidationError("n_elements must be at least 4");

    const double length = geometry.length;
    const double area = geometry.cross_section.area();
    const bool has_frame = geometry.frame.has_value();

    DiscreteSystem system;
    system.pillar_nodes = n_elements + 1;
    system.frame_nodes = has_frame ? n_elements + 1 : 0;
    const int n = system.pillar_nodes + system.frame_nodes;

    system.node_positions.resize(n);
    system.stiffness = Eigen::MatrixXd::Zero(n, n);
    system.mass = Eigen::MatrixXd::Zero(n, n);
    system.pillar_length = length;
    system.total_mass = total_mass(material, geometry);

    for (int i = 0; i < system.pillar_nodes; ++i) {
        system.node_positions[i] = length * i / n_elements;
    }
    add_rod(system, Region::Pillar, 0, n_elements, length,
            material.young_modulus * area, material.density * area);

    const int frame_first = system.pillar_nodes;
    double frame_mid = 0.0;
    if (has_frame) {
        const FrameGeometry& frame = *geometry.frame;
        const double frame_area = frame.cross_section.area();
        const double z0 = length / 2.0 - frame.length / 2.0;
        frame_mid = length / 2.0;
        for (int i = 0; i <= n_elements; ++i) {
            system.node_positions[frame_first + i] = z0 + frame.length * i / n_elements;
        }
        add_rod(system, Region::Frame, frame_first, n_elements, frame.length,
                material.young_modulus * frame_area, material.density * frame_area);
    }

    // Central membrane: lumped stiffness split over the nodes it grips,
    // each spring tied to the frame node at the same height (or ground).
    const double membrane_k = geometry.membrane_stiffness
        ? *geometry.membrane_stiffness
        : kMembraneStiffnessCalibration * material.young_modulus * area / length;
    system.applied_membrane_stiffness = membrane_k;

    const double half_span = geometry.membrane_thickness / 2.0;
    const std::vector<int> grip = attachment_nodes(system.node_positions, 0,
                                                   system.pillar_nodes,
                                                   length / 2.0, half_span);
    if (membrane_k > 0.0) {
        const double k_each = membrane_k / static_cast<double>(grip.size());
        for (int node : grip) {
            int partner = -1;
            if (has_frame) {
                partner = nearest_node(system.node_positions, frame_first,
                                       system.frame_nodes, system.node_positions[node]);
            }
            add_spring(system, Region::Membrane, node, partner, k_each);
        }
    }
    if (geometry.membrane_lumped_mass > 0.0) {
        const double m_each = geometry.membrane_lumped_mass / static_cast<double>(grip.size());
        for (int node : grip) system.mass(node, node) += m_each;
    }

    // Outer membrane: frame to ground around the frame mid-plane.
    if (has_frame) {
        system.applied_outer_stiffness = geometry.frame->outer_membrane_stiffness;
        if (system.applied_outer_stiffness > 0.0) {
            const std::vector<int> outer = attachment_nodes(
                system.node_positions, frame_first, system.frame_nodes, frame_mid, half_span);
            const double k_each =
                system.applied_outer_stiffness / static_cast<double>(outer.size());
            for (int node : outer) {
                add_spring(system, Region::OuterMembrane, node, -1, k_each);
            }
        }
    }

    return system;
}

void validate(const DiscreteSystem& system) {
    const int n = system.n_nodes();
    if (n < 2) throw ValidationError("discrete system needs at least two nodes");
    if (system.stiffness.rows() != n || system.stiffness.cols() != n ||
        system.mass.rows() != n || system.mass.cols() != n) {
        throw ValidationError("stiffness and mass dimensions must match the node count");
    }
    const double k_scale = system.stiffness.cwiseAbs().maxCoeff();
    const double k_asym = (system.stiffness - system.stiffness.transpose()).cwiseAbs().maxCoeff();
    if (k_asym > 1e-12 * std::max(k_scale, 1.0)) {
        throw ValidationError("stiffness matrix is not symmetric within 1e-12 relative");
    }
    const double m_asym = (system.mass - system.mass.transpose()).cwiseAbs().maxCoeff();
    if (m_asym > 1e-12 * std::max(system.mass.cwiseAbs().maxCoeff(), 1.0)) {
        throw ValidationError("mass matrix is not symmetric within 1e-12 relative");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(system.mass);
    if (llt.info() != Eigen::Success) {
        throw ValidationError("mass matrix is not positive-definite");
    }
}

ModalResult solve_modes(const DiscreteSystem& system, int n_modes) {
    validate(system);
    const int n = system.n_nodes();
    if (n_modes < 1 || n_modes > n) {
        throw ValidationError("n_modes must lie in [1, n_nodes]");
    }

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        system.stiffness, system.mass, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success) {
        throw ComputeError("generalized eigensolve failed; mass factorization did not succeed");
    }

    ModalResult result;
    result.node_positions = system.node_positions;
    result.pillar_nodes = system.pillar_nodes;
    result.frame_nodes = system.frame_nodes;
    result.pillar_length = system.pillar_length;
    result.total_mass = system.total_mass;

    result.frequencies.resize(n_modes);
    result.rigid.resize(n_modes);
    result.shapes.resize(n, n_modes);
    result.shapes_top = Eigen::MatrixXd::Zero(n, n_modes);
    result.effective_masses.assign(n_modes, std::numeric_limits<double>::quiet_NaN());
    result.energy_partition.resize(n_modes);

    const int top = system.pillar_top_node();
    for (int m = 0; m < n_modes; ++m) {
        const double lambda = solver.eigenvalues()[m];
        const double omega = std::sqrt(std::max(lambda, 0.0));
        result.frequencies[m] = omega / (2.0 * pi);
        result.rigid[m] = result.frequencies[m] < kRigidFrequencyHz;

        Eigen::VectorXd u = solver.eigenvectors().col(m); // u^T M u = 1
        // Fix an orientation so results are reproducible: positive top face.
        const double max_abs = u.cwiseAbs().maxCoeff();
        if (u[top] < 0.0 || (u[top] == 0.0 && u.sum() < 0.0)) u = -u;
        result.shapes.col(m) = u;

        if (std::abs(u[top]) > 1e-9 * max_abs) {
            result.shapes_top.col(m) = u / u[top];
            result.effective_masses[m] = 1.0 / (u[top] * u[top]);
        }

        if (!result.rigid[m]) {
            std::map<Region, double> energy;
            double sum = 0.0;
            for (const DiscreteSystem::Element& el : system.elements) {
                const double du = el.node_j >= 0 ? u[el.node_i] - u[el.node_j] : u[el.node_i];
                const double e = 0.5 * el.stiffness * du * du;
                energy[el.region] += e;
                sum += e;
            }
            if (sum > 0.0) {
                for (auto& [region, e] : energy) e /= sum;
                result.energy_partition[m] = std::move(energy);
            }
        }
    }
    return result;
}

namespace {

void require_mode(const ModalResult& result, int mode) {
    if (mode < 0 || mode >= result.n_modes()) {
        throw ValidationError("mode index out of range");
    }
}

} // namespace

double effective_mass(const ModalResult& result, int mode) {
    require_mode(result, mode);
    const double m = result.effective_masses[static_cast<std::size_t>(mode)];
    if (!std::isfinite(m)) {
        throw ComputeError("observation at node: the pillar top face does not move in this mode");
    }
    return m;
}

ClampingQ clamping_q(const ModalResult& result, int mode) {
    require_mode(result, mode);
    const auto& partition = result.energy_partition[static_cast<std::size_t>(mode)];
    const Region loss_region =
        result.frame_nodes > 0 ? Region::OuterMembrane : Region::Membrane;
    double fraction = 0.0;
    if (auto it = partition.find(loss_region); it != partition.end()) {
        fraction = it->second;
    }
    if (fraction <= 0.0) {
        return {std::numeric_limits<double>::infinity(), true};
    }
    return {1.0 / fraction, false};
}

double loss_budget(const std::vector<LossContribution>& contributions) {
    if (contributions.empty()) {
        throw ValidationError("loss budget needs at least one contribution");
    }
    double inverse = 0.0;
    for (const LossContribution& c : contributions) {
        if (!(c.participation >= 0.0 && c.participation <= 1.0)) {
            throw ValidationError("participation must lie in [0,1]");
        }
        if (!(c.q > 0.0)) throw ValidationError("per-channel q must be positive");
        inverse += c.participation / c.q;
    }
    if (inverse == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / inverse;
}

double mode_amplitude_at(const ModalResult& result, int mode, double z) {
    require_mode(result, mode);
    if (z < 0.0 || z > result.pillar_length) {
        throw ValidationError("z must lie within [0, pillar length]");
    }
    const int top = result.pillar_nodes - 1;
    const Eigen::VectorXd& u = result.shapes.col(mode);
    if (std::abs(u[top]) <= 1e-9 * u.cwiseAbs().maxCoeff()) {
        throw ComputeError("observation at node: the pillar top face does not move in this mode");
    }
    // Pillar nodes are uniformly spaced in [0, L].
    const double h = result.pillar_length / (result.pillar_nodes - 1);
    int i = std::min(static_cast<int>(z / h), result.pillar_nodes - 2);
    const double t = (z - i * h) / h;
    const double value = (1.0 - t) * u[i] + t * u[i + 1];
    return value / u[top];
}

int pillar_mode_index(const ModalResult& result) {
    int first_flexible = -1;
    for (int m = 0; m < result.n_modes(); ++m) {
        if (result.rigid[m]) continue;
        if (first_flexible < 0) first_flexible = m;
        const auto& partition = result.energy_partition[static_cast<std::size_t>(m)];
        auto it = partition.find(Region::Pillar);
        if (it == partition.end()) continue;
        bool dominant = true;
        for (const auto& [region, fraction] : partition) {
            if (region != Region::Pillar && fraction > it->second) dominant = false;
        }
        if (dominant) return m;
    }
    if (first_flexible < 0) throw ComputeError("no flexible mode found");
    return first_flexible;
}

} // namespace micropillar
