#include "vqeopt/circuit.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "vqeopt/state.hpp"

namespace vqeopt {

bool is_parameterized(GateKind k) {
    switch (k) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::CRX:
    case GateKind::CRY:
    case GateKind::CRZ: return true;
    default: return false;
    }
}

bool is_controlled(GateKind k) {
    switch (k) {
    case GateKind::CNOT:
    case GateKind::CRX:
    case GateKind::CRY:
    case GateKind::CRZ: return true;
    default: return false;
    }
}

char rotation_axis(GateKind k) {
    switch (k) {
    case GateKind::RX:
    case GateKind::CRX: return 'X';
    case GateKind::RY:
    case GateKind::CRY: return 'Y';
    case GateKind::RZ:
    case GateKind::CRZ: return 'Z';
    default: throw std::invalid_argument("gate kind has no rotation axis");
    }
}

std::string gate_name(GateKind k) {
    switch (k) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "Sdg";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CRX: return "CRX";
    case GateKind::CRY: return "CRY";
    case GateKind::CRZ: return "CRZ";
    }
    return "?";
}

namespace {

void validate_gate(const Circuit& c, const GateInstance& g, int index) {
    const std::string where = "gate " + std::to_string(index) + " (" +
                              gate_name(g.kind) + "): ";
    auto check_qubit = [&](int q) {
        if (q < 0 || q >= c.n_qubits) {
            throw std::invalid_argument(where + "qubit index " +
                                        std::to_string(q) + " out of range");
        }
    };
    check_qubit(g.qubits[0]);
    if (is_controlled(g.kind)) {
        check_qubit(g.qubits[1]);
        if (g.qubits[0] == g.qubits[1]) {
            throw std::invalid_argument(where +
                                        "control and target qubits coincide");
        }
    }
    if (is_parameterized(g.kind)) {
        if (g.param_index < 0 || g.param_index >= c.n_params) {
            throw std::invalid_argument(where + "parameter index " +
                                        std::to_string(g.param_index) +
                                        " out of range");
        }
        if (g.angle_scale == 0.0 || !std::isfinite(g.angle_scale)) {
            throw std::invalid_argument(where + "angle scale must be finite "
                                                "and nonzero");
        }
    } else if (g.param_index != -1) {
        throw std::invalid_argument(where + "fixed gate carries a parameter "
                                            "index");
    }
}

void validate_layers(const Circuit& c) {
    int cursor = 0;
    for (std::size_t li = 0; li < c.layers.size(); ++li) {
        const LayerSpec& layer = c.layers[li];
        const std::string where = "layer " + std::to_string(li) + ": ";
        if (layer.begin != cursor || layer.end < layer.begin ||
            layer.end > static_cast<int>(c.gates.size())) {
            throw std::invalid_argument(where + "gate range is not a "
                                                "contiguous partition");
        }
        cursor = layer.end;

        bool any_param = false;
        for (int gi = layer.begin; gi < layer.end; ++gi) {
            any_param = any_param || is_parameterized(c.gates[gi].kind);
        }
        if (any_param != layer.parameterized) {
            throw std::invalid_argument(where +
                                        "parameterized flag is inconsistent");
        }
        if (!layer.rotation_layer) {
            if (!layer.generators.empty()) {
                throw std::invalid_argument(
                    where + "non-rotation layer carries generators");
            }
            continue;
        }
        // Rotation layers: single-qubit Pauli rotations on distinct qubits,
        // with generator metadata that matches the gates.
        std::set<int> qubits;
        std::size_t gen = 0;
        for (int gi = layer.begin; gi < layer.end; ++gi) {
            const GateInstance& g = c.gates[gi];
            if (g.kind != GateKind::RX && g.kind != GateKind::RY &&
                g.kind != GateKind::RZ) {
                throw std::invalid_argument(
                    where + "rotation layer contains " + gate_name(g.kind));
            }
            if (!qubits.insert(g.qubits[0]).second) {
                throw std::invalid_argument(
                    where + "two rotations act on qubit " +
                    std::to_string(g.qubits[0]));
            }
            if (gen >= layer.generators.size()) {
                throw std::invalid_argument(where + "missing generator entry");
            }
            const LayerGenerator& k = layer.generators[gen++];
            if (k.qubit != g.qubits[0] || k.axis != rotation_axis(g.kind) ||
                k.param_index != g.param_index ||
                k.angle_scale != g.angle_scale) {
                throw std::invalid_argument(where +
                                            "generator entry does not match "
                                            "its gate");
            }
        }
        if (gen != layer.generators.size()) {
            throw std::invalid_argument(where + "extra generator entries");
        }
    }
    if (cursor != static_cast<int>(c.gates.size())) {
        throw std::invalid_argument("layer partition does not cover the "
                                    "gate list");
    }
}

} // namespace

void validate_circuit(const Circuit& c) {
    if (c.n_qubits < 1 || c.n_qubits > kMaxQubits) {
        throw std::invalid_argument("circuit qubit count must be in [1, " +
                                    std::to_string(kMaxQubits) + "]");
    }
    if (c.n_params < 0) {
        throw std::invalid_argument("negative parameter count");
    }
    if (c.initial_basis_index >= (std::uint64_t{1} << c.n_qubits)) {
        throw std::invalid_argument("initial basis index out of range");
    }
    std::vector<bool> seen(static_cast<std::size_t>(c.n_params), false);
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        validate_gate(c, c.gates[i], static_cast<int>(i));
        if (is_parameterized(c.gates[i].kind)) {
            seen[static_cast<std::size_t>(c.gates[i].param_index)] = true;
        }
    }
    for (int p = 0; p < c.n_params; ++p) {
        if (!seen[static_cast<std::size_t>(p)]) {
            throw std::invalid_argument("parameter " + std::to_string(p) +
                                        " is bound to no gate");
        }
    }
    validate_layers(c);
}

std::vector<LayerSpec> layer_partition(const Circuit& c) {
    if (!c.gates.empty() && c.layers.empty()) {
        throw std::invalid_argument("circuit has no layer metadata");
    }
    validate_circuit(c);
    return c.layers;
}

std::vector<Occurrence> parameter_occurrences(const Circuit& c) {
    std::vector<Occurrence> out;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const GateInstance& g = c.gates[i];
        if (is_parameterized(g.kind)) {
            out.push_back({static_cast<int>(i), g.param_index, g.angle_scale,
                           is_controlled(g.kind)});
        }
    }
    return out;
}

OccurrenceCensus occurrence_census(const Circuit& c) {
    OccurrenceCensus census;
    for (const GateInstance& g : c.gates) {
        if (!is_parameterized(g.kind)) continue;
        if (is_controlled(g.kind))
            ++census.controlled;
        else
            ++census.single_qubit;
    }
    return census;
}

namespace {

// Builder helpers: append a gate and (optionally) grow the current layer.

struct LayerBuilder {
    Circuit& c;
    int layer_begin = 0;

    void finish_fixed() {
        if (layer_begin == static_cast<int>(c.gates.size())) return;
        c.layers.push_back({layer_begin, static_cast<int>(c.gates.size()),
                            false, false, {}});
        layer_begin = static_cast<int>(c.gates.size());
    }
    void finish_rotation(std::vector<LayerGenerator> gens) {
        c.layers.push_back({layer_begin, static_cast<int>(c.gates.size()),
                            true, true, std::move(gens)});
        layer_begin = static_cast<int>(c.gates.size());
    }
    void finish_other_param() {
        c.layers.push_back({layer_begin, static_cast<int>(c.gates.size()),
                            true, false, {}});
        layer_begin = static_cast<int>(c.gates.size());
    }
};

} // namespace

Circuit build_example1_ansatz() {
    Circuit c;
    c.n_qubits = 2;
    c.n_params = 3;
    c.initial_basis_index = 0;
    LayerBuilder lb{c};

    c.gates.push_back({GateKind::RY, {0, -1}, 0, 2.0});
    c.gates.push_back({GateKind::RY, {1, -1}, 1, 2.0});
    lb.finish_rotation({{0, 'Y', 0, 2.0}, {1, 'Y', 1, 2.0}});

    // Entangling block: CNOT, controlled-RY back-rotation, Z. Up to the
    // fixed tail this is a Givens rotation between |01> and |10>, so the
    // metric of this circuit is exactly example1_metric_closed_form, and
    // the family still contains the model's exact ground state.
    c.gates.push_back({GateKind::CNOT, {0, 1}, -1, 1.0});
    lb.finish_fixed();
    c.gates.push_back({GateKind::CRY, {1, 0}, 2, 2.0});
    lb.finish_other_param();
    c.gates.push_back({GateKind::Z, {0, -1}, -1, 1.0});
    lb.finish_fixed();

    validate_circuit(c);
    return c;
}

Circuit build_efficient_su2(int n_qubits, int reps) {
    if (n_qubits < 2 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("efficient_su2: qubit count must be in "
                                    "[2, " + std::to_string(kMaxQubits) + "]");
    }
    if (reps < 1) {
        throw std::invalid_argument("efficient_su2: reps must be >= 1");
    }
    Circuit c;
    c.n_qubits = n_qubits;
    c.n_params = 2 * n_qubits * (reps + 1);
    c.initial_basis_index = 0;
    LayerBuilder lb{c};

    int p = 0;
    auto rotation_layer = [&](GateKind kind, char axis) {
        std::vector<LayerGenerator> gens;
        for (int q = 0; q < n_qubits; ++q) {
            c.gates.push_back({kind, {q, -1}, p, 1.0});
            gens.push_back({q, axis, p, 1.0});
            ++p;
        }
        lb.finish_rotation(std::move(gens));
    };
    for (int r = 0; r < reps; ++r) {
        rotation_layer(GateKind::RY, 'Y');
        rotation_layer(GateKind::RZ, 'Z');
        for (int q = 0; q + 1 < n_qubits; ++q) {
            c.gates.push_back({GateKind::CNOT, {q, q + 1}, -1, 1.0});
        }
        lb.finish_fixed();
    }
    rotation_layer(GateKind::RY, 'Y');
    rotation_layer(GateKind::RZ, 'Z');

    validate_circuit(c);
    return c;
}

namespace {

// Two-qubit orthogonal block on the pair (a, b). The fixed wrapper maps the
// computational basis to a maximally-entangled basis in which conjugated
// local rotations act as real orthogonal transformations; the six enclosed
// rotations (Z-X-Z Euler angles per qubit) therefore parameterize the full
// orthogonal block. Verified by the realness/orthogonality property test.
void emit_so4_row(Circuit& c, LayerBuilder& lb,
                  const std::vector<std::pair<int, int>>& row, int& p) {
    for (auto [a, b] : row) {
        c.gates.push_back({GateKind::Sdg, {a, -1}, -1, 1.0});
        c.gates.push_back({GateKind::Sdg, {b, -1}, -1, 1.0});
        c.gates.push_back({GateKind::H, {b, -1}, -1, 1.0});
        c.gates.push_back({GateKind::CNOT, {b, a}, -1, 1.0});
    }
    lb.finish_fixed();

    const GateKind kinds[3] = {GateKind::RZ, GateKind::RX, GateKind::RZ};
    const char axes[3] = {'Z', 'X', 'Z'};
    for (int sub = 0; sub < 3; ++sub) {
        std::vector<LayerGenerator> gens;
        int block = 0;
        for (auto [a, b] : row) {
            const int pa = p + 6 * block + sub;
            const int pb = p + 6 * block + 3 + sub;
            c.gates.push_back({kinds[sub], {a, -1}, pa, 1.0});
            gens.push_back({a, axes[sub], pa, 1.0});
            c.gates.push_back({kinds[sub], {b, -1}, pb, 1.0});
            gens.push_back({b, axes[sub], pb, 1.0});
            ++block;
        }
        lb.finish_rotation(std::move(gens));
    }
    p += 6 * static_cast<int>(row.size());

    for (auto [a, b] : row) {
        c.gates.push_back({GateKind::CNOT, {b, a}, -1, 1.0});
        c.gates.push_back({GateKind::H, {b, -1}, -1, 1.0});
        c.gates.push_back({GateKind::S, {a, -1}, -1, 1.0});
        c.gates.push_back({GateKind::S, {b, -1}, -1, 1.0});
    }
    lb.finish_fixed();
}

// Splits an arbitrary pair list into rows of qubit-disjoint pairs so each
// parameterized sub-layer keeps its rotations on distinct qubits.
std::vector<std::vector<std::pair<int, int>>>
split_rows(const std::vector<std::pair<int, int>>& pairs) {
    std::vector<std::vector<std::pair<int, int>>> rows;
    std::set<int> used;
    for (const auto& pr : pairs) {
        if (rows.empty() || used.count(pr.first) || used.count(pr.second)) {
            rows.emplace_back();
            used.clear();
        }
        rows.back().push_back(pr);
        used.insert(pr.first);
        used.insert(pr.second);
    }
    return rows;
}

} // namespace

Circuit build_so4_ansatz(int n_qubits, int layers,
                         const std::vector<std::pair<int, int>>& pairs,
                         std::uint64_t initial_basis) {
    if (n_qubits < 2 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("so4: qubit count must be in [2, " +
                                    std::to_string(kMaxQubits) + "]");
    }
    if (layers < 1) {
        throw std::invalid_argument("so4: layer count must be >= 1");
    }
    if (pairs.empty()) {
        throw std::invalid_argument("so4: empty pair list");
    }
    for (const auto& pr : pairs) {
        if (pr.first < 0 || pr.first >= n_qubits || pr.second < 0 ||
            pr.second >= n_qubits || pr.first == pr.second) {
            throw std::invalid_argument(
                "so4: invalid pair (" + std::to_string(pr.first) + ", " +
                std::to_string(pr.second) + ")");
        }
    }

    Circuit c;
    c.n_qubits = n_qubits;
    c.n_params = 6 * static_cast<int>(pairs.size()) * layers;
    c.initial_basis_index = initial_basis;
    LayerBuilder lb{c};

    const auto rows = split_rows(pairs);
    int p = 0;
    for (int l = 0; l < layers; ++l) {
        for (const auto& row : rows) {
            emit_so4_row(c, lb, row, p);
        }
    }

    validate_circuit(c);
    return c;
}

Circuit build_so4_ansatz(int n_qubits, int layers, So4Pairing pairing,
                         std::uint64_t initial_basis) {
    if (pairing == So4Pairing::brick && n_qubits % 2 != 0) {
        throw std::invalid_argument("so4: brick pairing requires an even "
                                    "qubit count");
    }
    std::vector<std::pair<int, int>> pairs;
    for (int q = 0; q + 1 < n_qubits; q += 2) pairs.emplace_back(q, q + 1);
    if (pairing == So4Pairing::brick) {
        for (int q = 1; q + 1 < n_qubits; q += 2) pairs.emplace_back(q, q + 1);
    }
    return build_so4_ansatz(n_qubits, layers, pairs, initial_basis);
}

} // namespace vqeopt
