#include "vqeopt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vqeopt/rng.hpp"

namespace vqeopt {

ShotConfig ShotConfig::sampled(std::int64_t shots, std::uint64_t seed) {
    if (shots < 1) {
        throw std::invalid_argument("shot count must be >= 1");
    }
    return {shots, seed};
}

kernels::Mat2 gate_matrix(GateKind kind, double angle) {
    const cplx i{0.0, 1.0};
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (kind) {
    case GateKind::RX:
    case GateKind::CRX: return {c, -i * s, -i * s, c};
    case GateKind::RY:
    case GateKind::CRY: return {c, -s, s, c};
    case GateKind::RZ:
    case GateKind::CRZ:
        return {cplx{c, -s}, 0.0, 0.0, cplx{c, s}};
    case GateKind::H: {
        const double r = 1.0 / std::sqrt(2.0);
        return {r, r, r, -r};
    }
    case GateKind::S: return {1.0, 0.0, 0.0, i};
    case GateKind::Sdg: return {1.0, 0.0, 0.0, -i};
    case GateKind::X:
    case GateKind::CNOT: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y: return {0.0, -i, i, 0.0};
    case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
    }
    throw std::invalid_argument("unknown gate kind");
}

void apply_gate(State& state, const GateInstance& gate, double angle) {
    const int n = state.n_qubits;
    auto bit = [&](int q) {
        if (q < 0 || q >= n) {
            throw std::invalid_argument("apply_gate: qubit index " +
                                        std::to_string(q) + " out of range");
        }
        return qubit_bit(n, q);
    };
    const kernels::Mat2 m = gate_matrix(gate.kind, angle);
    if (is_controlled(gate.kind)) {
        if (gate.qubits[0] == gate.qubits[1]) {
            throw std::invalid_argument(
                "apply_gate: control and target qubits coincide");
        }
        kernels::apply_controlled_1q(state.amps, bit(gate.control()),
                                     bit(gate.target()), m);
    } else {
        kernels::apply_1q(state.amps, bit(gate.qubits[0]), m);
    }
}

std::vector<double> bind_angles(const Circuit& c,
                                std::span<const double> params) {
    if (static_cast<int>(params.size()) != c.n_params) {
        throw std::invalid_argument(
            "parameter vector has length " + std::to_string(params.size()) +
            ", circuit expects " + std::to_string(c.n_params));
    }
    std::vector<double> angles(c.gates.size(), 0.0);
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const GateInstance& g = c.gates[i];
        if (is_parameterized(g.kind)) {
            angles[i] = g.angle_scale * params[static_cast<std::size_t>(
                                            g.param_index)];
        }
    }
    return angles;
}

State run_with_angles(const Circuit& c, std::span<const double> gate_angles) {
    if (gate_angles.size() != c.gates.size()) {
        throw std::invalid_argument("gate angle vector does not match "
                                    "gate count");
    }
    State s = init_basis_state(c.n_qubits, c.initial_basis_index);
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        apply_gate(s, c.gates[i], gate_angles[i]);
    }
    return s;
}

State run_circuit(const Circuit& c, std::span<const double> params) {
    return run_with_angles(c, bind_angles(c, params));
}

State intermediate_state(const Circuit& c, std::span<const double> params,
                         int layer) {
    if (!c.gates.empty() && c.layers.empty()) {
        throw std::invalid_argument("circuit has no layer metadata");
    }
    if (layer < 1 || layer > static_cast<int>(c.layers.size())) {
        throw std::invalid_argument("layer index " + std::to_string(layer) +
                                    " out of range [1, " +
                                    std::to_string(c.layers.size()) + "]");
    }
    const auto angles = bind_angles(c, params);
    State s = init_basis_state(c.n_qubits, c.initial_basis_index);
    const int last_gate = c.layers[static_cast<std::size_t>(layer - 1)].end;
    for (int i = 0; i < last_gate; ++i) {
        apply_gate(s, c.gates[static_cast<std::size_t>(i)],
                   angles[static_cast<std::size_t>(i)]);
    }
    return s;
}

double sampled_expectation(const Observable& obs, const State& state,
                           const ShotConfig& cfg) {
    if (cfg.exact()) {
        return expectation(obs, state);
    }
    const std::int64_t shots = *cfg.shots;
    double total = 0.0;
    for (std::size_t k = 0; k < obs.terms().size(); ++k) {
        const auto& term = obs.terms()[k];
        const double mean =
            expectation(term.word, state); // exact <P> in [-1, 1]
        const double p_plus = std::clamp(0.5 * (1.0 + mean), 0.0, 1.0);
        UniformRng rng(mix_seed(cfg.rng_seed, k));
        std::int64_t plus = 0;
        for (std::int64_t s = 0; s < shots; ++s) {
            if (rng.next_unit() < p_plus) ++plus;
        }
        const double sample_mean =
            static_cast<double>(2 * plus - shots) / static_cast<double>(shots);
        total += term.coeff * sample_mean;
    }
    return total;
}

} // namespace vqeopt
