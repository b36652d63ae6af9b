#pragma once

// Shared generators for randomized tests. Everything is seeded and
// deterministic.

#include <cmath>
#include <string>
#include <vector>

#include "vqeopt/circuit.hpp"
#include "vqeopt/pauli.hpp"
#include "vqeopt/rng.hpp"
#include "vqeopt/state.hpp"

namespace vqeopt::testutil {

inline State random_state(int n_qubits, std::uint64_t seed) {
    UniformRng rng(seed);
    State s;
    s.n_qubits = n_qubits;
    s.amps.resize(std::size_t{1} << n_qubits);
    double norm2 = 0.0;
    for (cplx& a : s.amps) {
        a = cplx{rng.next_in(-1, 1), rng.next_in(-1, 1)};
        norm2 += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (cplx& a : s.amps) a *= scale;
    return s;
}

inline Observable random_observable(int n_qubits, int n_terms,
                                    std::uint64_t seed) {
    UniformRng rng(seed);
    std::vector<Observable::Term> terms;
    const char letters[4] = {'I', 'X', 'Y', 'Z'};
    for (int t = 0; t < n_terms; ++t) {
        std::string word;
        for (int q = 0; q < n_qubits; ++q) {
            word.push_back(letters[rng.next_u64() % 4]);
        }
        terms.push_back({rng.next_in(-2, 2), PauliWord(word)});
    }
    return Observable(n_qubits, std::move(terms));
}

inline std::vector<double> random_params(int n, std::uint64_t seed,
                                         double lo = -1.5,
                                         double hi = 1.5) {
    UniformRng rng(seed);
    std::vector<double> theta(static_cast<std::size_t>(n));
    for (double& x : theta) x = rng.next_in(lo, hi);
    return theta;
}

struct RandomCircuitOptions {
    int n_qubits = 4;
    int rotation_layers = 3;
    bool with_controlled = false;
    bool with_shared = false;
};

/// Random layered circuit with valid layer metadata: rotation layers with
/// random axes and angle scales, CNOT-chain entanglers, and optionally a
/// controlled-rotation layer and a shared parameter slot.
inline Circuit random_circuit(const RandomCircuitOptions& opt,
                              std::uint64_t seed) {
    UniformRng rng(seed);
    Circuit c;
    c.n_qubits = opt.n_qubits;
    c.initial_basis_index = 0;
    int p = 0;

    auto push_rotation_layer = [&] {
        const int begin = static_cast<int>(c.gates.size());
        std::vector<LayerGenerator> gens;
        for (int q = 0; q < opt.n_qubits; ++q) {
            const int which = static_cast<int>(rng.next_u64() % 3);
            const GateKind kind = which == 0   ? GateKind::RX
                                  : which == 1 ? GateKind::RY
                                               : GateKind::RZ;
            const double scales[3] = {0.5, 1.0, 2.0};
            const double scale = scales[rng.next_u64() % 3];
            c.gates.push_back({kind, {q, -1}, p, scale});
            gens.push_back({q, rotation_axis(kind), p, scale});
            ++p;
        }
        c.layers.push_back({begin, static_cast<int>(c.gates.size()), true,
                            true, std::move(gens)});
    };
    auto push_entangler = [&] {
        const int begin = static_cast<int>(c.gates.size());
        for (int q = 0; q + 1 < opt.n_qubits; ++q) {
            c.gates.push_back({GateKind::CNOT, {q, q + 1}, -1, 1.0});
        }
        c.layers.push_back(
            {begin, static_cast<int>(c.gates.size()), false, false, {}});
    };

    for (int l = 0; l < opt.rotation_layers; ++l) {
        push_rotation_layer();
        if (opt.with_controlled && l == 0) {
            const int begin = static_cast<int>(c.gates.size());
            const int ctrl = static_cast<int>(rng.next_u64() %
                                              static_cast<std::uint64_t>(
                                                  opt.n_qubits));
            const int tgt = (ctrl + 1) % opt.n_qubits;
            const int which = static_cast<int>(rng.next_u64() % 3);
            const GateKind kind = which == 0   ? GateKind::CRX
                                  : which == 1 ? GateKind::CRY
                                               : GateKind::CRZ;
            c.gates.push_back({kind, {ctrl, tgt}, p++, 1.0});
            c.layers.push_back({begin, static_cast<int>(c.gates.size()), true,
                                false, {}});
        }
        if (l + 1 < opt.rotation_layers) push_entangler();
    }
    if (opt.with_shared && p > 0) {
        // One extra rotation layer whose gates reuse existing slots.
        const int begin = static_cast<int>(c.gates.size());
        std::vector<LayerGenerator> gens;
        for (int q = 0; q < opt.n_qubits; ++q) {
            const int reuse =
                static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(p));
            c.gates.push_back({GateKind::RY, {q, -1}, reuse, 1.0});
            gens.push_back({q, 'Y', reuse, 1.0});
        }
        c.layers.push_back({begin, static_cast<int>(c.gates.size()), true,
                            true, std::move(gens)});
    }
    c.n_params = p;
    validate_circuit(c);
    return c;
}

} // namespace vqeopt::testutil
