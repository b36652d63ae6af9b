#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "vqeopt/circuit.hpp"
#include "vqeopt/kernels.hpp"
#include "vqeopt/pauli.hpp"
#include "vqeopt/state.hpp"

namespace vqeopt {

/// Exact or shot-sampled expectation estimation. Results in sampling mode
/// are deterministic functions of rng_seed.
struct ShotConfig {
    std::optional<std::int64_t> shots; // nullopt = exact mode
    std::uint64_t rng_seed = 0;

    bool exact() const { return !shots.has_value(); }

    static ShotConfig exact_mode() { return {}; }
    static ShotConfig sampled(std::int64_t shots, std::uint64_t seed);
};

/// 2x2 matrix of a gate kind; `angle` is the bound gate angle and is ignored
/// for fixed kinds. Rotations follow exp(-i*angle*P/2).
kernels::Mat2 gate_matrix(GateKind kind, double angle);

/// Applies one gate in place. For parameterized kinds the caller supplies
/// the bound gate angle (angle_scale already folded in).
void apply_gate(State& state, const GateInstance& gate, double angle = 0.0);

/// Per-gate bound angles angle_scale * theta[param_index] (0 for fixed).
std::vector<double> bind_angles(const Circuit& c,
                                std::span<const double> params);

/// Runs the circuit from its initial basis state with explicit per-gate
/// angles (size must equal the gate count).
State run_with_angles(const Circuit& c, std::span<const double> gate_angles);

State run_circuit(const Circuit& c, std::span<const double> params);

/// State after all gates of layers 1..layer (1-based over the circuit's
/// layer partition). layer == layer count reproduces run_circuit.
State intermediate_state(const Circuit& c, std::span<const double> params,
                         int layer);

/// Shot-sampled estimate of <psi|O|psi>: each Pauli term is sampled
/// independently with `shots` two-outcome draws of mean <P>. Exact mode
/// falls through to expectation().
double sampled_expectation(const Observable& obs, const State& state,
                           const ShotConfig& cfg);

} // namespace vqeopt
