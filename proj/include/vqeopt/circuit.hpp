#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace vqeopt {

enum class GateKind { RX, RY, RZ, H, S, Sdg, X, Y, Z, CNOT, CRX, CRY, CRZ };

bool is_parameterized(GateKind k);
bool is_controlled(GateKind k); // two-qubit (control, target) gates
/// 'X'/'Y'/'Z' axis of a rotation kind (RX/RY/RZ/CRX/CRY/CRZ).
char rotation_axis(GateKind k);
std::string gate_name(GateKind k);

/// One gate in a circuit. Single-qubit gates use qubits[0]; controlled gates
/// use qubits[0] as control and qubits[1] as target. Parameterized kinds
/// bind gate angle = angle_scale * theta[param_index].
struct GateInstance {
    GateKind kind;
    std::array<int, 2> qubits{0, -1};
    int param_index = -1;
    double angle_scale = 1.0;

    int target() const { return is_controlled(kind) ? qubits[1] : qubits[0]; }
    int control() const { return qubits[0]; }
};

/// Generator metadata for one parameterized rotation inside a layer:
/// the derivative of the bound gate is -i * (angle_scale/2) * P applied on
/// `qubit`, with P the Pauli of `axis`.
struct LayerGenerator {
    int qubit;
    char axis;
    int param_index;
    double angle_scale;
};

/// Contiguous block of gates. A rotation layer contains only single-qubit
/// Pauli rotations on pairwise-distinct qubits, so its generators commute;
/// only such layers are usable for the block-diagonal metric.
struct LayerSpec {
    int begin = 0; // gate index range [begin, end)
    int end = 0;
    bool parameterized = false;
    bool rotation_layer = false;
    std::vector<LayerGenerator> generators;
};

struct Circuit {
    int n_qubits = 0;
    int n_params = 0;
    std::uint64_t initial_basis_index = 0;
    std::vector<GateInstance> gates;
    std::vector<LayerSpec> layers;
};

/// Checks all structural invariants (index ranges, parameter coverage,
/// layer partition, rotation-layer commutation structure). Throws on the
/// first violation.
void validate_circuit(const Circuit& c);

/// Returns the circuit's layer partition after validating it. Errors if the
/// circuit has gates but no layer metadata.
std::vector<LayerSpec> layer_partition(const Circuit& c);

/// One parameterized gate position in the gate list.
struct Occurrence {
    int gate_index;
    int param_index;
    double angle_scale;
    bool controlled;
};
std::vector<Occurrence> parameter_occurrences(const Circuit& c);

/// Census used by gradient cost accounting.
struct OccurrenceCensus {
    int single_qubit = 0;
    int controlled = 0;
};
OccurrenceCensus occurrence_census(const Circuit& c);

/// Two-qubit three-parameter ansatz on |00>: an RY(2*theta) rotation pair
/// followed by a CNOT / controlled-RY entangling block. Its Fubini-Study
/// metric has a closed form (reference::example1_metric_closed_form) and
/// the family contains the exact ground state of the two-qubit model
/// Hamiltonian.
Circuit build_example1_ansatz();

/// Hardware-efficient ansatz: per repetition an RY layer, an RZ layer and a
/// linear CNOT chain, plus one final RY + RZ rotation block. Parameter count
/// is 2*n*(reps+1).
Circuit build_efficient_su2(int n_qubits, int reps);

enum class So4Pairing {
    brick, // even pairs (0,1)(2,3)... then odd pairs (1,2)(3,4)...
    even,  // even pairs only
};

/// Ansatz of two-qubit orthogonal blocks (6 parameters each) applied to the
/// pairs given by the pairing scheme, starting from a basis state.
Circuit build_so4_ansatz(int n_qubits, int layers, So4Pairing pairing,
                         std::uint64_t initial_basis);

/// Same, with an explicit pair list applied per layer.
Circuit build_so4_ansatz(int n_qubits, int layers,
                         const std::vector<std::pair<int, int>>& pairs,
                         std::uint64_t initial_basis);

} // namespace vqeopt
