#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace vqeopt {

using cplx = std::complex<double>;

/// Largest supported register; dense vectors above this are impractical here.
inline constexpr int kMaxQubits = 20;

/// Dense statevector over n qubits, 2^n complex amplitudes.
///
/// Basis indices are big-endian in the qubit label: qubit 0 corresponds to
/// the most significant bit of the index, so |q0 q1 ... q_{n-1}> has index
/// q0*2^{n-1} + ... + q_{n-1}. The bit position of qubit q is n-1-q.
struct State {
    int n_qubits = 0;
    std::vector<cplx> amps;

    std::size_t dim() const { return amps.size(); }
};

/// Bit position (into the amplitude index) of a qubit label.
inline int qubit_bit(int n_qubits, int qubit) { return n_qubits - 1 - qubit; }

/// Basis state |index> on n qubits.
State init_basis_state(int n_qubits, std::uint64_t index);

double norm_sq(const State& s);

/// Overlap squared |<a|b>|^2, in [0, 1].
double fidelity(const State& a, const State& b);

} // namespace vqeopt
