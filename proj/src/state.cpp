#include "vqeopt/state.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "vqeopt/kernels.hpp"

namespace vqeopt {

State init_basis_state(int n_qubits, std::uint64_t index) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(n_qubits));
    }
    const std::uint64_t dim = std::uint64_t{1} << n_qubits;
    if (index >= dim) {
        throw std::invalid_argument("basis index " + std::to_string(index) +
                                    " out of range for " +
                                    std::to_string(n_qubits) + " qubits");
    }
    State s;
    s.n_qubits = n_qubits;
    s.amps.assign(dim, cplx{0.0});
    s.amps[index] = 1.0;
    return s;
}

double norm_sq(const State& s) { return kernels::norm_sq(s.amps); }

double fidelity(const State& a, const State& b) {
    if (a.n_qubits != b.n_qubits) {
        throw std::invalid_argument("fidelity: qubit counts differ (" +
                                    std::to_string(a.n_qubits) + " vs " +
                                    std::to_string(b.n_qubits) + ")");
    }
    const double f = std::norm(kernels::inner_product(a.amps, b.amps));
    return std::clamp(f, 0.0, 1.0);
}

} // namespace vqeopt
