#include "vqeopt/kernels.hpp"

namespace vqeopt::kernels {

namespace {

// States below this size are not worth forking threads for.
constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

inline bool use_par(std::size_t len) { return len >= kParallelThreshold; }

} // namespace

void apply_1q(std::span<cplx> amps, int target_bit, const Mat2& m) {
    if (use_par(amps.size()))
        par::apply_1q(amps, target_bit, m);
    else
        serial::apply_1q(amps, target_bit, m);
}

void apply_controlled_1q(std::span<cplx> amps, int control_bit, int target_bit,
                         const Mat2& m) {
    if (use_par(amps.size()))
        par::apply_controlled_1q(amps, control_bit, target_bit, m);
    else
        serial::apply_controlled_1q(amps, control_bit, target_bit, m);
}

void apply_projected_1q(std::span<cplx> amps, int control_bit, int target_bit,
                        const Mat2& m) {
    if (use_par(amps.size()))
        par::apply_projected_1q(amps, control_bit, target_bit, m);
    else
        serial::apply_projected_1q(amps, control_bit, target_bit, m);
}

cplx pauli_expectation(std::span<const cplx> amps, std::uint64_t xmask,
                       std::uint64_t ymask, std::uint64_t zmask) {
    return use_par(amps.size())
               ? par::pauli_expectation(amps, xmask, ymask, zmask)
               : serial::pauli_expectation(amps, xmask, ymask, zmask);
}

cplx inner_product(std::span<const cplx> bra, std::span<const cplx> ket) {
    return use_par(bra.size()) ? par::inner_product(bra, ket)
                               : serial::inner_product(bra, ket);
}

double norm_sq(std::span<const cplx> amps) {
    return use_par(amps.size()) ? par::norm_sq(amps) : serial::norm_sq(amps);
}

} // namespace vqeopt::kernels
