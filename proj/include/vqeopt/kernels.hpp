#pragma once

#include <complex>
#include <cstdint>
#include <span>

namespace vqeopt::kernels {

using cplx = std::complex<double>;

/// Dense 2x2 matrix acting on one qubit, row-major.
struct Mat2 {
    cplx m00, m01, m10, m11;
};

// Low-level statevector kernels. Qubit positions are given as bit positions
// into the amplitude index (bit 0 = least significant). Two variants share
// each signature:
//
//   serial:: straightforward single-threaded loops, kept as the reference
//            implementation the parallel kernels are tested against.
//   par::    OpenMP-parallel loops. Reductions accumulate fixed-size chunk
//            partials that are combined in chunk order, so results do not
//            depend on the number of threads.
//
// The unqualified entry points dispatch on vector length: small states take
// the serial path, large ones the parallel path.

namespace serial {

void apply_1q(std::span<cplx> amps, int target_bit, const Mat2& m);
void apply_controlled_1q(std::span<cplx> amps, int control_bit, int target_bit,
                         const Mat2& m);
/// Like apply_controlled_1q, but amplitudes with control bit 0 are zeroed.
/// This is the action of |1><1| (x) M, used for controlled-gate derivatives.
void apply_projected_1q(std::span<cplx> amps, int control_bit, int target_bit,
                        const Mat2& m);
cplx pauli_expectation(std::span<const cplx> amps, std::uint64_t xmask,
                       std::uint64_t ymask, std::uint64_t zmask);
cplx inner_product(std::span<const cplx> bra, std::span<const cplx> ket);
double norm_sq(std::span<const cplx> amps);

} // namespace serial

namespace par {

void apply_1q(std::span<cplx> amps, int target_bit, const Mat2& m);
void apply_controlled_1q(std::span<cplx> amps, int control_bit, int target_bit,
                         const Mat2& m);
void apply_projected_1q(std::span<cplx> amps, int control_bit, int target_bit,
                        const Mat2& m);
cplx pauli_expectation(std::span<const cplx> amps, std::uint64_t xmask,
                       std::uint64_t ymask, std::uint64_t zmask);
cplx inner_product(std::span<const cplx> bra, std::span<const cplx> ket);
double norm_sq(std::span<const cplx> amps);

} // namespace par

// Dispatched entry points.
void apply_1q(std::span<cplx> amps, int target_bit, const Mat2& m);
void apply_controlled_1q(std::span<cplx> amps, int control_bit, int target_bit,
                         const Mat2& m);
void apply_projected_1q(std::span<cplx> amps, int control_bit, int target_bit,
                        const Mat2& m);
cplx pauli_expectation(std::span<const cplx> amps, std::uint64_t xmask,
                       std::uint64_t ymask, std::uint64_t zmask);
cplx inner_product(std::span<const cplx> bra, std::span<const cplx> ket);
double norm_sq(std::span<const cplx> amps);

} // namespace vqeopt::kernels
