#include "vqeopt/kernels.hpp"

#include <bit>

namespace vqeopt::kernels::serial {

namespace {

inline std::uint64_t pair_index(std::uint64_t i, int bit) {
    const std::uint64_t low = i & ((std::uint64_t{1} << bit) - 1);
    return ((i >> bit) << (bit + 1)) | low;
}

} // namespace

void apply_1q(std::span<cplx> amps, int target_bit, const Mat2& m) {
    const std::uint64_t mask = std::uint64_t{1} << target_bit;
    const std::uint64_t pairs = amps.size() >> 1;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        const std::uint64_t i0 = pair_index(i, target_bit);
        const std::uint64_t i1 = i0 | mask;
        const cplx a0 = amps[i0];
        const cplx a1 = amps[i1];
        amps[i0] = m.m00 * a0 + m.m01 * a1;
        amps[i1] = m.m10 * a0 + m.m11 * a1;
    }
}

void apply_controlled_1q(std::span<cplx> amps, int control_bit, int target_bit,
                         const Mat2& m) {
    const std::uint64_t tmask = std::uint64_t{1} << target_bit;
    const std::uint64_t cmask = std::uint64_t{1} << control_bit;
    const std::uint64_t pairs = amps.size() >> 1;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        const std::uint64_t i0 = pair_index(i, target_bit);
        if (!(i0 & cmask)) continue;
        const std::uint64_t i1 = i0 | tmask;
        const cplx a0 = amps[i0];
        const cplx a1 = amps[i1];
        amps[i0] = m.m00 * a0 + m.m01 * a1;
        amps[i1] = m.m10 * a0 + m.m11 * a1;
    }
}

void apply_projected_1q(std::span<cplx> amps, int control_bit, int target_bit,
                        const Mat2& m) {
    const std::uint64_t tmask = std::uint64_t{1} << target_bit;
    const std::uint64_t cmask = std::uint64_t{1} << control_bit;
    const std::uint64_t pairs = amps.size() >> 1;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        const std::uint64_t i0 = pair_index(i, target_bit);
        const std::uint64_t i1 = i0 | tmask;
        if (i0 & cmask) {
            const cplx a0 = amps[i0];
            const cplx a1 = amps[i1];
            amps[i0] = m.m00 * a0 + m.m01 * a1;
            amps[i1] = m.m10 * a0 + m.m11 * a1;
        } else {
            amps[i0] = 0.0;
            amps[i1] = 0.0;
        }
    }
}

cplx pauli_expectation(std::span<const cplx> amps, std::uint64_t xmask,
                       std::uint64_t ymask, std::uint64_t zmask) {
    const std::uint64_t flip = xmask | ymask;
    const std::uint64_t sign_mask = ymask | zmask;
    cplx sum = 0.0;
    for (std::uint64_t d = 0; d < amps.size(); ++d) {
        const std::uint64_t src = d ^ flip;
        const double sign =
            (std::popcount(src & sign_mask) & 1) ? -1.0 : 1.0;
        sum += std::conj(amps[d]) * amps[src] * sign;
    }
    // Each Y contributes a factor i on top of the per-index signs.
    static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return sum * i_pow[std::popcount(ymask) & 3];
}

cplx inner_product(std::span<const cplx> bra, std::span<const cplx> ket) {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < bra.size(); ++i) {
        sum += std::conj(bra[i]) * ket[i];
    }
    return sum;
}

double norm_sq(std::span<const cplx> amps) {
    double sum = 0.0;
    for (const cplx& a : amps) {
        sum += std::norm(a);
    }
    return sum;
}

} // namespace vqeopt::kernels::serial
