#include "vqeopt/kernels.hpp"

#include <bit>
#include <vector>

namespace vqeopt::kernels::par {

namespace {

// Reduction chunk size. Partials are combined in chunk order, so the result
// is independent of the thread count.
constexpr std::uint64_t kChunk = 4096;

inline std::uint64_t pair_index(std::uint64_t i, int bit) {
    const std::uint64_t low = i & ((std::uint64_t{1} << bit) - 1);
    return ((i >> bit) << (bit + 1)) | low;
}

} // namespace

void apply_1q(std::span<cplx> amps, int target_bit, const Mat2& m) {
    const std::uint64_t mask = std::uint64_t{1} << target_bit;
    const std::int64_t pairs = static_cast<std::int64_t>(amps.size() >> 1);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < pairs; ++i) {
        const std::uint64_t i0 =
            pair_index(static_cast<std::uint64_t>(i), target_bit);
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
    const std::int64_t pairs = static_cast<std::int64_t>(amps.size() >> 1);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < pairs; ++i) {
        const std::uint64_t i0 =
            pair_index(static_cast<std::uint64_t>(i), target_bit);
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
    const std::int64_t pairs = static_cast<std::int64_t>(amps.size() >> 1);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < pairs; ++i) {
        const std::uint64_t i0 =
            pair_index(static_cast<std::uint64_t>(i), target_bit);
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
    const std::uint64_t len = amps.size();
    const std::int64_t nchunks =
        static_cast<std::int64_t>((len + kChunk - 1) / kChunk);
    std::vector<cplx> partial(static_cast<std::size_t>(nchunks), cplx{0.0});
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
        const std::uint64_t end = std::min(begin + kChunk, len);
        cplx sum = 0.0;
        for (std::uint64_t d = begin; d < end; ++d) {
            const std::uint64_t src = d ^ flip;
            const double sign =
                (std::popcount(src & sign_mask) & 1) ? -1.0 : 1.0;
            sum += std::conj(amps[d]) * amps[src] * sign;
        }
        partial[static_cast<std::size_t>(c)] = sum;
    }
    cplx total = 0.0;
    for (const cplx& p : partial) total += p;
    static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return total * i_pow[std::popcount(ymask) & 3];
}

cplx inner_product(std::span<const cplx> bra, std::span<const cplx> ket) {
    const std::uint64_t len = bra.size();
    const std::int64_t nchunks =
        static_cast<std::int64_t>((len + kChunk - 1) / kChunk);
    std::vector<cplx> partial(static_cast<std::size_t>(nchunks), cplx{0.0});
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
        const std::uint64_t end = std::min(begin + kChunk, len);
        cplx sum = 0.0;
        for (std::uint64_t i = begin; i < end; ++i) {
            sum += std::conj(bra[i]) * ket[i];
        }
        partial[static_cast<std::size_t>(c)] = sum;
    }
    cplx total = 0.0;
    for (const cplx& p : partial) total += p;
    return total;
}

double norm_sq(std::span<const cplx> amps) {
    const std::uint64_t len = amps.size();
    const std::int64_t nchunks =
        static_cast<std::int64_t>((len + kChunk - 1) / kChunk);
    std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
        const std::uint64_t end = std::min(begin + kChunk, len);
        double sum = 0.0;
        for (std::uint64_t i = begin; i < end; ++i) {
            sum += std::norm(amps[i]);
        }
        partial[static_cast<std::size_t>(c)] = sum;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

} // namespace vqeopt::kernels::par
