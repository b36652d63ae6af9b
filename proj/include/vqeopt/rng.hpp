#pragma once

#include <cstdint>
#include <random>

namespace vqeopt {

/// splitmix64 finalizer; used to derive well-mixed stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a stream ordinal.
/// Runs reseeded this way are reproducible and do not share state.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t ordinal) {
    return splitmix64(splitmix64(seed) ^ splitmix64(~ordinal));
}

/// Thin wrapper around std::mt19937_64 with a portable uniform-double draw.
/// std::uniform_real_distribution is implementation-defined, so the
/// conversion is done by hand to keep results identical across platforms.
class UniformRng {
  public:
    explicit UniformRng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1).
    double next_unit() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double next_in(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    std::uint64_t next_u64() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

} // namespace vqeopt
