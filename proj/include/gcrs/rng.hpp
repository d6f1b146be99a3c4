#pragma once

#include <cstdint>
#include <random>

namespace gcrs {

/// splitmix64 step; used to derive independent per-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for an independent stream (e.g. one per network), so adding a
/// stream never perturbs the draws of another.
inline std::uint64_t derive_stream_seed(std::uint64_t global_seed, std::uint64_t stream_id) {
    std::uint64_t s = global_seed;
    std::uint64_t a = splitmix64(s);
    s = global_seed ^ (stream_id * 0xD6E8FEB86659FD93ULL + 0x2545F4914F6CDD1DULL);
    return a ^ splitmix64(s);
}

/// mt19937_64 with a uniform-double draw that avoids std distributions,
/// whose output is not pinned by the standard across implementations.
class DeterministicRng {
  public:
    explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace gcrs
