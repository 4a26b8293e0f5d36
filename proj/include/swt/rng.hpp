#pragma once

#include <array>
#include <cstdint>

namespace swt {

/// Identifies one reproducible random stream. Distinct (base_seed, stream_id)
/// pairs give statistically independent sequences; equal pairs give identical
/// sequences.
struct RngStream {
    std::uint64_t base_seed = 0;
    std::uint64_t stream_id = 0;

    RngStream substream(std::uint64_t k) const { return {base_seed, stream_id + k}; }
};

/// SplitMix64 finalizer (avalanche mix).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ seeded from a SplitMix64 expansion of base_seed ^ stream_id.
/// Doubles are produced from the top 52 bits so sequences are identical
/// across platforms.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(RngStream stream) {
        std::uint64_t sm = stream.base_seed ^ stream.stream_id;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0,1): midpoints of a 2^-52 grid,
    /// symmetric about 1/2 and never exactly 0 or 1.
    double uniform01() {
        return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
    }

    /// Uniform on (-1,1), never exactly 0.
    double uniform_sym() { return 2.0 * uniform01() - 1.0; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> state_{};
};

} // namespace swt
