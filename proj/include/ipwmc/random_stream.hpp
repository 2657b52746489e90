#pragma once
// Counter-based random streams (Philox4x32-10).
//
// A stream is addressed by (seed, stream_id). The seed is the Philox key and
// the stream id occupies the high half of the 128-bit counter, so draw k of
// stream s is a pure function of (seed, s, k). Replicate r of an experiment
// uses stream_id r, which makes results independent of thread scheduling.

#include <array>
#include <cstdint>

namespace ipwmc {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// One Philox4x32 block with 10 rounds.
PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key) noexcept;

class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : seed_(seed), stream_id_(stream_id) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    // Number of 32-bit words consumed so far.
    std::uint64_t position() const noexcept { return block_ * 4 + used_ - 4; }

    std::uint32_t next_u32() noexcept;
    std::uint64_t next_u64() noexcept;

    // A stream derived from this one's seed with a different id. Does not
    // touch this stream's state.
    RandomStream substream(std::uint64_t stream_id) const noexcept {
        return RandomStream(seed_, stream_id);
    }

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0; // next block index to generate
    PhiloxBlock buffer_{};
    unsigned used_ = 4;       // words of buffer_ already handed out
};

// Uniform on [0, 1) with 53 bits of resolution.
double uniform01(RandomStream& stream) noexcept;

// Uniform on [lo, hi).
double uniform(RandomStream& stream, double lo, double hi) noexcept;

// Returns 1 with probability p. Throws Error(Errc::domain) unless 0 <= p <= 1.
int bernoulli(RandomStream& stream, double p);

// Uniform label in 1..n_labels, unbiased. Throws Error(Errc::domain) if n_labels == 0.
std::uint64_t discrete_uniform(RandomStream& stream, std::uint64_t n_labels);

} // namespace ipwmc
