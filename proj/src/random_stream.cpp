#include "ipwmc/random_stream.hpp"

#include "ipwmc/error.hpp"

#include <cmath>
#include <string>

namespace ipwmc {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53u;
constexpr std::uint32_t kMulB = 0xCD9E8D57u;
constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) noexcept {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(prod);
    hi = static_cast<std::uint32_t>(prod >> 32);
}

inline PhiloxBlock round(const PhiloxBlock& c, const PhiloxKey& k) noexcept {
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMulA, c[0], lo0, hi0);
    mulhilo(kMulB, c[2], lo1, hi1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

} // namespace

PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key) noexcept {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeylA;
            key[1] += kWeylB;
        }
        counter = round(counter, key);
    }
    return counter;
}

void RandomStream::refill() noexcept {
    const PhiloxBlock counter{
        static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_id_),
        static_cast<std::uint32_t>(stream_id_ >> 32),
    };
    const PhiloxKey key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    buffer_ = philox4x32_10(counter, key);
    ++block_;
    used_ = 0;
}

std::uint32_t RandomStream::next_u32() noexcept {
    if (used_ == 4) refill();
    return buffer_[used_++];
}

std::uint64_t RandomStream::next_u64() noexcept {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double uniform01(RandomStream& stream) noexcept {
    return static_cast<double>(stream.next_u64() >> 11) * 0x1.0p-53;
}

double uniform(RandomStream& stream, double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01(stream);
}

int bernoulli(RandomStream& stream, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(Errc::domain, "bernoulli: probability " + std::to_string(p) + " outside [0,1]");
    }
    return uniform01(stream) < p ? 1 : 0;
}

std::uint64_t discrete_uniform(RandomStream& stream, std::uint64_t n_labels) {
    if (n_labels == 0) throw Error(Errc::domain, "discrete_uniform: need at least one label");
    // Reject the low (2^64 mod n) values so every residue is equally likely.
    const std::uint64_t threshold = (0 - n_labels) % n_labels;
    for (;;) {
        const std::uint64_t x = stream.next_u64();
        if (x >= threshold) return x % n_labels + 1;
    }
}

} // namespace ipwmc
