#include "mlsmooth/rng.hpp"

#include "mlsmooth/special.hpp"

namespace mlsmooth {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed + stream * 0xD1B54A32D192ED03ULL;
    for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() {
    // (k + 0.5) * 2^-53 with k uniform on 53 bits, never exactly 0 or 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
}

double Rng::normal() { return norm_quantile(uniform01()); }

std::uint64_t Rng::below(std::uint64_t n) {
    // Lemire-style rejection-free-enough bounded draw; bias is negligible
    // for desk-scale n but we reject to keep draws exact.
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold) return r % n;
    }
}

}  // namespace mlsmooth
