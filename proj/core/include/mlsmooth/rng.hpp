#pragma once

#include <cstdint>

namespace mlsmooth {

/// Counter-seeded xoshiro256++ generator.
///
/// The state is filled from splitmix64 so that any 64-bit seed gives a
/// well-mixed state. Substreams are derived by offsetting the splitmix64
/// seed with a Weyl increment of the stream id, so (seed, stream) pairs
/// define reproducible, platform-independent streams: the same pair always
/// yields the same bit sequence. Normal variates are produced by the
/// inverse-CDF method so they are also bit-reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform01();

    /// Standard normal via inverse CDF of uniform01().
    double normal();

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n);

  private:
    std::uint64_t s_[4];
};

}  // namespace mlsmooth
