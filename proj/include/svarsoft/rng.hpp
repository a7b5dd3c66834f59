#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace svarsoft {

/** Counter-based random stream (Philox4x32-10).
 *
 * The 64-bit seed is the Philox key and the 64-bit stream id occupies the upper half of the
 * 128-bit counter, so every (seed, stream) pair addresses a disjoint block of 2^64 outputs. Chains
 * for different reduced-form draws get different stream ids and need no coordination.
 *
 * Satisfies UniformRandomBitGenerator with 64-bit output. The draw helpers below fix the
 * transforms used everywhere in the library so sequences are reproducible bit for bit.
 */
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on the open interval (0, 1).
    double uniform_open();
    double normal();
    /// Standard exponential variate.
    double exponential();

    /// Raw Philox4x32-10 block function, exposed for known-answer tests.
    static std::array<std::uint32_t, 4> philox_block(std::array<std::uint32_t, 4> counter,
                                                     std::array<std::uint32_t, 2> key);

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
};

}  // namespace svarsoft
