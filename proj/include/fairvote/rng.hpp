#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fairvote {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based random stream keyed by (seed, stream_id).
///
/// The 64-bit seed is the Philox key; the upper two counter words hold the
/// stream id and the lower two count blocks. Two streams with the same
/// (seed, stream_id) yield identical sequences; different stream ids walk
/// disjoint counter ranges. Satisfies UniformRandomBitGenerator.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept : seed_(seed), stream_id_(stream_id) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) by Lemire's multiply-shift rejection.
    std::uint64_t below(std::uint64_t bound) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    /// Blocks consumed so far.
    std::uint64_t position() const noexcept { return block_; }

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;  // 32-bit words consumed from buffer_; 4 = empty
};

}  // namespace fairvote
