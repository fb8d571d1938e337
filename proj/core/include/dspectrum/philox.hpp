#pragma once

#include <array>
#include <cstdint>

namespace dspectrum {

/// Philox4x32-10 block function (Salmon et al., SC'11).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter block(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

/**
 * Stream of 32-bit words identified by a 64-bit seed and three 32-bit stream
 * coordinates. Word i of the stream depends only on (seed, coordinates, i), so
 * streams can be drawn in any order on any thread.
 */
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint32_t a, std::uint32_t b, std::uint32_t c) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, ctr_{0, c, b, a} {}

    std::uint32_t next() noexcept {
        if (index_ == 4) {
            buffer_ = Philox4x32::block(ctr_, key_);
            ++ctr_[0];
            index_ = 0;
        }
        return buffer_[index_++];
    }

    /// Uniform double in [0, 1) with 32 bits of resolution.
    double uniform() noexcept { return next() * 0x1.0p-32; }

private:
    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter buffer_{};
    int index_ = 4;
};

}  // namespace dspectrum
