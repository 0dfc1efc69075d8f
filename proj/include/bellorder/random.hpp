#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace bellorder {

//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * The output is a pure function of (key, counter), so any number of
 * independent streams can be addressed without shared state.
 */
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block generate(Block ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            auto lo0 = static_cast<std::uint32_t>(p0);
            auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

//---------------------------------------------------------------------------//
/*!
 * Sequential stream of uniform and normal deviates addressed by
 * (seed, stream id, chunk id).
 *
 * The counter layout is [block lo, block hi, chunk, stream]; the seed is the
 * Philox key. Two streams with different (stream, chunk) never overlap.
 */
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint32_t stream, std::uint32_t chunk)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream), chunk_(chunk) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double next_uniform() {
        std::uint64_t hi = next_u32();
        std::uint64_t lo = next_u32();
        std::uint64_t bits = ((hi << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal deviate (Box-Muller, both outputs used).
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

    std::uint64_t blocks_used() const { return block_; }

private:
    void refill() {
        Philox4x32::Block ctr{static_cast<std::uint32_t>(block_),
                              static_cast<std::uint32_t>(block_ >> 32), chunk_, stream_};
        buf_ = Philox4x32::generate(ctr, key_);
        ++block_;
        pos_ = 0;
    }

    Philox4x32::Key key_;
    std::uint32_t stream_;
    std::uint32_t chunk_;
    std::uint64_t block_ = 0;
    Philox4x32::Block buf_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bellorder
