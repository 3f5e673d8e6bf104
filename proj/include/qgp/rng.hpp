#pragma once

// Counter-based random number generation (Philox4x32-10, Salmon et al.,
// "Parallel random numbers: as easy as 1, 2, 3", SC'11).
//
// Why counter-based: every logical sample in a Monte Carlo batch gets its own
// stream, keyed by (seed, stream id). The numbers a sample sees depend only on
// those two values, never on which worker thread processed it or in what
// order, which is what makes batches reproducible for a fixed seed and
// independent of --threads. Reproducibility is promised per build of this
// artifact, not across platforms or compilers (the normal generator consumes
// uniforms data-dependently).
//
// Stream layout: the 64-bit key is the user seed; counter words [2],[3] hold
// the 64-bit stream id and words [0],[1] the block index within the stream.
// That gives 2^64 independent streams of 2^64 * 4 words each.

#include <array>
#include <cmath>
#include <cstdint>

namespace qgp::rng {

// One keyed Philox4x32-10 block: 4 counter words in, 4 words of output.
// Exposed so known-answer vectors can be checked directly.
std::array<uint32_t, 4> philox4x32_block(const std::array<uint32_t, 4>& counter,
                                         const std::array<uint32_t, 2>& key);

class Philox {
public:
    explicit Philox(uint64_t seed, uint64_t stream = 0)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
          counter_{0, 0, static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)} {}

    uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    uint64_t next_u64() {
        uint64_t lo = next_u32();
        uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in (-1, 1).
    double next_symmetric() { return 2.0 * next_double() - 1.0; }

    // Standard normal via the Marsaglia polar method (no trig; the rejection
    // loop is why cross-platform bit-reproducibility is not promised).
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = next_symmetric();
            v = next_symmetric();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    void refill();

    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 4> counter_;  // [0],[1] block index; [2],[3] stream id
    std::array<uint32_t, 4> buf_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace qgp::rng
