#include "qgp/rng.hpp"

namespace qgp::rng {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;  // golden ratio
constexpr uint32_t kWeyl1 = 0xBB67AE85u;  // sqrt(3) - 1

inline std::array<uint32_t, 4> round_once(const std::array<uint32_t, 4>& c,
                                          const std::array<uint32_t, 2>& k) {
    const uint64_t p0 = static_cast<uint64_t>(kMul0) * c[0];
    const uint64_t p1 = static_cast<uint64_t>(kMul1) * c[2];
    return {static_cast<uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<uint32_t>(p1),
            static_cast<uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<uint32_t>(p0)};
}

}  // namespace

std::array<uint32_t, 4> philox4x32_block(const std::array<uint32_t, 4>& counter,
                                         const std::array<uint32_t, 2>& key) {
    std::array<uint32_t, 4> c = counter;
    std::array<uint32_t, 2> k = key;
    for (int r = 0; r < 9; ++r) {
        c = round_once(c, k);
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return round_once(c, k);
}

void Philox::refill() {
    buf_ = philox4x32_block(counter_, key_);
    pos_ = 0;
    // 64-bit block index in words [0],[1]; the stream id in [2],[3] is fixed.
    if (++counter_[0] == 0) ++counter_[1];
}

}  // namespace qgp::rng
