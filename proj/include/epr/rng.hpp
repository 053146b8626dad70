#pragma once

#include <array>
#include <cstdint>

namespace epr {

// Philox4x32-10 counter-based block cipher. Any (counter, key) pair maps to
// four independent 32-bit words, so streams can be laid out over pixels and
// frames and drawn from in any order or thread.
std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key);

// One deterministic draw sequence addressed by (seed, stream, substream),
// e.g. (camera seed, pixel index, frame id).
class RandomStream {
  public:
    RandomStream(uint64_t seed, uint64_t stream, uint32_t substream = 0);

    uint32_t next_u32();
    double next_double();    // uniform on (0, 1), endpoints excluded
    double next_gaussian();  // standard normal, Box-Muller
    long next_poisson(double mean);

  private:
    void refill();

    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 4> ctr_;
    std::array<uint32_t, 4> buf_{};
    int pos_ = 4;
    double spare_gaussian_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace epr
