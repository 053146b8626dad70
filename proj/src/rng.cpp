#include "epr/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace epr {

namespace {

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    const uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
}

}  // namespace

std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
    constexpr uint32_t kMul0 = 0xD2511F53u;
    constexpr uint32_t kMul1 = 0xCD9E8D57u;
    constexpr uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

RandomStream::RandomStream(uint64_t seed, uint64_t stream, uint32_t substream) {
    key_ = {static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)};
    ctr_ = {static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32), substream, 0u};
}

void RandomStream::refill() {
    buf_ = philox4x32(ctr_, key_);
    ++ctr_[3];
    pos_ = 0;
}

uint32_t RandomStream::next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
}

double RandomStream::next_double() {
    // (0, 1), endpoints excluded; safe under log()
    return (next_u32() + 0.5) * (1.0 / 4294967296.0);
}

double RandomStream::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_gaussian_;
    }
    const double u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_gaussian_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

long RandomStream::next_poisson(double mean) {
    if (!(mean >= 0.0)) throw std::domain_error("next_poisson: mean must be non-negative");
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        // Knuth's product-of-uniforms method
        const double limit = std::exp(-mean);
        double p = 1.0;
        long k = 0;
        do {
            ++k;
            p *= next_double();
        } while (p > limit);
        return k - 1;
    }
    // Hormann's PTRD transformed-rejection sampler, valid for mean >= 10
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        const double u = next_double() - 0.5;
        const double v = next_double();
        const double us = 0.5 - std::fabs(u);
        const long k = static_cast<long>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
        if (us >= 0.07 && v <= v_r) return k;
        if (k < 0) continue;
        if (us < 0.013 && v > us) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(static_cast<double>(k) + 1.0))
            return k;
    }
}

}  // namespace epr
