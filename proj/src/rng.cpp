#include "hyperwalk/rng.hpp"

#include <cmath>
#include <numbers>

namespace hyperwalk {

namespace {
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, PhiloxKey k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(c[0]) * kPhiloxM0;
    const std::uint64_t p1 = static_cast<std::uint64_t>(c[2]) * kPhiloxM1;
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    c = {hi1 ^ c[1] ^ k.k0, lo1, hi0 ^ c[3] ^ k.k1, lo0};
}
}  // namespace

std::array<std::uint32_t, 4> philox4x32(PhiloxCounter ctr, PhiloxKey key) {
    std::array<std::uint32_t, 4> c{ctr.c0, ctr.c1, ctr.c2, ctr.c3};
    for (int r = 0; r < 10; ++r) {
        if (r) {
            key.k0 += kPhiloxW0;
            key.k1 += kPhiloxW1;
        }
        philox_round(c, key);
    }
    return c;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index) {
    const std::uint64_t mixed =
        splitmix64(seed ^ splitmix64(stream_index + 0x5851F42D4C957F2Dull));
    key_.k0 = static_cast<std::uint32_t>(mixed);
    key_.k1 = static_cast<std::uint32_t>(mixed >> 32);
}

double RngStream::coordinate_uniform(Draw purpose, std::uint64_t t,
                                     std::uint64_t k) const {
    PhiloxCounter ctr;
    ctr.c0 = static_cast<std::uint32_t>(k >> 2);
    ctr.c1 = static_cast<std::uint32_t>(t);
    ctr.c2 = static_cast<std::uint32_t>(t >> 32);
    ctr.c3 = static_cast<std::uint32_t>(purpose);
    const auto out = philox4x32(ctr, key_);
    return u32_to_unit(out[k & 3]);
}

std::uint32_t RngStream::Cursor::next_u32() {
    if (lane_ == 4) {
        PhiloxCounter ctr;
        ctr.c0 = block_++;
        ctr.c1 = static_cast<std::uint32_t>(t_);
        ctr.c2 = static_cast<std::uint32_t>(t_ >> 32);
        ctr.c3 = static_cast<std::uint32_t>(purpose_);
        buf_ = philox4x32(ctr, stream_->key());
        lane_ = 0;
    }
    return buf_[static_cast<std::size_t>(lane_++)];
}

double RngStream::Cursor::uniform() { return u32_to_unit(next_u32()); }

double RngStream::Cursor::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::Cursor::gamma(double shape) {
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

double RngStream::Cursor::beta(double a, double b) {
    const double g1 = gamma(a);
    const double g2 = gamma(b);
    return g1 / (g1 + g2);
}

std::uint64_t RngStream::Cursor::uniform_below(std::uint64_t bound) {
    // rejection on 64-bit words keeps the draw exactly uniform
    const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
    for (;;) {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        const std::uint64_t w = (hi << 32) | lo;
        if (w < limit) return w % bound;
    }
}

}  // namespace hyperwalk
