// The SIMD contract: every lane produces bit-identical output for every
// kernel, on aligned and ragged sizes alike.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <vector>

#include "hyperwalk/rng.hpp"
#include "hyperwalk/simd/kernels.hpp"

using namespace hyperwalk;

namespace {

struct LaneGuard {
    ~LaneGuard() { simd::reset_lane(); }
};

std::vector<std::uint64_t> random_words(std::size_t n, std::uint64_t seed) {
    std::vector<std::uint64_t> w(n);
    std::uint64_t x = seed;
    for (auto& v : w) {
        x = splitmix64(x);
        v = x;
    }
    return w;
}

const std::vector<std::int64_t> kSizes = {1, 3, 4, 31, 64, 65, 127, 128, 257,
                                          1000, 4096, 10007};

}  // namespace

TEST_CASE("lane dispatch reports a valid active lane") {
    CHECK(simd::lane_available(simd::Lane::scalar));
    const auto lane = simd::active_lane();
    CHECK((lane == simd::Lane::scalar || lane == simd::Lane::avx2));
}

TEST_CASE("scalar and AVX2 lanes agree bit-for-bit") {
    if (!simd::lane_available(simd::Lane::avx2)) {
        MESSAGE("AVX2 not available; lane equivalence trivially holds");
        return;
    }
    LaneGuard guard;
    const PhiloxKey key{0xdeadbeefu, 0x12345678u};

    for (const std::int64_t n : kSizes) {
        const auto nwords = static_cast<std::size_t>((n + 63) / 64);

        // threshold masks
        for (const double theta : {0.0, 0.25, 0.5, 0.9, 1.0}) {
            std::vector<std::uint64_t> a(nwords), b(nwords);
            simd::force_lane(simd::Lane::scalar);
            simd::bernoulli_mask(key, Draw::latent, 5, n, theta, a.data());
            simd::force_lane(simd::Lane::avx2);
            simd::bernoulli_mask(key, Draw::latent, 5, n, theta, b.data());
            CHECK(a == b);
        }

        // per-coordinate probability masks
        {
            std::vector<double> p(static_cast<std::size_t>(n));
            std::uint64_t x = 42 + static_cast<std::uint64_t>(n);
            for (auto& v : p) {
                x = splitmix64(x);
                v = u32_to_unit(static_cast<std::uint32_t>(x));
            }
            std::vector<std::uint64_t> a(nwords), b(nwords);
            simd::force_lane(simd::Lane::scalar);
            simd::bernoulli_from_probs(key, Draw::limit_bern, 9, p.data(), n,
                                       a.data());
            simd::force_lane(simd::Lane::avx2);
            simd::bernoulli_from_probs(key, Draw::limit_bern, 9, p.data(), n,
                                       b.data());
            CHECK(a == b);
        }

        // the transition rule, all three parameter orderings
        {
            const auto xw = random_words(nwords, 11 + static_cast<std::uint64_t>(n));
            const auto zw = random_words(nwords, 17 + static_cast<std::uint64_t>(n));
            for (const int mode : {-1, 0, 1}) {
                simd::StepThresholds th{0.42, 0.77, mode};
                std::vector<std::uint64_t> a(nwords), b(nwords);
                simd::force_lane(simd::Lane::scalar);
                simd::step_transition(key, 3, n, xw.data(), zw.data(), th,
                                      a.data());
                simd::force_lane(simd::Lane::avx2);
                simd::step_transition(key, 3, n, xw.data(), zw.data(), th,
                                      b.data());
                CHECK(a == b);
            }
        }

        // popcounts
        {
            const auto aw = random_words(nwords, 23);
            const auto bw = random_words(nwords, 29);
            simd::force_lane(simd::Lane::scalar);
            const auto c1 = simd::popcount(aw.data(), nwords);
            const auto d1 = simd::popcount_and(aw.data(), bw.data(), nwords);
            simd::force_lane(simd::Lane::avx2);
            CHECK(simd::popcount(aw.data(), nwords) == c1);
            CHECK(simd::popcount_and(aw.data(), bw.data(), nwords) == d1);
        }

        // masked floating-point update: exact double equality required
        {
            std::vector<double> r1(static_cast<std::size_t>(n)),
                p1(static_cast<std::size_t>(n));
            std::uint64_t x = 31;
            for (std::int64_t k = 0; k < n; ++k) {
                x = splitmix64(x);
                r1[static_cast<std::size_t>(k)] =
                    u32_to_unit(static_cast<std::uint32_t>(x)) + 0.1;
                p1[static_cast<std::size_t>(k)] =
                    u32_to_unit(static_cast<std::uint32_t>(x >> 32));
            }
            auto r2 = r1;
            auto p2 = p1;
            const auto zw = random_words(nwords, 37);
            simd::force_lane(simd::Lane::scalar);
            simd::masked_scale_accumulate(r1.data(), p1.data(), zw.data(), n,
                                          -0.6251, 0.3375);
            simd::force_lane(simd::Lane::avx2);
            simd::masked_scale_accumulate(r2.data(), p2.data(), zw.data(), n,
                                          -0.6251, 0.3375);
            CHECK(std::memcmp(r1.data(), r2.data(), r1.size() * 8) == 0);
            CHECK(std::memcmp(p1.data(), p2.data(), p1.size() * 8) == 0);
        }
    }
}

TEST_CASE("mask kernels agree with direct per-coordinate evaluation") {
    LaneGuard guard;
    const RngStream stream(2024, 3);
    const std::int64_t n = 1000;
    const double theta = 0.37;
    std::vector<std::uint64_t> mask(
        static_cast<std::size_t>((n + 63) / 64));
    simd::bernoulli_mask(stream.key(), Draw::latent, 8, n, theta, mask.data());
    for (std::int64_t k = 0; k < n; ++k) {
        const bool bit = (mask[static_cast<std::size_t>(k >> 6)] >> (k & 63)) & 1u;
        const bool expect =
            stream.coordinate_uniform(Draw::latent, 8, static_cast<std::uint64_t>(k)) <
            theta;
        REQUIRE(bit == expect);
    }
}
