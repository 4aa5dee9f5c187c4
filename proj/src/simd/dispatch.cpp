#include <atomic>
#include <stdexcept>

#include "simd/kernel_table.hpp"

namespace hyperwalk::simd {

namespace {

const KernelTable* detect() {
#if HYPERWALK_HAVE_AVX2
    if (avx2_supported()) return &avx2_kernels();
#endif
    return &scalar_kernels();
}

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Lane> g_lane{Lane::scalar};

const KernelTable& table() {
    const KernelTable* t = g_table.load(std::memory_order_acquire);
    if (!t) {
        t = detect();
#if HYPERWALK_HAVE_AVX2
        g_lane.store(t == &avx2_kernels() ? Lane::avx2 : Lane::scalar);
#else
        g_lane.store(Lane::scalar);
#endif
        g_table.store(t, std::memory_order_release);
    }
    return *t;
}

}  // namespace

Lane active_lane() {
    table();
    return g_lane.load();
}

bool lane_available(Lane lane) {
    if (lane == Lane::scalar) return true;
#if HYPERWALK_HAVE_AVX2
    return avx2_supported();
#else
    return false;
#endif
}

void force_lane(Lane lane) {
    if (!lane_available(lane)) {
        throw std::runtime_error("requested SIMD lane is not available");
    }
    if (lane == Lane::scalar) {
        g_table.store(&scalar_kernels());
    } else {
#if HYPERWALK_HAVE_AVX2
        g_table.store(&avx2_kernels());
#endif
    }
    g_lane.store(lane);
}

void reset_lane() {
    g_table.store(nullptr);
    table();
}

std::int64_t popcount(const std::uint64_t* words, std::size_t nwords) {
    return table().popcount(words, nwords);
}

std::int64_t popcount_and(const std::uint64_t* a, const std::uint64_t* b,
                          std::size_t nwords) {
    return table().popcount_and(a, b, nwords);
}

void bernoulli_mask(PhiloxKey key, Draw purpose, std::uint64_t t,
                    std::int64_t n, double theta, std::uint64_t* out) {
    table().bernoulli_mask(key, purpose, t, n, theta, out);
}

void bernoulli_from_probs(PhiloxKey key, Draw purpose, std::uint64_t t,
                          const double* p, std::int64_t n,
                          std::uint64_t* out) {
    table().bernoulli_from_probs(key, purpose, t, p, n, out);
}

void step_transition(PhiloxKey key, std::uint64_t t, std::int64_t n,
                     const std::uint64_t* x, const std::uint64_t* z,
                     StepThresholds th, std::uint64_t* y) {
    table().step_transition(key, t, n, x, z, th, y);
}

void masked_scale_accumulate(double* r, double* p, const std::uint64_t* z,
                             std::int64_t n, double factor_one,
                             double weight) {
    table().masked_scale_accumulate(r, p, z, n, factor_one, weight);
}

}  // namespace hyperwalk::simd
