#pragma once

#include "hyperwalk/simd/kernels.hpp"

namespace hyperwalk::simd {

// Per-lane implementation table filled in by the dispatcher.
struct KernelTable {
    std::int64_t (*popcount)(const std::uint64_t*, std::size_t);
    std::int64_t (*popcount_and)(const std::uint64_t*, const std::uint64_t*,
                                 std::size_t);
    void (*bernoulli_mask)(PhiloxKey, Draw, std::uint64_t, std::int64_t,
                           double, std::uint64_t*);
    void (*bernoulli_from_probs)(PhiloxKey, Draw, std::uint64_t,
                                 const double*, std::int64_t, std::uint64_t*);
    void (*step_transition)(PhiloxKey, std::uint64_t, std::int64_t,
                            const std::uint64_t*, const std::uint64_t*,
                            StepThresholds, std::uint64_t*);
    void (*masked_scale_accumulate)(double*, double*, const std::uint64_t*,
                                    std::int64_t, double, double);
};

const KernelTable& scalar_kernels();
#if HYPERWALK_HAVE_AVX2
const KernelTable& avx2_kernels();
bool avx2_supported();
#endif

}  // namespace hyperwalk::simd
