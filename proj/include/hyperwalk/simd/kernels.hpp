#pragma once

#include <cstddef>
#include <cstdint>

#include "hyperwalk/rng.hpp"

namespace hyperwalk::simd {

// Data-parallel inner loops of the simulator: bulk uniform generation from
// the counter-based generator, threshold masks, the coordinate-update rule,
// popcounts and masked floating-point updates.  A scalar reference kernel
// exists for everything; an AVX2 variant is selected at runtime when the CPU
// supports it.  The two lanes are bit-identical by construction (same Philox
// stream, same per-element operation order, contraction disabled) and the
// test suite asserts exact equality.

enum class Lane { scalar, avx2 };

Lane active_lane();
bool lane_available(Lane lane);
// Force a lane (used by the equivalence tests); Lane must be available.
void force_lane(Lane lane);
void reset_lane();

std::int64_t popcount(const std::uint64_t* words, std::size_t nwords);
std::int64_t popcount_and(const std::uint64_t* a, const std::uint64_t* b,
                          std::size_t nwords);

// out bit k = [ U(t,k) < theta ] for coordinates 0..n-1, where U(t,k) is the
// Philox uniform of (key, purpose, t, k).
void bernoulli_mask(PhiloxKey key, Draw purpose, std::uint64_t t,
                    std::int64_t n, double theta, std::uint64_t* out);

// out bit k = [ U(t,k) < p[k] ].
void bernoulli_from_probs(PhiloxKey key, Draw purpose, std::uint64_t t,
                          const double* p, std::int64_t n, std::uint64_t* out);

// One transition of the coordinate-update rule, 64 coordinates per word.
// mode < 0 : phi < gamma,  mode == 0 : phi == gamma,  mode > 0 : phi > gamma.
// keep_one is the z=1 comparison threshold (1-phi)/gamma; psi is the model
// ratio.  Consumes exactly one uniform per coordinate (purpose Draw::step).
struct StepThresholds {
    double keep_one;
    double psi;
    int mode;
};

void step_transition(PhiloxKey key, std::uint64_t t, std::int64_t n,
                     const std::uint64_t* x, const std::uint64_t* z,
                     StepThresholds th, std::uint64_t* y);

// r[k] *= (z bit k ? factor_one : 1);  p[k] += weight * r[k].
void masked_scale_accumulate(double* r, double* p, const std::uint64_t* z,
                             std::int64_t n, double factor_one, double weight);

}  // namespace hyperwalk::simd
