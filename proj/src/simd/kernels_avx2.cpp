// AVX2 variants of the inner-loop kernels.  This is the only translation
// unit built with -mavx2/-mbmi2; it is reached through the runtime dispatch
// table only.  Eight Philox blocks (32 coordinates) are advanced per
// iteration in SoA layout; bit masks are assembled with PDEP.  All
// floating-point element operations mirror the scalar lane exactly.

#include <immintrin.h>

#include <bit>

#include "simd/kernel_table.hpp"

namespace hyperwalk::simd {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

struct Philox8 {
    __m256i x0, x1, x2, x3;
};

// 32x32 -> (lo, hi) for all eight u32 lanes.
inline void mul_full(__m256i a, std::uint32_t m, __m256i& lo, __m256i& hi) {
    const __m256i mv = _mm256_set1_epi32(static_cast<int>(m));
    const __m256i pe = _mm256_mul_epu32(a, mv);  // lanes 0,2,4,6
    const __m256i po = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), mv);
    const __m256i lo_mask = _mm256_set1_epi64x(0xFFFFFFFFll);
    lo = _mm256_or_si256(_mm256_and_si256(pe, lo_mask),
                         _mm256_slli_epi64(po, 32));
    hi = _mm256_or_si256(_mm256_srli_epi64(pe, 32),
                         _mm256_andnot_si256(lo_mask, po));
}

inline Philox8 philox8(std::uint32_t block0, std::uint32_t c1,
                       std::uint32_t c2, std::uint32_t c3, PhiloxKey key) {
    Philox8 s;
    s.x0 = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(block0)),
                            _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7));
    s.x1 = _mm256_set1_epi32(static_cast<int>(c1));
    s.x2 = _mm256_set1_epi32(static_cast<int>(c2));
    s.x3 = _mm256_set1_epi32(static_cast<int>(c3));
    std::uint32_t k0 = key.k0, k1 = key.k1;
    for (int r = 0; r < 10; ++r) {
        if (r) {
            k0 += kW0;
            k1 += kW1;
        }
        __m256i lo0, hi0, lo1, hi1;
        mul_full(s.x0, kM0, lo0, hi0);
        mul_full(s.x2, kM1, lo1, hi1);
        const __m256i k0v = _mm256_set1_epi32(static_cast<int>(k0));
        const __m256i k1v = _mm256_set1_epi32(static_cast<int>(k1));
        const __m256i n0 =
            _mm256_xor_si256(_mm256_xor_si256(hi1, s.x1), k0v);
        const __m256i n2 =
            _mm256_xor_si256(_mm256_xor_si256(hi0, s.x3), k1v);
        s.x1 = lo1;
        s.x3 = lo0;
        s.x0 = n0;
        s.x2 = n2;
    }
    return s;
}

// u32 lanes -> unit-interval doubles, identical arithmetic to u32_to_unit().
inline void lane_to_unit(__m256i y, __m256d& lo4, __m256d& hi4) {
    const __m256i flipped =
        _mm256_xor_si256(y, _mm256_set1_epi32(static_cast<int>(0x80000000u)));
    const __m256d offset = _mm256_set1_pd(2147483648.5);
    const __m256d scale = _mm256_set1_pd(1.0 / 4294967296.0);
    lo4 = _mm256_mul_pd(
        _mm256_add_pd(_mm256_cvtepi32_pd(_mm256_castsi256_si128(flipped)),
                      offset),
        scale);
    hi4 = _mm256_mul_pd(
        _mm256_add_pd(_mm256_cvtepi32_pd(_mm256_extracti128_si256(flipped, 1)),
                      offset),
        scale);
}

// Eight comparison bits of one Philox lane, block-major.
inline std::uint32_t cmp8(__m256d lo4, __m256d hi4, __m256d threshold,
                          int pred_lt) {
    __m256d clo, chi;
    if (pred_lt) {
        clo = _mm256_cmp_pd(lo4, threshold, _CMP_LT_OQ);
        chi = _mm256_cmp_pd(hi4, threshold, _CMP_LT_OQ);
    } else {
        clo = _mm256_cmp_pd(lo4, threshold, _CMP_GE_OQ);
        chi = _mm256_cmp_pd(hi4, threshold, _CMP_GE_OQ);
    }
    return static_cast<std::uint32_t>(_mm256_movemask_pd(clo)) |
           (static_cast<std::uint32_t>(_mm256_movemask_pd(chi)) << 4);
}

// 32-coordinate threshold masks for blocks block0..block0+7.
struct Masks32 {
    std::uint32_t lt_a = 0;  // u < a
    std::uint32_t lt_b = 0;  // u < b
};

inline Masks32 threshold_masks32(PhiloxKey key, Draw purpose, std::uint64_t t,
                                 std::uint32_t block0, double a, double b) {
    const auto s = philox8(block0, static_cast<std::uint32_t>(t),
                           static_cast<std::uint32_t>(t >> 32),
                           static_cast<std::uint32_t>(purpose), key);
    const __m256d av = _mm256_set1_pd(a);
    const __m256d bv = _mm256_set1_pd(b);
    const __m256i lanes[4] = {s.x0, s.x1, s.x2, s.x3};
    Masks32 m;
    for (int l = 0; l < 4; ++l) {
        __m256d lo4, hi4;
        lane_to_unit(lanes[l], lo4, hi4);
        const std::uint32_t bits_a = cmp8(lo4, hi4, av, 1);
        const std::uint32_t bits_b = cmp8(lo4, hi4, bv, 1);
        const std::uint32_t spread = 0x11111111u << l;
        m.lt_a |= _pdep_u32(bits_a, spread);
        m.lt_b |= _pdep_u32(bits_b, spread);
    }
    return m;
}

std::int64_t popcount_impl(const std::uint64_t* words, std::size_t nwords) {
    std::int64_t c = 0;
    for (std::size_t i = 0; i < nwords; ++i) c += std::popcount(words[i]);
    return c;
}

std::int64_t popcount_and_impl(const std::uint64_t* a, const std::uint64_t* b,
                               std::size_t nwords) {
    std::int64_t c = 0;
    for (std::size_t i = 0; i < nwords; ++i) c += std::popcount(a[i] & b[i]);
    return c;
}

void bernoulli_mask_impl(PhiloxKey key, Draw purpose, std::uint64_t t,
                         std::int64_t n, double theta, std::uint64_t* out) {
    const std::int64_t nwords = (n + 63) >> 6;
    for (std::int64_t w = 0; w < nwords; ++w) {
        std::uint64_t word = 0;
        const auto block0 = static_cast<std::uint32_t>(w << 4);
        for (int half = 0; half < 2; ++half) {
            const Masks32 m = threshold_masks32(
                key, purpose, t, block0 + static_cast<std::uint32_t>(8 * half),
                theta, theta);
            word |= static_cast<std::uint64_t>(m.lt_a) << (32 * half);
        }
        const std::int64_t base = w << 6;
        const std::int64_t mbits = (n - base < 64) ? (n - base) : 64;
        if (mbits < 64) word &= (~std::uint64_t{0}) >> (64 - mbits);
        out[w] = word;
    }
}

void bernoulli_from_probs_impl(PhiloxKey key, Draw purpose, std::uint64_t t,
                               const double* p, std::int64_t n,
                               std::uint64_t* out) {
    const std::int64_t nwords = (n + 63) >> 6;
    const std::int64_t full = n >> 6;
    for (std::int64_t w = 0; w < nwords; ++w) {
        std::uint64_t word = 0;
        if (w < full) {
            for (int half = 0; half < 2; ++half) {
                const auto s = philox8(
                    static_cast<std::uint32_t>((w << 4) + 8 * half),
                    static_cast<std::uint32_t>(t),
                    static_cast<std::uint32_t>(t >> 32),
                    static_cast<std::uint32_t>(purpose), key);
                const __m256i lanes[4] = {s.x0, s.x1, s.x2, s.x3};
                __m256d u[4][2];
                for (int l = 0; l < 4; ++l) {
                    lane_to_unit(lanes[l], u[l][0], u[l][1]);
                }
                // transpose (lane, block) -> coordinate order, 4 blocks at a time
                const double* pw = p + (w << 6) + 32 * half;
                std::uint32_t bits = 0;
                for (int grp = 0; grp < 2; ++grp) {
                    const __m256d r0 = u[0][grp];
                    const __m256d r1 = u[1][grp];
                    const __m256d r2 = u[2][grp];
                    const __m256d r3 = u[3][grp];
                    const __m256d t0 = _mm256_unpacklo_pd(r0, r1);
                    const __m256d t1 = _mm256_unpackhi_pd(r0, r1);
                    const __m256d t2 = _mm256_unpacklo_pd(r2, r3);
                    const __m256d t3 = _mm256_unpackhi_pd(r2, r3);
                    const __m256d c0 = _mm256_permute2f128_pd(t0, t2, 0x20);
                    const __m256d c1 = _mm256_permute2f128_pd(t1, t3, 0x20);
                    const __m256d c2 = _mm256_permute2f128_pd(t0, t2, 0x31);
                    const __m256d c3 = _mm256_permute2f128_pd(t1, t3, 0x31);
                    const __m256d cols[4] = {c0, c1, c2, c3};
                    for (int i = 0; i < 4; ++i) {
                        const __m256d pv = _mm256_loadu_pd(pw + 16 * grp + 4 * i);
                        const __m256d cv =
                            _mm256_cmp_pd(cols[i], pv, _CMP_LT_OQ);
                        bits |= static_cast<std::uint32_t>(
                                    _mm256_movemask_pd(cv))
                                << (16 * grp + 4 * i);
                    }
                }
                word |= static_cast<std::uint64_t>(bits) << (32 * half);
            }
        } else {
            // ragged tail: defer to the scalar reference
            const std::int64_t base = w << 6;
            const std::int64_t mbits = n - base;
            for (std::int64_t j = 0; j < mbits; j += 4) {
                PhiloxCounter ctr;
                ctr.c0 = static_cast<std::uint32_t>((base + j) >> 2);
                ctr.c1 = static_cast<std::uint32_t>(t);
                ctr.c2 = static_cast<std::uint32_t>(t >> 32);
                ctr.c3 = static_cast<std::uint32_t>(purpose);
                const auto blk = philox4x32(ctr, key);
                const std::int64_t lanes = (mbits - j < 4) ? (mbits - j) : 4;
                for (std::int64_t l = 0; l < lanes; ++l) {
                    if (u32_to_unit(blk[static_cast<std::size_t>(l)]) <
                        p[base + j + l]) {
                        word |= std::uint64_t{1} << (j + l);
                    }
                }
            }
        }
        out[w] = word;
    }
}

void step_transition_impl(PhiloxKey key, std::uint64_t t, std::int64_t n,
                          const std::uint64_t* x, const std::uint64_t* z,
                          StepThresholds th, std::uint64_t* y) {
    const std::int64_t nwords = (n + 63) >> 6;
    for (std::int64_t w = 0; w < nwords; ++w) {
        std::uint64_t ge1 = 0, ltp = 0;
        const auto block0 = static_cast<std::uint32_t>(w << 4);
        for (int half = 0; half < 2; ++half) {
            // lt_a = u < keep_one  (complement gives u >= keep_one),
            // lt_b = u < psi.
            const Masks32 m = threshold_masks32(
                key, Draw::step, t, block0 + static_cast<std::uint32_t>(8 * half),
                th.keep_one, th.psi);
            ge1 |= static_cast<std::uint64_t>(~m.lt_a) << (32 * half);
            ltp |= static_cast<std::uint64_t>(m.lt_b) << (32 * half);
        }
        const std::uint64_t xw = x[w];
        const std::uint64_t zw = z[w];
        const std::uint64_t ones_part = zw & (~xw | ge1);
        std::uint64_t zero_part;
        if (th.mode < 0) {
            zero_part = ~zw & xw & ltp;
        } else if (th.mode > 0) {
            zero_part = ~zw & (xw | ~ltp);
        } else {
            zero_part = ~zw & xw;
        }
        std::uint64_t word = ones_part | zero_part;
        const std::int64_t base = w << 6;
        const std::int64_t mbits = (n - base < 64) ? (n - base) : 64;
        if (mbits < 64) word &= (~std::uint64_t{0}) >> (64 - mbits);
        y[w] = word;
    }
}

alignas(32) constexpr std::uint64_t kNibbleMask[16][4] = {
    {0, 0, 0, 0},
    {~0ull, 0, 0, 0},
    {0, ~0ull, 0, 0},
    {~0ull, ~0ull, 0, 0},
    {0, 0, ~0ull, 0},
    {~0ull, 0, ~0ull, 0},
    {0, ~0ull, ~0ull, 0},
    {~0ull, ~0ull, ~0ull, 0},
    {0, 0, 0, ~0ull},
    {~0ull, 0, 0, ~0ull},
    {0, ~0ull, 0, ~0ull},
    {~0ull, ~0ull, 0, ~0ull},
    {0, 0, ~0ull, ~0ull},
    {~0ull, 0, ~0ull, ~0ull},
    {0, ~0ull, ~0ull, ~0ull},
    {~0ull, ~0ull, ~0ull, ~0ull},
};

void masked_scale_accumulate_impl(double* r, double* p, const std::uint64_t* z,
                                  std::int64_t n, double factor_one,
                                  double weight) {
    const __m256d fv = _mm256_set1_pd(factor_one);
    const __m256d onev = _mm256_set1_pd(1.0);
    const __m256d wv = _mm256_set1_pd(weight);
    std::int64_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const std::uint32_t nib =
            static_cast<std::uint32_t>(z[k >> 6] >> (k & 63)) & 0xFu;
        const __m256d mask = _mm256_load_pd(
            reinterpret_cast<const double*>(kNibbleMask[nib]));
        const __m256d f = _mm256_blendv_pd(onev, fv, mask);
        const __m256d rv = _mm256_mul_pd(_mm256_loadu_pd(r + k), f);
        _mm256_storeu_pd(r + k, rv);
        const __m256d pv =
            _mm256_add_pd(_mm256_loadu_pd(p + k), _mm256_mul_pd(wv, rv));
        _mm256_storeu_pd(p + k, pv);
    }
    for (; k < n; ++k) {
        if ((z[k >> 6] >> (k & 63)) & 1u) r[k] = r[k] * factor_one;
        p[k] = p[k] + weight * r[k];
    }
}

}  // namespace

const KernelTable& avx2_kernels() {
    static const KernelTable table{
        popcount_impl,       popcount_and_impl,
        bernoulli_mask_impl, bernoulli_from_probs_impl,
        step_transition_impl, masked_scale_accumulate_impl,
    };
    return table;
}

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("bmi2");
}

}  // namespace hyperwalk::simd
