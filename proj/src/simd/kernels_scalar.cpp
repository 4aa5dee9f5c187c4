// Scalar reference kernels.  Compiled with -ffp-contract=off so the
// floating-point sequence matches the AVX2 lane exactly.

#include <bit>

#include "simd/kernel_table.hpp"

namespace hyperwalk::simd {

namespace {

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

inline PhiloxCounter slot_counter(Draw purpose, std::uint64_t t,
                                  std::uint32_t block) {
    PhiloxCounter ctr;
    ctr.c0 = block;
    ctr.c1 = static_cast<std::uint32_t>(t);
    ctr.c2 = static_cast<std::uint32_t>(t >> 32);
    ctr.c3 = static_cast<std::uint32_t>(purpose);
    return ctr;
}

void bernoulli_mask_impl(PhiloxKey key, Draw purpose, std::uint64_t t,
                         std::int64_t n, double theta, std::uint64_t* out) {
    const std::int64_t nwords = (n + 63) >> 6;
    for (std::int64_t w = 0; w < nwords; ++w) {
        std::uint64_t word = 0;
        const std::int64_t base = w << 6;
        const std::int64_t m = (n - base < 64) ? (n - base) : 64;
        for (std::int64_t j = 0; j < m; j += 4) {
            const auto blk =
                philox4x32(slot_counter(purpose, t,
                                        static_cast<std::uint32_t>((base + j) >> 2)),
                           key);
            const std::int64_t lanes = (m - j < 4) ? (m - j) : 4;
            for (std::int64_t l = 0; l < lanes; ++l) {
                if (u32_to_unit(blk[static_cast<std::size_t>(l)]) < theta) {
                    word |= std::uint64_t{1} << (j + l);
                }
            }
        }
        out[w] = word;
    }
}

void bernoulli_from_probs_impl(PhiloxKey key, Draw purpose, std::uint64_t t,
                               const double* p, std::int64_t n,
                               std::uint64_t* out) {
    const std::int64_t nwords = (n + 63) >> 6;
    for (std::int64_t w = 0; w < nwords; ++w) {
        std::uint64_t word = 0;
        const std::int64_t base = w << 6;
        const std::int64_t m = (n - base < 64) ? (n - base) : 64;
        for (std::int64_t j = 0; j < m; j += 4) {
            const auto blk =
                philox4x32(slot_counter(purpose, t,
                                        static_cast<std::uint32_t>((base + j) >> 2)),
                           key);
            const std::int64_t lanes = (m - j < 4) ? (m - j) : 4;
            for (std::int64_t l = 0; l < lanes; ++l) {
                if (u32_to_unit(blk[static_cast<std::size_t>(l)]) <
                    p[base + j + l]) {
                    word |= std::uint64_t{1} << (j + l);
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
        // m1 bit: U >= keep_one (z=1, x=1 keeps its one)
        // mp bit: U <  psi      (z=0 comparisons; complemented when phi > gamma)
        std::uint64_t m1 = 0, mp = 0;
        const std::int64_t base = w << 6;
        const std::int64_t m = (n - base < 64) ? (n - base) : 64;
        for (std::int64_t j = 0; j < m; j += 4) {
            const auto blk =
                philox4x32(slot_counter(Draw::step, t,
                                        static_cast<std::uint32_t>((base + j) >> 2)),
                           key);
            const std::int64_t lanes = (m - j < 4) ? (m - j) : 4;
            for (std::int64_t l = 0; l < lanes; ++l) {
                const double u = u32_to_unit(blk[static_cast<std::size_t>(l)]);
                if (u >= th.keep_one) m1 |= std::uint64_t{1} << (j + l);
                if (u < th.psi) mp |= std::uint64_t{1} << (j + l);
            }
        }
        const std::uint64_t xw = x[w];
        const std::uint64_t zw = z[w];
        const std::uint64_t ones_part = zw & (~xw | m1);
        std::uint64_t zero_part;
        if (th.mode < 0) {
            zero_part = ~zw & xw & mp;
        } else if (th.mode > 0) {
            zero_part = ~zw & (xw | ~mp);
        } else {
            zero_part = ~zw & xw;
        }
        std::uint64_t word = ones_part | zero_part;
        if (m < 64) word &= (~std::uint64_t{0}) >> (64 - m);
        y[w] = word;
    }
}

void masked_scale_accumulate_impl(double* r, double* p, const std::uint64_t* z,
                                  std::int64_t n, double factor_one,
                                  double weight) {
    for (std::int64_t k = 0; k < n; ++k) {
        if ((z[k >> 6] >> (k & 63)) & 1u) r[k] = r[k] * factor_one;
        p[k] = p[k] + weight * r[k];
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        popcount_impl,       popcount_and_impl,
        bernoulli_mask_impl, bernoulli_from_probs_impl,
        step_transition_impl, masked_scale_accumulate_impl,
    };
    return table;
}

}  // namespace hyperwalk::simd
