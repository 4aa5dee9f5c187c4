#pragma once

#include <array>
#include <cstdint>

namespace hyperwalk {

// Philox4x32-10 counter-based generator.  Every variate in the library is a
// pure function of (seed, replicate, purpose, t, index), which is what makes
// simulation output independent of the thread count and lets the scalar and
// AVX2 lanes produce bit-identical streams.
struct PhiloxKey {
    std::uint32_t k0 = 0;
    std::uint32_t k1 = 0;
};

struct PhiloxCounter {
    std::uint32_t c0 = 0;  // block index within a (t, purpose) slot
    std::uint32_t c1 = 0;  // low 32 bits of t
    std::uint32_t c2 = 0;  // high 32 bits of t
    std::uint32_t c3 = 0;  // purpose tag
};

std::array<std::uint32_t, 4> philox4x32(PhiloxCounter ctr, PhiloxKey key);

// Draw purposes.  Each purpose owns a disjoint counter space per (stream, t).
enum class Draw : std::uint32_t {
    step = 0,         // the per-coordinate uniforms U(t, k) of one transition
    latent = 1,       // latent coordinate bits Z_t[k]
    theta = 2,        // scalar draws for one transition (rejection loops)
    extreme = 3,      // position sampling for fixed-weight latent states
    init = 4,         // initial-state coordinate draws
    limit_z = 5,      // latent vectors inside the limit-law sampler (t = l)
    limit_theta = 6,  // theta draws inside the limit-law sampler
    limit_bern = 7,   // final coordinate Bernoulli draws of the limit sampler
};

inline double u32_to_unit(std::uint32_t x) {
    // (x + 0.5) * 2^-32, exactly representable; never 0 or 1.
    return (static_cast<double>(static_cast<std::int32_t>(x ^ 0x80000000u)) +
            2147483648.5) *
           (1.0 / 4294967296.0);
}

// One replicate's stream: the key is derived from (seed, stream index) by a
// splitmix64 finalizer so replicates are statistically independent.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    PhiloxKey key() const { return key_; }

    // Uniform for coordinate k of slot (purpose, t): lane k%4 of block k/4.
    double coordinate_uniform(Draw purpose, std::uint64_t t,
                              std::uint64_t k) const;

    // A sequential cursor over one (purpose, t) slot, for scalar draws and
    // rejection loops.  Blocks are consumed one lane at a time.
    class Cursor {
      public:
        Cursor(const RngStream& s, Draw purpose, std::uint64_t t)
            : stream_(&s), purpose_(purpose), t_(t) {}
        double uniform();
        double normal();                     // Box-Muller
        double gamma(double shape);          // Marsaglia-Tsang
        double beta(double a, double b);     // gamma ratio
        // uniform integer in [0, bound) by rejection
        std::uint64_t uniform_below(std::uint64_t bound);

      private:
        std::uint32_t next_u32();
        const RngStream* stream_;
        Draw purpose_;
        std::uint64_t t_;
        std::uint32_t block_ = 0;
        int lane_ = 4;  // forces a refill on first use
        std::array<std::uint32_t, 4> buf_{};
    };

    Cursor cursor(Draw purpose, std::uint64_t t) const {
        return Cursor(*this, purpose, t);
    }

  private:
    PhiloxKey key_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace hyperwalk
