#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hyperwalk/rng.hpp"
#include "hyperwalk/state.hpp"

namespace hyperwalk {

// Distribution families for the latent driver Z_t.

// Arbitrary pmf over {0,1}^n, n <= 20.
struct ExplicitPmf {
    std::int64_t n;
    std::vector<double> pmf;  // indexed by packed state, bit k = coordinate k
};

// Coordinates i.i.d. Bernoulli(theta).
struct IidTheta {
    double theta;
};

// theta ~ Beta(a, b), then coordinates i.i.d. Bernoulli(theta).
struct DeFinettiBeta {
    double a;
    double b;
};

// theta drawn from a discrete grid with the given weights.
struct DeFinettiGrid {
    std::vector<double> thetas;
    std::vector<double> weights;
};

// Exactly m coordinates equal to one, positions uniform.
struct ExtremePoint {
    std::int64_t m;
};

class LatentModel {
  public:
    using Variant = std::variant<ExplicitPmf, IidTheta, DeFinettiBeta,
                                 DeFinettiGrid, ExtremePoint>;

    explicit LatentModel(Variant v);

    const Variant& variant() const { return v_; }
    template <class T>
    const T* get_if() const {
        return std::get_if<T>(&v_);
    }

    // true for the families with permutation-invariant coordinates
    bool exchangeable() const;
    // Fixed dimension, when the family pins one (ExplicitPmf only).
    std::optional<std::int64_t> fixed_n() const;
    void check_dimension(std::int64_t n) const;

    std::string describe() const;

  private:
    Variant v_;
    std::vector<double> cumulative_;  // sampling table for ExplicitPmf / grid
    friend struct LatentSampler;
};

struct ThetaDraw {
    double theta;
    std::string source;
};

struct ZDraw {
    HyperState state;
    std::optional<ThetaDraw> theta;
};

// One draw of Z_t in the given counter slots.  Path simulation uses the
// default slots; the limit-law sampler passes its own so the two consumption
// spaces never collide.
struct LatentSampler {
    Draw coord_purpose = Draw::latent;
    Draw scalar_purpose = Draw::theta;

    ZDraw sample(const LatentModel& model, std::int64_t n,
                 const RngStream& stream, std::uint64_t t) const;
    // words-only variant used by the hot simulation loop
    std::optional<ThetaDraw> sample_words(const LatentModel& model,
                                          std::int64_t n,
                                          const RngStream& stream,
                                          std::uint64_t t,
                                          std::uint64_t* words) const;
};

ZDraw sample_z(const LatentModel& model, std::int64_t n,
               const RngStream& stream, std::uint64_t t = 0);

// Exact pmf of the Hamming weight |Z| over {0..n}.
std::vector<double> hamming_pmf(const LatentModel& model, std::int64_t n);

// First and second moments of Z.  For exchangeable families mean and
// covariance are summarized by three scalars; ExplicitPmf yields full
// vectors/matrices (n <= 12 to keep the enumeration affordable).
struct LatentMoments {
    std::vector<double> mean;                // E[Z_k]
    std::vector<std::vector<double>> cov;    // Cov(Z_k, Z_l)
};
LatentMoments latent_moments(const LatentModel& model, std::int64_t n);

// Mean of theta under the mixing measure, for the de Finetti limit formulas;
// IidTheta(theta) reports theta, ExtremePoint(m) reports m/n.
double latent_theta_mean(const LatentModel& model, std::int64_t n);

}  // namespace hyperwalk
