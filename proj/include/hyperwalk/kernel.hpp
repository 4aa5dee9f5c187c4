#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hyperwalk/latent.hpp"
#include "hyperwalk/params.hpp"
#include "hyperwalk/state.hpp"

namespace hyperwalk {

// Eigenvalue family of a one-step transition kernel.
//
// Subset mode stores kappa_A for every A subseteq [n] (bitmask index,
// n <= 20); Exchangeable mode stores kappa~_k indexed by k = |A|.  Either
// way kappa of the empty set is 1.
class KernelSpectrum {
  public:
    enum class Mode { subset, exchangeable };

    static KernelSpectrum subset(ModelParams params,
                                 std::vector<double> kappa_by_mask);
    static KernelSpectrum exchangeable(ModelParams params,
                                       std::vector<double> kappa_by_size);

    Mode mode() const { return mode_; }
    const ModelParams& params() const { return params_; }
    std::int64_t n() const { return params_.n(); }
    const std::vector<double>& values() const { return values_; }

    double kappa_subset(std::uint64_t mask) const;  // subset mode
    double kappa_size(std::int64_t k) const;        // exchangeable mode

  private:
    KernelSpectrum(Mode m, ModelParams p, std::vector<double> v);
    Mode mode_;
    ModelParams params_;
    std::vector<double> values_;
};

// Dense one-step kernel over {0,1}^n, n <= 12; row = from-state.
class DenseKernel {
  public:
    DenseKernel(std::int64_t n, std::vector<double> row_major);

    std::int64_t n() const { return n_; }
    std::uint64_t size() const { return std::uint64_t{1} << n_; }
    double at(std::uint64_t x, std::uint64_t y) const {
        return p_[(x << n_) | y];
    }
    const std::vector<double>& data() const { return p_; }

  private:
    std::int64_t n_;
    std::vector<double> p_;
};

// kappa_A = (a/ab)^{|A|} E[ prod_{k in A} (1 - Z[k]/a) ]; exchangeable models
// reduce to kappa~_k = (a/ab)^k E[ Q_k(|Z|; n, a) ] over the Hamming pmf.
KernelSpectrum spectrum_from_latent(const LatentModel& model,
                                    const ModelParams& params);

// Spectral expansion of the full kernel:
// p(x,y) = phi^|y| phib^(n-|y|) {1 + sum_A kappa_A prod_{k in A}
//          (1 - y[k]/phi)(1 - x[k]/gamma)}.
DenseKernel full_kernel(const KernelSpectrum& spectrum);

// Single entry through the count statistics (|x|, |y|, <x,y>), exchangeable
// mode: R_k is the coefficient of C(n,k) s^k in
// (1+s)^N00 (1-(gb/g)s)^N10 (1-(fb/f)s)^N01 (1+(fb gb/f g)s)^N11.
double kernel_entry_exchangeable(const TransitionCounts& counts,
                                 const KernelSpectrum& spectrum);

// Hamming-weight chain kernel, (n+1) x (n+1):
// p(m'|m) = C(n,m') phi^m' phib^(n-m') {1 + sum_k C(n,k) kappa~_k
//           Q_k(m'; n, phi) Q_k(m; n, gamma)}.
std::vector<std::vector<double>> hamming_kernel(const KernelSpectrum& spectrum);

// Single-coordinate kernel p_xy = phi_y {1 + kappa (1-x/gamma)(1-y/phi)},
// returned as {{p00, p01}, {p10, p11}}.
std::array<std::array<double, 2>, 2> single_coordinate_kernel(
    double kappa, const ModelParams& params);

// Stationary Bernoulli parameter of the single-coordinate chain,
// (phi - kappa phib) / (1 - kappa phib / gamma).
double single_coordinate_stationary(double kappa, const ModelParams& params);

// Distribution of the latent driver recovered from a realizable kernel:
// P(Z = z) = p(0 -> z) when phi <= gamma, and
// P(Z = z) = gamma^|z| gb^(n-|z|) phib^{-n} p(z -> 0) when phi > gamma.
std::vector<double> z_law_from_kernel(const DenseKernel& kernel,
                                      const ModelParams& params);

// Per-coordinate two-state chain P_t with E[Z_t[k]] plugged in, plus its
// stationary parameter.
struct CoordinateChain {
    std::array<std::array<double, 2>, 2> matrix;
    double stationary;
};
CoordinateChain coordinate_chain_matrix(const LatentModel& model,
                                        std::int64_t coordinate,
                                        const ModelParams& params);

}  // namespace hyperwalk
