#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hyperwalk/state.hpp"

namespace hyperwalk {

// ===== Transition statistics of a sample path =====

struct PathStats {
    std::int64_t n = 0;
    std::vector<TransitionCounts> counts;  // one per transition t = 1..T
    // p_hat[i][j] per transition; entries with n_i. = 0 are NaN and the
    // transition index is recorded in degenerate
    std::vector<double> p01;
    std::vector<double> p11;
    std::vector<double> d;  // p01 - p11
    std::vector<std::int64_t> degenerate;
    double p01_mean = 0.0;
    double p11_mean = 0.0;
    double d_mean = 0.0;
    std::int64_t usable = 0;  // transitions entering the least-squares sums
};

PathStats path_stats(const SamplePath& path);

// ===== Least squares for (phi, gamma) =====

struct PhiGammaEstimate {
    double phi_hat;
    double gamma_hat;
    bool pooled;              // the phi == gamma fallback was used
    bool admissible;          // phi_hat + gamma_hat >= 1 after clamping
    std::int64_t excluded;    // transitions dropped for undefined proportions
};

// gamma_hat = sum (d-d_bar)(p01-p01_bar) / sum (d-d_bar)^2,
// phi_hat = p01_bar - gamma_hat d_bar; all-equal d falls back to the pooled
// estimator phi_hat = p01_bar / (1 + d_bar).
PhiGammaEstimate estimate_phi_gamma(const PathStats& stats);

// ===== Per-transition maximum likelihood for theta =====

struct ThetaEstimate {
    std::int64_t t = 0;
    double theta_hat = 0.0;
    bool converged = false;
    double loglik = 0.0;
    double score = 0.0;  // score at theta_hat, ~0 when converged
};

// Root of the score equation in (0,1) by bisection on [1e-9, 1-1e-9]; counts
// consistent only with a boundary theta come back clamped with
// converged = false.
ThetaEstimate estimate_theta(const TransitionCounts& counts, double phi,
                             double gamma);

// ===== Summaries over transitions =====

struct HistogramBin {
    double lo;
    double hi;
    std::int64_t count;
    double density;
};

struct ThetaSummary {
    std::vector<HistogramBin> histogram;
    double mean = 0.0;
    double variance = 0.0;
    std::int64_t used = 0;
    std::optional<double> ks_distance;  // vs the reference Beta, when given
};

struct BetaRef {
    double a;
    double b;
};

ThetaSummary theta_distribution_summary(const std::vector<ThetaEstimate>& estimates,
                                        std::optional<BetaRef> reference,
                                        std::int64_t bins = 40);

}  // namespace hyperwalk
