#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hyperwalk/latent.hpp"
#include "hyperwalk/params.hpp"
#include "hyperwalk/rng.hpp"
#include "hyperwalk/state.hpp"

namespace hyperwalk {

// How a replicate's initial state x_0 is chosen.
struct InitialState {
    enum class Kind { explicit_state, product_gamma, limit_law };
    Kind kind = Kind::product_gamma;
    std::optional<HyperState> state;  // for explicit_state

    static InitialState explicit_(HyperState s) {
        return {Kind::explicit_state, std::move(s)};
    }
    static InitialState product_gamma() { return {Kind::product_gamma, {}}; }
    static InitialState limit_law() { return {Kind::limit_law, {}}; }
};

struct SimConfig {
    ModelParams params;
    LatentModel latent;
    std::int64_t steps = 0;
    std::int64_t replicates = 1;
    std::uint64_t seed = 0;
    InitialState initial = InitialState::product_gamma();
    bool log_latent = false;   // record (t, |Z_t|, theta_t)
    bool keep_states = true;   // store the full path (else Hamming only)
};

struct LatentLogEntry {
    std::int64_t t;
    std::int64_t hamming_z;
    std::optional<double> theta;
};

struct SimResult {
    SamplePath path;                        // when keep_states
    std::vector<std::int64_t> hamming;      // |X_t| for every t
    std::vector<LatentLogEntry> latent_log; // when log_latent
};

// One transition by the coordinate rules: given Z_t[k] and X_{t-1}[k],
// coordinate k compares its dedicated uniform U(t,k) against
// (1-phi)/gamma (z=1 branch) or psi (z=0 branch).  The comparison direction
// follows the construction (U >= threshold keeps/holds).
HyperState step(const HyperState& x, const HyperState& z,
                const ModelParams& params, const RngStream& stream,
                std::uint64_t t);

// The autoregressive form X_t[k] = A_t[k] X_{t-1}[k] + B_t[k](1 -
// X_{t-1}[k]).  Shares the uniforms of step(), so the two coincide pathwise.
struct AutoregressiveStep {
    HyperState x;
    HyperState a;
    HyperState b;
};
AutoregressiveStep step_autoregressive(const HyperState& x,
                                       const HyperState& z,
                                       const ModelParams& params,
                                       const RngStream& stream,
                                       std::uint64_t t);

// Conditional coordinate probabilities p_t[k] = P(X_t[k]=1 | x_0, z-path),
// from the one-step recursion 1 - p_t/phi = rho_t (1 - p_{t-1}/gamma),
// rho_t = (alpha phib)/(alphab phi) (1 - z_t[k]/alpha).
struct ConditionalBernoulli {
    std::vector<double> p;
};
ConditionalBernoulli conditional_bernoulli(const HyperState& x0,
                                           const std::vector<HyperState>& z_path,
                                           const ModelParams& params);

// Truncation depth for the limit-law sampler: smallest L with q^L <= 1e-12
// where q = max(psi, phib/gamma) bounds the per-term growth; capped at 1e4.
std::int64_t limit_truncation(const ModelParams& params);

// One draw from the limit distribution: p[k] = phi - (gamma - phi) *
// sum_{l<=L} psi^l prod_{j<=l} (1 - Z_j[k]/alpha), then independent
// Bernoulli(p[k]) coordinates.  draw_index separates replicate draws.
HyperState sample_limit(const ModelParams& params, const LatentModel& model,
                        std::int64_t truncation, const RngStream& stream,
                        std::uint64_t draw_index = 0);

SimResult simulate_path(const SimConfig& config);
// replicate r of the configured ensemble (independent sub-stream)
SimResult simulate_replicate(const SimConfig& config, std::int64_t replicate);

// All replicates, split across threads; output order is by replicate index,
// so results do not depend on the thread count.
std::vector<SimResult> simulate_ensemble(const SimConfig& config,
                                         int threads = 1);

// Large-n approximation of the Hamming path:
// W_t = n (1 - Theta_bar_t phib/alphab) + W_{t-1} psi (1 - Theta_t/alpha).
std::vector<double> approx_hamming_path(const ModelParams& params,
                                        const std::vector<double>& theta_path,
                                        double w0);

}  // namespace hyperwalk
