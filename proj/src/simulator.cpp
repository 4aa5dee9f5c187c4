#include "hyperwalk/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "hyperwalk/errors.hpp"
#include "hyperwalk/simd/kernels.hpp"

namespace hyperwalk {

namespace {

constexpr double kProbClamp = 1e-10;

simd::StepThresholds thresholds(const ModelParams& pr) {
    simd::StepThresholds th;
    th.keep_one = pr.phi_bar() / pr.gamma();
    th.psi = pr.psi();
    th.mode = (pr.phi() < pr.gamma()) ? -1 : (pr.phi() > pr.gamma() ? 1 : 0);
    return th;
}

void clamp_probability(double& p) {
    if (p < 0.0) {
        if (p < -kProbClamp) {
            throw error("conditional probability left [0,1] beyond tolerance");
        }
        p = 0.0;
    } else if (p > 1.0) {
        if (p > 1.0 + kProbClamp) {
            throw error("conditional probability left [0,1] beyond tolerance");
        }
        p = 1.0;
    }
}

}  // namespace

HyperState step(const HyperState& x, const HyperState& z,
                const ModelParams& params, const RngStream& stream,
                std::uint64_t t) {
    if (x.n() != z.n() || x.n() != params.n()) {
        throw length_mismatch_error("step: state lengths disagree");
    }
    std::vector<std::uint64_t> out(x.words().size(), 0u);
    simd::step_transition(stream.key(), t, x.n(), x.words().data(),
                          z.words().data(), thresholds(params), out.data());
    return HyperState(x.n(), std::move(out));
}

AutoregressiveStep step_autoregressive(const HyperState& x,
                                       const HyperState& z,
                                       const ModelParams& params,
                                       const RngStream& stream,
                                       std::uint64_t t) {
    if (x.n() != z.n() || x.n() != params.n()) {
        throw length_mismatch_error("step_autoregressive: lengths disagree");
    }
    const std::int64_t n = x.n();
    const auto nwords = x.words().size();
    // masks from the same uniforms as step(): ge1 = U >= (1-phi)/gamma,
    // ltp = U < psi
    std::vector<std::uint64_t> ltk(nwords), ltp(nwords);
    simd::bernoulli_mask(stream.key(), Draw::step, t, n,
                         params.phi_bar() / params.gamma(), ltk.data());
    simd::bernoulli_mask(stream.key(), Draw::step, t, n, params.psi(),
                         ltp.data());
    std::vector<std::uint64_t> aw(nwords), bw(nwords), yw(nwords);
    const int mode = (params.phi() < params.gamma())
                         ? -1
                         : (params.phi() > params.gamma() ? 1 : 0);
    for (std::size_t w = 0; w < nwords; ++w) {
        const std::uint64_t zw = z.words()[w];
        const std::uint64_t ge1 = ~ltk[w];
        std::uint64_t a, b;
        if (mode < 0) {
            // z=1: (A,B) = (I[U >= phib/gamma], 1); z=0: (I[U < psi], 0)
            a = (zw & ge1) | (~zw & ltp[w]);
            b = zw;
        } else if (mode > 0) {
            // z=1 as above; z=0: (1, I[U >= psi])
            a = (zw & ge1) | ~zw;
            b = zw | (~zw & ~ltp[w]);
        } else {
            // phi == gamma: z=0 holds the current value
            a = (zw & ge1) | ~zw;
            b = zw;
        }
        aw[w] = a;
        bw[w] = b;
        yw[w] = (a & x.words()[w]) | (b & ~x.words()[w]);
    }
    return AutoregressiveStep{HyperState(n, std::move(yw)),
                              HyperState(n, std::move(aw)),
                              HyperState(n, std::move(bw))};
}

ConditionalBernoulli conditional_bernoulli(const HyperState& x0,
                                           const std::vector<HyperState>& z_path,
                                           const ModelParams& params) {
    const std::int64_t n = x0.n();
    if (n != params.n()) {
        throw length_mismatch_error("conditional_bernoulli: lengths disagree");
    }
    const double phi = params.phi();
    const double gamma = params.gamma();
    const double rho0 = params.alpha() * params.phi_bar() /
                        (params.alpha_bar() * phi);
    const double rho1 = rho0 * (1.0 - 1.0 / params.alpha());
    ConditionalBernoulli out;
    out.p.resize(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        out.p[static_cast<std::size_t>(k)] = x0.bit(k) ? 1.0 : 0.0;
    }
    for (const auto& z : z_path) {
        if (z.n() != n) {
            throw length_mismatch_error("conditional_bernoulli: z length");
        }
        for (std::int64_t k = 0; k < n; ++k) {
            const double rho = z.bit(k) ? rho1 : rho0;
            double& p = out.p[static_cast<std::size_t>(k)];
            p = phi * (1.0 - rho * (1.0 - p / gamma));
            clamp_probability(p);
        }
    }
    return out;
}

std::int64_t limit_truncation(const ModelParams& params) {
    if (params.phi() + params.gamma() <= 1.0) {
        throw boundary_error(
            "the limit law needs phi + gamma > 1 for geometric decay");
    }
    if (params.phi() == params.gamma()) return 1;  // coefficient vanishes
    const double q =
        std::max(params.psi(), params.phi_bar() / params.gamma());
    const std::int64_t L =
        static_cast<std::int64_t>(std::ceil(std::log(1e-12) / std::log(q)));
    return std::clamp<std::int64_t>(L, 1, 10000);
}

HyperState sample_limit(const ModelParams& params, const LatentModel& model,
                        std::int64_t truncation, const RngStream& stream,
                        std::uint64_t draw_index) {
    const std::int64_t n = params.n();
    model.check_dimension(n);
    if (params.phi() + params.gamma() <= 1.0) {
        throw boundary_error(
            "the limit law needs phi + gamma > 1 for geometric decay");
    }
    const auto nwords = static_cast<std::size_t>(HyperState::word_count(n));
    std::vector<double> p(static_cast<std::size_t>(n), params.phi());
    if (params.phi() != params.gamma()) {
        // running product r_l[k] = psi^l prod_j (1 - Z_j[k]/alpha); the
        // coordinate factor is psi when z=0 and psi(1 - 1/alpha) when z=1
        std::vector<double> r(static_cast<std::size_t>(n), 1.0);
        std::vector<std::uint64_t> zwords(nwords);
        const double coeff = -(params.gamma() - params.phi());
        const double f1 = 1.0 - 1.0 / params.alpha();
        const LatentSampler sampler{Draw::limit_z, Draw::limit_theta};
        for (std::int64_t l = 1; l <= truncation; ++l) {
            const std::uint64_t slot =
                (draw_index << 24) + static_cast<std::uint64_t>(l);
            sampler.sample_words(model, n, stream, slot, zwords.data());
            for (double& v : r) v *= params.psi();
            simd::masked_scale_accumulate(r.data(), p.data(), zwords.data(), n,
                                          f1, coeff);
        }
        for (double& v : p) clamp_probability(v);
    }
    std::vector<std::uint64_t> out(nwords);
    simd::bernoulli_from_probs(stream.key(), Draw::limit_bern, draw_index,
                               p.data(), n, out.data());
    return HyperState(n, std::move(out));
}

SimResult simulate_replicate(const SimConfig& config, std::int64_t replicate) {
    const auto& pr = config.params;
    const std::int64_t n = pr.n();
    config.latent.check_dimension(n);
    if (config.steps < 0) throw config_error("steps must be >= 0");
    const RngStream stream(config.seed, static_cast<std::uint64_t>(replicate));

    HyperState x(n);
    switch (config.initial.kind) {
        case InitialState::Kind::explicit_state:
            if (!config.initial.state || config.initial.state->n() != n) {
                throw config_error("explicit initial state has wrong length");
            }
            x = *config.initial.state;
            break;
        case InitialState::Kind::product_gamma: {
            std::vector<std::uint64_t> w(
                static_cast<std::size_t>(HyperState::word_count(n)));
            simd::bernoulli_mask(stream.key(), Draw::init, 0, n, pr.gamma(),
                                 w.data());
            x = HyperState(n, std::move(w));
            break;
        }
        case InitialState::Kind::limit_law:
            x = sample_limit(pr, config.latent, limit_truncation(pr), stream);
            break;
    }

    SimResult res;
    std::vector<HyperState> states;
    if (config.keep_states) states.push_back(x);
    res.hamming.push_back(x.hamming());

    const LatentSampler sampler{};
    std::vector<std::uint64_t> zwords(
        static_cast<std::size_t>(HyperState::word_count(n)));
    for (std::int64_t t = 1; t <= config.steps; ++t) {
        auto theta = sampler.sample_words(config.latent, n, stream,
                                          static_cast<std::uint64_t>(t),
                                          zwords.data());
        if (config.log_latent) {
            res.latent_log.push_back(LatentLogEntry{
                t, simd::popcount(zwords.data(), zwords.size()),
                theta ? std::optional<double>(theta->theta) : std::nullopt});
        }
        std::vector<std::uint64_t> yw(zwords.size());
        simd::step_transition(stream.key(), static_cast<std::uint64_t>(t), n,
                              x.words().data(), zwords.data(), thresholds(pr),
                              yw.data());
        x = HyperState(n, std::move(yw));
        if (config.keep_states) states.push_back(x);
        res.hamming.push_back(x.hamming());
    }
    if (config.keep_states) res.path = SamplePath(std::move(states));
    return res;
}

SimResult simulate_path(const SimConfig& config) {
    return simulate_replicate(config, 0);
}

std::vector<SimResult> simulate_ensemble(const SimConfig& config,
                                         int threads) {
    const std::int64_t r = config.replicates;
    std::vector<SimResult> results(static_cast<std::size_t>(r));
    if (threads < 1) threads = 1;
    threads = static_cast<int>(
        std::min<std::int64_t>(threads, r));
    if (threads == 1) {
        for (std::int64_t i = 0; i < r; ++i) {
            results[static_cast<std::size_t>(i)] = simulate_replicate(config, i);
        }
        return results;
    }
    std::vector<std::thread> pool;
    std::atomic<std::int64_t> next{0};
    pool.reserve(static_cast<std::size_t>(threads));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= r) return;
                try {
                    results[static_cast<std::size_t>(i)] =
                        simulate_replicate(config, i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

std::vector<double> approx_hamming_path(const ModelParams& params,
                                        const std::vector<double>& theta_path,
                                        double w0) {
    const double nn = static_cast<double>(params.n());
    std::vector<double> w;
    w.reserve(theta_path.size() + 1);
    w.push_back(w0);
    double cur = w0;
    for (const double th : theta_path) {
        if (!(th > 0.0 && th < 1.0)) {
            throw boundary_error("approximate process needs Theta in (0,1)");
        }
        const double q01 = 1.0 - (1.0 - th) * params.phi_bar() / params.alpha_bar();
        const double contraction = params.psi() * (1.0 - th / params.alpha());
        cur = nn * q01 + cur * contraction;
        w.push_back(cur);
    }
    return w;
}

}  // namespace hyperwalk
