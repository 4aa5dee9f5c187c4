#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <bit>
#include <cmath>

#include "hyperwalk/asymptotics.hpp"
#include "hyperwalk/kernel.hpp"
#include "hyperwalk/oracle.hpp"
#include "hyperwalk/simulator.hpp"
#include "hyperwalk/special.hpp"

using namespace hyperwalk;

namespace {
LatentModel delta(std::int64_t n, std::uint64_t state) {
    ExplicitPmf e;
    e.n = n;
    e.pmf.assign(std::size_t{1} << n, 0.0);
    e.pmf[state] = 1.0;
    return LatentModel(std::move(e));
}
}  // namespace

TEST_CASE("deterministic branches of the coordinate rule") {
    const RngStream stream(42, 0);
    {
        // z = 1 and x = 0 always produces 1
        const auto pr = validate_params(0.7, 0.6, 64);
        const HyperState x(64);
        const auto z =
            HyperState(64, std::vector<std::uint64_t>{~std::uint64_t{0}});
        for (std::uint64_t t = 0; t < 20; ++t) {
            CHECK(step(x, z, pr, stream, t).hamming() == 64);
        }
    }
    {
        // phi < gamma, z = 0, x = 0 stays 0
        const auto pr = validate_params(0.6, 0.7, 64);
        const HyperState x(64), z(64);
        for (std::uint64_t t = 0; t < 20; ++t) {
            CHECK(step(x, z, pr, stream, t).hamming() == 0);
        }
    }
    {
        // phi > gamma, z = 0, x = 1 stays 1
        const auto pr = validate_params(0.7, 0.6, 64);
        const auto x =
            HyperState(64, std::vector<std::uint64_t>{~std::uint64_t{0}});
        const HyperState z(64);
        for (std::uint64_t t = 0; t < 20; ++t) {
            CHECK(step(x, z, pr, stream, t).hamming() == 64);
        }
    }
    {
        // phi == gamma, z = 0 holds the current value
        const auto pr = validate_params(0.7, 0.7, 64);
        const auto x = HyperState::from_string(std::string(32, '1') +
                                               std::string(32, '0'));
        const HyperState z(64);
        for (std::uint64_t t = 0; t < 20; ++t) {
            CHECK(step(x, z, pr, stream, t) == x);
        }
    }
}

TEST_CASE("one-step frequencies match the exact kernel at n = 1") {
    for (const auto& [phi, gamma] :
         {std::pair{0.7, 0.6}, std::pair{0.6, 0.7}, std::pair{0.55, 0.5}}) {
        const auto pr = validate_params(phi, gamma, 1);
        const auto model = LatentModel{IidTheta{0.35}};
        const auto kernel = oracle::oracle_kernel(model, pr);
        const LatentSampler sampler{};
        const std::int64_t reps = 1000000;
        std::array<std::array<double, 2>, 2> freq{};
        std::array<std::int64_t, 2> from{};
        const RngStream stream(7, 0);
        HyperState x(1);
        for (std::int64_t t = 1; t <= reps; ++t) {
            std::vector<std::uint64_t> zw(1);
            sampler.sample_words(model, 1, stream,
                                 static_cast<std::uint64_t>(t), zw.data());
            const auto y = step(x, HyperState(1, zw), pr, stream,
                                static_cast<std::uint64_t>(t));
            ++freq[x.index()][y.index()];
            ++from[x.index()];
            x = y;
        }
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const double p = kernel.at(a, b);
                const double se = std::sqrt(p * (1 - p) /
                                            static_cast<double>(from[a]));
                CHECK(std::abs(freq[a][b] / from[a] - p) <= 3.5 * se + 1e-9);
            }
        }
    }
}

TEST_CASE("step and the autoregressive form coincide pathwise") {
    const auto pr = validate_params(0.7, 0.6, 130);
    const auto pr2 = validate_params(0.6, 0.7, 130);
    const RngStream stream(11, 2);
    const LatentSampler sampler{};
    const auto model = LatentModel{DeFinettiBeta{2.0, 2.0}};
    HyperState x(130);
    for (std::uint64_t t = 1; t <= 50; ++t) {
        std::vector<std::uint64_t> zw(3);
        sampler.sample_words(model, 130, stream, t, zw.data());
        const HyperState z(130, zw);
        for (const auto* p : {&pr, &pr2}) {
            const auto direct = step(x, z, *p, stream, t);
            const auto ar = step_autoregressive(x, z, *p, stream, t);
            REQUIRE(direct == ar.x);
            // X = A x + B (1-x) reassembles
            for (std::int64_t k = 0; k < 130; ++k) {
                const bool expect = x.bit(k) ? ar.a.bit(k) : ar.b.bit(k);
                REQUIRE(ar.x.bit(k) == expect);
            }
        }
        x = step(x, z, pr, stream, t);
    }
}

TEST_CASE("autoregressive coefficient laws") {
    // z = 1 forces B = 1; phi <= gamma and z = 0 forces B = 0
    const RngStream stream(13, 1);
    const auto z1 = HyperState(64, {~std::uint64_t{0}});
    const auto z0 = HyperState(64);
    const HyperState x(64);
    {
        const auto pr = validate_params(0.6, 0.7, 64);
        for (std::uint64_t t = 0; t < 10; ++t) {
            CHECK(step_autoregressive(x, z1, pr, stream, t).b.hamming() == 64);
            CHECK(step_autoregressive(x, z0, pr, stream, t).b.hamming() == 0);
        }
    }
}

TEST_CASE("Cov(A, B) matches the closed form") {
    // phi <= gamma: Cov(A[k], B[k]) = -(gammab/gamma) Var(Z[k])
    const std::int64_t n = 10000;
    const double theta = 0.3;
    const std::int64_t reps = 100;
    const auto pr = validate_params(0.6, 0.8, n);
    const auto model = LatentModel{IidTheta{theta}};
    const LatentSampler sampler{};
    const HyperState x(n);
    double sa = 0, sb = 0, sab = 0;
    const double cnt = static_cast<double>(n) * reps;
    for (std::int64_t r = 0; r < reps; ++r) {
        const RngStream stream(1000 + static_cast<std::uint64_t>(r), 0);
        std::vector<std::uint64_t> zw(
            static_cast<std::size_t>(HyperState::word_count(n)));
        sampler.sample_words(model, n, stream, 1, zw.data());
        const auto ar =
            step_autoregressive(x, HyperState(n, zw), pr, stream, 1);
        sa += static_cast<double>(ar.a.hamming());
        sb += static_cast<double>(ar.b.hamming());
        std::int64_t both = 0;
        for (std::size_t w = 0; w < ar.a.words().size(); ++w) {
            both += std::popcount(ar.a.words()[w] & ar.b.words()[w]);
        }
        sab += static_cast<double>(both);
    }
    const double cov = sab / cnt - (sa / cnt) * (sb / cnt);
    const double expect = -(0.2 / 0.8) * theta * (1 - theta);
    const double se = 1.0 / std::sqrt(cnt);  // crude bound on the se
    CHECK(std::abs(cov - expect) <= 3.0 * se);
}

TEST_CASE("conditional probabilities iterate the two-state recursion") {
    const auto pr = validate_params(0.7, 0.6, 1);
    const std::vector<HyperState> zpath{HyperState::from_string("1"),
                                        HyperState::from_string("0"),
                                        HyperState::from_string("1")};
    const auto x0 = HyperState::from_string("0");
    // t = 0 returns x0
    CHECK(conditional_bernoulli(x0, {}, pr).p[0] == 0.0);
    // matrix-product oracle from the conditional single-coordinate tables
    auto cond_matrix = [&](int z) {
        const double ratio = pr.alpha() / pr.alpha_bar();
        std::array<std::array<double, 2>, 2> m{};
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                const double base = y ? pr.phi() : pr.phi_bar();
                const double f = (1.0 - y / pr.phi()) * (1.0 - x / pr.gamma());
                m[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
                    z ? base * (1.0 - f) : base * (1.0 + ratio * f);
            }
        }
        return m;
    };
    std::array<double, 2> dist{1.0, 0.0};  // point mass at x0 = 0
    for (const auto& z : zpath) {
        const auto m = cond_matrix(z.bit(0));
        dist = {dist[0] * m[0][0] + dist[1] * m[1][0],
                dist[0] * m[0][1] + dist[1] * m[1][1]};
    }
    const auto cb = conditional_bernoulli(x0, zpath, pr);
    CHECK(cb.p[0] == doctest::Approx(dist[1]).epsilon(1e-12));

    // phi == gamma closed form: p_t = phi - (phi - x0) psi^t prod(1 - z/alpha)
    const auto pq = validate_params(0.7, 0.7, 1);
    const auto cb2 = conditional_bernoulli(x0, zpath, pq);
    double prod = 1.0;
    for (const auto& z : zpath) {
        prod *= 1.0 - (z.bit(0) ? 1.0 : 0.0) / 0.7;
    }
    CHECK(cb2.p[0] == doctest::Approx(0.7 - 0.7 * prod).epsilon(1e-12));
}

TEST_CASE("limit sampler at phi == gamma draws product Bernoulli(phi)") {
    const auto pr = validate_params(0.7, 0.7, 200);
    const auto model = LatentModel{IidTheta{0.4}};
    const RngStream stream(21, 0);
    double mean = 0.0;
    const int reps = 5000;
    for (int r = 0; r < reps; ++r) {
        mean += static_cast<double>(
            sample_limit(pr, model, 1, stream, static_cast<std::uint64_t>(r))
                .hamming());
    }
    mean /= reps * 200.0;
    CHECK(mean == doctest::Approx(0.7).epsilon(0.01));
}

TEST_CASE("limit sampler coordinate mean matches the de Finetti formula") {
    const auto pr = validate_params(0.7, 0.6, 500);
    const auto model = LatentModel{DeFinettiBeta{2.0, 2.0}};
    const double expect = definetti_limit_prob(pr, 0.5);
    const auto L = limit_truncation(pr);
    const RngStream stream(22, 0);
    double mean = 0.0;
    const int reps = 2000;
    for (int r = 0; r < reps; ++r) {
        mean += static_cast<double>(
            sample_limit(pr, model, L, stream, static_cast<std::uint64_t>(r))
                .hamming());
    }
    mean /= reps * 500.0;
    // coordinates are dependent through the shared theta path: conservative se
    CHECK(mean == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("limit sampler requires geometric decay") {
    CHECK_THROWS_AS(limit_truncation(validate_params(0.5, 0.5, 4)),
                    boundary_error);
}

TEST_CASE("ergodicity: the limit draw is one-step invariant") {
    const std::int64_t n = 5;
    const auto pr = validate_params(0.7, 0.6, n);
    const auto model = LatentModel{IidTheta{0.35}};
    const auto kernel = oracle::oracle_kernel(model, pr);
    const auto pi = oracle::oracle_stationary(kernel);
    const auto L = limit_truncation(pr);
    const RngStream stream(23, 0);
    std::vector<double> emp(std::size_t{1} << n, 0.0);
    const int reps = 100000;
    for (int r = 0; r < reps; ++r) {
        emp[sample_limit(pr, model, L, stream, static_cast<std::uint64_t>(r))
                .index()] += 1.0 / reps;
    }
    CHECK(special::total_variation(emp, pi.pmf) <= 0.02);
    std::vector<double> stepped(emp.size(), 0.0);
    for (std::size_t x = 0; x < emp.size(); ++x) {
        for (std::size_t y = 0; y < emp.size(); ++y) {
            stepped[y] += emp[x] * kernel.at(x, y);
        }
    }
    CHECK(special::total_variation(emp, stepped) <= 0.02);
}

TEST_CASE("simulate_path basics") {
    SimConfig cfg{validate_params(0.7, 0.6, 40),
                  LatentModel{DeFinettiBeta{2.0, 2.0}}};
    cfg.steps = 0;
    cfg.seed = 5;
    cfg.initial = InitialState::explicit_(HyperState::from_string(
        std::string(20, '1') + std::string(20, '0')));
    const auto res = simulate_path(cfg);
    CHECK(res.path.steps() == 0);
    CHECK(res.path.at(0).hamming() == 20);

    cfg.steps = 25;
    cfg.log_latent = true;
    const auto a = simulate_path(cfg);
    const auto b = simulate_path(cfg);
    CHECK(a.path.states() == b.path.states());
    CHECK(a.hamming == b.hamming);
    REQUIRE(a.latent_log.size() == 25);
    CHECK(a.latent_log[0].theta.has_value());
}

TEST_CASE("coordinates are conditionally independent given the latent path") {
    // with a deterministic latent law the coordinate trajectories are
    // independent chains: empirical pair correlation vanishes
    const std::int64_t n = 6;
    SimConfig cfg{validate_params(0.7, 0.6, n), delta(n, 0b010101)};
    cfg.steps = 30;
    const int reps = 20000;
    double s0 = 0, s3 = 0, s03 = 0;
    for (int r = 0; r < reps; ++r) {
        cfg.seed = 900;
        const auto res = simulate_replicate(cfg, r);
        const auto& last = res.path.at(30);
        s0 += last.bit(0);
        s3 += last.bit(3);
        s03 += last.bit(0) && last.bit(3);
    }
    const double m0 = s0 / reps, m3 = s3 / reps;
    const double cov = s03 / reps - m0 * m3;
    const double se = std::sqrt(m0 * (1 - m0) * m3 * (1 - m3) / reps);
    CHECK(std::abs(cov) <= 3.5 * se);
}

TEST_CASE("replicate coordinate means follow the marginal mean path") {
    const std::int64_t n = 300;
    const double theta = 0.4;
    const auto pr = validate_params(0.7, 0.6, n);
    SimConfig cfg{pr, LatentModel{IidTheta{theta}}};
    cfg.steps = 10;
    cfg.seed = 31;
    cfg.initial = InitialState::explicit_(HyperState(n));  // all zeros
    const int reps = 300;
    std::vector<double> mean(11, 0.0);
    for (int r = 0; r < reps; ++r) {
        const auto res = simulate_replicate(cfg, r);
        for (std::int64_t t = 0; t <= 10; ++t) {
            mean[static_cast<std::size_t>(t)] +=
                static_cast<double>(res.hamming[static_cast<std::size_t>(t)]) /
                (static_cast<double>(n) * reps);
        }
    }
    const HyperState x0(n);
    for (std::int64_t t = 1; t <= 10; ++t) {
        const auto expect = marginal_mean_path(
            x0, std::vector<double>(static_cast<std::size_t>(n), theta), pr,
            t)[0];
        const double se =
            std::sqrt(expect * (1 - expect) / (static_cast<double>(n) * reps));
        // coordinates are i.i.d. under an iid latent law, so the se applies
        CHECK(std::abs(mean[static_cast<std::size_t>(t)] - expect) <=
              4.0 * se);
    }
}

TEST_CASE("ensemble is invariant to the thread count") {
    SimConfig cfg{validate_params(0.7, 0.6, 101),
                  LatentModel{DeFinettiBeta{2.0, 2.0}}};
    cfg.steps = 20;
    cfg.replicates = 6;
    cfg.seed = 77;
    const auto a = simulate_ensemble(cfg, 1);
    const auto b = simulate_ensemble(cfg, 5);
    REQUIRE(a.size() == b.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        CHECK(a[r].path.states() == b[r].path.states());
    }
}

TEST_CASE("approximate Hamming recursion") {
    const auto pr = validate_params(0.7, 0.6, 1000);
    {
        // Theta = alpha collapses to n phi after one step
        const std::vector<double> theta(5, pr.alpha());
        const auto w = approx_hamming_path(pr, theta, 123.0);
        for (std::size_t t = 1; t < w.size(); ++t) {
            CHECK(w[t] == doctest::Approx(700.0).epsilon(1e-12));
        }
    }
    {
        // phi == gamma: fixed point is n phi
        const auto pq = validate_params(0.7, 0.7, 1000);
        const double theta = 0.4;
        const std::vector<double> path(200, theta);
        const auto w = approx_hamming_path(pq, path, 0.0);
        CHECK(w.back() == doctest::Approx(700.0).epsilon(1e-9));
        // and it is the fixed point of the affine map
        const double q01 = 1 - (1 - theta) * pq.phi_bar() / pq.alpha_bar();
        const double r = pq.psi() * (1 - theta / pq.alpha());
        CHECK(1000.0 * q01 / (1 - r) == doctest::Approx(700.0).epsilon(1e-9));
    }
    {
        // tracks the simulated Hamming path within 2% of n at n = 10^4
        const std::int64_t n = 10000;
        const double theta = 0.45;
        const auto pq = validate_params(0.7, 0.6, n);
        SimConfig cfg{pq, LatentModel{IidTheta{theta}}};
        cfg.steps = 100;
        cfg.seed = 4242;
        cfg.keep_states = false;
        const auto res = simulate_replicate(cfg, 0);
        const std::vector<double> path(100, theta);
        const auto w =
            approx_hamming_path(pq, path,
                                static_cast<double>(res.hamming[0]));
        for (std::size_t t = 20; t <= 100; ++t) {
            CHECK(std::abs(w[t] - static_cast<double>(res.hamming[t])) /
                      static_cast<double>(n) <=
                  0.02);
        }
    }
}
