#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hyperwalk/asymptotics.hpp"
#include "hyperwalk/kernel.hpp"
#include "hyperwalk/oracle.hpp"
#include "hyperwalk/special.hpp"

using namespace hyperwalk;

TEST_CASE("stationary moments in the decoupled cases") {
    const auto pr = validate_params(0.7, 0.6, 4);
    {
        // m_Z = alpha with no latent covariance: X is product Bernoulli(phi)
        const auto m =
            stationary_moments(LatentModel{IidTheta{pr.alpha()}}, pr);
        for (int k = 0; k < 4; ++k) {
            CHECK(m.m_x[static_cast<std::size_t>(k)] ==
                  doctest::Approx(0.7).epsilon(1e-13));
            for (int l = 0; l < 4; ++l) {
                if (k != l) {
                    CHECK(std::abs(
                              m.c_x[static_cast<std::size_t>(k)]
                                   [static_cast<std::size_t>(l)]) <= 1e-14);
                }
            }
            CHECK(m.c_x[static_cast<std::size_t>(k)]
                       [static_cast<std::size_t>(k)] ==
                  doctest::Approx(0.21).epsilon(1e-12));
        }
    }
}

TEST_CASE("stationary moments match the eigenvector oracle") {
    for (const std::int64_t n : {2, 4, 6}) {
        for (const auto& [phi, gamma] :
             {std::pair{0.7, 0.6}, std::pair{0.6, 0.7}, std::pair{0.8, 0.3}}) {
            const auto pr = validate_params(phi, gamma, n);
            for (const auto& m :
                 {LatentModel{IidTheta{0.35}},
                  LatentModel{DeFinettiBeta{2.0, 2.0}},
                  LatentModel{ExtremePoint{n / 2}}}) {
                const auto mom = stationary_moments(m, pr);
                const auto pi =
                    oracle::oracle_stationary(oracle::oracle_kernel(m, pr));
                std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
                for (std::size_t s = 0; s < pi.pmf.size(); ++s) {
                    for (std::int64_t k = 0; k < n; ++k) {
                        if ((s >> k) & 1u) {
                            mean[static_cast<std::size_t>(k)] += pi.pmf[s];
                        }
                    }
                }
                for (std::int64_t k = 0; k < n; ++k) {
                    REQUIRE(std::abs(mean[static_cast<std::size_t>(k)] -
                                     mom.m_x[static_cast<std::size_t>(k)]) <=
                            1e-8);
                    for (std::int64_t l = 0; l < n; ++l) {
                        double c = 0.0;
                        for (std::size_t s = 0; s < pi.pmf.size(); ++s) {
                            c += pi.pmf[s] *
                                 (((s >> k) & 1u) -
                                  mean[static_cast<std::size_t>(k)]) *
                                 (((s >> l) & 1u) -
                                  mean[static_cast<std::size_t>(l)]);
                        }
                        REQUIRE(std::abs(
                                    c - mom.c_x[static_cast<std::size_t>(k)]
                                               [static_cast<std::size_t>(l)]) <=
                                1e-8);
                    }
                }
            }
        }
    }
}

TEST_CASE("marginal mean path endpoints") {
    const auto pr = validate_params(0.7, 0.6, 2);
    const auto x0 = HyperState::from_string("10");
    const std::vector<double> theta{0.4, 0.4};
    const auto at0 = marginal_mean_path(x0, theta, pr, 0);
    CHECK(at0[0] == 1.0);
    CHECK(at0[1] == 0.0);
    // long-run limit equals the stationary mean and the de Finetti value
    const auto at100 = marginal_mean_path(x0, theta, pr, 100);
    const auto mom = stationary_moments(LatentModel{IidTheta{0.4}}, pr);
    CHECK(at100[0] == doctest::Approx(mom.m_x[0]).epsilon(1e-12));
    CHECK(at100[1] == doctest::Approx(definetti_limit_prob(pr, 0.4)).epsilon(1e-12));
    // one-step recursion agreement: m_1 from the coordinate chain matrix
    const auto chain =
        coordinate_chain_matrix(LatentModel{IidTheta{0.4}}, 0, pr);
    const auto at1 = marginal_mean_path(x0, theta, pr, 1);
    CHECK(at1[0] == doctest::Approx(chain.matrix[1][1]).epsilon(1e-12));
    CHECK(at1[1] == doctest::Approx(chain.matrix[0][1]).epsilon(1e-12));
}

TEST_CASE("de Finetti limit probability") {
    const auto pr = validate_params(0.7, 0.6, 4);
    CHECK(definetti_limit_prob(pr, pr.alpha()) == doctest::Approx(0.7));
    const auto pq = validate_params(0.65, 0.65, 4);
    CHECK(definetti_limit_prob(pq, 0.3) == doctest::Approx(0.65));
    CHECK_THROWS_AS(
        definetti_limit_prob(validate_params(0.5, 0.5, 2), 0.4),
        boundary_error);
}

TEST_CASE("count distribution parameters and the exact identity") {
    {
        const auto pr = validate_params(0.6, 0.7, 10);
        const auto c = count_distribution(4, 6, 0.3, pr);
        CHECK(c.q01 == doctest::Approx(0.3).epsilon(1e-14));  // phi <= gamma
    }
    for (const auto& [phi, gamma] :
         {std::pair{0.7, 0.6}, std::pair{0.6, 0.7}, std::pair{0.55, 0.5}}) {
        const auto pr = validate_params(phi, gamma, 10);
        for (double theta = 0.05; theta < 1.0; theta += 0.1) {
            const auto c = count_distribution(4, 6, theta, pr);
            CHECK(c.q01 >= 0.0);
            CHECK(c.q01 <= 1.0);
            CHECK(c.q11 >= 0.0);
            CHECK(c.q11 <= 1.0);
            // q01 + gamma (q11 - q01) = phi, exactly up to roundoff
            CHECK(c.q01 + gamma * (c.q11 - c.q01) ==
                  doctest::Approx(phi).epsilon(1e-14));
        }
        // theta = alpha makes both parameters phi
        const auto c = count_distribution(4, 6, pr.alpha(), pr);
        CHECK(c.q01 == doctest::Approx(phi).epsilon(1e-13));
        CHECK(c.q11 == doctest::Approx(phi).epsilon(1e-13));
    }
}

TEST_CASE("count pgf normalization und Binomial structure") {
    for (const auto& [phi, gamma] :
         {std::pair{0.7, 0.6}, std::pair{0.6, 0.7}}) {
        const auto pr = validate_params(phi, gamma, 10);
        const double theta = 0.35;
        CHECK(count_pgf(1, 1, 1, 4, 6, theta, pr) ==
              doctest::Approx(1.0).epsilon(1e-13));
        const auto cd = count_distribution(4, 6, theta, pr);
        for (const auto& [s01, s11] :
             {std::pair{0.3, 0.9}, std::pair{0.8, 0.2}}) {
            const double lhs = count_pgf(s01, s11, 1.0, 4, 6, theta, pr);
            const double rhs =
                std::pow(1 - cd.q01 + cd.q01 * s01, 4.0) *
                std::pow(1 - cd.q11 + cd.q11 * s11, 6.0);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("pgf mixed derivatives reproduce the covariance displays") {
    const auto pr = validate_params(0.7, 0.6, 10);
    const double theta = 0.4;
    const std::int64_t n0 = 4, n1 = 6;
    const double h = 1e-5;
    auto F = [&](double s01, double s11, double hh) {
        return count_pgf(s01, s11, hh, n0, n1, theta, pr);
    };
    // E[N01 zeta] via the central mixed difference of F at (1,1,1)
    const double e_n01_zeta =
        (F(1 + h, 1, 1 + h) - F(1 + h, 1, 1 - h) - F(1 - h, 1, 1 + h) +
         F(1 - h, 1, 1 - h)) /
        (4 * h * h);
    const double e_n01 = (F(1 + h, 1, 1) - F(1 - h, 1, 1)) / (2 * h);
    const double e_zeta = (F(1, 1, 1 + h) - F(1, 1, 1 - h)) / (2 * h);
    const auto [cov01, cov11] = count_covariances(n0, n1, theta, pr);
    CHECK(e_n01_zeta - e_n01 * e_zeta ==
          doctest::Approx(cov01).epsilon(1e-4));
    const double e_n11_zeta =
        (F(1, 1 + h, 1 + h) - F(1, 1 + h, 1 - h) - F(1, 1 - h, 1 + h) +
         F(1, 1 - h, 1 - h)) /
        (4 * h * h);
    const double e_n11 = (F(1, 1 + h, 1) - F(1, 1 - h, 1)) / (2 * h);
    CHECK(e_n11_zeta - e_n11 * e_zeta ==
          doctest::Approx(cov11).epsilon(1e-4));
}

TEST_CASE("normal limit parameters and the dual variance route") {
    const auto pr = validate_params(0.7, 0.6, 100);
    {
        const auto lim = normal_limit_params(pr.alpha(), 0.8, pr);
        CHECK(lim.mu == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(lim.sigma2 == doctest::Approx(0.21).epsilon(1e-13));
    }
    for (const auto& [phi, gamma] :
         {std::pair{0.7, 0.6}, std::pair{0.6, 0.7}, std::pair{0.55, 0.5}}) {
        const auto pq = validate_params(phi, gamma, 100);
        for (double theta = 0.1; theta < 1.0; theta += 0.2) {
            const auto lim = normal_limit_params(theta, 1.0, pq);
            // independent route: gb q01 (1-q01) + g q11 (1-q11)
            const auto cd = count_distribution(1, 1, theta, pq);
            const double alt = (1 - gamma) * cd.q01 * (1 - cd.q01) +
                               gamma * cd.q11 * (1 - cd.q11);
            CHECK(lim.sigma2 == doctest::Approx(alt).epsilon(1e-12));
            // and the mean factor equals q11 - q01
            CHECK(lim.mu == doctest::Approx(cd.q11 - cd.q01).epsilon(1e-12));
        }
    }
}

TEST_CASE("AR(1) limit forms") {
    CHECK(ar1_stationary(0.6, 0.0, 0.6).first == doctest::Approx(0.0));
    CHECK(ar1_stationary(0.6, 0.0, 0.6).second == doctest::Approx(0.24));
    const auto [mean, var] = ar1_stationary(0.5, 1.0, 0.6);
    CHECK(mean == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(var == doctest::Approx(0.24).epsilon(1e-14));
    // fixed point: starting at the stationary mean stays there
    for (std::int64_t t : {0, 1, 5, 50}) {
        CHECK(ar1_mean_path(mean, 0.5, 1.0, 0.6, t) ==
              doctest::Approx(mean).epsilon(1e-13));
    }
    // closed form equals the one-step recursion
    double m = -0.7;
    for (std::int64_t t = 1; t <= 50; ++t) {
        m = (1.0 - 0.5 / 0.6) * (1.0 + m);
        CHECK(ar1_mean_path(-0.7, 0.5, 1.0, 0.6, t) ==
              doctest::Approx(m).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ar1_stationary(0.0, 1.0, 0.6), theta_boundary_error);
    // conditional moments
    const auto c = ar1_conditional(0.5, 0.3, 1.0, 0.6);
    CHECK(c.mu == doctest::Approx((1.0 - 0.5 / 0.6) * 1.3).epsilon(1e-14));
    CHECK(c.sigma2 ==
          doctest::Approx(0.24 * (1.0 - std::pow(1.0 - 0.5 / 0.6, 2)))
              .epsilon(1e-13));
}

TEST_CASE("asymptotic parameterization stays distinct from finite n") {
    const AsymptoticParams ap{0.6, 1.0};
    const auto pr = ap.at_n(10000);
    CHECK(pr.phi() == doctest::Approx(0.605).epsilon(1e-14));
    CHECK(pr.gamma() == doctest::Approx(0.595).epsilon(1e-14));
    CHECK(pr.n() == 10000);
}

TEST_CASE("Hermite series density: deterministic factor") {
    const double phi = 0.6, c = 0.3, v_prev = 0.7;
    const double sigma2 = phi * (1 - phi);
    {
        // Phi = 0: the density is N(0, phi phib) regardless of v_prev
        std::vector<double> mom(41, 0.0);
        mom[0] = 1.0;
        for (double v = -1.5; v <= 1.5; v += 0.25) {
            CHECK(hermite_transition_density(v, v_prev, c, phi, mom, 40) ==
                  doctest::Approx(special::normal_pdf(v, sigma2))
                      .epsilon(1e-12));
        }
    }
    {
        // constant Phi: matches the conditional normal (Mehler resummation)
        const double phi0 = 1.0 / 6.0;
        std::vector<double> mom(41);
        double p = 1.0;
        for (auto& v : mom) {
            v = p;
            p *= phi0;
        }
        const double cm = phi0 * (v_prev + c);
        const double cv = sigma2 * (1 - phi0 * phi0);
        for (double v = -1.5; v <= 1.5; v += 0.1) {
            CHECK(hermite_transition_density(v, v_prev, c, phi, mom, 40) ==
                  doctest::Approx(special::normal_pdf(v - cm, cv))
                      .epsilon(1e-6));
        }
    }
}

TEST_CASE("Beta-mixed moments by quadrature agree with Monte Carlo") {
    const double phi = 0.6;
    const auto quad = phi_moments_beta(2.0, 3.0, phi, 12);
    const auto mc = phi_moments_mc(LatentModel{DeFinettiBeta{2.0, 3.0}}, phi,
                                   12, 400000, 99);
    CHECK(quad[0] == doctest::Approx(1.0).epsilon(1e-12));
    // exact first moment: 1 - E[theta]/phi = 1 - 0.4/0.6
    CHECK(quad[1] == doctest::Approx(1.0 - 0.4 / phi).epsilon(1e-10));
    for (std::size_t j = 1; j <= 12; ++j) {
        CHECK(quad[j] == doctest::Approx(mc[j]).epsilon(0.02));
    }
}

TEST_CASE("extreme point limits") {
    {
        const auto pr = validate_params(0.8, 0.9, 2000);
        const auto lim = extreme_point_limits(3, 2000, pr);
        CHECK_FALSE(lim.complement);
        CHECK(lim.poisson_rate == doctest::Approx(27.0).epsilon(1e-12));
        CHECK(2000.0 * lim.p == doctest::Approx(26.6).epsilon(0.01));
    }
    {
        // M = 0 with phi < gamma: ones never created
        const auto pr = validate_params(0.6, 0.7, 100);
        const auto lim = extreme_point_limits(0, 100, pr);
        CHECK(lim.p == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(lim.poisson_rate == doctest::Approx(0.0));
    }
    {
        // phi > gamma: the complement count is Poisson
        const auto pr = validate_params(0.9, 0.8, 1000);
        const auto lim = extreme_point_limits(5, 1000, pr);
        CHECK(lim.complement);
        CHECK(lim.poisson_rate ==
              doctest::Approx((0.1 / 0.8) * 5.0 / (1.0 - 0.1 / 0.2))
                  .epsilon(1e-12));
    }
}
