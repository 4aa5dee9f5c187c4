#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hyperwalk/orthopoly.hpp"
#include "hyperwalk/special.hpp"

using namespace hyperwalk;

TEST_CASE("Krawtchouk normalization rows and columns") {
    const auto t = krawtchouk_table(8, 0.35);
    for (std::int64_t k = 0; k <= 8; ++k) CHECK(t.value(k, 0) == doctest::Approx(1.0));
    for (std::int64_t z = 0; z <= 8; ++z) CHECK(t.value(0, z) == 1.0);
    // Q_1(zeta) = 1 - zeta/(n alpha)
    for (std::int64_t z = 0; z <= 8; ++z) {
        CHECK(t.value(1, z) ==
              doctest::Approx(1.0 - static_cast<double>(z) / (8 * 0.35))
                  .epsilon(1e-14));
    }
}

TEST_CASE("orthogonality against the Binomial weight") {
    for (const std::int64_t n : {4, 16, 64}) {
        for (const double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const auto t = krawtchouk_table(n, alpha);
            const std::int64_t kmax = std::min<std::int64_t>(n, 12);
            for (std::int64_t j = 0; j <= kmax; ++j) {
                for (std::int64_t k = j; k <= kmax; ++k) {
                    double s = 0.0, mass = 0.0;
                    for (std::int64_t z = 0; z <= n; ++z) {
                        const double term = special::binomial_pmf(n, alpha, z) *
                                            t.value(j, z) * t.value(k, z);
                        s += term;
                        mass += std::abs(term);
                    }
                    if (j == k) {
                        const double expect =
                            1.0 / (std::exp(special::log_binomial_coef(n, k)) *
                                   std::pow(alpha / (1 - alpha),
                                            static_cast<double>(k)));
                        CHECK(s == doctest::Approx(expect).epsilon(1e-10));
                    } else {
                        // off-diagonal sums cancel exactly; measure the
                        // residual against the mass being cancelled
                        CHECK(std::abs(s) <= 1e-10 * std::max(1.0, mass));
                    }
                }
            }
        }
    }
}

TEST_CASE("on-demand evaluation matches the table") {
    const auto t = krawtchouk_table(20, 0.6);
    for (std::int64_t k = 0; k <= 20; k += 3) {
        for (std::int64_t z = 0; z <= 20; z += 4) {
            CHECK(krawtchouk_value(k, z, 20, 0.6) ==
                  doctest::Approx(t.value(k, z)).epsilon(1e-13));
        }
    }
}

TEST_CASE("elementary symmetric route equals the polynomial") {
    // hand examples
    {
        std::vector<int> xi{0, 0, 0};
        CHECK(krawtchouk_symmetric_check(xi, 2, 0.4) == doctest::Approx(1.0));
    }
    {
        std::vector<int> xi{1, 0};
        CHECK(krawtchouk_symmetric_check(xi, 1, 0.5) ==
              doctest::Approx(0.0).epsilon(1e-15));
        CHECK(krawtchouk_value(1, 1, 2, 0.5) ==
              doctest::Approx(0.0).epsilon(1e-15));
    }
    {
        std::vector<int> xi{1, 1};
        CHECK(krawtchouk_symmetric_check(xi, 2, 0.5) == doctest::Approx(1.0));
        CHECK(krawtchouk_value(2, 2, 2, 0.5) == doctest::Approx(1.0));
    }
    // random binary vectors: the symmetric function must equal Q_k(sum xi)
    std::uint64_t x = 99;
    for (int rep = 0; rep < 30; ++rep) {
        x = x * 6364136223846793005ull + 1442695040888963407ull;
        const std::int64_t n = 3 + static_cast<std::int64_t>(x % 10);
        std::vector<int> xi(static_cast<std::size_t>(n));
        std::int64_t sum = 0;
        for (auto& b : xi) {
            x = x * 6364136223846793005ull + 1442695040888963407ull;
            b = static_cast<int>(x >> 63);
            sum += b;
        }
        const double alpha = 0.25 + 0.5 * ((rep % 5) / 4.0);
        for (std::int64_t k = 0; k <= n; ++k) {
            CHECK(krawtchouk_symmetric_check(xi, k, alpha) ==
                  doctest::Approx(krawtchouk_value(k, sum, n, alpha))
                      .epsilon(1e-11));
        }
    }
}

namespace {
// test-only oracle: the recurrence carried out in exact rational arithmetic
std::vector<Rational> kraw_column_exact(std::int64_t zeta, std::int64_t n,
                                        const Rational& alpha) {
    const Rational b = (Rational(1) - alpha) / alpha;
    std::vector<Rational> q(static_cast<std::size_t>(n + 1));
    q[0] = 1;
    if (n >= 1) {
        q[1] = Rational(1) - Rational(zeta) / (Rational(n) * alpha);
    }
    for (std::int64_t k = 1; k < n; ++k) {
        q[static_cast<std::size_t>(k + 1)] =
            ((Rational(n) - Rational(zeta) * (Rational(1) + b) -
              (Rational(1) - b) * Rational(k)) *
                 q[static_cast<std::size_t>(k)] -
             b * Rational(k) * q[static_cast<std::size_t>(k - 1)]) /
            Rational(n - k);
    }
    return q;
}
}  // namespace

TEST_CASE("generating function and recurrence agree exactly in rationals") {
    const Rational alpha(3, 10);
    for (const std::int64_t n : {5, 12, 20}) {
        for (std::int64_t zeta = 0; zeta <= n; zeta += 2) {
            const auto row = krawtchouk_row_exact(n, zeta, alpha);
            const auto col = kraw_column_exact(zeta, n, alpha);
            for (std::int64_t k = 0; k <= n; ++k) {
                const Rational binom(binomial_big(static_cast<long>(n),
                                                  static_cast<long>(k)));
                REQUIRE(row[static_cast<std::size_t>(k)] ==
                        binom * col[static_cast<std::size_t>(k)]);
            }
        }
    }
}

TEST_CASE("Hermite base cases and scaling identity") {
    CHECK(hermite_eval(0, 1.7, 2.0) == 1.0);
    CHECK(hermite_eval(1, 1.7, 2.0) == 1.7);
    CHECK(hermite_eval(2, 1.7, 2.0) == doctest::Approx(1.7 * 1.7 - 2.0));
    for (std::int64_t k = 0; k <= 20; ++k) {
        for (double w = -3.0; w <= 3.0; w += 0.75) {
            const double sigma2 = 1.7;
            const double s = std::sqrt(sigma2);
            const double lhs = hermite_eval(k, w, sigma2);
            const double rhs =
                std::pow(s, static_cast<double>(k)) * hermite_eval(k, w / s, 1.0);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("Hermite transform identity under the Gaussian") {
    // E[e^{tW} H_j(W; s2)] = e^{s2 t^2/2} (t s2)^j for W ~ N(0, s2); checked
    // by Gauss-Hermite quadrature (expand the generating function to see it;
    // j = 1 is E[W e^{tW}] = s2 t e^{s2 t^2/2})
    const auto quad = special::gauss_hermite(80);
    const double sigma2 = 0.21;
    const double s = std::sqrt(sigma2);
    const double vartheta = 0.8;
    for (std::int64_t j = 0; j <= 6; ++j) {
        double integral = 0.0;
        for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
            // W = sqrt(2) s x with Gauss-Hermite weight e^{-x^2}
            const double w = std::sqrt(2.0) * s * quad.nodes[i];
            integral += quad.weights[i] * std::exp(vartheta * w) *
                        hermite_eval(j, w, sigma2);
        }
        integral /= std::sqrt(std::acos(-1.0));
        const double expect =
            std::exp(0.5 * sigma2 * vartheta * vartheta) *
            std::pow(vartheta * sigma2, static_cast<double>(j));
        CHECK(integral == doctest::Approx(expect).epsilon(1e-8));
    }
}
