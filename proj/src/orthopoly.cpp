#include "hyperwalk/orthopoly.hpp"

#include <cmath>

namespace hyperwalk {

namespace {
void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw alpha_degenerate_error(
            "Krawtchouk weight parameter must lie strictly inside (0,1)");
    }
}
}  // namespace

KrawtchoukTable::KrawtchoukTable(std::int64_t n, double alpha)
    : n_(n), alpha_(alpha) {
    check_alpha(alpha);
    if (n < 0) throw error("table size must be nonnegative");
    const double b = (1.0 - alpha) / alpha;
    values_.assign(static_cast<std::size_t>((n + 1) * (n + 1)), 0.0);
    auto at = [&](std::int64_t k, std::int64_t z) -> double& {
        return values_[static_cast<std::size_t>(k * (n_ + 1) + z)];
    };
    for (std::int64_t z = 0; z <= n; ++z) at(0, z) = 1.0;
    if (n >= 1) {
        for (std::int64_t z = 0; z <= n; ++z) {
            at(1, z) = 1.0 - static_cast<double>(z) /
                                 (static_cast<double>(n) * alpha);
        }
    }
    for (std::int64_t k = 1; k < n; ++k) {
        for (std::int64_t z = 0; z <= n; ++z) {
            at(k + 1, z) =
                ((static_cast<double>(n) - z * (1.0 + b) - (1.0 - b) * k) *
                     at(k, z) -
                 b * static_cast<double>(k) * at(k - 1, z)) /
                static_cast<double>(n - k);
        }
    }
}

KrawtchoukTable krawtchouk_table(std::int64_t n, double alpha) {
    return KrawtchoukTable(n, alpha);
}

std::vector<double> krawtchouk_column(std::int64_t zeta, std::int64_t n,
                                      std::int64_t kmax, double alpha) {
    check_alpha(alpha);
    const double b = (1.0 - alpha) / alpha;
    std::vector<double> q(static_cast<std::size_t>(kmax + 1), 0.0);
    q[0] = 1.0;
    if (kmax >= 1) {
        q[1] = 1.0 - static_cast<double>(zeta) /
                         (static_cast<double>(n) * alpha);
    }
    for (std::int64_t k = 1; k < kmax; ++k) {
        q[static_cast<std::size_t>(k + 1)] =
            ((static_cast<double>(n) - zeta * (1.0 + b) - (1.0 - b) * k) *
                 q[static_cast<std::size_t>(k)] -
             b * static_cast<double>(k) * q[static_cast<std::size_t>(k - 1)]) /
            static_cast<double>(n - k);
    }
    return q;
}

double krawtchouk_value(std::int64_t k, std::int64_t zeta, std::int64_t n,
                        double alpha) {
    if (k == 0) return 1.0;
    return krawtchouk_column(zeta, n, k, alpha)[static_cast<std::size_t>(k)];
}

double krawtchouk_symmetric_check(std::span<const int> xi, std::int64_t k,
                                  double alpha) {
    const auto n = static_cast<std::int64_t>(xi.size());
    if (k > n) throw error("subset size exceeds vector length");
    // elementary symmetric polynomial e_k of (1 - xi_i/alpha) by the usual DP
    std::vector<double> e(static_cast<std::size_t>(k + 1), 0.0);
    e[0] = 1.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double v = 1.0 - static_cast<double>(xi[static_cast<std::size_t>(i)]) / alpha;
        for (std::int64_t j = std::min(k, i + 1); j >= 1; --j) {
            e[static_cast<std::size_t>(j)] += v * e[static_cast<std::size_t>(j - 1)];
        }
    }
    double binom = 1.0;
    for (std::int64_t i = 0; i < k; ++i) {
        binom *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    return e[static_cast<std::size_t>(k)] / binom;
}

std::vector<Rational> krawtchouk_row_exact(std::int64_t n, std::int64_t zeta,
                                           const Rational& alpha) {
    const Rational b = (Rational(1) - alpha) / alpha;
    // (1 - b s)^zeta * (1 + s)^(n - zeta) by convolution
    std::vector<Rational> poly{Rational(1)};
    auto mul_linear = [&](const Rational& c) {
        std::vector<Rational> out(poly.size() + 1);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            out[i] += poly[i];
            out[i + 1] += poly[i] * c;
        }
        poly = std::move(out);
    };
    for (std::int64_t i = 0; i < zeta; ++i) mul_linear(-b);
    for (std::int64_t i = 0; i < n - zeta; ++i) mul_linear(Rational(1));
    return poly;  // coefficient k equals C(n,k) Q_k(zeta)
}

double hermite_eval(std::int64_t k, double w, double sigma2) {
    if (k < 0) throw error("Hermite order must be nonnegative");
    if (!(sigma2 > 0.0)) throw error("sigma2 must be positive");
    double h0 = 1.0;
    if (k == 0) return h0;
    double h1 = w;
    for (std::int64_t j = 1; j < k; ++j) {
        const double h2 = w * h1 - sigma2 * static_cast<double>(j) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

std::vector<double> hermite_all(std::int64_t kmax, double w, double sigma2) {
    std::vector<double> h(static_cast<std::size_t>(kmax + 1));
    h[0] = 1.0;
    if (kmax >= 1) h[1] = w;
    for (std::int64_t j = 1; j < kmax; ++j) {
        h[static_cast<std::size_t>(j + 1)] =
            w * h[static_cast<std::size_t>(j)] -
            sigma2 * static_cast<double>(j) * h[static_cast<std::size_t>(j - 1)];
    }
    return h;
}

}  // namespace hyperwalk
