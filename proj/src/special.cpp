#include "hyperwalk/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hyperwalk::special {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;

// series expansion of P(a,x), good for x < a+1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a,x), good for x >= a+1
double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Lentz continued fraction for the incomplete beta
double betacf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_p domain");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_q domain");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double beta_inc(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0 || x < 0.0 || x > 1.0) {
        throw std::domain_error("beta_inc domain");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                               std::lgamma(b) + a * std::log(x) +
                               b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return bt * betacf(a, b, x) / a;
    }
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z, double sigma2) {
    return std::exp(-0.5 * z * z / sigma2) /
           std::sqrt(2.0 * std::numbers::pi * sigma2);
}

double chi2_sf(double x, double df) { return gamma_q(0.5 * df, 0.5 * x); }

double chi2_quantile(double p, double df) {
    if (p <= 0.0 || p >= 1.0) throw std::domain_error("chi2_quantile domain");
    double lo = 0.0, hi = df + 10.0;
    while (chi2_sf(hi, df) > 1.0 - p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_sf(mid, df) > 1.0 - p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double log_binomial_coef(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

double binomial_pmf(std::int64_t n, double p, std::int64_t k) {
    if (k < 0 || k > n) return 0.0;
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    return std::exp(log_binomial_coef(n, k) + k * std::log(p) +
                    (n - k) * std::log1p(-p));
}

double poisson_pmf(double lambda, std::int64_t k) {
    if (k < 0) return 0.0;
    return std::exp(-lambda + k * std::log(lambda) -
                    std::lgamma(static_cast<double>(k) + 1.0));
}

double beta_pdf(double a, double b, double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
}

double beta_cdf(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return beta_inc(a, b, x);
}

Quadrature gauss_legendre(int m) {
    Quadrature q;
    q.nodes.resize(static_cast<std::size_t>(m));
    q.weights.resize(static_cast<std::size_t>(m));
    // Newton iteration from Chebyshev initial guesses
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[static_cast<std::size_t>(i)] = -x;
        q.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        q.weights[static_cast<std::size_t>(i)] = w;
        q.weights[static_cast<std::size_t>(m - 1 - i)] = w;
    }
    return q;
}

Quadrature gauss_hermite(int m) {
    Quadrature q;
    q.nodes.resize(static_cast<std::size_t>(m));
    q.weights.resize(static_cast<std::size_t>(m));
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    double x = 0.0;
    for (int i = 0; i < (m + 1) / 2; ++i) {
        if (i == 0) {
            x = std::sqrt(2.0 * m + 1.0) -
                1.85575 * std::pow(2.0 * m + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            x -= 1.14 * std::pow(static_cast<double>(m), 0.426) / x;
        } else if (i == 2) {
            x = 1.86 * x - 0.86 * q.nodes[0];
        } else if (i == 3) {
            x = 1.91 * x - 0.91 * q.nodes[1];
        } else {
            x = 2.0 * x - q.nodes[static_cast<std::size_t>(i - 2)];
        }
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p0 = pim4, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = x * std::sqrt(2.0 / (j + 1.0)) * p1 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p2;
            }
            pp = std::sqrt(2.0 * m) * p1;
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-14) break;
        }
        q.nodes[static_cast<std::size_t>(i)] = x;
        q.nodes[static_cast<std::size_t>(m - 1 - i)] = -x;
        q.weights[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
        q.weights[static_cast<std::size_t>(m - 1 - i)] = 2.0 / (pp * pp);
    }
    // nodes come out descending in the first half; sort ascending
    std::vector<std::pair<double, double>> nw;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        nw.emplace_back(q.nodes[i], q.weights[i]);
    }
    std::sort(nw.begin(), nw.end());
    for (std::size_t i = 0; i < nw.size(); ++i) {
        q.nodes[i] = nw[i].first;
        q.weights[i] = nw[i].second;
    }
    return q;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    const std::size_t m = std::max(p.size(), q.size());
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double a = i < p.size() ? p[i] : 0.0;
        const double b = i < q.size() ? q[i] : 0.0;
        s += std::abs(a - b);
    }
    return 0.5 * s;
}

double ks_distance(std::vector<double> sample,
                   double (*cdf)(double, double, double), double arg1,
                   double arg2) {
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(arg1, arg2, sample[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

Chi2Result chi2_gof(std::span<const double> observed,
                    std::span<const double> expected, double min_expected) {
    if (observed.size() != expected.size()) {
        throw std::invalid_argument("chi2_gof: size mismatch");
    }
    // pool small-expectation bins inward from both tails
    std::vector<double> obs(observed.begin(), observed.end());
    std::vector<double> exp(expected.begin(), expected.end());
    std::vector<std::pair<double, double>> bins;
    double co = 0.0, ce = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        co += obs[i];
        ce += exp[i];
        if (ce >= min_expected) {
            bins.emplace_back(co, ce);
            co = ce = 0.0;
        }
    }
    if (ce > 0.0 || co > 0.0) {
        if (!bins.empty()) {
            bins.back().first += co;
            bins.back().second += ce;
        } else {
            bins.emplace_back(co, ce);
        }
    }
    double stat = 0.0;
    for (const auto& [o, e] : bins) {
        if (e > 0.0) stat += (o - e) * (o - e) / e;
    }
    const auto dof = static_cast<std::int64_t>(bins.size()) - 1;
    Chi2Result r{stat, 1.0, dof};
    if (dof >= 1) r.p_value = chi2_sf(stat, static_cast<double>(dof));
    return r;
}

}  // namespace hyperwalk::special
