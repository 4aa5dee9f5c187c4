#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hyperwalk::special {

// Regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a,b).
double beta_inc(double a, double b, double x);

double normal_cdf(double z);
double normal_pdf(double z, double sigma2);

// chi-square survival function and upper quantile (bisected on the sf)
double chi2_sf(double x, double df);
double chi2_quantile(double p, double df);

double log_binomial_coef(std::int64_t n, std::int64_t k);
double binomial_pmf(std::int64_t n, double p, std::int64_t k);
double poisson_pmf(double lambda, std::int64_t k);
double beta_pdf(double a, double b, double x);
double beta_cdf(double a, double b, double x);

// Gauss-Legendre rule on [-1, 1].
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature gauss_legendre(int m);
// Gauss-Hermite rule for weight exp(-w^2) on (-inf, inf).
Quadrature gauss_hermite(int m);

// Total variation distance (1/2) sum |p - q| over a common support.
double total_variation(std::span<const double> p, std::span<const double> q);

// Kolmogorov-Smirnov distance between a sample (sorted internally) and a cdf.
double ks_distance(std::vector<double> sample, double (*cdf)(double, double, double),
                   double arg1, double arg2);

// Chi-square goodness-of-fit p-value for observed counts against expected
// counts; bins with expected mass below min_expected are pooled from both
// tails toward the center. Returns {statistic, p_value, dof}.
struct Chi2Result {
    double statistic;
    double p_value;
    std::int64_t dof;
};
Chi2Result chi2_gof(std::span<const double> observed,
                    std::span<const double> expected,
                    double min_expected = 5.0);

}  // namespace hyperwalk::special
