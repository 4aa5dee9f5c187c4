#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hyperwalk/errors.hpp"
#include "hyperwalk/rational.hpp"

namespace hyperwalk {

// Krawtchouk polynomials Q_k(zeta; n, alpha), orthogonal on Binomial(n,
// alpha), normalized so Q_k(0) = 1 and
//   E[Q_j Q_k] = delta_jk / ( C(n,k) (alpha/alpha_bar)^k ).
// Values are produced by the three-term recurrence in k,
//   (n-k) Q_{k+1} = (n - zeta(1+b) - (1-b)k) Q_k - b k Q_{k-1},  b = ab/a,
// which follows from the generating function
//   sum_k C(n,k) Q_k(zeta) s^k = (1 - (ab/a) s)^zeta (1+s)^(n-zeta).
class KrawtchoukTable {
  public:
    KrawtchoukTable(std::int64_t n, double alpha);

    std::int64_t n() const { return n_; }
    double alpha() const { return alpha_; }
    double value(std::int64_t k, std::int64_t zeta) const {
        return values_[static_cast<std::size_t>(k * (n_ + 1) + zeta)];
    }
    // row k over all zeta
    std::span<const double> row(std::int64_t k) const {
        return {values_.data() + k * (n_ + 1),
                static_cast<std::size_t>(n_ + 1)};
    }

  private:
    std::int64_t n_;
    double alpha_;
    std::vector<double> values_;
};

KrawtchoukTable krawtchouk_table(std::int64_t n, double alpha);

// Single value without materializing the table; same recurrence.
double krawtchouk_value(std::int64_t k, std::int64_t zeta, std::int64_t n,
                        double alpha);

// All Q_k(zeta) for k = 0..kmax at one zeta.
std::vector<double> krawtchouk_column(std::int64_t zeta, std::int64_t n,
                                      std::int64_t kmax, double alpha);

// C(n,k)^{-1} sum over k-subsets of prod (1 - xi_i/alpha): the elementary
// symmetric route; must equal Q_k(sum xi; n, alpha).
double krawtchouk_symmetric_check(std::span<const int> xi, std::int64_t k,
                                  double alpha);

// Exact-rational C(n,k) Q_k(zeta) by expanding the generating function; the
// oracle for the floating-point recurrence.
std::vector<Rational> krawtchouk_row_exact(std::int64_t n, std::int64_t zeta,
                                           const Rational& alpha);

// Hermite polynomials H_k(w; sigma2) orthogonal on N(0, sigma2), from the
// generating function exp(z w - sigma2 z^2 / 2):
//   H_0 = 1, H_1 = w, H_{k+1} = w H_k - sigma2 k H_{k-1}.
double hermite_eval(std::int64_t k, double w, double sigma2);
std::vector<double> hermite_all(std::int64_t kmax, double w, double sigma2);

}  // namespace hyperwalk
