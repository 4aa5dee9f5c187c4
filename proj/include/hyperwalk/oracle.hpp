#pragma once

#include <cstdint>
#include <vector>

#include "hyperwalk/kernel.hpp"
#include "hyperwalk/latent.hpp"
#include "hyperwalk/params.hpp"
#include "hyperwalk/rational.hpp"

namespace hyperwalk::oracle {

// Ground truth for small n, computed by conditioning on Z rather than through
// the spectral expansion: the two routes share no code, which is the point.

struct ExactDistribution {
    std::vector<double> pmf;  // over 2^n packed states
};

// p(x,y) = sum_z P(Z=z) prod_k [ z_k p1(x_k,y_k) + (1-z_k) p0(x_k,y_k) ].
DenseKernel oracle_kernel(const LatentModel& model, const ModelParams& params);

// Same sum in exact rational arithmetic (n <= 6, pmf entries converted
// exactly from their double representations).  Returns row-major 2^n x 2^n.
std::vector<Rational> oracle_kernel_exact(const std::vector<Rational>& latent_pmf,
                                          const Rational& phi,
                                          const Rational& gamma,
                                          std::int64_t n);

// Unique stationary row vector by power iteration (sup-norm 1e-14 with
// residual re-verification); requires an irreducible aperiodic kernel.
ExactDistribution oracle_stationary(const DenseKernel& kernel);

// Lumping of the dense kernel onto Hamming classes.  certificate is the
// maximum deviation of class-conditional row sums across members of a class;
// matrices with certificate > 1e-10 raise not_lumpable_error.
struct LumpResult {
    std::vector<std::vector<double>> matrix;
    double certificate;
};
LumpResult oracle_lump_hamming(const DenseKernel& kernel);
// certificate only, no exception -- for probing non-exchangeable laws
double lumping_certificate(const DenseKernel& kernel);

}  // namespace hyperwalk::oracle
