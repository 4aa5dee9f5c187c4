#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hyperwalk/latent.hpp"
#include "hyperwalk/params.hpp"
#include "hyperwalk/state.hpp"

namespace hyperwalk {

// ===== Stationary moments (time-homogeneous latent, stationary chain) =====

struct StationaryMoments {
    std::vector<double> m_x;               // stationary coordinate means
    std::vector<std::vector<double>> c_x;  // stationary covariance
    std::vector<double> m_z;
    std::vector<std::vector<double>> c_z;
    std::vector<std::vector<double>> a_z;  // C_Z + (m_Z-alpha)(m_Z-alpha)'
};

// m_X[k] = (phi - alpha + phib m_Z[k]) / (alphab + (phib/gamma)(m_Z[k]-alpha));
// off-diagonal C_X solves the one-step fixed point,
//   C_X = phib^2 C_Z (m_X-gamma)(m_X-gamma)' / (alphab^2 gamma^2 - phib^2 A_Z).
StationaryMoments stationary_moments(const LatentModel& model,
                                     const ModelParams& params);

// ===== Marginal time evolution =====

// P(X_t[k] = 1) for a homogeneous latent driver with E[Z[k]] = Theta[k]:
// the affine recursion m_t = phi(1 - rho) + r m_{t-1} solved in closed form,
// with r = psi (1 - Theta/alpha).  t = 0 returns x0.
std::vector<double> marginal_mean_path(const HyperState& x0,
                                       const std::vector<double>& theta,
                                       const ModelParams& params,
                                       std::int64_t t);

// Unconditional limit probability under a de Finetti mixing measure with
// mean theta_tilde: phi - (gamma-phi) r / (1 - r), r = psi(1-theta~/alpha).
double definetti_limit_prob(const ModelParams& params, double theta_tilde);

// ===== Transition-count Binomial structure =====

struct CountDistribution {
    double q01;  // 1 - theta_bar phib / alphab
    double q11;  // (alpha theta_bar + theta (phi+gamma-1)) / gamma
    std::int64_t n0dot;
    std::int64_t n1dot;
    double theta;
};

CountDistribution count_distribution(std::int64_t n0dot, std::int64_t n1dot,
                                     double theta, const ModelParams& params);

// Joint pgf E[s01^N01 s11^N11 h^zeta | N0., N1.] with zeta ~ Binomial(n,theta).
double count_pgf(double s01, double s11, double h, std::int64_t n0dot,
                 std::int64_t n1dot, double theta, const ModelParams& params);

// Cov(zeta, N01) and Cov(zeta, N11).
std::pair<double, double> count_covariances(std::int64_t n0dot,
                                            std::int64_t n1dot, double theta,
                                            const ModelParams& params);

// ===== Normal limits =====

// One-transition limit of V_t = (|X_t| - n phi)/sqrt(n) given U_t = u and
// Theta_t = theta: mean psi(1-theta/alpha) u, variance
// phi phib (1 - (phib/phi)(gb/gamma)(alpha/alphab)^2 (1-theta/alpha)^2).
struct NormalLimit {
    double mu;
    double sigma2;
};
NormalLimit normal_limit_params(double theta, double u,
                                const ModelParams& params);

// The sqrt(n)-critical parameterization phi^(n) = alpha + c/(2 sqrt n),
// gamma^(n) = alpha - c/(2 sqrt n); kept distinct from ModelParams so finite-n
// and limit computations cannot be mixed by accident.
struct AsymptoticParams {
    double alpha;
    double c;

    ModelParams at_n(std::int64_t n) const;
};

// AR(1) limit with random coefficient Phi_t = 1 - Theta_t/phi:
// V_t = Phi_t (c + V_{t-1}) + eps_t, Var(eps_t) = phi phib (1 - Phi_t^2).
NormalLimit ar1_conditional(double theta, double v_prev, double c, double phi);
// stationary mean phi c (1-theta/phi)/theta and variance phi phib
std::pair<double, double> ar1_stationary(double theta, double c, double phi);

// E[V_t] = stat_mean + (1-theta/phi)^t (E[V_0] - stat_mean).
double ar1_mean_path(double v0_mean, double theta, double c, double phi,
                     std::int64_t t);

// Transition density of V_t given V_{t-1} as a Hermite series in the moments
// of Phi: N(0, phi phib) density times
// {1 + sum_j E[Phi^j]/j! H_j(v_t/s) H_j((v_prev+c)/s)}, s = sqrt(phi phib).
double hermite_transition_density(double v_t, double v_prev, double c,
                                  double phi,
                                  const std::vector<double>& phi_moments,
                                  std::int64_t j_max);

// E[(1 - Theta/phi)^j] for Theta ~ Beta(a,b), j = 0..j_max, by quadrature
// (the binomial moment expansion cancels catastrophically for large j).
std::vector<double> phi_moments_beta(double a, double b, double phi,
                                     std::int64_t j_max);
// Monte Carlo alternative over an arbitrary sampler.
std::vector<double> phi_moments_mc(const LatentModel& model, double phi,
                                   std::int64_t j_max, std::int64_t draws,
                                   std::uint64_t seed);

// ===== Extreme-point limits =====

struct ExtremePointLimits {
    double p;             // stationary coordinate parameter at finite n
    double poisson_rate;  // limit rate for |X| (phi<gamma) or n-|X| (phi>gamma)
    bool complement;      // true when the rate describes n - |X|
    double omega_limit_p; // limit of p when M/n -> omega
};
ExtremePointLimits extreme_point_limits(std::int64_t m, std::int64_t n,
                                        const ModelParams& params);

}  // namespace hyperwalk
