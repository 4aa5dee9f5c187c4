#include "hyperwalk/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hyperwalk/errors.hpp"
#include "hyperwalk/orthopoly.hpp"
#include "hyperwalk/rng.hpp"
#include "hyperwalk/special.hpp"

namespace hyperwalk {

namespace {
double contraction(double theta, const ModelParams& pr) {
    return pr.psi() * (1.0 - theta / pr.alpha());
}
}  // namespace

StationaryMoments stationary_moments(const LatentModel& model,
                                     const ModelParams& pr) {
    const std::int64_t n = pr.n();
    const auto zm = latent_moments(model, n);
    StationaryMoments out;
    out.m_z = zm.mean;
    out.c_z = zm.cov;
    const double phi = pr.phi();
    const double phib = pr.phi_bar();
    const double gamma = pr.gamma();
    const double alpha = pr.alpha();
    const double alphab = pr.alpha_bar();

    out.m_x.resize(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        const double mz = zm.mean[static_cast<std::size_t>(k)];
        out.m_x[static_cast<std::size_t>(k)] =
            (phi - alpha + phib * mz) /
            (alphab + (phib / gamma) * (mz - alpha));
    }
    out.a_z.assign(static_cast<std::size_t>(n),
                   std::vector<double>(static_cast<std::size_t>(n), 0.0));
    out.c_x.assign(static_cast<std::size_t>(n),
                   std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (std::int64_t k = 0; k < n; ++k) {
        for (std::int64_t l = 0; l < n; ++l) {
            const auto ks = static_cast<std::size_t>(k);
            const auto ls = static_cast<std::size_t>(l);
            out.a_z[ks][ls] = zm.cov[ks][ls] +
                              (zm.mean[ks] - alpha) * (zm.mean[ls] - alpha);
            if (k == l) {
                out.c_x[ks][ks] = out.m_x[ks] * (1.0 - out.m_x[ks]);
            } else {
                out.c_x[ks][ls] = phib * phib * zm.cov[ks][ls] *
                                  (out.m_x[ks] - gamma) *
                                  (out.m_x[ls] - gamma) /
                                  (alphab * alphab * gamma * gamma -
                                   phib * phib * out.a_z[ks][ls]);
            }
        }
    }
    return out;
}

std::vector<double> marginal_mean_path(const HyperState& x0,
                                       const std::vector<double>& theta,
                                       const ModelParams& pr, std::int64_t t) {
    const std::int64_t n = pr.n();
    if (x0.n() != n || theta.size() != static_cast<std::size_t>(n)) {
        throw dimension_mismatch_error("marginal_mean_path: size mismatch");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        const double th = theta[static_cast<std::size_t>(k)];
        const double x0k = x0.bit(k) ? 1.0 : 0.0;
        if (t == 0) {
            out[static_cast<std::size_t>(k)] = x0k;
            continue;
        }
        const double r = contraction(th, pr);
        if (std::abs(1.0 - r) < 1e-14) {
            throw boundary_error(
                "marginal mean has no geometric form at contraction 1");
        }
        const double rt = std::pow(r, static_cast<double>(t));
        out[static_cast<std::size_t>(k)] =
            pr.phi() - (pr.gamma() - pr.phi()) * r * (1.0 - rt) / (1.0 - r) -
            (pr.phi() - x0k) * rt;
    }
    return out;
}

double definetti_limit_prob(const ModelParams& pr, double theta_tilde) {
    if (pr.phi() + pr.gamma() <= 1.0) {
        throw boundary_error("limit probability needs phi + gamma > 1");
    }
    if (pr.phi() == pr.gamma()) return pr.phi();
    const double r = contraction(theta_tilde, pr);
    return pr.phi() - (pr.gamma() - pr.phi()) * r / (1.0 - r);
}

CountDistribution count_distribution(std::int64_t n0dot, std::int64_t n1dot,
                                     double theta, const ModelParams& pr) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw error("theta must lie in [0,1]");
    }
    CountDistribution out;
    out.n0dot = n0dot;
    out.n1dot = n1dot;
    out.theta = theta;
    const double thb = 1.0 - theta;
    out.q01 = 1.0 - thb * pr.phi_bar() / pr.alpha_bar();
    out.q11 =
        (pr.alpha() * thb + theta * (pr.phi() + pr.gamma() - 1.0)) / pr.gamma();
    return out;
}

double count_pgf(double s01, double s11, double h, std::int64_t n0dot,
                 std::int64_t n1dot, double theta, const ModelParams& pr) {
    const double th = theta;
    const double thb = 1.0 - theta;
    const double phi = pr.phi();
    const double phib = pr.phi_bar();
    const double gamma = pr.gamma();
    const double gb = pr.gamma_bar();
    double f0, f1;
    if (phi <= gamma) {
        f0 = thb + th * h * s01;
        f1 = thb * (1.0 - phi / gamma + s11 * phi / gamma) +
             th * h * (phib / gamma + s11 * (1.0 - phib / gamma));
    } else {
        f0 = thb * (phib / gb + s01 * (1.0 - phib / gb)) + th * h * s01;
        f1 = thb * s11 + th * h * (phib / gamma + s11 * (1.0 - phib / gamma));
    }
    return std::pow(f0, static_cast<double>(n0dot)) *
           std::pow(f1, static_cast<double>(n1dot));
}

std::pair<double, double> count_covariances(std::int64_t n0dot,
                                            std::int64_t n1dot, double theta,
                                            const ModelParams& pr) {
    const double thb = 1.0 - theta;
    const double cov01 = static_cast<double>(n0dot) * theta * thb *
                         pr.phi_bar() / pr.alpha_bar();
    const double cov11 = -static_cast<double>(n1dot) * theta * thb *
                         pr.phi_bar() * pr.gamma_bar() /
                         (pr.gamma() * pr.alpha_bar());
    return {cov01, cov11};
}

NormalLimit normal_limit_params(double theta, double u,
                                const ModelParams& pr) {
    if (!(theta > 0.0 && theta < 1.0)) {
        throw theta_boundary_error("theta must lie strictly inside (0,1)");
    }
    const double f = 1.0 - theta / pr.alpha();
    NormalLimit out;
    out.mu = pr.psi() * f * u;
    const double ratio = pr.alpha() / pr.alpha_bar();
    out.sigma2 = pr.phi() * pr.phi_bar() *
                 (1.0 - (pr.phi_bar() / pr.phi()) *
                            (pr.gamma_bar() / pr.gamma()) * ratio * ratio * f *
                            f);
    return out;
}

ModelParams AsymptoticParams::at_n(std::int64_t n) const {
    const double delta = 0.5 * c / std::sqrt(static_cast<double>(n));
    return ModelParams(alpha + delta, alpha - delta, n);
}

NormalLimit ar1_conditional(double theta, double v_prev, double c,
                            double phi) {
    const double f = 1.0 - theta / phi;
    return {f * (v_prev + c), phi * (1.0 - phi) * (1.0 - f * f)};
}

std::pair<double, double> ar1_stationary(double theta, double c, double phi) {
    if (!(theta > 0.0 && theta < 1.0)) {
        throw theta_boundary_error(
            "the AR(1) stationary law needs theta in (0,1)");
    }
    return {phi * c * (1.0 - theta / phi) / theta, phi * (1.0 - phi)};
}

double ar1_mean_path(double v0_mean, double theta, double c, double phi,
                     std::int64_t t) {
    if (!(theta > 0.0 && theta < 1.0)) {
        throw theta_boundary_error("theta must lie strictly inside (0,1)");
    }
    const auto [stat_mean, stat_var] = ar1_stationary(theta, c, phi);
    (void)stat_var;
    return stat_mean + std::pow(1.0 - theta / phi, static_cast<double>(t)) *
                           (v0_mean - stat_mean);
}

double hermite_transition_density(double v_t, double v_prev, double c,
                                  double phi,
                                  const std::vector<double>& phi_moments,
                                  std::int64_t j_max) {
    if (phi_moments.empty() || std::abs(phi_moments[0] - 1.0) > 1e-12) {
        throw error("phi_moments[0] must be 1");
    }
    if (j_max < 1) throw error("j_max must be >= 1");
    const double sigma2 = phi * (1.0 - phi);
    const double s = std::sqrt(sigma2);
    const auto jm = std::min<std::int64_t>(
        j_max, static_cast<std::int64_t>(phi_moments.size()) - 1);
    const auto hy = hermite_all(jm, v_t / s, 1.0);
    const auto hx = hermite_all(jm, (v_prev + c) / s, 1.0);
    double series = 1.0;
    double factorial = 1.0;
    for (std::int64_t j = 1; j <= jm; ++j) {
        factorial *= static_cast<double>(j);
        series += phi_moments[static_cast<std::size_t>(j)] / factorial *
                  hy[static_cast<std::size_t>(j)] *
                  hx[static_cast<std::size_t>(j)];
    }
    const double density = special::normal_pdf(v_t, sigma2) * series;
    if (density < -1e-8) {
        throw error(
            "Hermite series produced a negative density beyond the "
            "truncation tolerance; increase j_max");
    }
    return density;
}

std::vector<double> phi_moments_beta(double a, double b, double phi,
                                     std::int64_t j_max) {
    if (!(a > 0.0 && b > 0.0)) throw error("Beta parameters must be positive");
    // integrate (1 - theta/phi)^j against Beta(a,b) with the substitution
    // theta = (1 - cos(pi u))/2, which clusters nodes at both endpoints and
    // tames mild endpoint singularities (a, b >= 1/2)
    static const auto quad = special::gauss_legendre(400);
    std::vector<double> moments(static_cast<std::size_t>(j_max + 1), 0.0);
    const double lognorm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
        const double u = 0.5 * (quad.nodes[i] + 1.0);  // [0,1]
        const double w = 0.5 * quad.weights[i];
        const double theta = 0.5 * (1.0 - std::cos(std::numbers::pi * u));
        const double jac = 0.5 * std::numbers::pi *
                           std::sin(std::numbers::pi * u);
        if (theta <= 0.0 || theta >= 1.0) continue;
        const double dens =
            std::exp(lognorm + (a - 1.0) * std::log(theta) +
                     (b - 1.0) * std::log1p(-theta)) *
            jac;
        const double base = 1.0 - theta / phi;
        double powj = 1.0;
        for (std::int64_t j = 0; j <= j_max; ++j) {
            moments[static_cast<std::size_t>(j)] += w * dens * powj;
            powj *= base;
        }
    }
    // quadrature normalization correction
    const double z = moments[0];
    for (double& m : moments) m /= z;
    return moments;
}

std::vector<double> phi_moments_mc(const LatentModel& model, double phi,
                                   std::int64_t j_max, std::int64_t draws,
                                   std::uint64_t seed) {
    std::vector<double> moments(static_cast<std::size_t>(j_max + 1), 0.0);
    const RngStream stream(seed, 0);
    for (std::int64_t i = 0; i < draws; ++i) {
        auto cur = stream.cursor(Draw::theta, static_cast<std::uint64_t>(i));
        double theta;
        if (const auto* d = model.get_if<DeFinettiBeta>()) {
            theta = cur.beta(d->a, d->b);
        } else if (const auto* it = model.get_if<IidTheta>()) {
            theta = it->theta;
        } else if (const auto* g = model.get_if<DeFinettiGrid>()) {
            const double u = cur.uniform();
            double acc = 0.0;
            theta = g->thetas.back();
            for (std::size_t k = 0; k < g->thetas.size(); ++k) {
                acc += g->weights[k];
                if (u <= acc) {
                    theta = g->thetas[k];
                    break;
                }
            }
        } else {
            throw error("phi_moments_mc needs a theta-mixing latent model");
        }
        const double base = 1.0 - theta / phi;
        double powj = 1.0;
        for (std::int64_t j = 0; j <= j_max; ++j) {
            moments[static_cast<std::size_t>(j)] += powj;
            powj *= base;
        }
    }
    for (double& m : moments) m /= static_cast<double>(draws);
    return moments;
}

ExtremePointLimits extreme_point_limits(std::int64_t m, std::int64_t n,
                                        const ModelParams& pr) {
    if (m < 0 || m > n) throw error("extreme-point weight outside [0, n]");
    const double ez = static_cast<double>(m) / static_cast<double>(n);
    const double kappa =
        (pr.alpha() / pr.alpha_bar()) * (1.0 - ez / pr.alpha());
    ExtremePointLimits out;
    out.p = (pr.phi() - kappa * pr.phi_bar()) /
            (1.0 - kappa * pr.phi_bar() / pr.gamma());
    if (pr.phi() < pr.gamma()) {
        out.complement = false;
        out.poisson_rate =
            static_cast<double>(m) / (1.0 - pr.phi() / pr.gamma());
    } else if (pr.phi() > pr.gamma()) {
        out.complement = true;
        out.poisson_rate = (pr.phi_bar() / pr.gamma()) *
                           static_cast<double>(m) /
                           (1.0 - pr.phi_bar() / pr.gamma_bar());
    } else {
        out.complement = false;
        out.poisson_rate = std::numeric_limits<double>::quiet_NaN();
    }
    out.omega_limit_p = out.p;
    return out;
}

}  // namespace hyperwalk
