#include "hyperwalk/kernel.hpp"

#include <bit>
#include <cmath>

#include "hyperwalk/errors.hpp"
#include "hyperwalk/orthopoly.hpp"
#include "hyperwalk/special.hpp"

namespace hyperwalk {

namespace {

constexpr std::int64_t kDenseMaxN = 12;
constexpr std::int64_t kSubsetMaxN = 20;
constexpr double kClampTolerance = 1e-14;
constexpr double kStochasticTolerance = 1e-10;

double kahan_sum(const std::vector<double>& terms) {
    double s = 0.0, c = 0.0;
    for (double t : terms) {
        const double y = t - c;
        const double u = s + y;
        c = (u - s) - y;
        s = u;
    }
    return s;
}

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw too_large_error(std::string(what) +
                              ": spectral terms overflow double precision in "
                              "this (n, alpha) regime; use simulation instead");
    }
}

}  // namespace

KernelSpectrum::KernelSpectrum(Mode m, ModelParams p, std::vector<double> v)
    : mode_(m), params_(p), values_(std::move(v)) {}

KernelSpectrum KernelSpectrum::subset(ModelParams params,
                                      std::vector<double> kappa_by_mask) {
    if (params.n() > kSubsetMaxN) {
        throw too_large_error("subset spectra support n <= 20");
    }
    if (kappa_by_mask.size() != (std::size_t{1} << params.n())) {
        throw dimension_mismatch_error("subset spectrum needs 2^n values");
    }
    kappa_by_mask[0] = 1.0;
    return KernelSpectrum(Mode::subset, params, std::move(kappa_by_mask));
}

KernelSpectrum KernelSpectrum::exchangeable(ModelParams params,
                                            std::vector<double> kappa_by_size) {
    if (kappa_by_size.size() != static_cast<std::size_t>(params.n() + 1)) {
        throw dimension_mismatch_error("exchangeable spectrum needs n+1 values");
    }
    kappa_by_size[0] = 1.0;
    return KernelSpectrum(Mode::exchangeable, params, std::move(kappa_by_size));
}

double KernelSpectrum::kappa_subset(std::uint64_t mask) const {
    if (mode_ == Mode::subset) return values_[mask];
    return values_[static_cast<std::size_t>(std::popcount(mask))];
}

double KernelSpectrum::kappa_size(std::int64_t k) const {
    if (mode_ != Mode::exchangeable) {
        throw error("kappa_size requires an exchangeable spectrum");
    }
    return values_[static_cast<std::size_t>(k)];
}

DenseKernel::DenseKernel(std::int64_t n, std::vector<double> row_major)
    : n_(n), p_(std::move(row_major)) {
    if (n > kDenseMaxN) throw too_large_error("dense kernels support n <= 12");
    const std::size_t m = std::size_t{1} << n;
    if (p_.size() != m * m) {
        throw dimension_mismatch_error("dense kernel needs 4^n entries");
    }
    for (std::size_t x = 0; x < m; ++x) {
        double row = 0.0;
        for (std::size_t y = 0; y < m; ++y) {
            double& v = p_[(x << n_) | y];
            if (v < 0.0) {
                if (v < -kStochasticTolerance) {
                    throw non_stochastic_error(
                        "kernel row has a negative entry beyond tolerance: the "
                        "spectrum is not realizable");
                }
                v = 0.0;
            }
            row += v;
        }
        if (std::abs(row - 1.0) > 1e-9) {
            throw non_stochastic_error("kernel row does not sum to 1");
        }
        for (std::size_t y = 0; y < m; ++y) p_[(x << n_) | y] /= row;
    }
}

KernelSpectrum spectrum_from_latent(const LatentModel& model,
                                    const ModelParams& params) {
    model.check_dimension(params.n());
    const std::int64_t n = params.n();
    const double alpha = params.alpha();
    const double ratio = alpha / params.alpha_bar();

    if (const auto* e = model.get_if<ExplicitPmf>()) {
        // butterfly transform: out[A] = E[ prod_{k in A} (1 - Z[k]/alpha) ]
        const double f1 = 1.0 - 1.0 / alpha;  // factor of a one-coordinate
        std::vector<double> a(e->pmf);
        const std::size_t m = a.size();
        for (std::int64_t k = 0; k < n; ++k) {
            const std::size_t bit = std::size_t{1} << k;
            for (std::size_t i = 0; i < m; ++i) {
                if (i & bit) continue;
                const double u = a[i];
                const double v = a[i | bit];
                a[i] = u + v;             // k not in A: marginalize z_k
                a[i | bit] = u + v * f1;  // k in A: weight (1 - z_k/alpha)
            }
        }
        for (std::size_t mask = 0; mask < m; ++mask) {
            const int sz = std::popcount(mask);
            double scale = 1.0;
            for (int i = 0; i < sz; ++i) scale *= ratio;
            a[mask] *= scale;
        }
        return KernelSpectrum::subset(params, std::move(a));
    }

    // exchangeable: kappa~_k = (a/ab)^k sum_m pmf(m) Q_k(m; n, alpha),
    // accumulated column-by-column with the scaled recurrence so no
    // (n+1)^2 table is materialized.
    const auto pmf = hamming_pmf(model, n);
    std::vector<double> acc(static_cast<std::size_t>(n + 1), 0.0);
    const double b = params.alpha_bar() / alpha;
    for (std::int64_t zeta = 0; zeta <= n; ++zeta) {
        const double w = pmf[static_cast<std::size_t>(zeta)];
        if (w == 0.0) continue;
        // t_k = (a/ab)^k Q_k(zeta): t_0 = 1,
        // t_1 = ratio (1 - zeta/(n alpha)),
        // (n-k) t_{k+1} = ratio (n - zeta(1+b) - (1-b)k) t_k - ratio k t_{k-1}
        double t0 = 1.0;
        double t1 = ratio * (1.0 - static_cast<double>(zeta) /
                                       (static_cast<double>(n) * alpha));
        acc[0] += w;
        if (n >= 1) acc[1] += w * t1;
        for (std::int64_t k = 1; k < n; ++k) {
            const double t2 =
                ratio *
                ((static_cast<double>(n) - zeta * (1.0 + b) - (1.0 - b) * k) *
                     t1 -
                 static_cast<double>(k) * t0) /
                static_cast<double>(n - k);
            check_finite(t2, "spectrum_from_latent");
            acc[static_cast<std::size_t>(k + 1)] += w * t2;
            t0 = t1;
            t1 = t2;
        }
    }
    return KernelSpectrum::exchangeable(params, std::move(acc));
}

DenseKernel full_kernel(const KernelSpectrum& spectrum) {
    const auto& pr = spectrum.params();
    const std::int64_t n = pr.n();
    if (n > kDenseMaxN) {
        throw too_large_error("n too large for dense kernel (max 12)");
    }
    const std::size_t m = std::size_t{1} << n;
    const double phi = pr.phi();
    const double phib = pr.phi_bar();
    const double gamma = pr.gamma();

    // phi^|y| phib^(n-|y|) per to-state
    std::vector<double> base(m);
    for (std::size_t y = 0; y < m; ++y) {
        const int w = std::popcount(y);
        double v = 1.0;
        for (int i = 0; i < w; ++i) v *= phi;
        for (int i = 0; i < n - w; ++i) v *= phib;
        base[y] = v;
    }

    std::vector<double> kernel(m * m);
    std::vector<double> buf(m);
    for (std::size_t x = 0; x < m; ++x) {
        // butterfly from subset index to to-state index:
        // b[y] = sum_A kappa_A prod_{k in A} (1 - y_k/phi)(1 - x_k/gamma)
        for (std::size_t a = 0; a < m; ++a) buf[a] = spectrum.kappa_subset(a);
        for (std::int64_t k = 0; k < n; ++k) {
            const std::size_t bit = std::size_t{1} << k;
            const double xfac = 1.0 - (((x >> k) & 1u) ? 1.0 / gamma : 0.0);
            const double w0 = xfac;                        // y_k = 0
            const double w1 = (1.0 - 1.0 / phi) * xfac;    // y_k = 1
            for (std::size_t i = 0; i < m; ++i) {
                if (i & bit) continue;
                const double u = buf[i];
                const double v = buf[i | bit];
                buf[i] = u + v * w0;
                buf[i | bit] = u + v * w1;
            }
        }
        for (std::size_t y = 0; y < m; ++y) {
            double v = base[y] * buf[y];
            if (v < 0.0 && v >= -kClampTolerance) v = 0.0;
            kernel[(x << n) | y] = v;
        }
    }
    return DenseKernel(n, std::move(kernel));
}

double kernel_entry_exchangeable(const TransitionCounts& counts,
                                 const KernelSpectrum& spectrum) {
    if (spectrum.mode() != KernelSpectrum::Mode::exchangeable) {
        throw error("entry evaluation requires an exchangeable spectrum");
    }
    const auto& pr = spectrum.params();
    const std::int64_t n = pr.n();
    if (counts.total() != n || counts.n00 < 0 || counts.n01 < 0 ||
        counts.n10 < 0 || counts.n11 < 0) {
        throw invalid_counts_error("transition counts do not match n");
    }
    const double phi = pr.phi();
    const double phib = pr.phi_bar();
    const double gamma = pr.gamma();
    const double gb = pr.gamma_bar();

    // coef_k of the product of the four binomial factors; coef_k = C(n,k) R_k
    std::vector<double> poly{1.0};
    poly.reserve(static_cast<std::size_t>(n + 1));
    auto mul_linear = [&](double c, std::int64_t times) {
        for (std::int64_t r = 0; r < times; ++r) {
            poly.push_back(0.0);
            for (std::size_t i = poly.size() - 1; i >= 1; --i) {
                poly[i] += c * poly[i - 1];
            }
        }
    };
    mul_linear(1.0, counts.n00);
    mul_linear(-gb / gamma, counts.n10);
    mul_linear(-phib / phi, counts.n01);
    mul_linear(phib * gb / (phi * gamma), counts.n11);

    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(n + 1));
    terms.push_back(1.0);
    for (std::int64_t k = 1; k <= n; ++k) {
        const double term = spectrum.kappa_size(k) * poly[static_cast<std::size_t>(k)];
        check_finite(term, "kernel_entry_exchangeable");
        terms.push_back(term);
    }
    const double brace = kahan_sum(terms);
    const std::int64_t hy = counts.n01 + counts.n11;
    double lead = 1.0;
    for (std::int64_t i = 0; i < hy; ++i) lead *= phi;
    for (std::int64_t i = 0; i < n - hy; ++i) lead *= phib;
    double v = lead * brace;
    if (v < 0.0 && v >= -kClampTolerance) v = 0.0;
    if (v < 0.0) {
        throw non_stochastic_error("exchangeable kernel entry is negative");
    }
    return v;
}

std::vector<std::vector<double>> hamming_kernel(const KernelSpectrum& spectrum) {
    if (spectrum.mode() != KernelSpectrum::Mode::exchangeable) {
        throw error("the Hamming chain requires an exchangeable spectrum");
    }
    const auto& pr = spectrum.params();
    const std::int64_t n = pr.n();
    const double phi = pr.phi();
    const double phib = pr.phi_bar();
    const double gamma = pr.gamma();

    const KrawtchoukTable qy(n, phi);
    const KrawtchoukTable qx(n, gamma);
    std::vector<double> log_binom(static_cast<std::size_t>(n + 1));
    for (std::int64_t k = 0; k <= n; ++k) {
        log_binom[static_cast<std::size_t>(k)] = special::log_binomial_coef(n, k);
    }

    std::vector<std::vector<double>> out(
        static_cast<std::size_t>(n + 1),
        std::vector<double>(static_cast<std::size_t>(n + 1), 0.0));
    for (std::int64_t hx = 0; hx <= n; ++hx) {
        double row_sum = 0.0;
        for (std::int64_t hy = 0; hy <= n; ++hy) {
            std::vector<double> terms;
            terms.reserve(static_cast<std::size_t>(n + 1));
            terms.push_back(1.0);
            for (std::int64_t k = 1; k <= n; ++k) {
                const double t = std::exp(log_binom[static_cast<std::size_t>(k)]) *
                                 spectrum.kappa_size(k) * qy.value(k, hy) *
                                 qx.value(k, hx);
                check_finite(t, "hamming_kernel");
                terms.push_back(t);
            }
            const double lead = special::binomial_pmf(n, phi, hy);
            double v = lead * kahan_sum(terms);
            if (v < 0.0 && v >= -kClampTolerance * 100) v = 0.0;
            if (v < 0.0) {
                throw non_stochastic_error("Hamming kernel entry is negative");
            }
            out[static_cast<std::size_t>(hx)][static_cast<std::size_t>(hy)] = v;
            row_sum += v;
        }
        if (std::abs(row_sum - 1.0) > 1e-9) {
            throw non_stochastic_error("Hamming kernel row does not sum to 1");
        }
        for (auto& v : out[static_cast<std::size_t>(hx)]) v /= row_sum;
    }
    return out;
}

std::array<std::array<double, 2>, 2> single_coordinate_kernel(
    double kappa, const ModelParams& params) {
    if (!kappa_range(params.phi(), params.gamma()).contains(kappa)) {
        throw kappa_out_of_range_error("kappa outside the admissible interval");
    }
    const double phi = params.phi();
    const double phib = params.phi_bar();
    const double gamma = params.gamma();
    const double gb = params.gamma_bar();
    return {{{phib * (1.0 + kappa), phi - kappa * phib},
             {phib * (1.0 - kappa * gb / gamma),
              phi + kappa * phib * gb / gamma}}};
}

double single_coordinate_stationary(double kappa, const ModelParams& params) {
    if (!kappa_range(params.phi(), params.gamma()).contains(kappa)) {
        throw kappa_out_of_range_error("kappa outside the admissible interval");
    }
    const double phi = params.phi();
    const double phib = params.phi_bar();
    const double denom = 1.0 - kappa * phib / params.gamma();
    if (denom == 0.0) {
        throw boundary_error(
            "the chain is frozen at this kappa; every law is stationary");
    }
    return (phi - kappa * phib) / denom;
}

std::vector<double> z_law_from_kernel(const DenseKernel& kernel,
                                      const ModelParams& params) {
    const std::int64_t n = kernel.n();
    if (n != params.n()) {
        throw dimension_mismatch_error("kernel and params disagree on n");
    }
    const std::size_t m = std::size_t{1} << n;
    std::vector<double> law(m);
    if (params.phi() <= params.gamma()) {
        for (std::size_t z = 0; z < m; ++z) law[z] = kernel.at(0, z);
    } else {
        const double gamma = params.gamma();
        const double gb = params.gamma_bar();
        const double phib = params.phi_bar();
        for (std::size_t z = 0; z < m; ++z) {
            const int w = std::popcount(z);
            double scale = 1.0;
            for (int i = 0; i < w; ++i) scale *= gamma;
            for (int i = 0; i < n - w; ++i) scale *= gb;
            for (int i = 0; i < n; ++i) scale /= phib;
            law[z] = scale * kernel.at(z, 0);
        }
    }
    double sum = 0.0;
    for (double& v : law) {
        if (v < 0.0) {
            if (v < -kStochasticTolerance) {
                throw not_realizable_error(
                    "recovered latent law has negative mass");
            }
            v = 0.0;
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance * 100) {
        throw not_realizable_error("recovered latent law does not normalize");
    }
    for (double& v : law) v /= sum;
    return law;
}

CoordinateChain coordinate_chain_matrix(const LatentModel& model,
                                        std::int64_t coordinate,
                                        const ModelParams& params) {
    const auto mom = latent_moments(model, params.n());
    const double ez = mom.mean[static_cast<std::size_t>(coordinate)];
    const double kappa =
        (params.alpha() / params.alpha_bar()) * (1.0 - ez / params.alpha());
    CoordinateChain out;
    out.matrix = single_coordinate_kernel(kappa, params);
    out.stationary = single_coordinate_stationary(kappa, params);
    return out;
}

}  // namespace hyperwalk
