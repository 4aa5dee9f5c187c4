#include "hyperwalk/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include <json.hpp>

#include "hyperwalk/asymptotics.hpp"
#include "hyperwalk/errors.hpp"
#include "hyperwalk/estimator.hpp"
#include "hyperwalk/io.hpp"
#include "hyperwalk/kernel.hpp"
#include "hyperwalk/latent.hpp"
#include "hyperwalk/oracle.hpp"
#include "hyperwalk/orthopoly.hpp"
#include "hyperwalk/rational.hpp"
#include "hyperwalk/simd/kernels.hpp"
#include "hyperwalk/simulator.hpp"
#include "hyperwalk/special.hpp"

namespace hyperwalk::verify {

namespace {

// ===== battery construction =====

std::vector<ModelParams> battery_params(std::int64_t n) {
    static const std::pair<double, double> pairs[] = {
        {0.5, 0.5}, {0.7, 0.6}, {0.6, 0.7},
        {0.9, 0.2}, {0.8, 0.3}, {0.55, 0.5}};
    std::vector<ModelParams> out;
    for (const auto& [phi, gamma] : pairs) {
        try {
            out.push_back(validate_params(phi, gamma, n));
        } catch (const error&) {
            // inadmissible pairs are skipped by construction
        }
    }
    return out;
}

LatentModel point_mass(std::int64_t n, std::uint64_t state) {
    ExplicitPmf e;
    e.n = n;
    e.pmf.assign(std::size_t{1} << n, 0.0);
    e.pmf[state] = 1.0;
    return LatentModel(std::move(e));
}

LatentModel random_explicit(std::int64_t n, std::uint64_t seed,
                            bool strictly_positive) {
    const RngStream stream(seed, 77);
    auto cur = stream.cursor(Draw::theta, 0);
    ExplicitPmf e;
    e.n = n;
    e.pmf.resize(std::size_t{1} << n);
    double sum = 0.0;
    for (auto& p : e.pmf) {
        p = cur.uniform();
        if (strictly_positive) p += 0.05;
        sum += p;
    }
    for (auto& p : e.pmf) p /= sum;
    // re-normalize the rounding residue into the largest cell so the table
    // sums to 1 within 1e-12 exactly as required
    double total = 0.0;
    for (double p : e.pmf) total += p;
    e.pmf[0] += 1.0 - total;
    return LatentModel(std::move(e));
}

std::vector<LatentModel> battery_latents(std::int64_t n, std::uint64_t seed) {
    std::vector<LatentModel> out;
    out.push_back(point_mass(n, 0));
    out.push_back(point_mass(n, (std::uint64_t{1} << n) - 1));
    if (n >= 2) {
        std::uint64_t alt = 0;
        for (std::int64_t k = 0; k < n; k += 2) alt |= std::uint64_t{1} << k;
        out.push_back(point_mass(n, alt));
    }
    for (double theta : {0.25, 0.5, 0.75, 1.0}) {
        out.push_back(LatentModel(IidTheta{theta}));
    }
    out.push_back(LatentModel(ExtremePoint{1}));
    if (n >= 2) out.push_back(LatentModel(ExtremePoint{n / 2 > 0 ? n / 2 : 1}));
    out.push_back(LatentModel(ExtremePoint{n}));
    out.push_back(LatentModel(DeFinettiBeta{2.0, 2.0}));
    out.push_back(LatentModel(DeFinettiGrid{{0.3, 0.8}, {0.5, 0.5}}));
    out.push_back(random_explicit(n, seed, false));
    out.push_back(random_explicit(n, seed + 1, false));
    return out;
}

// mixing laws only: stationary-law batteries need an ergodic chain
std::vector<LatentModel> mixing_latents(std::int64_t n, std::uint64_t seed) {
    std::vector<LatentModel> out;
    for (double theta : {0.25, 0.5, 0.75}) {
        out.push_back(LatentModel(IidTheta{theta}));
    }
    if (n >= 2) out.push_back(LatentModel(ExtremePoint{n / 2}));
    out.push_back(LatentModel(DeFinettiBeta{2.0, 2.0}));
    out.push_back(LatentModel(DeFinettiGrid{{0.3, 0.8}, {0.5, 0.5}}));
    out.push_back(random_explicit(n, seed, true));
    return out;
}

double sup_diff(const DenseKernel& a, const DenseKernel& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    }
    return d;
}

// ===== exact-rational spectral route (independent of the double path) =====

std::vector<Rational> spectral_kernel_exact(const std::vector<Rational>& pmf,
                                            const Rational& phi,
                                            const Rational& gamma,
                                            std::int64_t n) {
    const std::size_t m = std::size_t{1} << n;
    const Rational alpha = phi <= gamma ? phi : gamma;
    const Rational ratio = alpha / (Rational(1) - alpha);
    // kappa_A by butterfly
    std::vector<Rational> kappa(pmf);
    const Rational f1 = Rational(1) - Rational(1) / alpha;
    for (std::int64_t k = 0; k < n; ++k) {
        const std::size_t bit = std::size_t{1} << k;
        for (std::size_t i = 0; i < m; ++i) {
            if (i & bit) continue;
            const Rational u = kappa[i];
            const Rational v = kappa[i | bit];
            kappa[i] = u + v;
            kappa[i | bit] = u + v * f1;
        }
    }
    for (std::size_t mask = 0; mask < m; ++mask) {
        kappa[mask] *= rational_pow(ratio, std::popcount(mask));
    }
    // kernel rows by butterfly
    std::vector<Rational> kernel(m * m);
    std::vector<Rational> buf(m);
    const Rational yfac1 = Rational(1) - Rational(1) / phi;
    for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t a = 0; a < m; ++a) buf[a] = kappa[a];
        for (std::int64_t k = 0; k < n; ++k) {
            const std::size_t bit = std::size_t{1} << k;
            const Rational xfac =
                Rational(1) - Rational(((x >> k) & 1u) ? 1 : 0) / gamma;
            const Rational w0 = xfac;
            const Rational w1 = yfac1 * xfac;
            for (std::size_t i = 0; i < m; ++i) {
                if (i & bit) continue;
                const Rational u = buf[i];
                const Rational v = buf[i | bit];
                buf[i] = u + v * w0;
                buf[i | bit] = u + v * w1;
            }
        }
        for (std::size_t y = 0; y < m; ++y) {
            const int w = std::popcount(y);
            Rational lead = rational_pow(phi, w) *
                            rational_pow(Rational(1) - phi, n - w);
            kernel[(x << n) | y] = lead * buf[y];
        }
    }
    return kernel;
}

std::vector<Rational> latent_pmf_exact(const LatentModel& model,
                                       std::int64_t n) {
    const std::size_t m = std::size_t{1} << n;
    std::vector<Rational> out(m, Rational(0));
    if (const auto* e = model.get_if<ExplicitPmf>()) {
        for (std::size_t s = 0; s < m; ++s) {
            out[s] = rational_from_double(e->pmf[s]);
        }
        return out;
    }
    if (const auto* i = model.get_if<IidTheta>()) {
        const Rational th = rational_from_double(i->theta);
        for (std::size_t s = 0; s < m; ++s) {
            const int w = std::popcount(s);
            out[s] = rational_pow(th, w) *
                     rational_pow(Rational(1) - th, static_cast<int>(n) - w);
        }
        return out;
    }
    if (const auto* x = model.get_if<ExtremePoint>()) {
        const BigInt cls = binomial_big(static_cast<long>(n),
                                        static_cast<long>(x->m));
        for (std::size_t s = 0; s < m; ++s) {
            if (std::popcount(s) == x->m) out[s] = Rational(1) / Rational(cls);
        }
        return out;
    }
    throw error("exact pmf unavailable for this latent family");
}

KernelSpectrum perturbed_spectrum(const LatentModel& model,
                                  const ModelParams& pr, double eps) {
    auto spec = spectrum_from_latent(model, pr);
    if (eps == 0.0) return spec;
    auto values = spec.values();
    if (spec.mode() == KernelSpectrum::Mode::exchangeable) {
        if (values.size() > 1) values[1] *= 1.0 + eps;
        return KernelSpectrum::exchangeable(pr, std::move(values));
    }
    for (std::size_t mask = 1; mask < values.size(); ++mask) {
        if (std::popcount(mask) == 1) values[mask] *= 1.0 + eps;
    }
    return KernelSpectrum::subset(pr, std::move(values));
}

// ===== individual suites =====

Suite suite_kernel(const Options& opts) {
    Suite s{"kernel", {}, 0.0};
    double worst = 0.0;
    std::string worst_case = "none";
    std::int64_t cases = 0;
    for (std::int64_t n = 1; n <= 6; ++n) {
        for (const auto& pr : battery_params(n)) {
            for (const auto& model : battery_latents(n, opts.seed)) {
                const auto spec = spectrum_from_latent(model, pr);
                const auto spectral = full_kernel(spec);
                const auto brute = oracle::oracle_kernel(model, pr);
                const double d = sup_diff(spectral, brute);
                ++cases;
                if (d > worst) {
                    worst = d;
                    worst_case = "n=" + std::to_string(n) + " phi=" +
                                 std::to_string(pr.phi()) + " gamma=" +
                                 std::to_string(pr.gamma()) + " " +
                                 model.describe();
                }
            }
        }
    }
    s.checks.push_back(Check{"spectral-vs-constructive sup over " +
                                 std::to_string(cases) + " cases",
                             worst <= 1e-12, worst, 1e-12, worst_case});

    // exact-rational mode: both routes agree exactly
    bool exact_ok = true;
    std::int64_t exact_cases = 0;
    for (std::int64_t n = 1; n <= 6; ++n) {
        std::vector<LatentModel> laws;
        laws.push_back(point_mass(n, 0));
        laws.push_back(LatentModel(IidTheta{0.5}));
        if (n >= 2) laws.push_back(LatentModel(ExtremePoint{n / 2}));
        laws.push_back(random_explicit(n, opts.seed + 3, false));
        for (const auto& [phi, gamma] :
             {std::pair{0.75, 0.625}, std::pair{0.625, 0.75}}) {
            const Rational rp = rational_from_double(phi);
            const Rational rg = rational_from_double(gamma);
            for (const auto& model : laws) {
                const auto pmf = latent_pmf_exact(model, n);
                const auto a = spectral_kernel_exact(pmf, rp, rg, n);
                const auto b = oracle::oracle_kernel_exact(pmf, rp, rg, n);
                ++exact_cases;
                if (a != b) exact_ok = false;
            }
        }
    }
    s.checks.push_back(Check{"rational-exact route equality over " +
                                 std::to_string(exact_cases) + " cases",
                             exact_ok, exact_ok ? 0.0 : 1.0, 0.0,
                             "phi,gamma in {5/8, 3/4} x both orders"});
    return s;
}

Suite suite_reversibility(const Options& opts) {
    Suite s{"reversibility", {}, 0.0};
    double worst_rev = 0.0, worst_prop = 0.0;
    for (std::int64_t n = 1; n <= 6; ++n) {
        for (const auto& pr : battery_params(n)) {
            const ModelParams swapped =
                validate_params(pr.gamma(), pr.phi(), n);
            for (const auto& model : battery_latents(n, opts.seed)) {
                const auto kf = full_kernel(
                    perturbed_spectrum(model, pr, opts.kappa_perturbation));
                const auto kb =
                    full_kernel(spectrum_from_latent(model, swapped));
                const std::size_t m = std::size_t{1} << n;
                // gamma^|x| gb^(n-|x|) p_fg(x,y) == phi^|y| fb^(n-|y|) p_gf(y,x)
                std::vector<double> wg(m), wf(m);
                for (std::size_t v = 0; v < m; ++v) {
                    const int w = std::popcount(v);
                    wg[v] = std::pow(pr.gamma(), w) *
                            std::pow(pr.gamma_bar(), static_cast<double>(n - w));
                    wf[v] = std::pow(pr.phi(), w) *
                            std::pow(pr.phi_bar(), static_cast<double>(n - w));
                }
                for (std::size_t x = 0; x < m; ++x) {
                    for (std::size_t y = 0; y < m; ++y) {
                        worst_rev = std::max(
                            worst_rev, std::abs(wg[x] * kf.at(x, y) -
                                                wf[y] * kb.at(y, x)));
                    }
                }
                // product-Bernoulli(gamma) row propagates to Bernoulli(phi)
                for (std::size_t y = 0; y < m; ++y) {
                    double v = 0.0;
                    for (std::size_t x = 0; x < m; ++x) {
                        v += wg[x] * kf.at(x, y);
                    }
                    worst_prop = std::max(worst_prop, std::abs(v - wf[y]));
                }
            }
        }
    }
    s.checks.push_back(Check{"parameter-swapped reversibility sup",
                             worst_rev <= 1e-12, worst_rev, 1e-12, ""});
    s.checks.push_back(Check{"product-measure propagation sup",
                             worst_prop <= 1e-12, worst_prop, 1e-12, ""});
    return s;
}

Suite suite_lumping(const Options& opts) {
    Suite s{"lumping", {}, 0.0};
    double worst = 0.0;
    for (std::int64_t n = 1; n <= 6; ++n) {
        for (const auto& pr : battery_params(n)) {
            for (const auto& model : battery_latents(n, opts.seed)) {
                if (!model.exchangeable()) continue;
                const auto spec = spectrum_from_latent(model, pr);
                const auto hk = hamming_kernel(spec);
                const auto lump =
                    oracle::oracle_lump_hamming(full_kernel(spec));
                for (std::int64_t a = 0; a <= n; ++a) {
                    for (std::int64_t b = 0; b <= n; ++b) {
                        worst = std::max(
                            worst,
                            std::abs(hk[static_cast<std::size_t>(a)]
                                       [static_cast<std::size_t>(b)] -
                                     lump.matrix[static_cast<std::size_t>(a)]
                                                [static_cast<std::size_t>(b)]));
                    }
                }
            }
        }
    }
    s.checks.push_back(Check{"Hamming kernel vs exhaustive lumping sup",
                             worst <= 1e-12, worst, 1e-12, ""});

    bool raised = false;
    double cert = 0.0;
    {
        const auto pr = validate_params(0.7, 0.6, 4);
        const auto model = point_mass(4, 0b0001);  // one-coordinate point mass
        const auto k = full_kernel(spectrum_from_latent(model, pr));
        cert = oracle::lumping_certificate(k);
        try {
            oracle::oracle_lump_hamming(k);
        } catch (const not_lumpable_error&) {
            raised = true;
        }
    }
    s.checks.push_back(Check{"non-exchangeable law raises NotLumpable", raised,
                             cert, 1e-10, "certificate must exceed threshold"});
    return s;
}

Suite suite_zlaw(const Options& opts) {
    Suite s{"zlaw", {}, 0.0};
    double worst = 0.0;
    for (std::int64_t n = 1; n <= 8; ++n) {
        std::vector<LatentModel> laws;
        laws.push_back(random_explicit(n, opts.seed + 11, false));
        laws.push_back(random_explicit(n, opts.seed + 12, true));
        laws.push_back(point_mass(n, (std::uint64_t{1} << n) - 1));
        for (const auto& [phi, gamma] :
             {std::pair{0.7, 0.6}, std::pair{0.6, 0.7}, std::pair{0.5, 0.5}}) {
            const auto pr = validate_params(phi, gamma, n);
            for (const auto& model : laws) {
                const auto* e = model.get_if<ExplicitPmf>();
                const auto kernel = full_kernel(spectrum_from_latent(model, pr));
                const auto rec = z_law_from_kernel(kernel, pr);
                for (std::size_t z = 0; z < rec.size(); ++z) {
                    worst = std::max(worst, std::abs(rec[z] - e->pmf[z]));
                }
            }
        }
    }
    s.checks.push_back(Check{"latent-law round trip sup (n <= 8)",
                             worst <= 1e-12, worst, 1e-12, ""});
    return s;
}

Suite suite_moments(const Options& opts) {
    Suite s{"moments", {}, 0.0};
    double worst_mean = 0.0, worst_cov = 0.0;
    for (std::int64_t n = 2; n <= 6; ++n) {
        for (const auto& pr : battery_params(n)) {
            for (const auto& model : mixing_latents(n, opts.seed)) {
                const auto mom = stationary_moments(model, pr);
                const auto pi =
                    oracle::oracle_stationary(oracle::oracle_kernel(model, pr));
                const std::size_t m = std::size_t{1} << n;
                std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
                for (std::size_t st = 0; st < m; ++st) {
                    for (std::int64_t k = 0; k < n; ++k) {
                        if ((st >> k) & 1u) {
                            mean[static_cast<std::size_t>(k)] += pi.pmf[st];
                        }
                    }
                }
                for (std::int64_t k = 0; k < n; ++k) {
                    worst_mean = std::max(
                        worst_mean,
                        std::abs(mean[static_cast<std::size_t>(k)] -
                                 mom.m_x[static_cast<std::size_t>(k)]));
                }
                for (std::int64_t k = 0; k < n; ++k) {
                    for (std::int64_t l = 0; l < n; ++l) {
                        double c = 0.0;
                        for (std::size_t st = 0; st < m; ++st) {
                            const double zk = (st >> k) & 1u;
                            const double zl = (st >> l) & 1u;
                            c += pi.pmf[st] *
                                 (zk - mean[static_cast<std::size_t>(k)]) *
                                 (zl - mean[static_cast<std::size_t>(l)]);
                        }
                        worst_cov = std::max(
                            worst_cov,
                            std::abs(c - mom.c_x[static_cast<std::size_t>(k)]
                                             [static_cast<std::size_t>(l)]));
                    }
                }
            }
        }
    }
    s.checks.push_back(Check{"stationary means vs eigenvector oracle",
                             worst_mean <= 1e-8, worst_mean, 1e-8, ""});
    s.checks.push_back(Check{"stationary covariances vs eigenvector oracle",
                             worst_cov <= 1e-8, worst_cov, 1e-8, ""});
    return s;
}

Suite suite_limit(const Options& opts) {
    Suite s{"limit", {}, 0.0};
    const std::int64_t reps = 100000;
    double worst_tv = 0.0, worst_step_tv = 0.0;
    for (const auto& [n, phi, gamma] :
         {std::tuple{std::int64_t{5}, 0.7, 0.6},
          std::tuple{std::int64_t{6}, 0.6, 0.7},
          std::tuple{std::int64_t{3}, 0.55, 0.5}}) {
        const auto pr = validate_params(phi, gamma, n);
        for (const auto& model :
             {LatentModel(IidTheta{0.35}), LatentModel(DeFinettiBeta{2, 2})}) {
            const auto L = limit_truncation(pr);
            const RngStream stream(opts.seed, 5);
            std::vector<double> emp(std::size_t{1} << n, 0.0);
            for (std::int64_t r = 0; r < reps; ++r) {
                const auto x = sample_limit(pr, model, L, stream,
                                            static_cast<std::uint64_t>(r));
                emp[x.index()] += 1.0 / static_cast<double>(reps);
            }
            const auto kernel = oracle::oracle_kernel(model, pr);
            const auto pi = oracle::oracle_stationary(kernel);
            worst_tv = std::max(worst_tv,
                                special::total_variation(emp, pi.pmf));
            // one exact kernel step must leave the empirical law in place
            std::vector<double> stepped(emp.size(), 0.0);
            for (std::size_t x = 0; x < emp.size(); ++x) {
                for (std::size_t y = 0; y < emp.size(); ++y) {
                    stepped[y] += emp[x] * kernel.at(x, y);
                }
            }
            worst_step_tv = std::max(
                worst_step_tv, special::total_variation(emp, stepped));
        }
    }
    s.checks.push_back(Check{"limit sampler vs stationary law (TV, 1e5 draws)",
                             worst_tv <= 0.02, worst_tv, 0.02, ""});
    s.checks.push_back(Check{"one-step invariance of the sampled law (TV)",
                             worst_step_tv <= 0.02, worst_step_tv, 0.02, ""});
    return s;
}

Suite suite_counts(const Options& opts) {
    Suite s{"counts", {}, 0.0};
    const std::int64_t n = 10000;
    const auto pr = validate_params(0.7, 0.6, n);
    const std::int64_t reps = 20000;
    const std::int64_t hx = 6000;  // = n gamma
    std::vector<std::uint64_t> xw(
        static_cast<std::size_t>(HyperState::word_count(n)), 0u);
    for (std::int64_t k = 0; k < hx; ++k) {
        xw[static_cast<std::size_t>(k >> 6)] |= std::uint64_t{1} << (k & 63);
    }
    const HyperState x0(n, xw);
    const std::int64_t n0 = n - hx, n1 = hx;
    double worst_p = 1.0;
    double worst_cov_sigmas = 0.0;
    for (const double theta : {0.2, 0.5, 0.8}) {
        const auto cd = count_distribution(n0, n1, theta, pr);
        const LatentModel model{IidTheta{theta}};
        std::vector<double> hist01(static_cast<std::size_t>(n0 + 1), 0.0);
        std::vector<double> hist11(static_cast<std::size_t>(n1 + 1), 0.0);
        std::vector<double> zeta(static_cast<std::size_t>(reps));
        std::vector<double> n01v(static_cast<std::size_t>(reps));
        std::vector<double> n11v(static_cast<std::size_t>(reps));
        const LatentSampler sampler{};
        for (std::int64_t r = 0; r < reps; ++r) {
            const RngStream stream(opts.seed + static_cast<std::uint64_t>(
                                                   1000.0 * theta),
                                   static_cast<std::uint64_t>(r));
            std::vector<std::uint64_t> zw(xw.size());
            sampler.sample_words(model, n, stream, 1, zw.data());
            const auto y = step(x0, HyperState(n, zw), pr, stream, 1);
            const auto c = transition_counts(x0, y);
            hist01[static_cast<std::size_t>(c.n01)] += 1.0;
            hist11[static_cast<std::size_t>(c.n11)] += 1.0;
            zeta[static_cast<std::size_t>(r)] = static_cast<double>(
                simd::popcount(zw.data(), zw.size()));
            n01v[static_cast<std::size_t>(r)] = static_cast<double>(c.n01);
            n11v[static_cast<std::size_t>(r)] = static_cast<double>(c.n11);
        }
        auto chi2_against = [&](const std::vector<double>& hist,
                                std::int64_t trials, double q) {
            std::vector<double> expected(hist.size());
            for (std::size_t k = 0; k < hist.size(); ++k) {
                expected[k] = static_cast<double>(reps) *
                              special::binomial_pmf(
                                  trials, q, static_cast<std::int64_t>(k));
            }
            return special::chi2_gof(hist, expected).p_value;
        };
        worst_p = std::min(worst_p, chi2_against(hist01, n0, cd.q01));
        worst_p = std::min(worst_p, chi2_against(hist11, n1, cd.q11));

        const auto [cov01_expect, cov11_expect] =
            count_covariances(n0, n1, theta, pr);
        auto cov_check = [&](const std::vector<double>& v, double expect) {
            double mz = 0.0, mv = 0.0;
            for (std::int64_t r = 0; r < reps; ++r) {
                mz += zeta[static_cast<std::size_t>(r)];
                mv += v[static_cast<std::size_t>(r)];
            }
            mz /= static_cast<double>(reps);
            mv /= static_cast<double>(reps);
            double cov = 0.0, var_prod = 0.0;
            for (std::int64_t r = 0; r < reps; ++r) {
                const double p = (zeta[static_cast<std::size_t>(r)] - mz) *
                                 (v[static_cast<std::size_t>(r)] - mv);
                cov += p;
                var_prod += p * p;
            }
            cov /= static_cast<double>(reps);
            var_prod = var_prod / static_cast<double>(reps) - cov * cov;
            const double se =
                std::sqrt(var_prod / static_cast<double>(reps));
            return std::abs(cov - expect) / se;
        };
        worst_cov_sigmas = std::max(worst_cov_sigmas,
                                    cov_check(n01v, cov01_expect));
        worst_cov_sigmas = std::max(worst_cov_sigmas,
                                    cov_check(n11v, cov11_expect));
    }
    s.checks.push_back(Check{"transition counts chi-square (min p over 6 tests)",
                             worst_p > 0.01, worst_p, 0.01,
                             "pass requires p > threshold"});
    s.checks.push_back(Check{"count covariances (max |dev| in s.e. units)",
                             worst_cov_sigmas <= 3.0, worst_cov_sigmas, 3.0,
                             ""});
    return s;
}

Suite suite_clt(const Options& opts) {
    Suite s{"clt", {}, 0.0};
    const std::int64_t n = 10000;
    const auto pr = validate_params(0.7, 0.6, n);
    const double theta = 0.3;
    const std::int64_t reps = 10000;
    const std::int64_t hx = 6050;  // u = 0.5
    const double u = (static_cast<double>(hx) -
                      static_cast<double>(n) * pr.gamma()) /
                     std::sqrt(static_cast<double>(n));
    const auto limit = normal_limit_params(theta, u, pr);
    std::vector<std::uint64_t> xw(
        static_cast<std::size_t>(HyperState::word_count(n)), 0u);
    for (std::int64_t k = 0; k < hx; ++k) {
        xw[static_cast<std::size_t>(k >> 6)] |= std::uint64_t{1} << (k & 63);
    }
    const HyperState x0(n, xw);
    const LatentModel model{IidTheta{theta}};
    const LatentSampler sampler{};
    std::vector<double> v(static_cast<std::size_t>(reps));
    for (std::int64_t r = 0; r < reps; ++r) {
        const RngStream stream(opts.seed + 8, static_cast<std::uint64_t>(r));
        std::vector<std::uint64_t> zw(xw.size());
        sampler.sample_words(model, n, stream, 1, zw.data());
        const auto y = step(x0, HyperState(n, zw), pr, stream, 1);
        v[static_cast<std::size_t>(r)] =
            (static_cast<double>(y.hamming()) -
             static_cast<double>(n) * pr.phi()) /
            std::sqrt(static_cast<double>(n));
    }
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(reps);
    double var = 0.0, m4 = 0.0;
    for (double x : v) {
        var += (x - mean) * (x - mean);
        m4 += std::pow(x - mean, 4.0);
    }
    var /= static_cast<double>(reps - 1);
    m4 /= static_cast<double>(reps);
    const double se_mean = std::sqrt(var / static_cast<double>(reps));
    const double se_var =
        std::sqrt((m4 - var * var) / static_cast<double>(reps));
    const double mean_dev = std::abs(mean - limit.mu) / se_mean;
    const double var_dev = std::abs(var - limit.sigma2) / se_var;
    struct NormArgs {
        static double cdf(double mu, double sd, double x) {
            return special::normal_cdf((x - mu) / sd);
        }
    };
    const double ks = special::ks_distance(v, &NormArgs::cdf, limit.mu,
                                           std::sqrt(limit.sigma2));
    s.checks.push_back(Check{"one-step Hamming mean vs normal limit (s.e.)",
                             mean_dev <= 3.0, mean_dev, 3.0, ""});
    s.checks.push_back(Check{"one-step Hamming variance vs normal limit (s.e.)",
                             var_dev <= 3.0, var_dev, 3.0, ""});
    s.checks.push_back(
        Check{"KS distance to the limit normal", ks <= 0.02, ks, 0.02, ""});
    return s;
}

Suite suite_ar1(const Options& opts) {
    Suite s{"ar1", {}, 0.0};
    const std::int64_t n = 10000;
    const double alpha = 0.6, c = 1.0, theta = 0.5;
    const AsymptoticParams ap{alpha, c};
    const auto pr = ap.at_n(n);
    const std::int64_t burn = 200, T = 2000;
    SimConfig cfg{pr, LatentModel(ExtremePoint{n / 2})};
    cfg.steps = burn + T;
    cfg.seed = opts.seed + 9;
    cfg.keep_states = false;
    const auto res = simulate_replicate(cfg, 0);
    double mean = 0.0, var = 0.0;
    for (std::int64_t t = burn + 1; t <= burn + T; ++t) {
        const double v = (static_cast<double>(
                              res.hamming[static_cast<std::size_t>(t)]) -
                          static_cast<double>(n) * pr.phi()) /
                         std::sqrt(static_cast<double>(n));
        mean += v;
        var += v * v;
    }
    mean /= static_cast<double>(T);
    var = var / static_cast<double>(T) - mean * mean;
    const auto [stat_mean, stat_var] = ar1_stationary(theta, c, alpha);
    const double mean_rel = std::abs(mean - stat_mean) / std::abs(stat_mean);
    const double var_rel = std::abs(var - stat_var) / stat_var;
    s.checks.push_back(Check{"AR(1) long-run mean (relative error)",
                             mean_rel <= 0.05, mean_rel, 0.05,
                             "target " + io::format_double(stat_mean) +
                                 ", measured " + io::format_double(mean)});
    s.checks.push_back(Check{"AR(1) long-run variance (relative error)",
                             var_rel <= 0.05, var_rel, 0.05,
                             "target " + io::format_double(stat_var) +
                                 ", measured " + io::format_double(var)});
    return s;
}

Suite suite_hermite(const Options&) {
    Suite s{"hermite", {}, 0.0};
    const double phi = 0.6, c = 0.3, v_prev = 0.7;
    const double phi0 = 1.0 - 0.5 / phi;  // deterministic Phi
    const double sigma2 = phi * (1.0 - phi);
    const std::int64_t j_max = 40;
    std::vector<double> moments(static_cast<std::size_t>(j_max + 1));
    double p = 1.0;
    for (std::int64_t j = 0; j <= j_max; ++j) {
        moments[static_cast<std::size_t>(j)] = p;
        p *= phi0;
    }
    const double cond_mean = phi0 * (v_prev + c);
    const double cond_var = sigma2 * (1.0 - phi0 * phi0);
    double sup = 0.0;
    const double s4 = 4.0 * std::sqrt(sigma2);
    for (double v = -s4; v <= s4; v += s4 / 50.0) {
        const double series =
            hermite_transition_density(v, v_prev, c, phi, moments, j_max);
        const double closed = special::normal_pdf(v - cond_mean, cond_var);
        sup = std::max(sup, std::abs(series - closed));
    }
    s.checks.push_back(Check{"deterministic-Phi density vs closed normal (sup)",
                             sup <= 1e-6, sup, 1e-6, ""});

    // quadrature normalization, deterministic and Beta-mixed moments
    double worst_norm = 0.0;
    const auto quad = special::gauss_legendre(400);
    auto normalization = [&](const std::vector<double>& mom) {
        const double lo = -10.0 * std::sqrt(sigma2) + cond_mean;
        const double hi = 10.0 * std::sqrt(sigma2) + cond_mean;
        double integral = 0.0;
        for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
            const double v =
                0.5 * (hi - lo) * quad.nodes[i] + 0.5 * (hi + lo);
            integral += 0.5 * (hi - lo) * quad.weights[i] *
                        hermite_transition_density(v, v_prev, c, phi, mom,
                                                   j_max);
        }
        return std::abs(integral - 1.0);
    };
    worst_norm = std::max(worst_norm, normalization(moments));
    worst_norm = std::max(
        worst_norm, normalization(phi_moments_beta(2.0, 2.0, phi, j_max)));
    s.checks.push_back(Check{"density quadrature normalization error",
                             worst_norm <= 1e-6, worst_norm, 1e-6, ""});
    return s;
}

Suite suite_poisson(const Options& opts) {
    Suite s{"poisson", {}, 0.0};
    const std::int64_t n = 2000, m = 3;
    const auto pr = validate_params(0.8, 0.9, n);
    const auto limits = extreme_point_limits(m, n, pr);
    const std::int64_t burn = 2000, samples = 100000, thin = 10;
    SimConfig cfg{pr, LatentModel(ExtremePoint{m})};
    cfg.steps = burn + samples * thin;
    cfg.seed = opts.seed + 11;
    cfg.keep_states = false;
    const auto res = simulate_replicate(cfg, 0);
    const std::int64_t cap = 150;
    std::vector<double> emp(static_cast<std::size_t>(cap + 1), 0.0);
    for (std::int64_t i = 1; i <= samples; ++i) {
        const auto h = res.hamming[static_cast<std::size_t>(burn + i * thin)];
        emp[static_cast<std::size_t>(std::min(h, cap))] +=
            1.0 / static_cast<double>(samples);
    }
    std::vector<double> pois(static_cast<std::size_t>(cap + 1), 0.0);
    for (std::int64_t k = 0; k <= cap; ++k) {
        pois[static_cast<std::size_t>(k)] =
            special::poisson_pmf(limits.poisson_rate, k);
    }
    const double tv = special::total_variation(emp, pois);
    s.checks.push_back(
        Check{"stationary Hamming law vs Poisson(" +
                  io::format_double(limits.poisson_rate) + ") (TV)",
              tv <= 0.05, tv, 0.05,
              std::to_string(samples) + " post-burn-in samples"});
    return s;
}

Suite suite_estimation(const Options& opts) {
    Suite s{"estimation", {}, 0.0};
    const double a = 2.0, b = 2.0;
    struct Scale {
        std::int64_t n, T;
        bool check_ks;
        const char* label;
    };
    for (const Scale sc : {Scale{1000, 5000, true, "paper"},
                           Scale{500, 500, false, "fast"}}) {
        const auto pr = validate_params(0.7, 0.6, sc.n);
        SimConfig cfg{pr, LatentModel(DeFinettiBeta{a, b})};
        cfg.steps = sc.T;
        cfg.seed = opts.seed + 12;
        cfg.initial = InitialState::limit_law();
        const auto res = simulate_replicate(cfg, 0);
        const auto stats = path_stats(res.path);
        const auto pg = estimate_phi_gamma(stats);
        const double phi_err = std::abs(pg.phi_hat - pr.phi());
        const double gamma_err = std::abs(pg.gamma_hat - pr.gamma());
        s.checks.push_back(Check{std::string("phi estimate (") + sc.label +
                                     " scale)",
                                 phi_err <= 0.01, phi_err, 0.01,
                                 "phi_hat = " + io::format_double(pg.phi_hat)});
        s.checks.push_back(
            Check{std::string("gamma estimate (") + sc.label + " scale)",
                  gamma_err <= 0.01, gamma_err, 0.01,
                  "gamma_hat = " + io::format_double(pg.gamma_hat)});
        if (sc.check_ks) {
            std::vector<ThetaEstimate> thetas;
            for (std::size_t t = 0; t < stats.counts.size(); ++t) {
                auto est = estimate_theta(stats.counts[t], pg.phi_hat,
                                          pg.gamma_hat);
                est.t = static_cast<std::int64_t>(t + 1);
                thetas.push_back(est);
            }
            const auto summary = theta_distribution_summary(
                thetas, BetaRef{a, b});
            s.checks.push_back(Check{
                "per-transition theta law vs generating Beta (KS)",
                summary.ks_distance.value() <= 0.05,
                summary.ks_distance.value(), 0.05,
                std::to_string(summary.used) + " converged estimates"});
        }
    }
    return s;
}

Suite suite_determinism(const Options& opts) {
    Suite s{"determinism", {}, 0.0};
    SimConfig cfg{validate_params(0.7, 0.6, 257),
                  LatentModel(DeFinettiBeta{2, 2})};
    cfg.steps = 50;
    cfg.replicates = 8;
    cfg.seed = opts.seed + 13;
    cfg.log_latent = true;
    auto render = [&](int threads) {
        std::string out;
        for (const auto& r : simulate_ensemble(cfg, threads)) {
            out += io::path_to_text(r.path);
            out += io::latent_log_csv(r.latent_log);
        }
        return out;
    };
    const std::string t1 = render(1);
    const std::string t4 = render(4);
    const bool same = (t1 == t4);
    s.checks.push_back(Check{"byte-identical output across thread counts",
                             same, same ? 0.0 : 1.0, 0.0,
                             "8 replicates, --threads 1 vs 4"});
    // same seed twice must reproduce exactly
    const bool repeat = (render(2) == t1);
    s.checks.push_back(Check{"byte-identical output across repeated runs",
                             repeat, repeat ? 0.0 : 1.0, 0.0, ""});
    return s;
}

using SuiteFn = Suite (*)(const Options&);
const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> reg = {
        {"kernel", suite_kernel},
        {"reversibility", suite_reversibility},
        {"lumping", suite_lumping},
        {"zlaw", suite_zlaw},
        {"moments", suite_moments},
        {"limit", suite_limit},
        {"counts", suite_counts},
        {"clt", suite_clt},
        {"ar1", suite_ar1},
        {"hermite", suite_hermite},
        {"poisson", suite_poisson},
        {"estimation", suite_estimation},
        {"determinism", suite_determinism},
    };
    return reg;
}

}  // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

Suite run_suite(const std::string& name, const Options& opts) {
    for (const auto& [n, fn] : registry()) {
        if (n == name) {
            const auto start = std::chrono::steady_clock::now();
            Suite s = fn(opts);
            s.seconds =
                std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
            return s;
        }
    }
    throw error("unknown verification suite: " + name);
}

std::vector<Suite> run_all(const Options& opts) {
    std::vector<Suite> out;
    for (const auto& [name, fn] : registry()) {
        out.push_back(run_suite(name, opts));
    }
    return out;
}

std::string report_text(const std::vector<Suite>& suites) {
    std::string out;
    for (const auto& s : suites) {
        for (const auto& c : s.checks) {
            out += c.pass ? "PASS" : "FAIL";
            out += "  [" + s.name + "] " + c.name + "  measured=" +
                   io::format_double(c.measured) +
                   " threshold=" + io::format_double(c.threshold);
            if (!c.note.empty()) out += "  (" + c.note + ")";
            out += '\n';
        }
    }
    return out;
}

std::string report_json(const std::vector<Suite>& suites) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : suites) {
        nlohmann::json js;
        js["suite"] = s.name;
        js["seconds"] = s.seconds;
        js["pass"] = s.pass();
        js["checks"] = nlohmann::json::array();
        for (const auto& c : s.checks) {
            js["checks"].push_back({{"name", c.name},
                                    {"pass", c.pass},
                                    {"measured", c.measured},
                                    {"threshold", c.threshold},
                                    {"note", c.note}});
        }
        j.push_back(js);
    }
    return j.dump(2);
}

}  // namespace hyperwalk::verify
