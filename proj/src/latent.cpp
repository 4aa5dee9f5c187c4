#include "hyperwalk/latent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hyperwalk/errors.hpp"
#include "hyperwalk/simd/kernels.hpp"
#include "hyperwalk/special.hpp"

namespace hyperwalk {

namespace {
constexpr std::int64_t kExplicitMaxN = 20;
constexpr double kPmfTolerance = 1e-12;

std::int64_t explicit_dim(const ExplicitPmf& e) {
    if (e.n < 1 || e.n > kExplicitMaxN) {
        throw dimension_mismatch_error("explicit pmf supports 1 <= n <= 20");
    }
    if (e.pmf.size() != (std::size_t{1} << e.n)) {
        throw dimension_mismatch_error("explicit pmf table must have 2^n entries");
    }
    return e.n;
}
}  // namespace

LatentModel::LatentModel(Variant v) : v_(std::move(v)) {
    if (const auto* e = std::get_if<ExplicitPmf>(&v_)) {
        explicit_dim(*e);
        double sum = 0.0;
        for (double p : e->pmf) {
            if (p < 0.0) throw error("explicit pmf has negative mass");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kPmfTolerance) {
            throw error("explicit pmf must sum to 1 within 1e-12");
        }
        cumulative_.resize(e->pmf.size());
        std::partial_sum(e->pmf.begin(), e->pmf.end(), cumulative_.begin());
    } else if (const auto* i = std::get_if<IidTheta>(&v_)) {
        if (!(i->theta >= 0.0 && i->theta <= 1.0)) {
            throw error("theta must lie in [0,1]");
        }
    } else if (const auto* d = std::get_if<DeFinettiBeta>(&v_)) {
        if (!(d->a > 0.0 && d->b > 0.0)) {
            throw error("Beta parameters must be positive");
        }
    } else if (const auto* g = std::get_if<DeFinettiGrid>(&v_)) {
        if (g->thetas.empty() || g->thetas.size() != g->weights.size()) {
            throw error("grid mixing measure needs matching thetas/weights");
        }
        double sum = 0.0;
        for (double w : g->weights) {
            if (w < 0.0) throw error("grid weights must be nonnegative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > kPmfTolerance) {
            throw error("grid mixing weights must sum to 1 within 1e-12");
        }
        for (double th : g->thetas) {
            if (!(th >= 0.0 && th <= 1.0)) throw error("grid theta outside [0,1]");
        }
        cumulative_.resize(g->weights.size());
        std::partial_sum(g->weights.begin(), g->weights.end(),
                         cumulative_.begin());
    } else if (const auto* x = std::get_if<ExtremePoint>(&v_)) {
        if (x->m < 0) throw error("extreme-point weight must be nonnegative");
    }
}

bool LatentModel::exchangeable() const {
    return !std::holds_alternative<ExplicitPmf>(v_);
}

std::optional<std::int64_t> LatentModel::fixed_n() const {
    if (const auto* e = std::get_if<ExplicitPmf>(&v_)) return e->n;
    return std::nullopt;
}

void LatentModel::check_dimension(std::int64_t n) const {
    if (auto fn = fixed_n(); fn && *fn != n) {
        throw dimension_mismatch_error("latent model dimension mismatch");
    }
    if (const auto* x = std::get_if<ExtremePoint>(&v_)) {
        if (x->m > n) {
            throw dimension_mismatch_error(
                "extreme-point weight exceeds dimension");
        }
    }
}

std::string LatentModel::describe() const {
    if (const auto* e = std::get_if<ExplicitPmf>(&v_)) {
        return "explicit(n=" + std::to_string(e->n) + ")";
    }
    if (const auto* i = std::get_if<IidTheta>(&v_)) {
        return "iid(theta=" + std::to_string(i->theta) + ")";
    }
    if (const auto* d = std::get_if<DeFinettiBeta>(&v_)) {
        return "definetti(Beta(" + std::to_string(d->a) + "," +
               std::to_string(d->b) + "))";
    }
    if (std::holds_alternative<DeFinettiGrid>(v_)) return "definetti(grid)";
    const auto& x = std::get<ExtremePoint>(v_);
    return "extreme(m=" + std::to_string(x.m) + ")";
}

std::optional<ThetaDraw> LatentSampler::sample_words(
    const LatentModel& model, std::int64_t n, const RngStream& stream,
    std::uint64_t t, std::uint64_t* words) const {
    model.check_dimension(n);
    const auto nwords = static_cast<std::size_t>(HyperState::word_count(n));
    std::fill(words, words + nwords, 0u);
    if (const auto* i = model.get_if<IidTheta>()) {
        simd::bernoulli_mask(stream.key(), coord_purpose, t, n, i->theta,
                             words);
        return std::nullopt;
    }
    if (const auto* d = model.get_if<DeFinettiBeta>()) {
        auto cur = stream.cursor(scalar_purpose, t);
        const double theta = cur.beta(d->a, d->b);
        simd::bernoulli_mask(stream.key(), coord_purpose, t, n, theta, words);
        return ThetaDraw{theta, "beta"};
    }
    if (const auto* g = model.get_if<DeFinettiGrid>()) {
        auto cur = stream.cursor(scalar_purpose, t);
        const double u = cur.uniform();
        const auto& cum = model.cumulative_;
        const auto it = std::lower_bound(cum.begin(), cum.end(), u);
        const auto idx = static_cast<std::size_t>(
            std::min<std::ptrdiff_t>(it - cum.begin(),
                                     static_cast<std::ptrdiff_t>(cum.size()) - 1));
        const double theta = g->thetas[idx];
        simd::bernoulli_mask(stream.key(), coord_purpose, t, n, theta, words);
        return ThetaDraw{theta, "grid"};
    }
    if (const auto* x = model.get_if<ExtremePoint>()) {
        // partial Fisher-Yates over the index range
        auto cur = stream.cursor(scalar_purpose, t);
        std::vector<std::int64_t> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), std::int64_t{0});
        for (std::int64_t j = 0; j < x->m; ++j) {
            const auto pick = j + static_cast<std::int64_t>(cur.uniform_below(
                                      static_cast<std::uint64_t>(n - j)));
            std::swap(idx[static_cast<std::size_t>(j)],
                      idx[static_cast<std::size_t>(pick)]);
            const auto k = idx[static_cast<std::size_t>(j)];
            words[k >> 6] |= std::uint64_t{1} << (k & 63);
        }
        return std::nullopt;
    }
    const auto& e = std::get<ExplicitPmf>(model.variant());
    auto cur = stream.cursor(scalar_purpose, t);
    const double u = cur.uniform();
    const auto& cum = model.cumulative_;
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    const auto state = static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cum.begin(),
                                 static_cast<std::ptrdiff_t>(cum.size()) - 1));
    words[0] = state;
    (void)e;
    return std::nullopt;
}

ZDraw LatentSampler::sample(const LatentModel& model, std::int64_t n,
                            const RngStream& stream, std::uint64_t t) const {
    std::vector<std::uint64_t> words(
        static_cast<std::size_t>(HyperState::word_count(n)), 0u);
    auto theta = sample_words(model, n, stream, t, words.data());
    return ZDraw{HyperState(n, std::move(words)), std::move(theta)};
}

ZDraw sample_z(const LatentModel& model, std::int64_t n,
               const RngStream& stream, std::uint64_t t) {
    return LatentSampler{}.sample(model, n, stream, t);
}

std::vector<double> hamming_pmf(const LatentModel& model, std::int64_t n) {
    model.check_dimension(n);
    std::vector<double> pmf(static_cast<std::size_t>(n + 1), 0.0);
    if (const auto* i = model.get_if<IidTheta>()) {
        for (std::int64_t m = 0; m <= n; ++m) {
            pmf[static_cast<std::size_t>(m)] =
                special::binomial_pmf(n, i->theta, m);
        }
        return pmf;
    }
    if (const auto* d = model.get_if<DeFinettiBeta>()) {
        // Beta-Binomial(n, a, b)
        for (std::int64_t m = 0; m <= n; ++m) {
            const double lg =
                special::log_binomial_coef(n, m) +
                std::lgamma(d->a + static_cast<double>(m)) +
                std::lgamma(d->b + static_cast<double>(n - m)) -
                std::lgamma(d->a + d->b + static_cast<double>(n)) +
                std::lgamma(d->a + d->b) - std::lgamma(d->a) -
                std::lgamma(d->b);
            pmf[static_cast<std::size_t>(m)] = std::exp(lg);
        }
        return pmf;
    }
    if (const auto* g = model.get_if<DeFinettiGrid>()) {
        for (std::size_t i = 0; i < g->thetas.size(); ++i) {
            for (std::int64_t m = 0; m <= n; ++m) {
                pmf[static_cast<std::size_t>(m)] +=
                    g->weights[i] * special::binomial_pmf(n, g->thetas[i], m);
            }
        }
        return pmf;
    }
    if (const auto* x = model.get_if<ExtremePoint>()) {
        pmf[static_cast<std::size_t>(x->m)] = 1.0;
        return pmf;
    }
    const auto& e = std::get<ExplicitPmf>(model.variant());
    for (std::size_t s = 0; s < e.pmf.size(); ++s) {
        pmf[static_cast<std::size_t>(std::popcount(s))] += e.pmf[s];
    }
    return pmf;
}

LatentMoments latent_moments(const LatentModel& model, std::int64_t n) {
    model.check_dimension(n);
    LatentMoments mom;
    mom.mean.assign(static_cast<std::size_t>(n), 0.0);
    mom.cov.assign(static_cast<std::size_t>(n),
                   std::vector<double>(static_cast<std::size_t>(n), 0.0));
    auto fill_exchangeable = [&](double m1, double pair) {
        // m1 = E[Z_k], pair = E[Z_k Z_l] for k != l
        for (std::int64_t k = 0; k < n; ++k) {
            mom.mean[static_cast<std::size_t>(k)] = m1;
            for (std::int64_t l = 0; l < n; ++l) {
                mom.cov[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
                    (k == l) ? m1 * (1.0 - m1) : pair - m1 * m1;
            }
        }
    };
    if (const auto* i = model.get_if<IidTheta>()) {
        fill_exchangeable(i->theta, i->theta * i->theta);
        return mom;
    }
    if (const auto* d = model.get_if<DeFinettiBeta>()) {
        const double m1 = d->a / (d->a + d->b);
        const double m2 =
            d->a * (d->a + 1.0) / ((d->a + d->b) * (d->a + d->b + 1.0));
        fill_exchangeable(m1, m2);
        return mom;
    }
    if (const auto* g = model.get_if<DeFinettiGrid>()) {
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < g->thetas.size(); ++i) {
            m1 += g->weights[i] * g->thetas[i];
            m2 += g->weights[i] * g->thetas[i] * g->thetas[i];
        }
        fill_exchangeable(m1, m2);
        return mom;
    }
    if (const auto* x = model.get_if<ExtremePoint>()) {
        const double m1 = static_cast<double>(x->m) / static_cast<double>(n);
        const double pair =
            (n > 1) ? static_cast<double>(x->m) * static_cast<double>(x->m - 1) /
                          (static_cast<double>(n) * static_cast<double>(n - 1))
                    : m1;
        fill_exchangeable(m1, pair);
        return mom;
    }
    const auto& e = std::get<ExplicitPmf>(model.variant());
    if (n > 12) throw too_large_error("explicit latent moments support n <= 12");
    for (std::size_t s = 0; s < e.pmf.size(); ++s) {
        for (std::int64_t k = 0; k < n; ++k) {
            if (!((s >> k) & 1u)) continue;
            mom.mean[static_cast<std::size_t>(k)] += e.pmf[s];
            for (std::int64_t l = 0; l < n; ++l) {
                if ((s >> l) & 1u) {
                    mom.cov[static_cast<std::size_t>(k)]
                           [static_cast<std::size_t>(l)] += e.pmf[s];
                }
            }
        }
    }
    for (std::int64_t k = 0; k < n; ++k) {
        for (std::int64_t l = 0; l < n; ++l) {
            mom.cov[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] -=
                mom.mean[static_cast<std::size_t>(k)] *
                mom.mean[static_cast<std::size_t>(l)];
        }
    }
    return mom;
}

double latent_theta_mean(const LatentModel& model, std::int64_t n) {
    model.check_dimension(n);
    if (const auto* i = model.get_if<IidTheta>()) return i->theta;
    if (const auto* d = model.get_if<DeFinettiBeta>()) {
        return d->a / (d->a + d->b);
    }
    if (const auto* g = model.get_if<DeFinettiGrid>()) {
        double m = 0.0;
        for (std::size_t i = 0; i < g->thetas.size(); ++i) {
            m += g->weights[i] * g->thetas[i];
        }
        return m;
    }
    if (const auto* x = model.get_if<ExtremePoint>()) {
        return static_cast<double>(x->m) / static_cast<double>(n);
    }
    // explicit: average coordinate mean
    const auto mom = latent_moments(model, n);
    double m = 0.0;
    for (double v : mom.mean) m += v;
    return m / static_cast<double>(n);
}

}  // namespace hyperwalk
