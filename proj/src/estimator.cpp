#include "hyperwalk/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperwalk/errors.hpp"
#include "hyperwalk/special.hpp"

namespace hyperwalk {

namespace {

struct ScoreCoefs {
    double c0, c1;
};

ScoreCoefs score_coefs(double phi, double gamma) {
    if (phi <= gamma) return {1.0, (1.0 - gamma) / gamma};
    return {(1.0 - phi) / (1.0 - gamma), (1.0 - phi) / gamma};
}

// p_0(theta) = P(y=0 | x=0), p_1(theta) = P(y=0 | x=1)
double p0_of_theta(double theta, double phi, double gamma) {
    if (phi <= gamma) return 1.0 - theta;
    return (1.0 - phi) / (1.0 - gamma) * (1.0 - theta);
}

double p1_of_theta(double theta, double phi, double gamma) {
    if (phi <= gamma) return 1.0 - phi / gamma + theta * (1.0 - gamma) / gamma;
    return (1.0 - phi) / gamma * theta;
}

double score(double theta, const TransitionCounts& c, double phi,
             double gamma) {
    const auto [c0, c1] = score_coefs(phi, gamma);
    const double p0 = p0_of_theta(theta, phi, gamma);
    const double p1 = p1_of_theta(theta, phi, gamma);
    double s = 0.0;
    if (c.n00 > 0) s -= c0 * static_cast<double>(c.n00) / p0;
    if (c.n01 > 0) s += c0 * static_cast<double>(c.n01) / (1.0 - p0);
    if (c.n10 > 0) s += c1 * static_cast<double>(c.n10) / p1;
    if (c.n11 > 0) s -= c1 * static_cast<double>(c.n11) / (1.0 - p1);
    return s;
}

double loglik(double theta, const TransitionCounts& c, double phi,
              double gamma) {
    const double p0 = p0_of_theta(theta, phi, gamma);
    const double p1 = p1_of_theta(theta, phi, gamma);
    auto term = [](std::int64_t k, double p) {
        if (k == 0) return 0.0;
        if (p <= 0.0) return -std::numeric_limits<double>::infinity();
        return static_cast<double>(k) * std::log(p);
    };
    return term(c.n00, p0) + term(c.n01, 1.0 - p0) + term(c.n10, p1) +
           term(c.n11, 1.0 - p1);
}

}  // namespace

PathStats path_stats(const SamplePath& path) {
    if (path.steps() < 1) {
        throw error("path statistics need at least one transition");
    }
    PathStats st;
    st.n = path.n();
    const std::int64_t T = path.steps();
    st.counts.reserve(static_cast<std::size_t>(T));
    st.p01.reserve(static_cast<std::size_t>(T));
    st.p11.reserve(static_cast<std::size_t>(T));
    st.d.reserve(static_cast<std::size_t>(T));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double s01 = 0.0, s11 = 0.0, sd = 0.0;
    for (std::int64_t t = 1; t <= T; ++t) {
        const auto c = transition_counts(path.at(t - 1), path.at(t));
        st.counts.push_back(c);
        if (c.from_zero() == 0 || c.from_one() == 0) {
            st.degenerate.push_back(t);
            st.p01.push_back(nan);
            st.p11.push_back(nan);
            st.d.push_back(nan);
            continue;
        }
        const double p01 =
            static_cast<double>(c.n01) / static_cast<double>(c.from_zero());
        const double p11 =
            static_cast<double>(c.n11) / static_cast<double>(c.from_one());
        st.p01.push_back(p01);
        st.p11.push_back(p11);
        st.d.push_back(p01 - p11);
        s01 += p01;
        s11 += p11;
        sd += p01 - p11;
        ++st.usable;
    }
    if (st.usable > 0) {
        st.p01_mean = s01 / static_cast<double>(st.usable);
        st.p11_mean = s11 / static_cast<double>(st.usable);
        st.d_mean = sd / static_cast<double>(st.usable);
    }
    return st;
}

PhiGammaEstimate estimate_phi_gamma(const PathStats& st) {
    if (st.usable < 2) {
        throw error("least squares needs at least two usable transitions");
    }
    PhiGammaEstimate out{};
    out.excluded = static_cast<std::int64_t>(st.degenerate.size());
    double sdd = 0.0, sdp = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < st.d.size(); ++i) {
        if (std::isnan(st.d[i])) continue;
        const double dd = st.d[i] - st.d_mean;
        sdd += dd * dd;
        sdp += dd * (st.p01[i] - st.p01_mean);
        scale += st.d[i] * st.d[i];
    }
    // roundoff in d - d_mean must not masquerade as variation
    if (sdd > 1e-24 * std::max(1.0, scale)) {
        out.gamma_hat = sdp / sdd;
        out.phi_hat = st.p01_mean - out.gamma_hat * st.d_mean;
        out.pooled = false;
    } else {
        // no variation in d: the phi == gamma minimizer
        out.phi_hat = st.p01_mean / (1.0 + st.d_mean);
        out.gamma_hat = out.phi_hat;
        out.pooled = true;
    }
    out.phi_hat = std::clamp(out.phi_hat, 0.0, 1.0);
    out.gamma_hat = std::clamp(out.gamma_hat, 0.0, 1.0);
    out.admissible = (out.phi_hat + out.gamma_hat >= 1.0);
    return out;
}

ThetaEstimate estimate_theta(const TransitionCounts& c, double phi,
                             double gamma) {
    if (c.total() == 0) {
        throw all_zero_counts_error("empty transition counts");
    }
    if (c.from_zero() == 0 && c.from_one() == 0) {
        throw all_zero_counts_error("no observed coordinates in transition");
    }
    ThetaEstimate out;
    constexpr double lo_edge = 1e-9;
    constexpr double hi_edge = 1.0 - 1e-9;
    double lo = lo_edge, hi = hi_edge;
    const double slo = score(lo, c, phi, gamma);
    const double shi = score(hi, c, phi, gamma);
    // log-likelihood is concave in theta, so the score decreases; equal signs
    // at both edges mean the maximizer sits on the boundary
    if (slo <= 0.0 && shi <= 0.0) {
        out.theta_hat = lo_edge;
        out.converged = false;
        out.score = slo;
        out.loglik = loglik(lo_edge, c, phi, gamma);
        return out;
    }
    if (slo >= 0.0 && shi >= 0.0) {
        out.theta_hat = hi_edge;
        out.converged = false;
        out.score = shi;
        out.loglik = loglik(hi_edge, c, phi, gamma);
        return out;
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double sm = score(mid, c, phi, gamma);
        if ((sm > 0.0) == (slo > 0.0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.theta_hat = 0.5 * (lo + hi);
    out.score = score(out.theta_hat, c, phi, gamma);
    out.loglik = loglik(out.theta_hat, c, phi, gamma);
    out.converged = true;
    return out;
}

ThetaSummary theta_distribution_summary(const std::vector<ThetaEstimate>& estimates,
                                        std::optional<BetaRef> reference,
                                        std::int64_t bins) {
    std::vector<double> vals;
    vals.reserve(estimates.size());
    for (const auto& e : estimates) {
        if (e.converged) vals.push_back(e.theta_hat);
    }
    if (vals.size() < 30) {
        throw too_few_estimates_error(
            "need at least 30 converged estimates for a summary");
    }
    ThetaSummary out;
    out.used = static_cast<std::int64_t>(vals.size());
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(vals.size() - 1);
    out.mean = mean;
    out.variance = var;

    out.histogram.reserve(static_cast<std::size_t>(bins));
    const double width = 1.0 / static_cast<double>(bins);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
    for (double v : vals) {
        auto b = static_cast<std::int64_t>(v / width);
        b = std::clamp<std::int64_t>(b, 0, bins - 1);
        ++counts[static_cast<std::size_t>(b)];
    }
    for (std::int64_t b = 0; b < bins; ++b) {
        HistogramBin hb;
        hb.lo = width * static_cast<double>(b);
        hb.hi = width * static_cast<double>(b + 1);
        hb.count = counts[static_cast<std::size_t>(b)];
        hb.density = static_cast<double>(hb.count) /
                     (static_cast<double>(vals.size()) * width);
        out.histogram.push_back(hb);
    }
    if (reference) {
        out.ks_distance = special::ks_distance(
            vals,
            [](double a, double b, double x) {
                return special::beta_cdf(a, b, x);
            },
            reference->a, reference->b);
    }
    return out;
}

}  // namespace hyperwalk
