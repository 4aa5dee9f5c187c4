#include "hyperwalk/params.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

namespace hyperwalk {

namespace {
std::atomic<std::int64_t> g_max_n{std::int64_t{1} << 20};
}

std::int64_t ModelParams::max_n() { return g_max_n.load(); }
void ModelParams::set_max_n(std::int64_t n) { g_max_n.store(n); }

ModelParams::ModelParams(double phi, double gamma, std::int64_t n)
    : phi_(phi), gamma_(gamma), n_(n) {
    if (!(phi >= 0.0 && phi <= 1.0) || !(gamma >= 0.0 && gamma <= 1.0) ||
        std::isnan(phi) || std::isnan(gamma)) {
        throw param_domain_error("phi and gamma must lie in [0,1]");
    }
    if (n < 1) throw param_domain_error("n must be a positive integer");
    if (n > max_n()) {
        throw param_domain_error("n exceeds the configured maximum of " +
                                 std::to_string(max_n()));
    }
    if (phi + gamma < 1.0) {
        throw param_domain_error(
            "phi + gamma < 1 is outside the supported family; swap the roles "
            "of the symbols 0 and 1 in your data (phi -> 1-phi, gamma -> "
            "1-gamma) and re-validate");
    }
    if (gamma == 0.0) {
        throw param_degenerate_error("gamma = 0 makes the kernel undefined");
    }
    if (phi == 1.0 && gamma == 1.0) {
        throw param_degenerate_error(
            "phi = gamma = 1 leaves alpha/(1-alpha) undefined");
    }
    // The phi <= gamma comparison is made exactly on the stored doubles: the
    // two psi branches agree algebraically at phi == gamma.
    alpha_ = std::min(phi, gamma);
    psi_ = (phi <= gamma) ? phi / gamma : (1.0 - phi) / (1.0 - gamma);
    boundary_ = (phi == 0.0 || phi == 1.0 || gamma == 1.0);
}

ModelParams validate_params(double phi, double gamma, std::int64_t n) {
    return ModelParams(phi, gamma, n);
}

KappaRange kappa_range(double phi, double gamma) {
    const double alpha = std::min(phi, gamma);
    const double hi = alpha / (1.0 - alpha);
    double lo = -1.0;
    if (phi + gamma < 1.0) {
        lo = -(phi * gamma) / ((1.0 - phi) * (1.0 - gamma));
    }
    return {lo, hi};
}

}  // namespace hyperwalk
