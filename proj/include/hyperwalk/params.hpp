#pragma once

#include <cstdint>
#include <utility>

#include "hyperwalk/errors.hpp"

namespace hyperwalk {

// Model parameters (phi, gamma, n) with the derived quantities used all over
// the library: alpha = min(phi, gamma) and the contraction ratio
// psi = phi/gamma when phi <= gamma, (1-phi)/(1-gamma) otherwise.
//
// Construction enforces phi + gamma >= 1.  Chains with phi + gamma < 1 are
// the same family after relabelling 0 <-> 1, so instead of silently flipping
// the caller's data semantics we reject with guidance.
class ModelParams {
  public:
    ModelParams(double phi, double gamma, std::int64_t n);

    double phi() const { return phi_; }
    double gamma() const { return gamma_; }
    std::int64_t n() const { return n_; }
    double alpha() const { return alpha_; }
    double psi() const { return psi_; }

    double phi_bar() const { return 1.0 - phi_; }
    double gamma_bar() const { return 1.0 - gamma_; }
    double alpha_bar() const { return 1.0 - alpha_; }

    // phi or gamma sitting exactly on {0,1}; several closed forms divide by
    // phi, gamma or alpha_bar and need the caller to special-case these.
    bool boundary_mode() const { return boundary_; }

    // Largest n accepted by the packed-state machinery (default 2^20).
    static std::int64_t max_n();
    static void set_max_n(std::int64_t n);

  private:
    double phi_;
    double gamma_;
    std::int64_t n_;
    double alpha_;
    double psi_;
    bool boundary_;
};

ModelParams validate_params(double phi, double gamma, std::int64_t n);

// Admissible kappa interval for the single-coordinate kernel
//   p_xy = phi_y { 1 + kappa (1 - x/gamma)(1 - y/phi) }.
// [-1, alpha/alpha_bar] when phi + gamma >= 1, otherwise
// [-phi*gamma/(phi_bar*gamma_bar), alpha/alpha_bar].  Standalone query: it
// accepts phi + gamma < 1, unlike validate_params.
struct KappaRange {
    double lo;
    double hi;
    bool contains(double kappa) const { return kappa >= lo && kappa <= hi; }
};

KappaRange kappa_range(double phi, double gamma);

}  // namespace hyperwalk
