#pragma once

#include <stdexcept>
#include <string>

namespace hyperwalk {

// Every library error derives from error; specific types let callers and the
// CLI map failures to distinct exit codes.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct param_domain_error : error { using error::error; };
struct param_degenerate_error : error { using error::error; };
struct length_mismatch_error : error { using error::error; };
struct dimension_mismatch_error : error { using error::error; };
struct alpha_degenerate_error : error { using error::error; };
struct non_stochastic_error : error { using error::error; };
struct kappa_out_of_range_error : error { using error::error; };
struct invalid_counts_error : error { using error::error; };
struct not_realizable_error : error { using error::error; };
struct not_lumpable_error : error { using error::error; };
struct reducible_error : error { using error::error; };
struct too_large_error : error { using error::error; };
struct boundary_error : error { using error::error; };
struct theta_boundary_error : error { using error::error; };
struct all_zero_counts_error : error { using error::error; };
struct no_variation_error : error { using error::error; };
struct degenerate_transition_error : error { using error::error; };
struct too_few_estimates_error : error { using error::error; };
struct config_error : error { using error::error; };
struct io_error : error { using error::error; };

}  // namespace hyperwalk
