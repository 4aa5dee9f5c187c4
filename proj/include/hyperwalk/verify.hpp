#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hyperwalk::verify {

// Named verification batteries, one per acceptance-style claim.  Each check
// reports the measured deviation (or statistic) next to its threshold so a
// failure is diagnosable from the report alone.

struct Check {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string note;
};

struct Suite {
    std::string name;
    std::vector<Check> checks;
    double seconds = 0.0;

    bool pass() const {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
};

struct Options {
    int threads = 1;
    std::uint64_t seed = 20260810;
    // test hook: multiplicative perturbation of the size-1 eigenvalues before
    // the reversibility battery; nonzero values must make it fail
    double kappa_perturbation = 0.0;
};

std::vector<std::string> suite_names();
Suite run_suite(const std::string& name, const Options& opts = {});
std::vector<Suite> run_all(const Options& opts = {});

std::string report_text(const std::vector<Suite>& suites);
std::string report_json(const std::vector<Suite>& suites);

}  // namespace hyperwalk::verify
