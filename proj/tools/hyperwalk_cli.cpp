// hyperwalk: kernels, simulation, limit laws and estimation for long-range
// Bernoulli-autoregressive random walks on the hypercube.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperwalk/asymptotics.hpp"
#include "hyperwalk/errors.hpp"
#include "hyperwalk/estimator.hpp"
#include "hyperwalk/io.hpp"
#include "hyperwalk/kernel.hpp"
#include "hyperwalk/oracle.hpp"
#include "hyperwalk/simulator.hpp"
#include "hyperwalk/verify.hpp"

namespace {

constexpr const char* kVersion = "hyperwalk 1.0.0";

// exit codes: 0 ok, 2 config, 3 io, 4 model domain, 5 verification failed
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitDomain = 4;
constexpr int kExitVerify = 5;

int default_threads() {
    if (const char* env = std::getenv("HYPERWALK_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

hyperwalk::io::RunManifest make_manifest(const std::string& command,
                                         std::uint64_t seed,
                                         const std::string& config_text) {
    hyperwalk::io::RunManifest m;
    m.command = command;
    m.version = kVersion;
    m.seed = seed;
    m.config_digest = hyperwalk::io::fnv1a64_hex(config_text);
    m.started = hyperwalk::io::iso8601_now();
    return m;
}

void emit(hyperwalk::io::RunManifest& manifest, const std::string& path,
          const std::string& contents) {
    hyperwalk::io::write_text_file(path, contents);
    manifest.add_output(path, contents);
}

void finish_manifest(hyperwalk::io::RunManifest& manifest,
                     const std::string& prefix) {
    manifest.finished = hyperwalk::io::iso8601_now();
    hyperwalk::io::write_text_file(prefix + "_manifest.json",
                                   manifest.to_json());
}

int cmd_kernel(const std::string& config_file, const std::string& mode,
               const std::string& prefix, bool verify_against_oracle) {
    using namespace hyperwalk;
    const std::string text = io::read_text_file(config_file);
    const SimConfig cfg = io::sim_config_from_json_text(text);
    auto manifest = make_manifest("kernel", cfg.seed, text);
    const auto spectrum = spectrum_from_latent(cfg.latent, cfg.params);
    emit(manifest, prefix + "_spectrum.json", io::spectrum_json(spectrum));
    if (mode == "full") {
        const auto kernel = full_kernel(spectrum);
        emit(manifest, prefix + "_kernel.csv", io::dense_kernel_csv(kernel));
        if (verify_against_oracle) {
            const auto brute = oracle::oracle_kernel(cfg.latent, cfg.params);
            double sup = 0.0;
            for (std::size_t i = 0; i < kernel.data().size(); ++i) {
                sup = std::max(sup,
                               std::abs(kernel.data()[i] - brute.data()[i]));
            }
            std::cout << "oracle sup deviation: " << io::format_double(sup)
                      << "\n";
            if (sup > 1e-10) {
                std::cerr << "verification failed: kernel deviates from the "
                             "constructive oracle\n";
                return kExitVerify;
            }
        }
    } else if (mode == "hamming") {
        if (spectrum.mode() != KernelSpectrum::Mode::exchangeable) {
            throw config_error(
                "hamming mode needs an exchangeable latent model");
        }
        const auto hk = hamming_kernel(spectrum);
        emit(manifest, prefix + "_hamming.csv", io::hamming_kernel_csv(hk));
        if (verify_against_oracle) {
            const auto lump = oracle::oracle_lump_hamming(
                full_kernel(spectrum));
            double sup = 0.0;
            for (std::size_t a = 0; a < hk.size(); ++a) {
                for (std::size_t b = 0; b < hk.size(); ++b) {
                    sup = std::max(sup,
                                   std::abs(hk[a][b] - lump.matrix[a][b]));
                }
            }
            std::cout << "lumping sup deviation: " << io::format_double(sup)
                      << "\n";
            if (sup > 1e-10) {
                std::cerr << "verification failed: Hamming kernel deviates "
                             "from exhaustive lumping\n";
                return kExitVerify;
            }
        }
    } else if (mode != "spectrum") {
        throw config_error("unknown kernel mode: " + mode);
    }
    finish_manifest(manifest, prefix);
    return 0;
}

int cmd_simulate(const std::string& config_file,
                 std::optional<std::uint64_t> seed_flag, int threads,
                 const std::string& prefix, bool json_path) {
    using namespace hyperwalk;
    const std::string text = io::read_text_file(config_file);
    SimConfig cfg = io::sim_config_from_json_text(text);
    nlohmann::json parsed = nlohmann::json::parse(text);
    if (seed_flag) {
        cfg.seed = *seed_flag;
    } else if (!parsed.contains("seed")) {
        throw config_error(
            "simulate requires --seed (wall-clock seeding is not supported)");
    }
    auto manifest = make_manifest("simulate", cfg.seed, text);
    const auto results = simulate_ensemble(cfg, threads);
    for (std::size_t r = 0; r < results.size(); ++r) {
        const std::string tag =
            results.size() > 1 ? "_r" + std::to_string(r) : "";
        if (cfg.keep_states) {
            emit(manifest, prefix + tag + "_path.txt",
                 json_path ? io::path_to_json(results[r].path)
                           : io::path_to_text(results[r].path));
        }
        emit(manifest, prefix + tag + "_hamming.csv",
             io::hamming_series_csv(results[r].hamming));
        if (cfg.log_latent) {
            emit(manifest, prefix + tag + "_latent.csv",
                 io::latent_log_csv(results[r].latent_log));
        }
    }
    finish_manifest(manifest, prefix);
    return 0;
}

int cmd_estimate(const std::string& path_file, std::optional<double> phi,
                 std::optional<double> gamma, std::optional<double> beta_a,
                 std::optional<double> beta_b, std::int64_t bins,
                 const std::string& prefix) {
    using namespace hyperwalk;
    const auto path = io::read_path_file(path_file);
    auto manifest = make_manifest("estimate", 0, path_file);
    const auto stats = path_stats(path);

    nlohmann::json report;
    double phi_hat, gamma_hat;
    if (phi && gamma) {
        phi_hat = *phi;
        gamma_hat = *gamma;
        report["phi_gamma_source"] = "given";
    } else {
        const auto pg = estimate_phi_gamma(stats);
        phi_hat = pg.phi_hat;
        gamma_hat = pg.gamma_hat;
        report["phi_gamma_source"] = pg.pooled ? "pooled" : "least_squares";
        report["admissible"] = pg.admissible;
        if (!pg.admissible) {
            std::cerr << "warning: phi_hat + gamma_hat < 1; estimates "
                         "reported unmodified\n";
        }
    }
    report["phi_hat"] = phi_hat;
    report["gamma_hat"] = gamma_hat;
    report["excluded_transitions"] = stats.degenerate;

    std::vector<ThetaEstimate> thetas;
    for (std::size_t t = 0; t < stats.counts.size(); ++t) {
        auto est = estimate_theta(stats.counts[t], phi_hat, gamma_hat);
        est.t = static_cast<std::int64_t>(t + 1);
        thetas.push_back(est);
    }
    report["theta_hats"] = nlohmann::json::array();
    for (const auto& e : thetas) {
        report["theta_hats"].push_back(e.theta_hat);
    }
    std::optional<BetaRef> ref;
    if (beta_a && beta_b) ref = BetaRef{*beta_a, *beta_b};
    const auto summary = theta_distribution_summary(thetas, ref, bins);
    report["theta_mean"] = summary.mean;
    report["theta_variance"] = summary.variance;
    if (summary.ks_distance) report["ks_distance"] = *summary.ks_distance;

    emit(manifest, prefix + "_report.json", report.dump(2));
    emit(manifest, prefix + "_theta.csv", io::theta_csv(thetas));
    emit(manifest, prefix + "_histogram.csv",
         io::histogram_csv(summary.histogram));
    finish_manifest(manifest, prefix);
    return 0;
}

int cmd_limits(const std::string& what, double phi, double gamma, double theta,
               double c, double v_prev, double v0, std::int64_t count,
               std::int64_t j_max, const std::string& prefix) {
    using namespace hyperwalk;
    auto manifest = make_manifest("limits", 0, what);
    if (what == "density") {
        const auto moments = phi_moments_beta(2.0, 2.0, phi, j_max);
        const double s = std::sqrt(phi * (1.0 - phi));
        std::vector<double> xs, ys;
        for (std::int64_t i = 0; i < count; ++i) {
            const double v = -5.0 * s + 10.0 * s * static_cast<double>(i) /
                                           static_cast<double>(count - 1);
            xs.push_back(v);
            ys.push_back(
                hermite_transition_density(v, v_prev, c, phi, moments, j_max));
        }
        emit(manifest, prefix + "_density.csv",
             io::grid_csv("v", "density", xs, ys));
    } else if (what == "ar1-mean") {
        std::vector<double> xs, ys;
        for (std::int64_t t = 0; t < count; ++t) {
            xs.push_back(static_cast<double>(t));
            ys.push_back(ar1_mean_path(v0, theta, c, phi, t));
        }
        emit(manifest, prefix + "_ar1_mean.csv",
             io::grid_csv("t", "mean", xs, ys));
    } else if (what == "marginal-mean") {
        const auto pr = validate_params(phi, gamma, 1);
        const HyperState x0 = HyperState::from_string("0");
        std::vector<double> xs, ys;
        for (std::int64_t t = 0; t < count; ++t) {
            xs.push_back(static_cast<double>(t));
            ys.push_back(marginal_mean_path(x0, {theta}, pr, t)[0]);
        }
        emit(manifest, prefix + "_marginal_mean.csv",
             io::grid_csv("t", "mean", xs, ys));
    } else if (what == "extreme") {
        const auto pr = validate_params(phi, gamma, count);
        const auto lim = extreme_point_limits(j_max, count, pr);
        nlohmann::json j;
        j["p"] = lim.p;
        j["poisson_rate"] = lim.poisson_rate;
        j["complement"] = lim.complement;
        emit(manifest, prefix + "_extreme.json", j.dump(2));
    } else {
        throw config_error("unknown limits table: " + what);
    }
    finish_manifest(manifest, prefix);
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int threads,
               double perturb_kappa, const std::string& json_out) {
    using namespace hyperwalk;
    verify::Options opts;
    opts.threads = threads;
    opts.seed = seed;
    opts.kappa_perturbation = perturb_kappa;
    std::vector<verify::Suite> suites;
    if (suite == "all") {
        suites = verify::run_all(opts);
    } else if (suite == "default") {
        for (const char* name :
             {"kernel", "reversibility", "lumping", "zlaw", "moments",
              "hermite", "determinism"}) {
            suites.push_back(verify::run_suite(name, opts));
        }
    } else {
        suites.push_back(verify::run_suite(suite, opts));
    }
    std::cout << verify::report_text(suites);
    if (!json_out.empty()) {
        io::write_text_file(json_out, verify::report_json(suites));
    }
    for (const auto& s : suites) {
        if (!s.pass()) return kExitVerify;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"long-range Bernoulli-autoregressive random walks on the "
                 "hypercube"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    int threads = default_threads();
    app.add_option("--threads", threads, "worker threads (or HYPERWALK_THREADS)");

    auto* kern = app.add_subcommand("kernel", "transition kernels and spectra");
    std::string config_file, mode = "hamming", prefix = "out";
    bool verify_flag = false;
    kern->add_option("--config", config_file, "JSON model config")->required();
    kern->add_option("--mode", mode, "full | hamming | spectrum");
    kern->add_option("--out", prefix, "output file prefix");
    kern->add_flag("--verify", verify_flag, "cross-check against the oracle");

    auto* sim = app.add_subcommand("simulate", "sample paths");
    std::string sim_config, sim_prefix = "out";
    bool sim_json = false;
    std::optional<std::uint64_t> seed_flag;
    sim->add_option("--config", sim_config, "JSON simulation config")
        ->required();
    sim->add_option("--seed", seed_flag, "seed (required unless in config)");
    sim->add_option("--out", sim_prefix, "output file prefix");
    sim->add_flag("--json", sim_json, "paths as JSON instead of text");

    auto* est = app.add_subcommand("estimate", "fit (phi, gamma, theta_t)");
    std::string path_file, est_prefix = "out";
    std::optional<double> opt_phi, opt_gamma, opt_a, opt_b;
    std::int64_t bins = 40;
    est->add_option("--path", path_file, "sample path file")->required();
    est->add_option("--phi", opt_phi, "skip least squares, use this phi");
    est->add_option("--gamma", opt_gamma, "skip least squares, use this gamma");
    est->add_option("--beta-a", opt_a, "reference Beta a for the KS report");
    est->add_option("--beta-b", opt_b, "reference Beta b for the KS report");
    est->add_option("--bins", bins, "histogram bins");
    est->add_option("--out", est_prefix, "output file prefix");

    auto* lim = app.add_subcommand("limits", "limit-law tables");
    std::string what = "density", lim_prefix = "out";
    double l_phi = 0.6, l_gamma = 0.6, l_theta = 0.5, l_c = 1.0;
    double l_vprev = 0.0, l_v0 = 0.0;
    std::int64_t l_count = 200, l_jmax = 40;
    lim->add_option("--what", what,
                    "density | ar1-mean | marginal-mean | extreme");
    lim->add_option("--phi", l_phi);
    lim->add_option("--gamma", l_gamma);
    lim->add_option("--theta", l_theta);
    lim->add_option("--c", l_c);
    lim->add_option("--vprev", l_vprev);
    lim->add_option("--v0", l_v0);
    lim->add_option("--count", l_count, "grid size / n / T");
    lim->add_option("--jmax", l_jmax, "series truncation / extreme M");
    lim->add_option("--out", lim_prefix, "output file prefix");

    auto* ver = app.add_subcommand("verify", "oracle equivalence batteries");
    std::string suite = "default", json_out;
    std::uint64_t verify_seed = 20260810;
    double perturb = 0.0;
    ver->add_option("--suite", suite,
                    "default | all | one of the named suites");
    ver->add_option("--seed", verify_seed, "Monte Carlo seed");
    ver->add_option("--json", json_out, "write a JSON report here");
    ver->add_option("--perturb-kappa", perturb,
                    "test hook: eigenvalue perturbation (must fail)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*kern) return cmd_kernel(config_file, mode, prefix, verify_flag);
        if (*sim) {
            return cmd_simulate(sim_config, seed_flag, threads, sim_prefix,
                                sim_json);
        }
        if (*est) {
            return cmd_estimate(path_file, opt_phi, opt_gamma, opt_a, opt_b,
                                bins, est_prefix);
        }
        if (*lim) {
            return cmd_limits(what, l_phi, l_gamma, l_theta, l_c, l_vprev,
                              l_v0, l_count, l_jmax, lim_prefix);
        }
        if (*ver) {
            return cmd_verify(suite, verify_seed, threads, perturb, json_out);
        }
    } catch (const hyperwalk::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const hyperwalk::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const hyperwalk::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
