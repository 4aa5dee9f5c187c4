#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperwalk/estimator.hpp"
#include "hyperwalk/kernel.hpp"
#include "hyperwalk/simulator.hpp"
#include "hyperwalk/state.hpp"

namespace hyperwalk::io {

// All numeric output uses 17 significant digits; CSV is comma-separated with
// a header row and LF line endings, so files are byte-stable across runs.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

// Paths serialize as one 0/1 string per line (coordinate k = 1 leftmost) or
// as a JSON array of such strings.
std::string path_to_text(const SamplePath& path);
SamplePath path_from_text(const std::string& contents);
std::string path_to_json(const SamplePath& path);
SamplePath path_from_json(const std::string& contents);
SamplePath read_path_file(const std::string& filename);  // sniffs the format

std::string hamming_series_csv(const std::vector<std::int64_t>& hamming);
std::string latent_log_csv(const std::vector<LatentLogEntry>& log);
std::string dense_kernel_csv(const DenseKernel& kernel);
std::string hamming_kernel_csv(const std::vector<std::vector<double>>& kernel);
std::string spectrum_json(const KernelSpectrum& spectrum);
std::string theta_csv(const std::vector<ThetaEstimate>& estimates);
std::string histogram_csv(const std::vector<HistogramBin>& bins);
std::string grid_csv(const std::string& x_name, const std::string& y_name,
                     const std::vector<double>& xs,
                     const std::vector<double>& ys);

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

// Run manifest: every emitted file listed with its content hash.
struct ManifestEntry {
    std::string path;
    std::uint64_t bytes;
    std::string fnv64;
};

struct RunManifest {
    std::string command;
    std::string version;
    std::uint64_t seed = 0;
    std::string config_digest;
    std::string started;
    std::string finished;
    std::vector<ManifestEntry> outputs;

    void add_output(const std::string& path, const std::string& contents);
    std::string to_json() const;
};

std::string iso8601_now();

// Latent model and simulation config from the shared JSON schema.
LatentModel latent_from_json_text(const std::string& text);
SimConfig sim_config_from_json_text(const std::string& text);

}  // namespace hyperwalk::io
