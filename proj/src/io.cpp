#include "hyperwalk/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hyperwalk/errors.hpp"

namespace hyperwalk::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open for writing: " + path);
    f << contents;
    if (!f) throw io_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string path_to_text(const SamplePath& path) {
    std::string out;
    for (const auto& s : path.states()) {
        out += s.to_string();
        out += '\n';
    }
    return out;
}

SamplePath path_from_text(const std::string& contents) {
    std::vector<HyperState> states;
    std::size_t line_no = 0;
    std::istringstream ss(contents);
    std::string line;
    while (std::getline(ss, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            states.push_back(HyperState::from_string(line));
        } catch (const error& e) {
            throw io_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (states.size() > 1 && states.back().n() != states.front().n()) {
            throw io_error("line " + std::to_string(line_no) +
                           ": state length differs from the first state");
        }
    }
    if (states.empty()) throw io_error("path file contains no states");
    return SamplePath(std::move(states));
}

std::string path_to_json(const SamplePath& path) {
    json arr = json::array();
    for (const auto& s : path.states()) arr.push_back(s.to_string());
    return arr.dump();
}

SamplePath path_from_json(const std::string& contents) {
    json arr = json::parse(contents);
    if (!arr.is_array() || arr.empty()) {
        throw io_error("JSON path must be a non-empty array of bit strings");
    }
    std::vector<HyperState> states;
    for (const auto& item : arr) {
        states.push_back(HyperState::from_string(item.get<std::string>()));
    }
    return SamplePath(std::move(states));
}

SamplePath read_path_file(const std::string& filename) {
    const std::string text = read_text_file(filename);
    for (char c : text) {
        if (c == '[') return path_from_json(text);
        if (c == '0' || c == '1') break;
        if (c != ' ' && c != '\n' && c != '\r' && c != '\t') break;
    }
    return path_from_text(text);
}

std::string hamming_series_csv(const std::vector<std::int64_t>& hamming) {
    std::string out = "t,hamming\n";
    for (std::size_t t = 0; t < hamming.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += std::to_string(hamming[t]);
        out += '\n';
    }
    return out;
}

std::string latent_log_csv(const std::vector<LatentLogEntry>& log) {
    std::string out = "t,hamming_z,theta\n";
    for (const auto& e : log) {
        out += std::to_string(e.t);
        out += ',';
        out += std::to_string(e.hamming_z);
        out += ',';
        if (e.theta) out += format_double(*e.theta);
        out += '\n';
    }
    return out;
}

std::string dense_kernel_csv(const DenseKernel& kernel) {
    const auto n = kernel.n();
    const std::uint64_t m = kernel.size();
    std::string out = "state";
    for (std::uint64_t y = 0; y < m; ++y) {
        out += ',';
        out += HyperState::from_index(n, y).to_string();
    }
    out += '\n';
    for (std::uint64_t x = 0; x < m; ++x) {
        out += HyperState::from_index(n, x).to_string();
        for (std::uint64_t y = 0; y < m; ++y) {
            out += ',';
            out += format_double(kernel.at(x, y));
        }
        out += '\n';
    }
    return out;
}

std::string hamming_kernel_csv(const std::vector<std::vector<double>>& kernel) {
    std::string out = "weight";
    for (std::size_t m = 0; m < kernel.size(); ++m) {
        out += ',';
        out += std::to_string(m);
    }
    out += '\n';
    for (std::size_t x = 0; x < kernel.size(); ++x) {
        out += std::to_string(x);
        for (double v : kernel[x]) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::string spectrum_json(const KernelSpectrum& spectrum) {
    json j;
    j["mode"] = spectrum.mode() == KernelSpectrum::Mode::subset
                    ? "subset"
                    : "exchangeable";
    j["n"] = spectrum.n();
    j["phi"] = spectrum.params().phi();
    j["gamma"] = spectrum.params().gamma();
    j["kappa"] = spectrum.values();
    return j.dump(2);
}

std::string theta_csv(const std::vector<ThetaEstimate>& estimates) {
    std::string out = "t,theta_hat,converged\n";
    for (const auto& e : estimates) {
        out += std::to_string(e.t);
        out += ',';
        out += format_double(e.theta_hat);
        out += ',';
        out += e.converged ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
    std::string out = "bin_lo,bin_hi,count,density\n";
    for (const auto& b : bins) {
        out += format_double(b.lo);
        out += ',';
        out += format_double(b.hi);
        out += ',';
        out += std::to_string(b.count);
        out += ',';
        out += format_double(b.density);
        out += '\n';
    }
    return out;
}

std::string grid_csv(const std::string& x_name, const std::string& y_name,
                     const std::vector<double>& xs,
                     const std::vector<double>& ys) {
    std::string out = x_name + "," + y_name + "\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out += format_double(xs[i]);
        out += ',';
        out += format_double(ys[i]);
        out += '\n';
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

void RunManifest::add_output(const std::string& path,
                             const std::string& contents) {
    outputs.push_back(
        ManifestEntry{path, contents.size(), fnv1a64_hex(contents)});
}

std::string RunManifest::to_json() const {
    json j;
    j["command"] = command;
    j["version"] = version;
    j["seed"] = seed;
    j["config_digest"] = config_digest;
    j["started"] = started;
    j["finished"] = finished;
    j["outputs"] = json::array();
    for (const auto& e : outputs) {
        j["outputs"].push_back(
            {{"path", e.path}, {"bytes", e.bytes}, {"fnv64", e.fnv64}});
    }
    return j.dump(2);
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

LatentModel latent_from_json(const json& j) {
    if (!j.is_object() || !j.contains("variant")) {
        throw config_error("latent config needs a \"variant\" field");
    }
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "iid") {
        return LatentModel(IidTheta{j.at("theta").get<double>()});
    }
    if (variant == "definetti") {
        if (j.contains("grid")) {
            DeFinettiGrid g;
            g.thetas = j.at("grid").get<std::vector<double>>();
            g.weights = j.at("weights").get<std::vector<double>>();
            return LatentModel(std::move(g));
        }
        return LatentModel(
            DeFinettiBeta{j.at("a").get<double>(), j.at("b").get<double>()});
    }
    if (variant == "extreme") {
        return LatentModel(ExtremePoint{j.at("m").get<std::int64_t>()});
    }
    if (variant == "explicit") {
        ExplicitPmf e;
        e.pmf = j.at("pmf").get<std::vector<double>>();
        std::int64_t n = 0;
        while ((std::size_t{1} << n) < e.pmf.size()) ++n;
        if ((std::size_t{1} << n) != e.pmf.size()) {
            throw config_error("explicit pmf length must be a power of two");
        }
        e.n = n;
        return LatentModel(std::move(e));
    }
    throw config_error("unknown latent variant: " + variant);
}

}  // namespace

LatentModel latent_from_json_text(const std::string& text) {
    try {
        return latent_from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw config_error(std::string("latent config: ") + e.what());
    }
}

SimConfig sim_config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    try {
        const double phi = j.at("phi").get<double>();
        const double gamma = j.at("gamma").get<double>();
        const auto n = j.at("n").get<std::int64_t>();
        SimConfig cfg{validate_params(phi, gamma, n),
                      latent_from_json(j.at("latent"))};
        cfg.steps = j.value("steps", std::int64_t{0});
        cfg.replicates = j.value("replicates", std::int64_t{1});
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.log_latent = j.value("log_latent", false);
        if (j.contains("initial")) {
            const auto& init = j.at("initial");
            const std::string kind = init.at("kind").get<std::string>();
            if (kind == "state") {
                cfg.initial = InitialState::explicit_(
                    HyperState::from_string(init.at("bits").get<std::string>()));
            } else if (kind == "product-gamma") {
                cfg.initial = InitialState::product_gamma();
            } else if (kind == "limit") {
                cfg.initial = InitialState::limit_law();
            } else {
                throw config_error("unknown initial kind: " + kind);
            }
        }
        if (cfg.replicates < 1) throw config_error("replicates must be >= 1");
        if (cfg.steps < 0) throw config_error("steps must be >= 0");
        return cfg;
    } catch (const json::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }
}

}  // namespace hyperwalk::io
