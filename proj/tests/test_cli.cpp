// End-to-end checks of the command-line tool; argv[1] is the binary path.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hyperwalk/io.hpp"

namespace {

std::string g_binary;
std::filesystem::path g_dir;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = g_binary + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

void write_file(const std::string& name, const std::string& contents) {
    std::ofstream f(g_dir / name, std::ios::binary);
    f << contents;
}

std::string read_file(const std::string& name) {
    std::ifstream f(g_dir / name, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string qp(const std::string& name) { return (g_dir / name).string(); }

}  // namespace

TEST_CASE("version flag") {
    const auto r = run("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("hyperwalk") != std::string::npos);
}

TEST_CASE("kernel command emits a stochastic Hamming matrix") {
    write_file("kernel.json", R"({
        "phi": 0.7, "gamma": 0.6, "n": 3,
        "latent": {"variant": "iid", "theta": 0.4}
    })");
    const auto r = run("kernel --config " + qp("kernel.json") +
                       " --mode hamming --verify --out " + qp("k"));
    CHECK(r.exit_code == 0);
    const auto csv = read_file("k_hamming.csv");
    std::istringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "weight,0,1,2,3");
    while (std::getline(ss, line)) {
        double sum = 0.0;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');  // label
        while (std::getline(row, cell, ',')) sum += std::stod(cell);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    // manifest lists outputs with matching hashes
    const auto manifest = read_file("k_manifest.json");
    CHECK(manifest.find("k_hamming.csv") != std::string::npos);
    CHECK(manifest.find(hyperwalk::io::fnv1a64_hex(csv)) != std::string::npos);
}

TEST_CASE("dense kernels refuse n > 12") {
    write_file("big.json", R"({
        "phi": 0.7, "gamma": 0.6, "n": 13,
        "latent": {"variant": "iid", "theta": 0.4}
    })");
    const auto r = run("kernel --config " + qp("big.json") +
                       " --mode full --out " + qp("big"));
    CHECK(r.exit_code != 0);
    CHECK(r.output.find("n too large for dense kernel") != std::string::npos);
}

TEST_CASE("simulate requires a seed and is thread-count invariant") {
    write_file("sim.json", R"({
        "phi": 0.7, "gamma": 0.6, "n": 129,
        "latent": {"variant": "definetti", "a": 2.0, "b": 2.0},
        "steps": 40, "replicates": 3, "log_latent": true
    })");
    const auto none = run("simulate --config " + qp("sim.json") + " --out " +
                          qp("s"));
    CHECK(none.exit_code == 2);
    CHECK(none.output.find("--seed") != std::string::npos);

    const auto a = run("--threads 1 simulate --config " + qp("sim.json") +
                       " --seed 42 --out " + qp("a"));
    CHECK(a.exit_code == 0);
    const auto b = run("--threads 4 simulate --config " + qp("sim.json") +
                       " --seed 42 --out " + qp("b"));
    CHECK(b.exit_code == 0);
    for (const char* suffix :
         {"_r0_path.txt", "_r1_path.txt", "_r2_path.txt", "_r0_hamming.csv",
          "_r1_latent.csv"}) {
        CHECK(read_file(std::string("a") + suffix) ==
              read_file(std::string("b") + suffix));
        CHECK(!read_file(std::string("a") + suffix).empty());
    }
    // a different seed changes the output
    const auto c = run("simulate --config " + qp("sim.json") +
                       " --seed 43 --out " + qp("c"));
    CHECK(c.exit_code == 0);
    CHECK(read_file("a_r0_path.txt") != read_file("c_r0_path.txt"));
}

TEST_CASE("steps = 0 produces a single-state path file") {
    write_file("zero.json", R"({
        "phi": 0.7, "gamma": 0.6, "n": 8,
        "latent": {"variant": "iid", "theta": 0.4},
        "steps": 0, "initial": {"kind": "state", "bits": "10110001"}
    })");
    const auto r = run("simulate --config " + qp("zero.json") +
                       " --seed 1 --out " + qp("z"));
    CHECK(r.exit_code == 0);
    CHECK(read_file("z_path.txt") == "10110001\n");
}

TEST_CASE("estimate round trip over a simulated path") {
    write_file("est.json", R"({
        "phi": 0.7, "gamma": 0.6, "n": 400,
        "latent": {"variant": "definetti", "a": 2.0, "b": 2.0},
        "steps": 300, "initial": {"kind": "limit"}
    })");
    const auto sim = run("simulate --config " + qp("est.json") +
                         " --seed 7 --out " + qp("e"));
    REQUIRE(sim.exit_code == 0);
    const auto est = run("estimate --path " + qp("e_path.txt") +
                         " --beta-a 2 --beta-b 2 --out " + qp("e"));
    CHECK(est.exit_code == 0);
    const auto report = read_file("e_report.json");
    CHECK(report.find("phi_hat") != std::string::npos);
    // crude closeness: the report carries phi_hat near 0.7
    const auto pos = report.find("\"phi_hat\":");
    REQUIRE(pos != std::string::npos);
    const double phi_hat = std::stod(report.substr(pos + 10));
    CHECK(phi_hat == doctest::Approx(0.7).epsilon(0.1));
    CHECK(!read_file("e_theta.csv").empty());
    CHECK(!read_file("e_histogram.csv").empty());

    // supplying phi/gamma skips the least-squares step
    const auto given = run("estimate --path " + qp("e_path.txt") +
                           " --phi 0.7 --gamma 0.6 --out " + qp("g"));
    CHECK(given.exit_code == 0);
    CHECK(read_file("g_report.json").find("\"given\"") != std::string::npos);
}

TEST_CASE("malformed path files name the offending line") {
    write_file("bad_path.txt", "0101\n01a1\n");
    const auto r = run("estimate --path " + qp("bad_path.txt"));
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("line 2") != std::string::npos);
}

TEST_CASE("limits tables") {
    const auto r = run("limits --what density --phi 0.6 --theta 0.5 --c 1 "
                       "--count 50 --out " +
                       qp("lim"));
    CHECK(r.exit_code == 0);
    CHECK(read_file("lim_density.csv").find("v,density") == 0);
    const auto r2 = run("limits --what extreme --phi 0.8 --gamma 0.9 "
                        "--count 2000 --jmax 3 --out " +
                        qp("ext"));
    CHECK(r2.exit_code == 0);
    CHECK(read_file("ext_extreme.json").find("27") != std::string::npos);
}

TEST_CASE("verify runs a fast suite and honors the perturbation hook") {
    const auto ok = run("verify --suite determinism");
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("PASS") != std::string::npos);

    const auto hermite = run("verify --suite hermite --json " + qp("v.json"));
    CHECK(hermite.exit_code == 0);
    CHECK(read_file("v.json").find("\"pass\": true") != std::string::npos);

    // an injected eigenvalue perturbation must break reversibility
    const auto bad = run("verify --suite reversibility --perturb-kappa 1e-6");
    CHECK(bad.exit_code == 5);
    CHECK(bad.output.find("FAIL") != std::string::npos);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <hyperwalk-binary>\n");
        return 1;
    }
    g_binary = argv[1];
    g_dir = std::filesystem::temp_directory_path() / "hyperwalk_cli_test";
    std::filesystem::create_directories(g_dir);
    doctest::Context ctx;
    const int rc = ctx.run();
    std::filesystem::remove_all(g_dir);
    return rc;
}
